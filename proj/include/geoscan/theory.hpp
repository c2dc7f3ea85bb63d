#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "geoscan/error.hpp"

// Error-bound, threshold and lower-bound calculators for the MMD scan test.
// All logarithms are natural. Bounds are returned unclamped; they can exceed 1.

namespace geoscan::theory {

enum class StructureKind { Line, Ring, Disk, Rectangle };

inline std::string_view to_string(StructureKind k) {
  switch (k) {
    case StructureKind::Line: return "line";
    case StructureKind::Ring: return "ring";
    case StructureKind::Disk: return "disk";
    case StructureKind::Rectangle: return "rect";
  }
  return "unknown";
}

inline StructureKind parse_structure_kind(std::string_view s) {
  if (s == "line") return StructureKind::Line;
  if (s == "ring") return StructureKind::Ring;
  if (s == "disk" || s == "lattice2d") return StructureKind::Disk;
  if (s == "rect" || s == "rectangle" || s == "lattice") return StructureKind::Rectangle;
  throw DomainError("unknown structure kind '" + std::string(s) + "'");
}

namespace detail {

inline void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(fmt::format("{} must be positive and finite (got {})", name, v));
  }
}

inline void require_sizes(double n_total, double lo, double hi, const char* what) {
  if (!(lo >= 1.0) || !(lo <= hi) || !(hi <= n_total - 1.0)) {
    throw DomainError(fmt::format("{} sizes must satisfy 1 <= min <= max <= {} - 1 (got [{}, {}])",
                                  what, n_total, lo, hi));
  }
}

inline double power(double n, double r) { return std::pow(n, r); }

}  // namespace detail

/// Type I error bound for the line scan:
///   sum_{i=min}^{max} (n-i+1) exp(-t^2 i (n-i) / (8 K^2 n)),
/// accumulated in the log domain.
inline double type1_bound_line(double n, double t, double K, std::size_t min_size,
                               std::size_t max_size) {
  detail::require_positive(t, "t");
  detail::require_positive(K, "K");
  detail::require_sizes(n, static_cast<double>(min_size), static_cast<double>(max_size), "line");
  const double scale = t * t / (8.0 * K * K * n);
  auto log_term = [&](std::size_t i) {
    const double di = static_cast<double>(i);
    return std::log(n - di + 1.0) - scale * di * (n - di);
  };
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i = min_size; i <= max_size; ++i) peak = std::max(peak, log_term(i));
  long double acc = 0.0L;
  for (std::size_t i = min_size; i <= max_size; ++i) acc += std::exp(static_cast<long double>(log_term(i) - peak));
  return std::exp(peak + static_cast<double>(std::log(acc)));
}

/// Type II error bound for a true anomaly of `size` nodes out of n_total
/// (n, n, n^2 or n^r): exp(-(mmd2 - t)^2 size (n_total - size) / (8 n_total K^2)).
/// Requires t < mmd2.
inline double type2_bound(double n_total, double t, double K, double mmd2, double size) {
  detail::require_positive(K, "K");
  if (!(t < mmd2)) {
    throw DomainError(fmt::format("type II bound requires threshold t < MMD^2[p,q] (t={}, MMD^2={})",
                                  t, mmd2));
  }
  if (!(size >= 2.0) || !(size <= n_total - 2.0)) {
    throw DomainError(fmt::format("size must lie in [2, {} - 2] (got {})", n_total, size));
  }
  const double gap = mmd2 - t;
  return std::exp(-(gap * gap) * size * (n_total - size) / (8.0 * n_total * K * K));
}

namespace detail {

// exp(log_count - 2 t^2 min{lo(N-lo), hi(N-hi)} / (16 N K^2)), shared by the
// ring, disk and rectangle type I bounds.
inline double union_bound(double log_count, double n_total, double t, double K, double lo, double hi) {
  const double worst = std::min(lo * (n_total - lo), hi * (n_total - hi));
  return std::exp(log_count - 2.0 * t * t * worst / (16.0 * n_total * K * K));
}

}  // namespace detail

inline double type1_bound_ring(double n, double t, double K, std::size_t min_size,
                               std::size_t max_size) {
  detail::require_positive(t, "t");
  detail::require_positive(K, "K");
  const double lo = static_cast<double>(min_size);
  const double hi = static_cast<double>(max_size);
  detail::require_sizes(n, lo, hi, "ring");
  return detail::union_bound(2.0 * std::log(n), n, t, K, lo, hi);
}

inline double type1_bound_disk(double n, double t, double K, std::size_t d_min, std::size_t d_max) {
  detail::require_positive(t, "t");
  detail::require_positive(K, "K");
  const double lo = static_cast<double>(d_min);
  const double hi = static_cast<double>(d_max);
  detail::require_sizes(n * n, lo, hi, "disk");
  return detail::union_bound(3.0 * std::log(n), n * n, t, K, lo, hi);
}

inline double type1_bound_rect(double n, std::size_t r, double t, double K, std::size_t s_min,
                               std::size_t s_max) {
  detail::require_positive(t, "t");
  detail::require_positive(K, "K");
  if (r < 1) throw DomainError("lattice dimension r must be >= 1");
  const double rr = static_cast<double>(r);
  const double n_total = detail::power(n, rr);
  const double lo = static_cast<double>(s_min);
  const double hi = static_cast<double>(s_max);
  detail::require_sizes(n_total, lo, hi, "rectangle");
  return detail::union_bound(2.0 * rr * std::log(n), n_total, t, K, lo, hi);
}

/// Smallest candidate size for which the type I bound vanishes:
/// c K^2 (1 + eta) t^-2 log n, with c = 16 (line, ring), 24 (disk), 16 r (rectangle).
inline double sufficient_min_size(double t, double K, double eta, double n, StructureKind kind,
                                  std::size_t r = 1) {
  detail::require_positive(t, "t");
  detail::require_positive(K, "K");
  detail::require_positive(eta, "eta");
  if (!(n >= 2.0)) throw DomainError("n must be >= 2");
  double c = 16.0;
  if (kind == StructureKind::Disk) c = 24.0;
  if (kind == StructureKind::Rectangle) {
    if (r < 1) throw DomainError("lattice dimension r must be >= 1");
    c = 16.0 * static_cast<double>(r);
  }
  return c * K * K * (1.0 + eta) / (t * t) * std::log(n);
}

/// log applied k times to n.
inline double iterated_log(double n, std::size_t k) {
  if (k < 1) throw DomainError("iterated log depth k must be >= 1");
  double v = n;
  for (std::size_t i = 0; i < k; ++i) {
    if (!(v > 0.0)) {
      throw DomainError(fmt::format("n = {} is too small for {} nested logarithms", n, k));
    }
    v = std::log(v);
  }
  if (!(v > 0.0)) {
    throw DomainError(fmt::format("n = {} is too small for {} nested logarithms", n, k));
  }
  return v;
}

/// Largest admissible line size n - c K^2 (1+eta) t^-2 log^{(k)} n, before rounding.
inline double sufficient_max_size_line(double t, double K, double eta, double n, std::size_t k) {
  detail::require_positive(t, "t");
  detail::require_positive(K, "K");
  detail::require_positive(eta, "eta");
  return n - 16.0 * K * K * (1.0 + eta) / (t * t) * iterated_log(n, k);
}

/// Threshold when MMD^2[p,q] is known: (1 - delta) MMD^2.
inline double threshold_known(double mmd2, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
  if (!std::isfinite(mmd2)) throw DomainError("MMD^2 must be finite");
  return (1.0 - delta) * mmd2;
}

/// Vanishing threshold when MMD^2 is unknown: t_n = c / log(log n).
inline double threshold_unknown(double n, double c) {
  detail::require_positive(c, "c");
  if (!(n > std::exp(1.0))) throw DomainError(fmt::format("vanishing threshold needs n > e (got {})", n));
  return c / iterated_log(n, 2);
}

inline double clamped_risk_bound(double bound) { return std::min(1.0, std::max(0.0, bound)); }

/// Distribution of Z = |S cap S'| for two length-k intervals drawn
/// independently and uniformly. Index z holds P(Z = z), z = 0..k.
/// Line: 1 <= k < n/2. Ring: 1 <= k <= n/2.
inline std::vector<double> overlap_distribution(std::size_t n, std::size_t k, StructureKind kind) {
  std::vector<double> p(k + 1, 0.0);
  const double dn = static_cast<double>(n);
  const double dk = static_cast<double>(k);
  if (kind == StructureKind::Line) {
    if (k < 1 || 2 * k >= n) {
      throw DomainError(fmt::format(
          "line overlap distribution is only derived for 1 <= k < n/2 (n={}, k={})", n, k));
    }
    const double m = dn - dk + 1.0;
    double rest = 1.0;
    for (std::size_t i = 1; i + 1 <= k; ++i) {
      p[i] = 2.0 * (dn - 2.0 * dk + 1.0 + static_cast<double>(i)) / (m * m);
      rest -= p[i];
    }
    p[k] = 1.0 / m;
    rest -= p[k];
    p[0] = rest;
  } else if (kind == StructureKind::Ring) {
    if (k < 1 || 2 * k > n) {
      throw DomainError(fmt::format(
          "ring overlap distribution is only derived for 1 <= k <= n/2 (n={}, k={})", n, k));
    }
    for (std::size_t i = 1; i + 1 <= k; ++i) p[i] = 2.0 / dn;
    p[k] = 1.0 / dn;
    p[0] = (dn - 2.0 * dk + 1.0) / dn;
  } else {
    throw DomainError("overlap distribution is defined for line and ring networks only");
  }
  return p;
}

/// E exp(mu^2 Z) under overlap_distribution(n, k, kind). Always >= 1.
inline double expected_exp_overlap(std::size_t n, std::size_t k, double mu, StructureKind kind) {
  const auto p = overlap_distribution(n, k, kind);
  const double mu2 = mu * mu;
  long double e = 0.0L;
  for (std::size_t z = 0; z < p.size(); ++z) {
    e += static_cast<long double>(p[z]) * std::exp(static_cast<long double>(mu2 * static_cast<double>(z)));
  }
  return static_cast<double>(e);
}

/// Lower bound on the Bayes risk of detecting a length-k interval with
/// Gaussian mean shift mu: max(0, 1 - sqrt(E exp(mu^2 Z) - 1) / 2).
inline double bayes_risk_lower_bound(std::size_t n, std::size_t k, double mu, StructureKind kind) {
  const double e = expected_exp_overlap(n, k, mu, kind);
  return std::max(0.0, 1.0 - 0.5 * std::sqrt(std::max(0.0, e - 1.0)));
}

}  // namespace geoscan::theory
