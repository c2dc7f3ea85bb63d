#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "geoscan/error.hpp"
#include "geoscan/geometry.hpp"
#include "geoscan/mmd.hpp"
#include "geoscan/scan.hpp"

// Classical two-sample scans used as comparison baselines. Each candidate's
// statistic is tested at a Bonferroni-corrected level (level / #candidates);
// the scan decides H1 if any candidate rejects.

namespace geoscan {

struct BaselineReport {
  Decision decision = Decision::H0;
  double max_statistic = 0.0;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;  // candidates too small for the statistic
};

/// Kolmogorov limiting survival function Q(lambda) = 2 sum (-1)^{j-1} exp(-2 j^2 lambda^2).
inline double kolmogorov_q(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.18) {
    // Small-lambda form of the CDF converges faster.
    const double y = std::exp(-1.23370055013616983 / (lambda * lambda));  // pi^2 / 8
    const double cdf = 2.50662827463100050 / lambda * (y + std::pow(y, 9) + std::pow(y, 25) + std::pow(y, 49));
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  const double x = std::exp(-2.0 * lambda * lambda);
  return std::clamp(2.0 * (x - std::pow(x, 4) + std::pow(x, 9)), 0.0, 1.0);
}

/// Asymptotic p-value of the two-sample KS statistic with Stephens' correction.
inline double smirnov_pvalue(double d, std::size_t n1, std::size_t n2) {
  const double en = std::sqrt(static_cast<double>(n1) * static_cast<double>(n2) /
                              static_cast<double>(n1 + n2));
  return kolmogorov_q((en + 0.12 + 0.11 / en) * d);
}

namespace detail {

class ValuePrefix {
 public:
  explicit ValuePrefix(const std::vector<double>& values) {
    const long double mean =
        std::accumulate(values.begin(), values.end(), 0.0L) / static_cast<long double>(values.size());
    sum_.assign(values.size() + 1, 0.0L);
    sq_.assign(values.size() + 1, 0.0L);
    for (std::size_t i = 0; i < values.size(); ++i) {
      const long double v = values[i] - mean;
      sum_[i + 1] = sum_[i] + v;
      sq_[i + 1] = sq_[i] + v * v;
    }
  }
  long double sum(Run r) const { return sum_[r.end] - sum_[r.begin]; }
  long double sq(Run r) const { return sq_[r.end] - sq_[r.begin]; }
  long double total_sum() const { return sum_.back(); }
  long double total_sq() const { return sq_.back(); }

 private:
  std::vector<long double> sum_;
  std::vector<long double> sq_;
};

}  // namespace detail

/// Welch t statistic and Welch-Satterthwaite degrees of freedom from sample
/// moments.
struct WelchResult {
  double t = 0.0;
  double df = 1.0;
};

inline WelchResult welch_t(double mean1, double var1, std::size_t n1, double mean2, double var2,
                           std::size_t n2) {
  const double a = var1 / static_cast<double>(n1);
  const double b = var2 / static_cast<double>(n2);
  const double se2 = a + b;
  WelchResult out;
  if (!(se2 > 0.0)) {
    out.t = mean1 == mean2 ? 0.0 : std::copysign(INFINITY, mean1 - mean2);
    out.df = static_cast<double>(std::min(n1, n2) - 1);
    return out;
  }
  out.t = (mean1 - mean2) / std::sqrt(se2);
  const double denom = a * a / static_cast<double>(n1 - 1) + b * b / static_cast<double>(n2 - 1);
  out.df = denom > 0.0 ? se2 * se2 / denom : static_cast<double>(std::min(n1, n2) - 1);
  return out;
}

inline BaselineReport ttest_scan(const SampleField& field, const CandidateSet& candidates,
                                 double level) {
  if (!(level > 0.0 && level < 1.0)) throw ConfigError("level must lie in (0, 1)");
  check_field(field, candidates.geometry());
  const std::size_t total = field.size();
  const detail::ValuePrefix prefix(field.values);
  BaselineReport report;
  report.skipped = candidates.n_skipped();
  const double per_test = level / static_cast<double>(candidates.size());
  // A t quantile is never below the normal one, so |t| under the normal
  // critical value cannot reject and skips the CDF call.
  const double z_crit =
      boost::math::quantile(boost::math::complement(boost::math::normal(), per_test / 2.0));
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const std::size_t n1 = candidates.candidate(i).size;
    const std::size_t n2 = total - n1;
    if (n1 < 2 || n2 < 2) {
      ++report.skipped;
      continue;
    }
    long double s1 = 0.0L;
    long double q1 = 0.0L;
    for (const Run& r : candidates.runs(i)) {
      s1 += prefix.sum(r);
      q1 += prefix.sq(r);
    }
    const long double s2 = prefix.total_sum() - s1;
    const long double q2 = prefix.total_sq() - q1;
    const long double m1 = s1 / n1;
    const long double m2 = s2 / n2;
    const double v1 = static_cast<double>(std::max(0.0L, (q1 - s1 * m1) / (n1 - 1)));
    const double v2 = static_cast<double>(std::max(0.0L, (q2 - s2 * m2) / (n2 - 1)));
    const WelchResult w = welch_t(static_cast<double>(m1), v1, n1, static_cast<double>(m2), v2, n2);
    ++report.evaluated;
    const double at = std::fabs(w.t);
    report.max_statistic = std::max(report.max_statistic, at);
    if (report.decision == Decision::H1 || !(at >= z_crit)) continue;
    double p = 0.0;
    if (std::isfinite(at)) {
      p = 2.0 * boost::math::cdf(boost::math::complement(boost::math::students_t(w.df), at));
    }
    if (p < per_test) report.decision = Decision::H1;
  }
  return report;
}

inline BaselineReport smirnov_scan(const SampleField& field, const CandidateSet& candidates,
                                   double level) {
  if (!(level > 0.0 && level < 1.0)) throw ConfigError("level must lie in (0, 1)");
  check_field(field, candidates.geometry());
  const std::size_t total = field.size();
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return field.values[a] < field.values[b]; });

  BaselineReport report;
  report.skipped = candidates.n_skipped();
  const double per_test = level / static_cast<double>(candidates.size());
  std::vector<char> inside(total);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const std::size_t n1 = candidates.candidate(i).size;
    const std::size_t n2 = total - n1;
    if (n1 < 1 || n2 < 1) {
      ++report.skipped;
      continue;
    }
    std::fill(inside.begin(), inside.end(), 0);
    for (const Run& r : candidates.runs(i)) {
      std::fill(inside.begin() + static_cast<std::ptrdiff_t>(r.begin),
                inside.begin() + static_cast<std::ptrdiff_t>(r.end), 1);
    }
    std::size_t c1 = 0;
    std::size_t c2 = 0;
    double d = 0.0;
    for (std::size_t j = 0; j < total; ++j) {
      (inside[order[j]] ? c1 : c2) += 1;
      // Evaluate only after the last of a run of tied values.
      if (j + 1 < total && field.values[order[j + 1]] == field.values[order[j]]) continue;
      d = std::max(d, std::fabs(static_cast<double>(c1) / static_cast<double>(n1) -
                                static_cast<double>(c2) / static_cast<double>(n2)));
    }
    ++report.evaluated;
    report.max_statistic = std::max(report.max_statistic, d);
    if (report.decision == Decision::H0 && smirnov_pvalue(d, n1, n2) < per_test) {
      report.decision = Decision::H1;
    }
  }
  return report;
}

inline BaselineReport ttest_scan(const SampleField& field, const Geometry& geom,
                                 const SizeBounds& bounds, double level) {
  return ttest_scan(field, CandidateSet(geom, bounds, true), level);
}

inline BaselineReport smirnov_scan(const SampleField& field, const Geometry& geom,
                                   const SizeBounds& bounds, double level) {
  return smirnov_scan(field, CandidateSet(geom, bounds, true), level);
}

}  // namespace geoscan
