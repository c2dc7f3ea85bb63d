#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "geoscan/error.hpp"
#include "geoscan/kernels.hpp"
#include "geoscan/nodeset.hpp"

namespace geoscan {

/// One scalar observation per node, in the geometry's canonical node order.
struct SampleField {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }

  void validate() const {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!std::isfinite(values[i])) {
        throw ConfigError("sample at node " + std::to_string(i) + " is not finite");
      }
    }
  }
};

/// Unbiased estimate of MMD^2 between the laws of `x` and `y`:
///
///   1/(n(n-1)) sum_{i!=j} k(x_i,x_j) + 1/(m(m-1)) sum_{i!=j} k(y_i,y_j)
///     - 2/(nm) sum_{i,j} k(x_i,y_j)
///
/// Requires at least two samples on each side.
inline double mmd_u2(std::span<const double> x, std::span<const double> y, const KernelSpec& spec) {
  spec.validate();
  const std::size_t n = x.size();
  const std::size_t m = y.size();
  if (n < 2 || m < 2) {
    throw InsufficientSamples("unbiased MMD^2 needs at least 2 samples per side (got " +
                              std::to_string(n) + " and " + std::to_string(m) + ")");
  }
  long double xx = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) xx += detail::kernel_value(spec, x[i], x[j]);
  }
  long double yy = 0.0L;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) yy += detail::kernel_value(spec, y[i], y[j]);
  }
  long double xy = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) xy += detail::kernel_value(spec, x[i], y[j]);
  }
  const long double ln = static_cast<long double>(n);
  const long double lm = static_cast<long double>(m);
  return static_cast<double>(2.0L * xx / (ln * (ln - 1)) + 2.0L * yy / (lm * (lm - 1)) -
                             2.0L * xy / (ln * lm));
}

/// E k(X, Y) under the Gaussian kernel with bandwidth sigma, for independent
/// X ~ N(m1, v1), Y ~ N(m2, v2).
inline double expected_gaussian_kernel(double m1, double v1, double m2, double v2, double sigma) {
  const double s = sigma * sigma + v1 + v2;
  const double d = m1 - m2;
  return sigma / std::sqrt(s) * std::exp(-(d * d) / (2.0 * s));
}

/// Population MMD^2[p, q] for p = N(mean_p, var_p), q = N(mean_q, var_q) under
/// the Gaussian kernel with bandwidth sigma.
inline double mmd2_gaussian_pair(double mean_p, double var_p, double mean_q, double var_q,
                                 double sigma) {
  if (!(var_p > 0.0) || !(var_q > 0.0) || !(sigma > 0.0)) {
    throw ConfigError("variances and bandwidth must be positive");
  }
  const double pp = expected_gaussian_kernel(mean_p, var_p, mean_p, var_p, sigma);
  const double qq = expected_gaussian_kernel(mean_q, var_q, mean_q, var_q, sigma);
  const double pq = expected_gaussian_kernel(mean_p, var_p, mean_q, var_q, sigma);
  return pp - 2.0 * pq + qq;
}

// Entry cap shared by the Gram matrix and the 2-D prefix table; 2^26 entries
// is about 1.5 GiB across both tables.
inline constexpr std::size_t kDefaultMaxTableEntries = std::size_t{1} << 26;

/// Kernel Gram matrix of a sample field plus the prefix sums that make
/// subset MMD^2 queries cheap.
///
/// With the 2-D prefix table, a node set made of R contiguous runs costs
/// O(R^2) lookups; without it, O(|set|^2) Gram reads. Immutable once built;
/// `rebuild` reuses the allocations for a new field.
class GramCache {
 public:
  GramCache() = default;

  void rebuild(std::span<const double> values, const KernelSpec& spec, bool with_prefix2d,
               std::size_t max_entries = kDefaultMaxTableEntries) {
    spec.validate();
    const std::size_t n = values.size();
    const std::size_t needed = with_prefix2d ? (n + 1) * (n + 1) : n * n;
    if (n * n > max_entries || needed > max_entries) {
      throw ResourceError("Gram cache for " + std::to_string(n) + " nodes exceeds the table cap of " +
                          std::to_string(max_entries) + " entries");
    }
    n_ = n;
    spec_ = spec;
    gram_.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      gram_[i * n + i] = detail::kernel_value(spec, values[i], values[i]);
      for (std::size_t j = i + 1; j < n; ++j) {
        const double v = detail::kernel_value(spec, values[i], values[j]);
        gram_[i * n + j] = v;
        gram_[j * n + i] = v;
      }
    }

    row_sums_.assign(n, 0.0L);
    row_prefix_.assign(n + 1, 0.0L);
    diag_prefix_.assign(n + 1, 0.0L);
    for (std::size_t i = 0; i < n; ++i) {
      long double acc = 0.0L;
      const double* row = &gram_[i * n];
      for (std::size_t j = 0; j < n; ++j) acc += row[j];
      row_sums_[i] = acc;
      row_prefix_[i + 1] = row_prefix_[i] + acc;
      diag_prefix_[i + 1] = diag_prefix_[i] + row[i];
    }
    total_ = row_prefix_[n];

    has_prefix2d_ = with_prefix2d;
    if (with_prefix2d) {
      const std::size_t w = n + 1;
      prefix2d_.assign(w * w, 0.0L);
      for (std::size_t i = 0; i < n; ++i) {
        long double running = 0.0L;
        const double* row = &gram_[i * n];
        for (std::size_t j = 0; j < n; ++j) {
          running += row[j];
          prefix2d_[(i + 1) * w + (j + 1)] = prefix2d_[i * w + (j + 1)] + running;
        }
      }
    } else {
      prefix2d_.clear();
    }
  }

  std::size_t size() const { return n_; }
  const KernelSpec& kernel() const { return spec_; }

  double gram(std::size_t i, std::size_t j) const { return gram_[i * n_ + j]; }
  std::span<const double> gram_row(std::size_t i) const { return {&gram_[i * n_], n_}; }

  std::span<const long double> row_sums() const { return row_sums_; }
  std::span<const long double> row_prefix() const { return row_prefix_; }
  std::span<const long double> diag_prefix() const { return diag_prefix_; }
  long double total() const { return total_; }
  long double diag_total() const { return diag_prefix_[n_]; }

  bool has_prefix2d() const { return has_prefix2d_; }

  // Sum of gram over [0, i) x [0, j).
  long double prefix2d(std::size_t i, std::size_t j) const {
    return prefix2d_[i * (n_ + 1) + j];
  }

  // Sum of gram over rows [r.begin, r.end) and columns [c.begin, c.end).
  long double block_sum(Run r, Run c) const {
    const std::size_t w = n_ + 1;
    return prefix2d_[r.end * w + c.end] - prefix2d_[r.begin * w + c.end] -
           prefix2d_[r.end * w + c.begin] + prefix2d_[r.begin * w + c.begin];
  }

  long double row_range_sum(Run r) const { return row_prefix_[r.end] - row_prefix_[r.begin]; }
  long double diag_range_sum(Run r) const { return diag_prefix_[r.end] - diag_prefix_[r.begin]; }

 private:
  std::size_t n_ = 0;
  KernelSpec spec_{};
  std::vector<double> gram_;
  std::vector<long double> row_sums_;
  std::vector<long double> row_prefix_;
  std::vector<long double> diag_prefix_;
  long double total_ = 0.0L;
  bool has_prefix2d_ = false;
  std::vector<long double> prefix2d_;
};

inline GramCache build_gram_cache(const SampleField& field, const KernelSpec& spec,
                                  bool with_prefix2d,
                                  std::size_t max_entries = kDefaultMaxTableEntries) {
  field.validate();
  GramCache cache;
  cache.rebuild(field.values, spec, with_prefix2d, max_entries);
  return cache;
}

namespace detail {

// MMD^2_u of the split (inside, outside) from the four block sums.
inline double split_statistic(const GramCache& cache, long double inside_block,
                              long double inside_diag, long double row_range, std::size_t k) {
  const std::size_t m = cache.size() - k;
  const long double outside_block = cache.total() - 2.0L * row_range + inside_block;
  const long double cross = row_range - inside_block;
  const long double inside_off = inside_block - inside_diag;
  const long double outside_off = outside_block - (cache.diag_total() - inside_diag);
  const long double lk = static_cast<long double>(k);
  const long double lm = static_cast<long double>(m);
  return static_cast<double>(inside_off / (lk * (lk - 1)) + outside_off / (lm * (lm - 1)) -
                             2.0L * cross / (lk * lm));
}

// Subset statistic for a node set given as sorted disjoint runs of total size k.
// Caller guarantees 2 <= k <= N - 2.
inline double subset_mmd_u2_runs(const GramCache& cache, std::span<const Run> runs, std::size_t k) {
  long double row_range = 0.0L;
  long double inside_diag = 0.0L;
  for (const Run& r : runs) {
    row_range += cache.row_range_sum(r);
    inside_diag += cache.diag_range_sum(r);
  }
  long double inside_block = 0.0L;
  if (cache.has_prefix2d()) {
    for (std::size_t a = 0; a < runs.size(); ++a) {
      inside_block += cache.block_sum(runs[a], runs[a]);
      for (std::size_t b = a + 1; b < runs.size(); ++b) {
        inside_block += 2.0L * cache.block_sum(runs[a], runs[b]);
      }
    }
  } else {
    for (const Run& ra : runs) {
      for (std::size_t i = ra.begin; i < ra.end; ++i) {
        const auto row = cache.gram_row(i);
        for (const Run& rb : runs) {
          for (std::size_t j = rb.begin; j < rb.end; ++j) inside_block += row[j];
        }
      }
    }
  }
  return split_statistic(cache, inside_block, inside_diag, row_range, k);
}

inline void require_split(std::size_t k, std::size_t total) {
  if (k < 2 || k + 2 > total) {
    throw InsufficientSamples("subset MMD^2 needs >= 2 nodes inside and outside (inside " +
                              std::to_string(k) + " of " + std::to_string(total) + ")");
  }
}

}  // namespace detail

/// MMD^2_u between the samples inside `inside` and those in its complement.
inline double subset_mmd_u2(const GramCache& cache, const NodeSet& inside) {
  const std::size_t k = node_count(inside);
  detail::require_split(k, cache.size());
  std::vector<Run> runs;
  to_runs(inside, cache.size(), runs);
  return detail::subset_mmd_u2_runs(cache, runs, k);
}

}  // namespace geoscan
