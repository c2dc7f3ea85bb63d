#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include <fmt/format.h>

#include "geoscan/error.hpp"
#include "geoscan/geometry.hpp"
#include "geoscan/kernels.hpp"
#include "geoscan/mmd.hpp"

namespace geoscan {

enum class Decision { H0, H1 };

inline std::string_view to_string(Decision d) { return d == Decision::H1 ? "H1" : "H0"; }

struct ScanOptions {
  bool keep_per_candidate = false;
  // Drop candidates with fewer than 2 nodes inside or outside instead of
  // rejecting the configuration. The estimator is undefined for them.
  bool skip_degenerate = false;
  bool use_prefix2d = true;
  std::size_t max_table_entries = kDefaultMaxTableEntries;
};

struct CandidateStat {
  Candidate candidate;
  double stat = 0.0;
};

struct ScanResult {
  double max_stat = -std::numeric_limits<double>::infinity();
  Candidate argmax;
  Decision decision = Decision::H0;
  double threshold = 0.0;
  std::size_t n_candidates = 0;
  std::size_t n_skipped = 0;
  std::optional<std::vector<CandidateStat>> per_candidate;
};

/// A materialized candidate family with each candidate's node set stored as
/// runs, ready for repeated scans over many sample fields.
class CandidateSet {
 public:
  CandidateSet(const Geometry& geom, const SizeBounds& bounds, bool skip_degenerate = false)
      : geom_(geom) {
    const CandidateFamily family(geom, bounds);
    family.for_each([&](Candidate c) { add(std::move(c), skip_degenerate); });
    finish();
  }

  CandidateSet(const Geometry& geom, std::vector<Candidate> candidates, bool skip_degenerate = false)
      : geom_(geom) {
    for (auto& c : candidates) add(std::move(c), skip_degenerate);
    finish();
  }

  const Geometry& geometry() const { return geom_; }
  std::size_t size() const { return candidates_.size(); }
  std::size_t n_skipped() const { return skipped_; }
  const Candidate& candidate(std::size_t i) const { return candidates_[i]; }
  const std::vector<Candidate>& candidates() const { return candidates_; }

  std::span<const Run> runs(std::size_t i) const {
    return {run_store_.data() + run_offsets_[i], run_offsets_[i + 1] - run_offsets_[i]};
  }

  double statistic(const GramCache& cache, std::size_t i) const {
    return detail::subset_mmd_u2_runs(cache, runs(i), candidates_[i].size);
  }

 private:
  void add(Candidate c, bool skip_degenerate) {
    const std::size_t total = geom_.node_count();
    if (c.size < 2 || c.size + 2 > total) {
      if (skip_degenerate) {
        ++skipped_;
        return;
      }
      throw ConfigError(fmt::format(
          "candidate {} leaves fewer than 2 nodes on one side; use sizes in [2, {}]", describe(c),
          total - 2));
    }
    append_runs(c, geom_, run_store_);
    run_offsets_.push_back(run_store_.size());
    candidates_.push_back(std::move(c));
  }

  void finish() {
    if (candidates_.empty()) throw ConfigError("candidate set is empty");
  }

  Geometry geom_;
  std::vector<Candidate> candidates_;
  std::vector<Run> run_store_;
  std::vector<std::size_t> run_offsets_{0};
  std::size_t skipped_ = 0;
};

inline void check_field(const SampleField& field, const Geometry& geom) {
  if (field.size() != geom.node_count()) {
    throw ConfigError(fmt::format("node count mismatch: field has {} values, geometry has {} nodes",
                                  field.size(), geom.node_count()));
  }
  field.validate();
}

/// Reusable scanner: owns the Gram cache so repeated scans reuse memory.
class Scanner {
 public:
  Scanner(const CandidateSet& candidates, const KernelSpec& spec, const ScanOptions& options = {})
      : candidates_(&candidates), spec_(spec), options_(options) {
    spec_.validate();
  }

  const CandidateSet& candidates() const { return *candidates_; }

  void load(const SampleField& field) {
    check_field(field, candidates_->geometry());
    cache_.rebuild(field.values, spec_, options_.use_prefix2d, options_.max_table_entries);
  }

  const GramCache& cache() const { return cache_; }

  // Max statistic and the first index attaining it, for the loaded field.
  std::pair<double, std::size_t> max_stat() const {
    double best = -std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t i = 0; i < candidates_->size(); ++i) {
      const double s = candidates_->statistic(cache_, i);
      if (s > best) {
        best = s;
        arg = i;
      }
    }
    return {best, arg};
  }

  // Decision only; stops at the first candidate reaching the threshold.
  Decision decide(double threshold) const {
    for (std::size_t i = 0; i < candidates_->size(); ++i) {
      if (candidates_->statistic(cache_, i) >= threshold) return Decision::H1;
    }
    return Decision::H0;
  }

 private:
  const CandidateSet* candidates_;
  KernelSpec spec_;
  ScanOptions options_;
  GramCache cache_;
};

/// The MMD scan test: H1 iff max over candidates of MMD^2_u(inside, outside)
/// is >= threshold. The argmax is the first maximizer in enumeration order.
inline ScanResult scan(const SampleField& field, const CandidateSet& candidates,
                       const KernelSpec& spec, double threshold, const ScanOptions& options = {}) {
  if (!std::isfinite(threshold)) throw ConfigError("threshold must be finite");
  Scanner scanner(candidates, spec, options);
  scanner.load(field);

  ScanResult result;
  result.threshold = threshold;
  result.n_candidates = candidates.size();
  result.n_skipped = candidates.n_skipped();
  std::size_t arg = 0;
  if (options.keep_per_candidate) {
    std::vector<CandidateStat> stats;
    stats.reserve(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const double s = candidates.statistic(scanner.cache(), i);
      stats.push_back({candidates.candidate(i), s});
      if (s > result.max_stat) {
        result.max_stat = s;
        arg = i;
      }
    }
    result.per_candidate = std::move(stats);
  } else {
    std::tie(result.max_stat, arg) = scanner.max_stat();
  }
  result.argmax = candidates.candidate(arg);
  result.decision = result.max_stat >= threshold ? Decision::H1 : Decision::H0;
  return result;
}

inline ScanResult scan(const SampleField& field, const Geometry& geom, const SizeBounds& bounds,
                       const KernelSpec& spec, double threshold, const ScanOptions& options = {}) {
  const CandidateSet candidates(geom, bounds, options.skip_degenerate);
  return scan(field, candidates, spec, threshold, options);
}

inline std::vector<CandidateStat> scan_all_stats(const SampleField& field, const Geometry& geom,
                                                 const SizeBounds& bounds, const KernelSpec& spec,
                                                 ScanOptions options = {}) {
  options.keep_per_candidate = true;
  auto result = scan(field, geom, bounds, spec, 0.0, options);
  return std::move(*result.per_candidate);
}

/// Reference scan: splits the field and calls mmd_u2 from scratch for every
/// candidate. O(N^2) kernel evaluations per candidate.
inline ScanResult scan_naive(const SampleField& field, const CandidateSet& candidates,
                             const KernelSpec& spec, double threshold) {
  check_field(field, candidates.geometry());
  ScanResult result;
  result.threshold = threshold;
  result.n_candidates = candidates.size();
  result.n_skipped = candidates.n_skipped();
  std::size_t arg = 0;
  std::vector<double> inside;
  std::vector<double> outside;
  std::vector<char> mask(field.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    std::fill(mask.begin(), mask.end(), 0);
    for (const Run& r : candidates.runs(i)) {
      for (std::size_t v = r.begin; v < r.end; ++v) mask[v] = 1;
    }
    inside.clear();
    outside.clear();
    for (std::size_t v = 0; v < field.size(); ++v) {
      (mask[v] ? inside : outside).push_back(field.values[v]);
    }
    const double s = mmd_u2(inside, outside, spec);
    if (s > result.max_stat) {
      result.max_stat = s;
      arg = i;
    }
  }
  result.argmax = candidates.candidate(arg);
  result.decision = result.max_stat >= threshold ? Decision::H1 : Decision::H0;
  return result;
}

}  // namespace geoscan
