#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "geoscan/baselines.hpp"
#include "geoscan/distributions.hpp"
#include "geoscan/error.hpp"
#include "geoscan/geometry.hpp"
#include "geoscan/kernels.hpp"
#include "geoscan/random.hpp"
#include "geoscan/scan.hpp"
#include "geoscan/theory.hpp"

namespace geoscan {

enum class Placement { WorstCase, RandomUniform, Exhaustive };

inline std::string_view to_string(Placement p) {
  switch (p) {
    case Placement::WorstCase: return "worst_case";
    case Placement::RandomUniform: return "random_uniform";
    case Placement::Exhaustive: return "exhaustive";
  }
  return "unknown";
}

inline Placement parse_placement(std::string_view s) {
  if (s == "worst_case") return Placement::WorstCase;
  if (s == "random_uniform") return Placement::RandomUniform;
  if (s == "exhaustive") return Placement::Exhaustive;
  throw ConfigError("unknown anomaly placement '" + std::string(s) + "'");
}

/// How the scan threshold is chosen.
///   Fixed        t = value
///   KnownMmd     t = (1 - delta) MMD^2[p,q], delta = value
///   Vanishing    t = c / log log n, c = value
///   NullQuantile t = empirical (1 - alpha) quantile of the max statistic over
///                `calibration_trials` simulated null fields, alpha = value
struct ThresholdRule {
  enum class Kind { Fixed, KnownMmd, Vanishing, NullQuantile };
  Kind kind = Kind::KnownMmd;
  double value = 0.5;
  std::size_t calibration_trials = 0;

  static ThresholdRule fixed(double t) { return {Kind::Fixed, t, 0}; }
  static ThresholdRule known_mmd(double delta) { return {Kind::KnownMmd, delta, 0}; }
  static ThresholdRule vanishing(double c) { return {Kind::Vanishing, c, 0}; }
  static ThresholdRule null_quantile(double alpha, std::size_t trials) {
    return {Kind::NullQuantile, alpha, trials};
  }

  friend bool operator==(const ThresholdRule&, const ThresholdRule&) = default;
};

inline std::string_view to_string(ThresholdRule::Kind k) {
  switch (k) {
    case ThresholdRule::Kind::Fixed: return "fixed";
    case ThresholdRule::Kind::KnownMmd: return "known_mmd";
    case ThresholdRule::Kind::Vanishing: return "vanishing";
    case ThresholdRule::Kind::NullQuantile: return "null_quantile";
  }
  return "unknown";
}

struct ExperimentConfig {
  Geometry geometry = Geometry::line(200);
  SizeBounds bounds{61, 100};
  KernelSpec kernel = KernelSpec::gaussian(1.0);
  DistSpec p = DistSpec::gaussian(0.0, 1.0);
  DistSpec q = DistSpec::gaussian(1.0, 1.0);
  ThresholdRule threshold = ThresholdRule::known_mmd(0.5);
  std::size_t trials = 500;
  std::uint64_t seed = 1;
  Placement placement = Placement::WorstCase;
  // Exhaustive placement refuses candidate families larger than this.
  std::size_t exhaustive_budget = 2000;
  // Family-wise level for the t-test and Smirnov baselines.
  double level = 0.05;

  void validate() const {
    validate_bounds(geometry, bounds);
    kernel.validate();
    p.validate();
    q.validate();
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (!(level > 0.0 && level < 1.0)) throw ConfigError("level must lie in (0, 1)");
    if (threshold.kind == ThresholdRule::Kind::NullQuantile) {
      if (!(threshold.value > 0.0 && threshold.value < 1.0)) {
        throw ConfigError("null_quantile alpha must lie in (0, 1)");
      }
      if (threshold.calibration_trials < 1) throw ConfigError("null_quantile needs calibration trials");
    }
  }
};

struct Hypothesis {
  std::optional<Candidate> anomaly;

  static Hypothesis null() { return {}; }
  static Hypothesis alternative(Candidate c) { return {std::move(c)}; }
};

// Independent random streams used by the harness.
namespace stream {
inline constexpr std::uint64_t kNull = 1;
inline constexpr std::uint64_t kAlternative = 2;
inline constexpr std::uint64_t kCalibration = 3;
inline constexpr std::uint64_t kPlacement = 4;
}  // namespace stream

/// One sample per node: i.i.d. p under H0; under H1(c) nodes of c are i.i.d. q.
/// Node i of trial `trial` on stream `stream_id` is drawn from its own
/// counter-based generator keyed by (seed, stream_id, trial, i).
inline SampleField sample_field(const ExperimentConfig& cfg, const Hypothesis& hypothesis,
                                std::uint64_t stream_id, std::uint64_t trial) {
  const std::size_t total = cfg.geometry.node_count();
  std::vector<char> anomalous(total, 0);
  if (hypothesis.anomaly) {
    std::vector<Run> runs;
    append_runs(*hypothesis.anomaly, cfg.geometry, runs);
    for (const Run& r : runs) {
      for (std::size_t i = r.begin; i < r.end; ++i) anomalous[i] = 1;
    }
  }
  SampleField field;
  field.values.resize(total);
  for (std::size_t i = 0; i < total; ++i) {
    CounterRng rng(cfg.seed, {stream_id, trial, i});
    field.values[i] = (anomalous[i] ? cfg.q : cfg.p).sample(rng);
  }
  return field;
}

struct RiskEstimate {
  double type1 = 0.0;
  double type2_worst = 0.0;
  double risk = 0.0;
  double hw1 = 0.0;
  double hw2 = 0.0;
  std::size_t trials_used = 0;
  double threshold = 0.0;
  Placement placement = Placement::WorstCase;
  // Anomaly attaining type2_worst (WorstCase, Exhaustive).
  std::optional<Candidate> worst_candidate;
};

/// Half-width of the smallest interval centred at k/n containing the 95%
/// Wilson score interval.
inline double binomial_half_width(std::size_t successes, std::size_t trials) {
  if (trials == 0) return 0.0;
  constexpr double z = 1.959963984540054;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double denom = 1.0 + z * z / n;
  const double center = (p + z * z / (2.0 * n)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n));
  return std::max(center + half - p, p - (center - half));
}

/// The candidate minimizing size * (N - size), first in enumeration order.
inline Candidate worst_case_candidate(const Geometry& geom, const SizeBounds& bounds) {
  const CandidateFamily family(geom, bounds);
  const std::size_t total = geom.node_count();
  std::optional<Candidate> best;
  std::size_t best_key = 0;
  family.for_each([&](Candidate c) {
    const std::size_t key = c.size * (total - c.size);
    if (!best || key < best_key) {
      best_key = key;
      best = std::move(c);
    }
  });
  if (!best) throw ConfigError("candidate family is empty");
  return *best;
}

using Detector = std::function<Decision(const SampleField&)>;

/// MMD scan detector at a fixed threshold. Candidates with fewer than two
/// nodes on either side are skipped.
class MmdScanDetector {
 public:
  MmdScanDetector(const Geometry& geom, const SizeBounds& bounds, const KernelSpec& kernel,
                  double threshold)
      : candidates_(std::make_shared<CandidateSet>(geom, bounds, true)),
        scanner_(std::make_shared<Scanner>(*candidates_, kernel, ScanOptions{})),
        threshold_(threshold) {}

  Decision operator()(const SampleField& field) const {
    scanner_->load(field);
    return scanner_->decide(threshold_);
  }

  double max_stat(const SampleField& field) const {
    scanner_->load(field);
    return scanner_->max_stat().first;
  }

  double threshold() const { return threshold_; }

 private:
  std::shared_ptr<CandidateSet> candidates_;
  std::shared_ptr<Scanner> scanner_;
  double threshold_;
};

/// Threshold implied by the config's rule. NullQuantile runs its own
/// simulation on the calibration stream.
inline double resolve_threshold(const ExperimentConfig& cfg) {
  const auto& rule = cfg.threshold;
  switch (rule.kind) {
    case ThresholdRule::Kind::Fixed:
      if (!std::isfinite(rule.value)) throw ConfigError("fixed threshold must be finite");
      return rule.value;
    case ThresholdRule::Kind::KnownMmd:
      try {
        return theory::threshold_known(population_mmd2(cfg.p, cfg.q, cfg.kernel), rule.value);
      } catch (const DomainError& e) {
        throw ConfigError(e.what());
      }
    case ThresholdRule::Kind::Vanishing:
      try {
        return theory::threshold_unknown(static_cast<double>(cfg.geometry.n()), rule.value);
      } catch (const DomainError& e) {
        throw ConfigError(e.what());
      }
    case ThresholdRule::Kind::NullQuantile: {
      MmdScanDetector detector(cfg.geometry, cfg.bounds, cfg.kernel, 0.0);
      std::vector<double> maxima;
      maxima.reserve(rule.calibration_trials);
      for (std::size_t trial = 0; trial < rule.calibration_trials; ++trial) {
        maxima.push_back(detector.max_stat(sample_field(cfg, Hypothesis::null(), stream::kCalibration, trial)));
      }
      std::sort(maxima.begin(), maxima.end(), std::greater<>());
      const auto exceed = static_cast<std::size_t>(std::floor(rule.value * static_cast<double>(maxima.size())));
      return maxima[std::max<std::size_t>(exceed, 1) - 1];
    }
  }
  throw ConfigError("unknown threshold rule");
}

/// Monte-Carlo minimax risk of `detect`: type I rate over `trials` null fields
/// plus the type II rate at the placement policy's anomaly.
///
/// WorstCase      all trials at the candidate minimizing size (N - size)
/// Exhaustive     `trials` trials per candidate, max failure rate reported
/// RandomUniform  anomaly resampled each trial (an average, not a max)
inline RiskEstimate estimate_risk(const ExperimentConfig& cfg, const Detector& detect,
                                  double threshold_for_report = 0.0) {
  cfg.validate();
  RiskEstimate est;
  est.placement = cfg.placement;
  est.threshold = threshold_for_report;

  std::size_t false_alarms = 0;
  for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
    if (detect(sample_field(cfg, Hypothesis::null(), stream::kNull, trial)) == Decision::H1) ++false_alarms;
  }
  est.type1 = static_cast<double>(false_alarms) / static_cast<double>(cfg.trials);
  est.hw1 = binomial_half_width(false_alarms, cfg.trials);

  std::size_t misses = 0;
  std::size_t h1_trials = cfg.trials;
  switch (cfg.placement) {
    case Placement::WorstCase: {
      Candidate truth = worst_case_candidate(cfg.geometry, cfg.bounds);
      const auto h = Hypothesis::alternative(truth);
      for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
        if (detect(sample_field(cfg, h, stream::kAlternative, trial)) == Decision::H0) ++misses;
      }
      est.worst_candidate = std::move(truth);
      break;
    }
    case Placement::RandomUniform: {
      const CandidateFamily family(cfg.geometry, cfg.bounds);
      for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
        CounterRng rng(cfg.seed, {stream::kPlacement, trial});
        const auto h = Hypothesis::alternative(family.at(rng.below(family.count())));
        if (detect(sample_field(cfg, h, stream::kAlternative, trial)) == Decision::H0) ++misses;
      }
      break;
    }
    case Placement::Exhaustive: {
      const CandidateFamily family(cfg.geometry, cfg.bounds);
      if (family.count() > cfg.exhaustive_budget) {
        throw ResourceError(fmt::format(
            "exhaustive placement over {} candidates exceeds the budget of {}; use worst_case placement",
            family.count(), cfg.exhaustive_budget));
      }
      std::uint64_t index = 0;
      std::size_t worst = 0;
      family.for_each([&](Candidate c) {
        const auto h = Hypothesis::alternative(c);
        std::size_t m = 0;
        for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
          const std::uint64_t key = index * cfg.trials + trial;
          if (detect(sample_field(cfg, h, stream::kAlternative, key)) == Decision::H0) ++m;
        }
        if (!est.worst_candidate || m > worst) {
          worst = m;
          est.worst_candidate = std::move(c);
        }
        ++index;
      });
      misses = worst;
      break;
    }
  }
  est.type2_worst = static_cast<double>(misses) / static_cast<double>(h1_trials);
  est.hw2 = binomial_half_width(misses, h1_trials);
  est.risk = est.type1 + est.type2_worst;
  est.trials_used = cfg.trials;
  return est;
}

/// Minimax risk of the MMD scan test under the config's threshold rule.
inline RiskEstimate estimate_risk(const ExperimentConfig& cfg) {
  cfg.validate();
  const double t = resolve_threshold(cfg);
  const MmdScanDetector detector(cfg.geometry, cfg.bounds, cfg.kernel, t);
  return estimate_risk(cfg, [&](const SampleField& f) { return detector(f); }, t);
}

inline RiskEstimate estimate_risk_ttest(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto candidates = std::make_shared<CandidateSet>(cfg.geometry, cfg.bounds, true);
  return estimate_risk(cfg, [&](const SampleField& f) {
    return ttest_scan(f, *candidates, cfg.level).decision;
  });
}

inline RiskEstimate estimate_risk_smirnov(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto candidates = std::make_shared<CandidateSet>(cfg.geometry, cfg.bounds, true);
  return estimate_risk(cfg, [&](const SampleField& f) {
    return smirnov_scan(f, *candidates, cfg.level).decision;
  });
}

}  // namespace geoscan
