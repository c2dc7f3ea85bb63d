// Plants a shifted interval in a line of Gaussian noise and scans for it.
#include <iostream>

#include <fmt/format.h>

#include "geoscan/geoscan.hpp"

int main() {
  using namespace geoscan;

  ExperimentConfig cfg;
  cfg.geometry = Geometry::line(200);
  cfg.bounds = {20, 100};

  const Candidate planted{LineInterval{120, 30}, 30};
  const SampleField field = sample_field(cfg, Hypothesis::alternative(planted), stream::kAlternative, 0);

  const double t = resolve_threshold(cfg);
  ScanOptions options;
  const ScanResult r = scan(field, cfg.geometry, cfg.bounds, cfg.kernel, t, options);

  fmt::print("planted  {}\n", describe(planted));
  fmt::print("found    {}\n", describe(r.argmax));
  fmt::print("max stat {:.5f} vs threshold {:.5f} -> {}\n", r.max_stat, t, to_string(r.decision));

  cfg.trials = 200;
  const RiskEstimate risk = estimate_risk(cfg);
  fmt::print("risk over {} trials: type I {:.3f}, type II {:.3f}\n", risk.trials_used, risk.type1,
             risk.type2_worst);

  const double bound = theory::type1_bound_line(200, t, 1.0, cfg.bounds.min_size, cfg.bounds.max_size);
  fmt::print("type I union bound at this threshold: {:.3g}\n", bound);
}
