#pragma once

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "geoscan/error.hpp"
#include "geoscan/kernels.hpp"
#include "geoscan/mmd.hpp"
#include "geoscan/random.hpp"

namespace geoscan {

enum class DistFamily { Gaussian, GaussianMixture };

struct MixtureComponent {
  double weight = 1.0;
  double mean = 0.0;
  double var = 1.0;
  friend bool operator==(const MixtureComponent&, const MixtureComponent&) = default;
};

/// Node distribution: a Gaussian, or a finite Gaussian mixture sampled by
/// picking a component and then drawing from it.
struct DistSpec {
  DistFamily family = DistFamily::Gaussian;
  std::vector<MixtureComponent> components{{1.0, 0.0, 1.0}};

  static DistSpec gaussian(double mean, double var) {
    return {DistFamily::Gaussian, {{1.0, mean, var}}};
  }
  static DistSpec mixture(std::vector<MixtureComponent> components) {
    return {DistFamily::GaussianMixture, std::move(components)};
  }

  void validate() const {
    if (components.empty()) throw ConfigError("distribution needs at least one component");
    if (family == DistFamily::Gaussian && components.size() != 1) {
      throw ConfigError("gaussian distribution has exactly one component");
    }
    double total = 0.0;
    for (const auto& c : components) {
      if (!(c.var > 0.0) || !std::isfinite(c.var)) throw ConfigError("variances must be positive");
      if (!(c.weight > 0.0)) throw ConfigError("mixture weights must be positive");
      if (!std::isfinite(c.mean)) throw ConfigError("means must be finite");
      total += c.weight;
    }
    if (std::fabs(total - 1.0) > 1e-12) throw ConfigError("mixture weights must sum to 1");
  }

  double sample(CounterRng& rng) const {
    const MixtureComponent* c = &components.front();
    if (components.size() > 1) {
      double u = rng.uniform();
      for (const auto& comp : components) {
        c = &comp;
        if (u < comp.weight) break;
        u -= comp.weight;
      }
    }
    return rng.normal(c->mean, std::sqrt(c->var));
  }

  friend bool operator==(const DistSpec&, const DistSpec&) = default;
};

/// E k(X, Y) for independent X ~ a, Y ~ b under the Gaussian kernel.
inline double expected_gaussian_kernel(const DistSpec& a, const DistSpec& b, double sigma) {
  double acc = 0.0;
  for (const auto& ca : a.components) {
    for (const auto& cb : b.components) {
      acc += ca.weight * cb.weight * expected_gaussian_kernel(ca.mean, ca.var, cb.mean, cb.var, sigma);
    }
  }
  return acc;
}

/// Population MMD^2[p, q]. Closed form exists for the Gaussian kernel only.
inline double population_mmd2(const DistSpec& p, const DistSpec& q, const KernelSpec& kernel) {
  p.validate();
  q.validate();
  kernel.validate();
  if (kernel.family == KernelFamily::Constant) return 0.0;
  if (kernel.family != KernelFamily::Gaussian) {
    throw ConfigError("population MMD^2 is available in closed form for the gaussian kernel only");
  }
  const double s = kernel.bandwidth;
  return expected_gaussian_kernel(p, p, s) - 2.0 * expected_gaussian_kernel(p, q, s) +
         expected_gaussian_kernel(q, q, s);
}

}  // namespace geoscan
