#pragma once

#include <cmath>
#include <string>
#include <string_view>

#include "geoscan/error.hpp"

namespace geoscan {

enum class KernelFamily { Gaussian, Laplacian, Constant };

inline std::string_view to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::Gaussian: return "gaussian";
    case KernelFamily::Laplacian: return "laplacian";
    case KernelFamily::Constant: return "constant";
  }
  return "unknown";
}

inline KernelFamily parse_kernel_family(std::string_view name) {
  if (name == "gaussian") return KernelFamily::Gaussian;
  if (name == "laplacian") return KernelFamily::Laplacian;
  if (name == "constant") return KernelFamily::Constant;
  throw ConfigError("unknown kernel family '" + std::string(name) + "'");
}

/// A bounded kernel on scalar samples.
///
/// Gaussian:  k(x,y) = exp(-(x-y)^2 / (2 sigma^2)), bound 1.
/// Laplacian: k(x,y) = exp(-|x-y| / scale),         bound 1.
/// Constant:  k(x,y) = bound.
///
/// `bound` is the K with 0 <= k(x,y) <= K that every error bound depends on.
struct KernelSpec {
  KernelFamily family = KernelFamily::Gaussian;
  double bandwidth = 1.0;
  double bound = 1.0;

  static KernelSpec gaussian(double sigma) { return {KernelFamily::Gaussian, sigma, 1.0}; }
  static KernelSpec laplacian(double scale) { return {KernelFamily::Laplacian, scale, 1.0}; }
  static KernelSpec constant(double value) { return {KernelFamily::Constant, 1.0, value}; }

  void validate() const {
    switch (family) {
      case KernelFamily::Gaussian:
      case KernelFamily::Laplacian:
        if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
          throw ConfigError("kernel bandwidth must be a positive finite number");
        }
        if (bound != 1.0) throw ConfigError("gaussian/laplacian kernels have bound K = 1");
        break;
      case KernelFamily::Constant:
        if (!(bound > 0.0) || !std::isfinite(bound)) {
          throw ConfigError("constant kernel value must be a positive finite number");
        }
        break;
    }
  }

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

namespace detail {

// Unchecked evaluation; callers validate the spec once up front.
inline double kernel_value(const KernelSpec& spec, double x, double y) {
  switch (spec.family) {
    case KernelFamily::Gaussian: {
      const double d = x - y;
      return std::exp(-(d * d) / (2.0 * spec.bandwidth * spec.bandwidth));
    }
    case KernelFamily::Laplacian:
      return std::exp(-std::fabs(x - y) / spec.bandwidth);
    case KernelFamily::Constant:
      return spec.bound;
  }
  return 0.0;
}

}  // namespace detail

inline double kernel_eval(const KernelSpec& spec, double x, double y) {
  spec.validate();
  return detail::kernel_value(spec, x, y);
}

}  // namespace geoscan
