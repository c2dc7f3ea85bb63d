#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "geoscan/error.hpp"
#include "geoscan/sim.hpp"

// JSON form of experiment configurations.
//
//   {
//     "geometry":  {"kind": "line", "n": 200, "r": 1, "min_size": 61, "max_size": 100},
//     "kernel":    {"family": "gaussian", "bandwidth": 1.0},
//     "p":         {"family": "gaussian", "mean": 0, "var": 1},
//     "q":         {"family": "mixture", "components": [{"weight": 0.5, "mean": -1, "var": 1}, ...]},
//     "threshold": {"rule": "known_mmd", "delta": 0.5},
//     "trials": 500, "seed": 1, "placement": "worst_case",
//     "exhaustive_budget": 2000, "level": 0.05,
//     "grid":      {"min_sizes": [1, 11], "max_sizes": [100, 190]}      (optional)
//   }
//
// threshold rules: {"rule": "fixed", "t": x}, {"rule": "known_mmd", "delta": x},
// {"rule": "vanishing", "c": x}, {"rule": "null_quantile", "alpha": x, "calibration_trials": k}.

namespace geoscan {

using json = nlohmann::json;

namespace detail {

template <class T>
T get_required(const json& j, const char* key, const char* where) {
  if (!j.is_object() || !j.contains(key)) {
    throw ConfigError(std::string("missing field '") + key + "' in " + where);
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("field '") + key + "' in " + where + " has the wrong type");
  }
}

template <class T>
T get_optional(const json& j, const char* key, T fallback, const char* where) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return get_required<T>(j, key, where);
}

}  // namespace detail

inline json geometry_to_json(const Geometry& g, const SizeBounds& b) {
  return {{"kind", std::string(to_string(g.kind()))}, {"n", g.n()}, {"r", g.dims()},
          {"min_size", b.min_size}, {"max_size", b.max_size}};
}

inline Geometry geometry_from_json(const json& j) {
  const auto kind = parse_geometry_kind(detail::get_required<std::string>(j, "kind", "geometry"));
  const auto n = detail::get_required<std::size_t>(j, "n", "geometry");
  switch (kind) {
    case GeometryKind::Line: return Geometry::line(n);
    case GeometryKind::Ring: return Geometry::ring(n);
    case GeometryKind::Lattice2D: return Geometry::lattice2d(n);
    case GeometryKind::Lattice:
      return Geometry::lattice(n, detail::get_required<std::size_t>(j, "r", "geometry"));
  }
  throw ConfigError("unknown geometry kind");
}

inline SizeBounds bounds_from_json(const json& j) {
  return {detail::get_required<std::size_t>(j, "min_size", "geometry"),
          detail::get_required<std::size_t>(j, "max_size", "geometry")};
}

inline json kernel_to_json(const KernelSpec& k) {
  json j = {{"family", std::string(to_string(k.family))}, {"bandwidth", k.bandwidth}};
  if (k.family == KernelFamily::Constant) j["bound"] = k.bound;
  return j;
}

inline KernelSpec kernel_from_json(const json& j) {
  KernelSpec k;
  k.family = parse_kernel_family(detail::get_required<std::string>(j, "family", "kernel"));
  k.bandwidth = detail::get_optional<double>(j, "bandwidth", 1.0, "kernel");
  k.bound = detail::get_optional<double>(j, "bound", 1.0, "kernel");
  k.validate();
  return k;
}

inline json dist_to_json(const DistSpec& d) {
  if (d.family == DistFamily::Gaussian) {
    return {{"family", "gaussian"}, {"mean", d.components[0].mean}, {"var", d.components[0].var}};
  }
  json comps = json::array();
  for (const auto& c : d.components) {
    comps.push_back({{"weight", c.weight}, {"mean", c.mean}, {"var", c.var}});
  }
  return {{"family", "mixture"}, {"components", comps}};
}

inline DistSpec dist_from_json(const json& j) {
  const auto family = detail::get_required<std::string>(j, "family", "distribution");
  DistSpec d;
  if (family == "gaussian") {
    d = DistSpec::gaussian(detail::get_required<double>(j, "mean", "distribution"),
                           detail::get_required<double>(j, "var", "distribution"));
  } else if (family == "mixture") {
    const json comps = detail::get_required<json>(j, "components", "distribution");
    if (!comps.is_array()) throw ConfigError("mixture components must be an array");
    std::vector<MixtureComponent> out;
    for (const auto& c : comps) {
      out.push_back({detail::get_required<double>(c, "weight", "mixture component"),
                     detail::get_required<double>(c, "mean", "mixture component"),
                     detail::get_required<double>(c, "var", "mixture component")});
    }
    d = DistSpec::mixture(std::move(out));
  } else {
    throw ConfigError("unknown distribution family '" + family + "'");
  }
  d.validate();
  return d;
}

inline json threshold_to_json(const ThresholdRule& t) {
  switch (t.kind) {
    case ThresholdRule::Kind::Fixed: return {{"rule", "fixed"}, {"t", t.value}};
    case ThresholdRule::Kind::KnownMmd: return {{"rule", "known_mmd"}, {"delta", t.value}};
    case ThresholdRule::Kind::Vanishing: return {{"rule", "vanishing"}, {"c", t.value}};
    case ThresholdRule::Kind::NullQuantile:
      return {{"rule", "null_quantile"}, {"alpha", t.value}, {"calibration_trials", t.calibration_trials}};
  }
  return {};
}

inline ThresholdRule threshold_from_json(const json& j) {
  const auto rule = detail::get_required<std::string>(j, "rule", "threshold");
  if (rule == "fixed") return ThresholdRule::fixed(detail::get_required<double>(j, "t", "threshold"));
  if (rule == "known_mmd") {
    return ThresholdRule::known_mmd(detail::get_required<double>(j, "delta", "threshold"));
  }
  if (rule == "vanishing") return ThresholdRule::vanishing(detail::get_required<double>(j, "c", "threshold"));
  if (rule == "null_quantile") {
    return ThresholdRule::null_quantile(
        detail::get_required<double>(j, "alpha", "threshold"),
        detail::get_required<std::size_t>(j, "calibration_trials", "threshold"));
  }
  throw ConfigError("unknown threshold rule '" + rule + "'");
}

inline json config_to_json(const ExperimentConfig& c) {
  return {{"geometry", geometry_to_json(c.geometry, c.bounds)},
          {"kernel", kernel_to_json(c.kernel)},
          {"p", dist_to_json(c.p)},
          {"q", dist_to_json(c.q)},
          {"threshold", threshold_to_json(c.threshold)},
          {"trials", c.trials},
          {"seed", c.seed},
          {"placement", std::string(to_string(c.placement))},
          {"exhaustive_budget", c.exhaustive_budget},
          {"level", c.level}};
}

inline ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
  ExperimentConfig c;
  const json geom = detail::get_required<json>(j, "geometry", "config");
  c.geometry = geometry_from_json(geom);
  c.bounds = bounds_from_json(geom);
  if (j.contains("kernel")) c.kernel = kernel_from_json(j.at("kernel"));
  if (j.contains("p")) c.p = dist_from_json(j.at("p"));
  if (j.contains("q")) c.q = dist_from_json(j.at("q"));
  if (j.contains("threshold")) c.threshold = threshold_from_json(j.at("threshold"));
  c.trials = detail::get_optional<std::size_t>(j, "trials", c.trials, "config");
  c.seed = detail::get_optional<std::uint64_t>(j, "seed", c.seed, "config");
  c.placement = parse_placement(
      detail::get_optional<std::string>(j, "placement", std::string(to_string(c.placement)), "config"));
  c.exhaustive_budget =
      detail::get_optional<std::size_t>(j, "exhaustive_budget", c.exhaustive_budget, "config");
  c.level = detail::get_optional<double>(j, "level", c.level, "config");
  c.validate();
  return c;
}

/// Grid of (min_size, max_size) points, row-major over min_sizes. Falls back
/// to the config's own bounds when the document has no "grid".
struct SizeGrid {
  std::vector<std::size_t> min_sizes;
  std::vector<std::size_t> max_sizes;
};

inline SizeGrid grid_from_json(const json& j, const SizeBounds& fallback) {
  if (!j.contains("grid")) return {{fallback.min_size}, {fallback.max_size}};
  const json& g = j.at("grid");
  SizeGrid grid{detail::get_required<std::vector<std::size_t>>(g, "min_sizes", "grid"),
                detail::get_required<std::vector<std::size_t>>(g, "max_sizes", "grid")};
  if (grid.min_sizes.empty() || grid.max_sizes.empty()) throw ConfigError("grid axes must be non-empty");
  return grid;
}

inline json grid_to_json(const SizeGrid& g) {
  return {{"min_sizes", g.min_sizes}, {"max_sizes", g.max_sizes}};
}

}  // namespace geoscan
