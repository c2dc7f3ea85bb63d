#pragma once

#include <chrono>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/chrono.h>
#include <fmt/format.h>

#include "geoscan/geoscan.hpp"

namespace geoscan::cli {

inline constexpr const char* kToolName = "geoscan";
inline constexpr const char* kToolVersion = "0.1.0";

// ---------------------------------------------------------------- plumbing

inline std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

inline std::string run_id(const std::string& command, const json& config) {
  return fnv1a_hex(command + "\n" + config.dump());
}

inline std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(now));
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw ConfigError("failed writing '" + path + "'");
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("{}: invalid JSON at byte {}", path, e.byte));
  }
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string manifest_path_for(const std::string& out) { return out + ".manifest.json"; }

/// Where a command's outputs go. An empty csv path means stdout, and the
/// manifest then goes to stderr.
struct OutputPaths {
  std::string primary;
  std::string svg;
};

struct Outcome {
  std::string primary;               // CSV or JSON report text
  std::optional<std::string> svg;    // heatmap, when produced
  std::optional<std::uint64_t> seed;
};

inline void emit(const std::string& command, const json& config, const OutputPaths& paths,
                 const Outcome& outcome, const std::string& started_at, bool print_primary = true) {
  json outputs = json::object();
  if (paths.primary.empty()) {
    if (print_primary) std::cout << outcome.primary;
    std::cout.flush();
  } else {
    write_text(paths.primary, outcome.primary);
    outputs["primary"] = paths.primary;
  }
  if (outcome.svg && !paths.svg.empty()) {
    write_text(paths.svg, *outcome.svg);
    outputs["svg"] = paths.svg;
  }
  json manifest = {{"tool", kToolName},
                   {"version", kToolVersion},
                   {"command", command},
                   {"run_id", run_id(command, config)},
                   {"config", config},
                   {"seed", outcome.seed ? json(*outcome.seed) : json(nullptr)},
                   {"started_at", started_at},
                   {"finished_at", utc_now()},
                   {"outputs", outputs}};
  if (paths.primary.empty()) {
    std::cerr << manifest.dump(2) << '\n';
  } else {
    const std::string mpath = manifest_path_for(paths.primary);
    manifest["outputs"]["manifest"] = mpath;
    write_text(mpath, manifest.dump(2) + "\n");
  }
}

inline std::string csv_preamble(const std::string& command, const json& config) {
  return fmt::format("# {} {} run {}\n", kToolName, command, run_id(command, config));
}

// ---------------------------------------------------------------- detect

/// Resolved detect configuration:
///   {"samples": path, "geometry": {...}, "kernel": {...}, "threshold": t,
///    "skip_degenerate": bool}
inline Outcome run_detect(const json& config, std::ostream& log) {
  const Geometry geom = geometry_from_json(config.at("geometry"));
  const SizeBounds bounds = bounds_from_json(config.at("geometry"));
  const KernelSpec kernel = kernel_from_json(config.at("kernel"));
  const double threshold = detail::get_required<double>(config, "threshold", "detect");
  const bool skip = detail::get_optional<bool>(config, "skip_degenerate", false, "detect");
  const SampleField field =
      read_sample_file(detail::get_required<std::string>(config, "samples", "detect"), geom.node_count());

  ScanOptions options;
  options.skip_degenerate = skip;
  const ScanResult r = scan(field, geom, bounds, kernel, threshold, options);

  log << "decision " << to_string(r.decision) << '\n'
      << "max_stat " << format_double(r.max_stat) << '\n'
      << "threshold " << format_double(r.threshold) << '\n'
      << "argmax " << describe(r.argmax) << '\n';

  json report = {{"decision", std::string(to_string(r.decision))},
                 {"max_stat", r.max_stat},
                 {"threshold", r.threshold},
                 {"argmax", describe(r.argmax)},
                 {"argmax_size", r.argmax.size},
                 {"candidates", r.n_candidates},
                 {"skipped", r.n_skipped}};
  return {report.dump(2) + "\n", std::nullopt, std::nullopt};
}

// ---------------------------------------------------------------- risk

struct GridPoint {
  std::size_t row;
  std::size_t col;
  SizeBounds bounds;
};

inline std::vector<GridPoint> grid_points(const ExperimentConfig& cfg, const SizeGrid& grid) {
  std::vector<GridPoint> out;
  for (std::size_t i = 0; i < grid.min_sizes.size(); ++i) {
    for (std::size_t j = 0; j < grid.max_sizes.size(); ++j) {
      const SizeBounds b{grid.min_sizes[i], grid.max_sizes[j]};
      try {
        validate_bounds(cfg.geometry, b);
      } catch (const ConfigError& e) {
        throw ConfigError(fmt::format("grid point ({}, {}): {}", b.min_size, b.max_size, e.what()));
      }
      out.push_back({i, j, b});
    }
  }
  return out;
}

inline std::string risk_csv_header() {
  return "geometry,n,min_size,max_size,threshold_rule,t,placement,trials,type1,type2_worst,risk,hw1,hw2,seed\n";
}

inline std::string risk_csv_row(const ExperimentConfig& cfg, const RiskEstimate& r) {
  return fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", to_string(cfg.geometry.kind()),
                     cfg.geometry.n(), cfg.bounds.min_size, cfg.bounds.max_size,
                     to_string(cfg.threshold.kind), format_double(r.threshold), to_string(r.placement),
                     r.trials_used, format_double(r.type1), format_double(r.type2_worst),
                     format_double(r.risk), format_double(r.hw1), format_double(r.hw2), cfg.seed);
}

/// Resolved risk configuration: an experiment config document plus "grid".
inline Outcome run_risk(const json& config, std::ostream& log) {
  const ExperimentConfig base = config_from_json(config);
  const SizeGrid grid = grid_from_json(config, base.bounds);
  const auto points = grid_points(base, grid);

  std::string csv = csv_preamble("risk", config) + risk_csv_header();
  std::vector<std::vector<double>> heat(grid.min_sizes.size(), std::vector<double>(grid.max_sizes.size()));
  for (const GridPoint& p : points) {
    ExperimentConfig cfg = base;
    cfg.bounds = p.bounds;
    const RiskEstimate r = estimate_risk(cfg);
    csv += risk_csv_row(cfg, r);
    heat[p.row][p.col] = r.risk / 2.0;
    log << fmt::format("({}, {}) risk {:.4f}\n", p.bounds.min_size, p.bounds.max_size, r.risk);
  }

  svg::HeatmapSpec spec;
  spec.title = fmt::format("risk / 2, {} n={}", to_string(base.geometry.kind()), base.geometry.n());
  spec.row_axis = "I_min";
  spec.col_axis = "I_max";
  for (auto v : grid.min_sizes) spec.row_labels.push_back(std::to_string(v));
  for (auto v : grid.max_sizes) spec.col_labels.push_back(std::to_string(v));
  spec.values = std::move(heat);
  return {std::move(csv), svg::heatmap(spec), base.seed};
}

// ---------------------------------------------------------------- compare

inline std::string compare_csv_header() {
  return "min_size,max_size,ttest_risk,smirnov_risk,mmd_risk,ttest_hw,smirnov_hw,mmd_hw,mmd_threshold,"
         "threshold_rule,trials,seed\n";
}

/// MMD, t-test and Smirnov scans on the same config and grid.
inline Outcome run_compare(const json& config, std::ostream& log) {
  const ExperimentConfig base = config_from_json(config);
  const SizeGrid grid = grid_from_json(config, base.bounds);
  const auto points = grid_points(base, grid);

  std::string csv = csv_preamble("compare", config) + compare_csv_header();
  for (const GridPoint& p : points) {
    ExperimentConfig cfg = base;
    cfg.bounds = p.bounds;
    const RiskEstimate t = estimate_risk_ttest(cfg);
    const RiskEstimate s = estimate_risk_smirnov(cfg);
    const RiskEstimate m = estimate_risk(cfg);
    csv += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", p.bounds.min_size, p.bounds.max_size,
                       format_double(t.risk), format_double(s.risk), format_double(m.risk),
                       format_double(t.hw1 + t.hw2), format_double(s.hw1 + s.hw2),
                       format_double(m.hw1 + m.hw2), format_double(m.threshold),
                       to_string(cfg.threshold.kind), m.trials_used, cfg.seed);
    log << fmt::format("({}, {}) t-test {:.3f}  smirnov {:.3f}  mmd {:.3f}\n", p.bounds.min_size,
                       p.bounds.max_size, t.risk, s.risk, m.risk);
  }
  return {std::move(csv), std::nullopt, base.seed};
}

// ---------------------------------------------------------------- bounds

enum class ParamKind { Real, Count, Structure };

struct ParamSpec {
  const char* name;
  ParamKind kind;
};

class ParamRow {
 public:
  explicit ParamRow(std::map<std::string, std::string> values) : values_(std::move(values)) {}

  double real(const std::string& name) const {
    const std::string& s = values_.at(name);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw DomainError(fmt::format("{} = '{}' is not a number", name, s));
    return v;
  }

  std::size_t count(const std::string& name) const {
    const double v = real(name);
    if (!(v >= 0.0) || v != std::floor(v) || v > 9.0e15) {
      throw DomainError(fmt::format("{} must be a non-negative integer", name));
    }
    return static_cast<std::size_t>(v);
  }

  theory::StructureKind structure(const std::string& name) const {
    try {
      return theory::parse_structure_kind(values_.at(name));
    } catch (const std::exception&) {
      throw DomainError(fmt::format("unknown structure '{}'", values_.at(name)));
    }
  }

 private:
  std::map<std::string, std::string> values_;
};

struct BoundOp {
  const char* name;
  std::vector<ParamSpec> params;
  std::function<double(const ParamRow&)> eval;
};

inline const std::vector<BoundOp>& bound_ops() {
  using K = ParamKind;
  using theory::StructureKind;
  static const std::vector<BoundOp> ops = {
      {"type1_line",
       {{"n", K::Real}, {"t", K::Real}, {"K", K::Real}, {"I_min", K::Count}, {"I_max", K::Count}},
       [](const ParamRow& p) {
         return theory::type1_bound_line(p.real("n"), p.real("t"), p.real("K"), p.count("I_min"),
                                         p.count("I_max"));
       }},
      {"type1_ring",
       {{"n", K::Real}, {"t", K::Real}, {"K", K::Real}, {"I_min", K::Count}, {"I_max", K::Count}},
       [](const ParamRow& p) {
         return theory::type1_bound_ring(p.real("n"), p.real("t"), p.real("K"), p.count("I_min"),
                                         p.count("I_max"));
       }},
      {"type1_disk",
       {{"n", K::Real}, {"t", K::Real}, {"K", K::Real}, {"D_min", K::Count}, {"D_max", K::Count}},
       [](const ParamRow& p) {
         return theory::type1_bound_disk(p.real("n"), p.real("t"), p.real("K"), p.count("D_min"),
                                         p.count("D_max"));
       }},
      {"type1_rect",
       {{"n", K::Real}, {"r", K::Count}, {"t", K::Real}, {"K", K::Real}, {"S_min", K::Count},
        {"S_max", K::Count}},
       [](const ParamRow& p) {
         return theory::type1_bound_rect(p.real("n"), p.count("r"), p.real("t"), p.real("K"),
                                         p.count("S_min"), p.count("S_max"));
       }},
      {"type2",
       {{"N", K::Real}, {"t", K::Real}, {"K", K::Real}, {"MMD2", K::Real}, {"size", K::Real}},
       [](const ParamRow& p) {
         return theory::type2_bound(p.real("N"), p.real("t"), p.real("K"), p.real("MMD2"), p.real("size"));
       }},
      {"min_size",
       {{"t", K::Real}, {"K", K::Real}, {"eta", K::Real}, {"n", K::Real}, {"structure", K::Structure},
        {"r", K::Count}},
       [](const ParamRow& p) {
         return theory::sufficient_min_size(p.real("t"), p.real("K"), p.real("eta"), p.real("n"),
                                            p.structure("structure"), p.count("r"));
       }},
      {"max_size_line",
       {{"t", K::Real}, {"K", K::Real}, {"eta", K::Real}, {"n", K::Real}, {"k", K::Count}},
       [](const ParamRow& p) {
         return theory::sufficient_max_size_line(p.real("t"), p.real("K"), p.real("eta"), p.real("n"),
                                                 p.count("k"));
       }},
      {"iterated_log",
       {{"n", K::Real}, {"k", K::Count}},
       [](const ParamRow& p) { return theory::iterated_log(p.real("n"), p.count("k")); }},
      {"threshold_known",
       {{"MMD2", K::Real}, {"delta", K::Real}},
       [](const ParamRow& p) { return theory::threshold_known(p.real("MMD2"), p.real("delta")); }},
      {"threshold_unknown",
       {{"n", K::Real}, {"c", K::Real}},
       [](const ParamRow& p) { return theory::threshold_unknown(p.real("n"), p.real("c")); }},
      {"overlap",
       {{"n", K::Count}, {"k", K::Count}, {"structure", K::Structure}, {"z", K::Count}},
       [](const ParamRow& p) {
         const auto dist = theory::overlap_distribution(p.count("n"), p.count("k"), p.structure("structure"));
         const std::size_t z = p.count("z");
         if (z >= dist.size()) throw DomainError("z must lie in [0, k]");
         return dist[z];
       }},
      {"exp_overlap",
       {{"n", K::Count}, {"k", K::Count}, {"mu", K::Real}, {"structure", K::Structure}},
       [](const ParamRow& p) {
         return theory::expected_exp_overlap(p.count("n"), p.count("k"), p.real("mu"),
                                             p.structure("structure"));
       }},
      {"bayes_lower",
       {{"n", K::Count}, {"k", K::Count}, {"mu", K::Real}, {"structure", K::Structure}},
       [](const ParamRow& p) {
         return theory::bayes_risk_lower_bound(p.count("n"), p.count("k"), p.real("mu"),
                                               p.structure("structure"));
       }},
  };
  return ops;
}

inline const BoundOp& find_bound_op(const std::string& name) {
  for (const auto& op : bound_ops()) {
    if (name == op.name) return op;
  }
  std::string known;
  for (const auto& op : bound_ops()) known += std::string(known.empty() ? "" : ", ") + op.name;
  throw ConfigError(fmt::format("unknown bound operation '{}' (known: {})", name, known));
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  for (auto part : detail::split(s, ',')) {
    if (part.empty()) throw ConfigError(fmt::format("empty value in list '{}'", s));
    out.emplace_back(part);
  }
  return out;
}

/// Parses repeated `name=v1,v2,...` assignments into the resolved bounds config
///   {"op": name, "params": {name: [values...]}}.
inline json bounds_config(const std::string& op_name, const std::vector<std::string>& sets) {
  const BoundOp& op = find_bound_op(op_name);
  json params = json::object();
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError(fmt::format("expected name=values, got '{}'", s));
    const std::string name = s.substr(0, eq);
    bool known = false;
    for (const auto& p : op.params) known = known || name == p.name;
    if (!known) throw ConfigError(fmt::format("operation {} has no parameter '{}'", op.name, name));
    params[name] = split_list(s.substr(eq + 1));
  }
  for (const auto& p : op.params) {
    if (!params.contains(p.name)) {
      // r defaults to 1 for the min_size operation
      if (std::string(op.name) == "min_size" && std::string(p.name) == "r") {
        params["r"] = std::vector<std::string>{"1"};
        continue;
      }
      throw ConfigError(fmt::format("operation {} needs --set {}=...", op.name, p.name));
    }
  }
  return {{"op", op.name}, {"params", params}};
}

/// One row per point of the cartesian product of parameter lists, last
/// parameter varying fastest. Domain errors are reported in the error column.
inline Outcome run_bounds(const json& config, std::ostream& /*log*/) {
  const BoundOp& op = find_bound_op(detail::get_required<std::string>(config, "op", "bounds"));
  const json& params = detail::get_required<json>(config, "params", "bounds");
  std::vector<std::vector<std::string>> lists;
  for (const auto& p : op.params) {
    if (!params.contains(p.name)) throw ConfigError(fmt::format("missing parameter '{}'", p.name));
    lists.push_back(params.at(p.name).get<std::vector<std::string>>());
    if (lists.back().empty()) throw ConfigError(fmt::format("parameter '{}' has no values", p.name));
  }
  std::string csv = csv_preamble("bounds", config);
  for (const auto& p : op.params) csv += std::string(p.name) + ",";
  csv += "value,error\n";

  std::vector<std::size_t> idx(lists.size(), 0);
  bool done = false;
  while (!done) {
    std::map<std::string, std::string> row;
    for (std::size_t i = 0; i < lists.size(); ++i) {
      row[op.params[i].name] = lists[i][idx[i]];
      csv += csv_field(lists[i][idx[i]]) + ",";
    }
    try {
      csv += format_double(op.eval(ParamRow(row))) + ",\n";
    } catch (const DomainError& e) {
      csv += "," + csv_field(e.what()) + "\n";
    }
    done = true;
    for (std::size_t d = lists.size(); d-- > 0;) {
      if (++idx[d] < lists[d].size()) {
        done = false;
        break;
      }
      idx[d] = 0;
    }
  }
  return {std::move(csv), std::nullopt, std::nullopt};
}

// ---------------------------------------------------------------- dispatch

inline Outcome run_command(const std::string& command, const json& config, std::ostream& log) {
  if (command == "detect") return run_detect(config, log);
  if (command == "risk") return run_risk(config, log);
  if (command == "compare") return run_compare(config, log);
  if (command == "bounds") return run_bounds(config, log);
  throw ConfigError("unknown command '" + command + "'");
}

/// Applies the global --seed/--trials overrides to an experiment document.
inline json apply_overrides(json config, std::optional<std::uint64_t> seed, std::optional<std::size_t> trials) {
  if (seed) config["seed"] = *seed;
  if (trials) config["trials"] = *trials;
  return config;
}

/// Normalizes an experiment document to its fully resolved form so that the
/// manifest records every default that was applied.
inline json resolve_experiment(const json& doc) {
  const ExperimentConfig cfg = config_from_json(doc);
  json resolved = config_to_json(cfg);
  resolved["grid"] = grid_to_json(grid_from_json(doc, cfg.bounds));
  return resolved;
}

}  // namespace geoscan::cli
