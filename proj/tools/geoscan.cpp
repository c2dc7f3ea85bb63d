#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitResource = 3;
constexpr int kExitInternal = 4;

struct DetectFlags {
  std::string samples;
  std::string geometry = "line";
  std::size_t n = 0;
  std::size_t r = 2;
  std::optional<std::size_t> min_size;
  std::optional<std::size_t> max_size;
  std::string kernel = "gaussian";
  double bandwidth = 1.0;
  double bound = 1.0;
  std::optional<double> threshold;
  bool skip_degenerate = false;
};

geoscan::json detect_config(const DetectFlags& f) {
  using namespace geoscan;
  json geom = {{"kind", f.geometry}, {"n", f.n}, {"r", f.r}};
  const Geometry g = geometry_from_json(geom);
  geom = geometry_to_json(g, {f.min_size.value_or(2), f.max_size.value_or(g.node_count() - 2)});
  KernelSpec k;
  k.family = parse_kernel_family(f.kernel);
  k.bandwidth = f.bandwidth;
  k.bound = f.bound;
  k.validate();
  if (!f.threshold) throw ConfigError("--threshold is required");
  return {{"samples", f.samples},
          {"geometry", geom},
          {"kernel", kernel_to_json(k)},
          {"threshold", *f.threshold},
          {"skip_degenerate", f.skip_degenerate}};
}

}  // namespace

int main(int argc, char** argv) {
  using namespace geoscan;

  CLI::App app{"Kernel MMD scan detection of anomalous geometric structures"};
  app.set_version_flag("--version", std::string(cli::kToolVersion));
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::string out;
  std::string svg_out;
  app.add_option("--seed", seed, "Override the experiment seed");
  app.add_option("--trials", trials, "Override the Monte-Carlo trial count");
  app.add_option("--out", out, "Primary output file (CSV, or JSON report for detect); stdout if omitted");
  app.add_option("--svg", svg_out, "Heatmap output file (risk)");

  DetectFlags df;
  auto* detect = app.add_subcommand("detect", "Run the scan test on a node,value sample file");
  detect->add_option("--samples", df.samples, "CSV file with header node,value")->required();
  detect->add_option("--geometry", df.geometry, "line | ring | lattice2d | lattice");
  detect->add_option("--n", df.n, "Side length (nodes per dimension)")->required();
  detect->add_option("--r", df.r, "Lattice dimension (lattice only)");
  detect->add_option("--min-size", df.min_size, "Smallest candidate node count (default 2)");
  detect->add_option("--max-size", df.max_size, "Largest candidate node count (default N-2)");
  detect->add_option("--kernel", df.kernel, "gaussian | laplacian | constant");
  detect->add_option("--bandwidth", df.bandwidth, "Kernel bandwidth");
  detect->add_option("--bound", df.bound, "Value of the constant kernel");
  detect->add_option("--threshold", df.threshold, "Decision threshold t");
  detect->add_flag("--skip-degenerate", df.skip_degenerate,
                   "Skip candidates leaving fewer than two nodes on either side");

  std::string risk_config;
  auto* risk = app.add_subcommand("risk", "Monte-Carlo minimax risk over a (min_size, max_size) grid");
  risk->add_option("config", risk_config, "Experiment config (JSON)")->required();

  std::string compare_config;
  auto* compare = app.add_subcommand("compare", "MMD scan against t-test and Smirnov scans");
  compare->add_option("config", compare_config, "Experiment config (JSON)")->required();

  std::string op;
  std::vector<std::string> sets;
  auto* bounds = app.add_subcommand("bounds", "Tabulate error bounds over parameter grids");
  bounds->add_option("--op", op, "Operation name")->required();
  bounds->add_option("--set", sets, "name=v1,v2,... (repeatable)");

  std::string manifest_file;
  auto* replay = app.add_subcommand("replay", "Re-run a command from its manifest");
  replay->add_option("manifest", manifest_file, "Manifest JSON written by an earlier run")->required();

  for (auto* sub : {detect, risk, compare, bounds, replay}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    std::string command;
    json config;
    cli::OutputPaths paths{out, svg_out};
    if (detect->parsed()) {
      command = "detect";
      config = detect_config(df);
    } else if (risk->parsed() || compare->parsed()) {
      command = risk->parsed() ? "risk" : "compare";
      const json doc = cli::read_json_file(risk->parsed() ? risk_config : compare_config);
      config = cli::resolve_experiment(cli::apply_overrides(doc, seed, trials));
    } else if (bounds->parsed()) {
      command = "bounds";
      config = cli::bounds_config(op, sets);
    } else {
      const json manifest = cli::read_json_file(manifest_file);
      command = detail::get_required<std::string>(manifest, "command", "manifest");
      config = detail::get_required<json>(manifest, "config", "manifest");
      const json outputs = detail::get_optional<json>(manifest, "outputs", json::object(), "manifest");
      if (paths.primary.empty()) paths.primary = outputs.value("primary", "");
      if (paths.svg.empty()) paths.svg = outputs.value("svg", "");
    }
    const std::string started = cli::utc_now();
    // detect reports on stdout; the other commands log progress to stderr
    const bool is_detect = command == "detect";
    const cli::Outcome outcome = cli::run_command(command, config, is_detect ? std::cout : std::cerr);
    cli::emit(command, config, paths, outcome, started, !is_detect);
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const json::exception& e) {
    std::cerr << "error: malformed configuration: " << e.what() << '\n';
    return kExitInput;
  } catch (const ResourceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitResource;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}
