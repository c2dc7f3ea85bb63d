#pragma once

#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "geoscan/error.hpp"
#include "geoscan/mmd.hpp"

namespace geoscan {

// Shortest representation that parses back to the same double.
inline std::string format_double(double v) { return fmt::format("{}", v); }

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace detail

/// Reads a `node,value` CSV. Node indices are 0-based in the geometry's
/// canonical order; every node in [0, expected_nodes) must appear exactly once.
/// Errors carry the 1-based line number.
inline SampleField read_sample_csv(std::istream& in, std::size_t expected_nodes) {
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& msg) -> ConfigError {
    return ConfigError(fmt::format("line {}: {}", lineno, msg));
  };
  // Skip blank lines before the header.
  while (std::getline(in, line)) {
    ++lineno;
    if (!detail::trim(line).empty()) break;
  }
  if (lineno == 0 || detail::trim(line).empty()) throw ConfigError("line 1: empty sample file");
  {
    const auto cols = detail::split(line, ',');
    if (cols.size() != 2 || cols[0] != "node" || cols[1] != "value") {
      throw fail("expected header 'node,value'");
    }
  }
  std::vector<double> values(expected_nodes, 0.0);
  std::vector<char> seen(expected_nodes, 0);
  std::size_t count = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    const auto cols = detail::split(line, ',');
    if (cols.size() != 2) throw fail("expected 2 columns");
    std::size_t node = 0;
    double value = 0.0;
    try {
      std::size_t used = 0;
      const std::string node_s(cols[0]);
      if (node_s.empty() || node_s[0] == '-') throw std::invalid_argument("negative");
      node = std::stoull(node_s, &used);
      if (used != node_s.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw fail(fmt::format("invalid node index '{}'", cols[0]));
    }
    try {
      std::size_t used = 0;
      const std::string value_s(cols[1]);
      value = std::stod(value_s, &used);
      if (used != value_s.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw fail(fmt::format("invalid value '{}'", cols[1]));
    }
    if (!std::isfinite(value)) throw fail("value is not finite");
    ++count;
    if (node >= expected_nodes) {
      throw fail(fmt::format("node count mismatch: node {} outside geometry of {} nodes", node,
                             expected_nodes));
    }
    if (seen[node]) throw fail(fmt::format("duplicate node {}", node));
    seen[node] = 1;
    values[node] = value;
  }
  if (count != expected_nodes) {
    throw ConfigError(fmt::format("line {}: node count mismatch: file has {} nodes, geometry has {}",
                                  lineno, count, expected_nodes));
  }
  return SampleField{std::move(values)};
}

inline SampleField read_sample_file(const std::string& path, std::size_t expected_nodes) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open sample file '" + path + "'");
  return read_sample_csv(in, expected_nodes);
}

inline void write_sample_csv(std::ostream& out, const SampleField& field) {
  out << "node,value\n";
  for (std::size_t i = 0; i < field.size(); ++i) out << i << ',' << format_double(field.values[i]) << '\n';
}

}  // namespace geoscan
