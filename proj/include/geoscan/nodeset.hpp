#pragma once

#include <algorithm>
#include <cstddef>
#include <variant>
#include <vector>

#include "geoscan/error.hpp"

namespace geoscan {

// Nodes [begin, begin + length).
struct ContiguousRange {
  std::size_t begin = 0;
  std::size_t length = 0;
  friend bool operator==(const ContiguousRange&, const ContiguousRange&) = default;
};

// Nodes start, start+1, ..., start+length-1, all taken mod `modulus`.
struct ModularRange {
  std::size_t start = 0;
  std::size_t length = 0;
  std::size_t modulus = 0;
  friend bool operator==(const ModularRange&, const ModularRange&) = default;
};

// Sorted, duplicate-free node indices.
struct IndexList {
  std::vector<std::size_t> indices;
  friend bool operator==(const IndexList&, const IndexList&) = default;
};

using NodeSet = std::variant<ContiguousRange, ModularRange, IndexList>;

// Half-open run [begin, end) of consecutive node indices.
struct Run {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
};

inline std::size_t node_count(const NodeSet& set) {
  return std::visit(
      [](const auto& s) -> std::size_t {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, IndexList>) {
          return s.indices.size();
        } else {
          return s.length;
        }
      },
      set);
}

inline std::vector<std::size_t> expand(const NodeSet& set) {
  std::vector<std::size_t> out;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ContiguousRange>) {
          for (std::size_t i = 0; i < s.length; ++i) out.push_back(s.begin + i);
        } else if constexpr (std::is_same_v<T, ModularRange>) {
          for (std::size_t i = 0; i < s.length; ++i) out.push_back((s.start + i) % s.modulus);
          std::sort(out.begin(), out.end());
        } else {
          out = s.indices;
        }
      },
      set);
  return out;
}

// Complement of `set` within [0, total), sorted.
inline std::vector<std::size_t> complement(const NodeSet& set, std::size_t total) {
  std::vector<bool> inside(total, false);
  for (auto i : expand(set)) inside.at(i) = true;
  std::vector<std::size_t> out;
  out.reserve(total);
  for (std::size_t i = 0; i < total; ++i) {
    if (!inside[i]) out.push_back(i);
  }
  return out;
}

// Coalesces the node set into maximal runs. `total` is the node count of the
// network; ranges must lie inside it.
inline void to_runs(const NodeSet& set, std::size_t total, std::vector<Run>& runs) {
  runs.clear();
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ContiguousRange>) {
          if (s.begin + s.length > total) throw ConfigError("contiguous range exceeds node count");
          if (s.length > 0) runs.push_back({s.begin, s.begin + s.length});
        } else if constexpr (std::is_same_v<T, ModularRange>) {
          if (s.modulus != total || s.start >= total || s.length > total) {
            throw ConfigError("modular range inconsistent with node count");
          }
          const std::size_t end = s.start + s.length;
          if (end <= total) {
            if (s.length > 0) runs.push_back({s.start, end});
          } else {
            // Wrapped: [0, end - total) then [start, total), kept sorted.
            runs.push_back({0, end - total});
            runs.push_back({s.start, total});
          }
        } else {
          for (std::size_t i = 0; i < s.indices.size(); ++i) {
            const std::size_t v = s.indices[i];
            if (v >= total) throw ConfigError("node index exceeds node count");
            if (!runs.empty() && runs.back().end == v) {
              ++runs.back().end;
            } else {
              if (!runs.empty() && v < runs.back().end) {
                throw ConfigError("index list must be sorted and duplicate-free");
              }
              runs.push_back({v, v + 1});
            }
          }
        }
      },
      set);
}

}  // namespace geoscan
