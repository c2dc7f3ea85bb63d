#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <fmt/format.h>

#include "geoscan/error.hpp"
#include "geoscan/nodeset.hpp"
#include "geoscan/random.hpp"

namespace geoscan {

enum class GeometryKind { Line, Ring, Lattice2D, Lattice };

inline std::string_view to_string(GeometryKind kind) {
  switch (kind) {
    case GeometryKind::Line: return "line";
    case GeometryKind::Ring: return "ring";
    case GeometryKind::Lattice2D: return "lattice2d";
    case GeometryKind::Lattice: return "lattice";
  }
  return "unknown";
}

inline GeometryKind parse_geometry_kind(std::string_view name) {
  if (name == "line") return GeometryKind::Line;
  if (name == "ring") return GeometryKind::Ring;
  if (name == "lattice2d" || name == "disk") return GeometryKind::Lattice2D;
  if (name == "lattice" || name == "rect" || name == "rectangle") return GeometryKind::Lattice;
  throw ConfigError("unknown geometry kind '" + std::string(name) + "'");
}

/// Network shape. Node order: 0..n-1 for line and ring; row-major
/// (row * n + col) for the 2-D lattice; mixed-radix row-major with
/// dimension 0 most significant for the r-D lattice.
class Geometry {
 public:
  static Geometry line(std::size_t n) { return Geometry(GeometryKind::Line, n, 1); }
  static Geometry ring(std::size_t n) { return Geometry(GeometryKind::Ring, n, 1); }
  static Geometry lattice2d(std::size_t n) { return Geometry(GeometryKind::Lattice2D, n, 2); }
  static Geometry lattice(std::size_t n, std::size_t r) { return Geometry(GeometryKind::Lattice, n, r); }

  GeometryKind kind() const { return kind_; }
  std::size_t n() const { return n_; }
  std::size_t dims() const { return r_; }
  std::size_t node_count() const { return node_count_; }

  friend bool operator==(const Geometry&, const Geometry&) = default;

 private:
  Geometry(GeometryKind kind, std::size_t n, std::size_t r) : kind_(kind), n_(n), r_(r) {
    if (n < 2) throw ConfigError("geometry needs n >= 2");
    if (r < 1) throw ConfigError("lattice dimension r must be >= 1");
    node_count_ = 1;
    for (std::size_t d = 0; d < r; ++d) {
      if (node_count_ > (std::size_t{1} << 40) / n) throw ConfigError("lattice has too many nodes");
      node_count_ *= n;
    }
  }

  GeometryKind kind_;
  std::size_t n_;
  std::size_t r_;
  std::size_t node_count_ = 0;
};

/// Inclusive size range of candidate structures.
struct SizeBounds {
  std::size_t min_size = 1;
  std::size_t max_size = 1;
  friend bool operator==(const SizeBounds&, const SizeBounds&) = default;
};

inline void validate_bounds(const Geometry& geom, const SizeBounds& bounds) {
  if (bounds.min_size < 1) throw ConfigError("min_size must be >= 1");
  if (bounds.min_size > bounds.max_size) throw ConfigError("min_size must not exceed max_size");
  if (bounds.max_size + 1 > geom.node_count()) {
    throw ConfigError(fmt::format("max_size {} exceeds node_count - 1 = {}", bounds.max_size,
                                  geom.node_count() - 1));
  }
}

struct Interval {
  std::size_t start = 0;
  std::size_t length = 0;
  friend bool operator==(const Interval&, const Interval&) = default;
};

struct LineInterval {
  std::size_t start = 0;
  std::size_t length = 0;
  friend bool operator==(const LineInterval&, const LineInterval&) = default;
};

struct RingInterval {
  std::size_t start = 0;
  std::size_t length = 0;
  friend bool operator==(const RingInterval&, const RingInterval&) = default;
};

// Lattice points at Euclidean distance <= radius from (row, col).
struct Disk {
  std::size_t row = 0;
  std::size_t col = 0;
  std::size_t radius = 0;
  friend bool operator==(const Disk&, const Disk&) = default;
};

// Product of one interval per lattice dimension.
struct Rectangle {
  std::vector<Interval> sides;
  friend bool operator==(const Rectangle&, const Rectangle&) = default;
};

using Descriptor = std::variant<LineInterval, RingInterval, Disk, Rectangle>;

struct Candidate {
  Descriptor descriptor;
  std::size_t size = 0;
  friend bool operator==(const Candidate&, const Candidate&) = default;
};

inline std::string describe(const Candidate& c) {
  return std::visit(
      [](const auto& d) -> std::string {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, LineInterval>) {
          return fmt::format("interval(start={},length={})", d.start, d.length);
        } else if constexpr (std::is_same_v<T, RingInterval>) {
          return fmt::format("ring_interval(start={},length={})", d.start, d.length);
        } else if constexpr (std::is_same_v<T, Disk>) {
          return fmt::format("disk(row={},col={},radius={})", d.row, d.col, d.radius);
        } else {
          std::string s = "rect(";
          for (std::size_t i = 0; i < d.sides.size(); ++i) {
            if (i) s += 'x';
            s += fmt::format("[{},{}]", d.sides[i].start, d.sides[i].start + d.sides[i].length - 1);
          }
          return s + ")";
        }
      },
      c.descriptor);
}

// Number of lattice points (i, j) with i^2 + j^2 <= radius^2.
inline std::size_t disk_size(std::size_t radius) {
  const auto r = static_cast<std::int64_t>(radius);
  std::size_t count = 0;
  for (std::int64_t i = -r; i <= r; ++i) {
    for (std::int64_t j = -r; j <= r; ++j) {
      if (i * i + j * j <= r * r) ++count;
    }
  }
  return count;
}

namespace detail {

// Largest w >= 0 with w^2 <= v.
inline std::size_t isqrt(std::size_t v) {
  auto w = static_cast<std::size_t>(std::sqrt(static_cast<double>(v)));
  while (w * w > v) --w;
  while ((w + 1) * (w + 1) <= v) ++w;
  return w;
}

}  // namespace detail

/// Appends the candidate's nodes as sorted, disjoint runs.
inline void append_runs(const Candidate& c, const Geometry& geom, std::vector<Run>& runs) {
  const std::size_t n = geom.n();
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, LineInterval>) {
          runs.push_back({d.start, d.start + d.length});
        } else if constexpr (std::is_same_v<T, RingInterval>) {
          const std::size_t end = d.start + d.length;
          if (end <= n) {
            runs.push_back({d.start, end});
          } else {
            runs.push_back({0, end - n});
            runs.push_back({d.start, n});
          }
        } else if constexpr (std::is_same_v<T, Disk>) {
          const std::size_t rr = d.radius * d.radius;
          for (std::size_t i = d.row - d.radius; i <= d.row + d.radius; ++i) {
            const std::size_t di = i > d.row ? i - d.row : d.row - i;
            const std::size_t w = detail::isqrt(rr - di * di);
            runs.push_back({i * n + d.col - w, i * n + d.col + w + 1});
          }
        } else {
          // Odometer over all but the last dimension; each step is one run.
          const std::size_t r = d.sides.size();
          std::vector<std::size_t> offset(r, 0);
          while (true) {
            std::size_t base = 0;
            for (std::size_t k = 0; k + 1 < r; ++k) base = (base + d.sides[k].start + offset[k]) * n;
            base += d.sides[r - 1].start;
            runs.push_back({base, base + d.sides[r - 1].length});
            std::size_t k = r - 1;
            while (k > 0) {
              --k;
              if (++offset[k] < d.sides[k].length) break;
              offset[k] = 0;
              if (k == 0) return;
            }
            if (r == 1) return;
          }
        }
      },
      c.descriptor);
}

/// Node set of a candidate: contiguous range (line), modular range (ring),
/// sorted index list (disk, rectangle).
inline NodeSet candidate_nodes(const Candidate& c, const Geometry& geom) {
  if (const auto* li = std::get_if<LineInterval>(&c.descriptor)) {
    return ContiguousRange{li->start, li->length};
  }
  if (const auto* ri = std::get_if<RingInterval>(&c.descriptor)) {
    return ModularRange{ri->start, ri->length, geom.n()};
  }
  std::vector<Run> runs;
  append_runs(c, geom, runs);
  IndexList list;
  list.indices.reserve(c.size);
  for (const Run& r : runs) {
    for (std::size_t i = r.begin; i < r.end; ++i) list.indices.push_back(i);
  }
  return list;
}

/// The enumerable family of candidates for a geometry and size bounds.
///
/// Candidates are grouped by size (then by shape for rectangles); within a
/// group, positions run lexicographically over start/center coordinates.
/// `at(i)` gives random access in that order, so counting and sampling never
/// materialize the family.
///
/// Line: every interval of length k in bounds, n-k+1 starts each.
/// Ring: every modular interval of length k in bounds, n starts each.
/// 2-D lattice: disks with integer radius fully inside the lattice.
/// r-D lattice: all products of r intervals with node count in bounds.
class CandidateFamily {
 public:
  CandidateFamily(const Geometry& geom, const SizeBounds& bounds) : geom_(geom), bounds_(bounds) {
    validate_bounds(geom, bounds);
    const std::size_t n = geom.n();
    switch (geom.kind()) {
      case GeometryKind::Line:
        for (std::size_t k = bounds.min_size; k <= bounds.max_size; ++k) {
          add_group({k, k, n - k + 1, {}});
        }
        break;
      case GeometryKind::Ring:
        for (std::size_t k = bounds.min_size; k <= bounds.max_size; ++k) add_group({k, k, n, {}});
        break;
      case GeometryKind::Lattice2D:
        for (std::size_t rho = 0; 2 * rho + 1 <= n; ++rho) {
          const std::size_t size = disk_size(rho);
          if (size > bounds.max_size) break;
          if (size >= bounds.min_size) {
            const std::size_t side = n - 2 * rho;
            add_group({size, rho, side * side, {}});
          }
        }
        break;
      case GeometryKind::Lattice: {
        std::vector<Group> shapes;
        std::vector<std::size_t> lengths;
        collect_shapes(lengths, 1, shapes);
        std::stable_sort(shapes.begin(), shapes.end(), [](const Group& a, const Group& b) {
          return a.size != b.size ? a.size < b.size : a.lengths < b.lengths;
        });
        for (auto& g : shapes) add_group(std::move(g));
        break;
      }
    }
  }

  const Geometry& geometry() const { return geom_; }
  const SizeBounds& bounds() const { return bounds_; }
  std::uint64_t count() const { return total_; }

  Candidate at(std::uint64_t index) const {
    if (index >= total_) throw ConfigError("candidate index out of range");
    const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), index);
    const std::size_t g = static_cast<std::size_t>(it - offsets_.begin()) - 1;
    return make(groups_[g], index - offsets_[g]);
  }

  template <class F>
  void for_each(F&& fn) const {
    for (const Group& g : groups_) {
      for (std::uint64_t pos = 0; pos < g.count; ++pos) fn(make(g, pos));
    }
  }

 private:
  struct Group {
    std::size_t size;
    std::size_t param;  // interval length or disk radius
    std::uint64_t count;
    std::vector<std::size_t> lengths;  // rectangles only
  };

  void add_group(Group g) {
    if (g.count == 0) return;
    offsets_.push_back(total_);
    total_ += g.count;
    groups_.push_back(std::move(g));
  }

  void collect_shapes(std::vector<std::size_t>& lengths, std::size_t product,
                      std::vector<Group>& out) const {
    const std::size_t n = geom_.n();
    if (lengths.size() == geom_.dims()) {
      if (product < bounds_.min_size) return;
      std::uint64_t count = 1;
      for (std::size_t l : lengths) count *= (n - l + 1);
      out.push_back({product, 0, count, lengths});
      return;
    }
    for (std::size_t l = 1; l <= n; ++l) {
      if (product * l > bounds_.max_size) break;
      lengths.push_back(l);
      collect_shapes(lengths, product * l, out);
      lengths.pop_back();
    }
  }

  Candidate make(const Group& g, std::uint64_t pos) const {
    const std::size_t n = geom_.n();
    switch (geom_.kind()) {
      case GeometryKind::Line:
        return {LineInterval{static_cast<std::size_t>(pos), g.param}, g.size};
      case GeometryKind::Ring:
        return {RingInterval{static_cast<std::size_t>(pos), g.param}, g.size};
      case GeometryKind::Lattice2D: {
        const std::size_t side = n - 2 * g.param;
        return {Disk{g.param + static_cast<std::size_t>(pos / side),
                     g.param + static_cast<std::size_t>(pos % side), g.param},
                g.size};
      }
      case GeometryKind::Lattice: {
        Rectangle rect;
        rect.sides.resize(g.lengths.size());
        for (std::size_t d = g.lengths.size(); d-- > 0;) {
          const std::size_t starts = n - g.lengths[d] + 1;
          rect.sides[d] = {static_cast<std::size_t>(pos % starts), g.lengths[d]};
          pos /= starts;
        }
        return {std::move(rect), g.size};
      }
    }
    throw ConfigError("unknown geometry");
  }

  Geometry geom_;
  SizeBounds bounds_;
  std::vector<Group> groups_;
  std::vector<std::uint64_t> offsets_;
  std::uint64_t total_ = 0;
};

inline std::vector<Candidate> enumerate_candidates(const Geometry& geom, const SizeBounds& bounds) {
  const CandidateFamily family(geom, bounds);
  std::vector<Candidate> out;
  out.reserve(static_cast<std::size_t>(family.count()));
  family.for_each([&](Candidate c) { out.push_back(std::move(c)); });
  return out;
}

inline std::uint64_t count_candidates(const Geometry& geom, const SizeBounds& bounds) {
  return CandidateFamily(geom, bounds).count();
}

/// `count` candidates drawn uniformly (with replacement) from the family.
/// Sampled mode for families too large to scan exhaustively.
inline std::vector<Candidate> sample_candidates(const Geometry& geom, const SizeBounds& bounds,
                                                std::size_t count, std::uint64_t seed) {
  const CandidateFamily family(geom, bounds);
  if (family.count() == 0) throw ConfigError("candidate family is empty");
  CounterRng rng(seed, {0x73616d70ULL});
  std::vector<Candidate> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(family.at(rng.below(family.count())));
  return out;
}

}  // namespace geoscan
