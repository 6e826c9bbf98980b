// Copyright 2026 The graphfeyn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "graphfeyn/errors.hpp"

namespace graphfeyn {

/// Dense vertex index. Vertex ids are strings at the I/O boundary only.
using Vertex = std::size_t;

struct EdgeSpec {
  Vertex u;
  Vertex w;
  double b;
};

struct Neighbor {
  Vertex to;
  double b;
};

/// Finite weighted graph (X, b, m).
///
/// Vertices keep the order they were given in; all matrices and kernels use
/// that order. Edges are stored once per unordered pair. Self-loops and
/// non-positive values are kept as given so that `validate` can report them;
/// they never enter the adjacency used by operators and samplers.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  WeightedGraph(std::vector<std::string> ids, std::vector<double> measure,
                std::vector<EdgeSpec> edges)
      : ids_(std::move(ids)), measure_(std::move(measure)), edges_(std::move(edges)) {
    if (ids_.size() != measure_.size()) {
      throw InputError("vertex id list and measure list differ in length");
    }
    index_.reserve(ids_.size());
    for (Vertex x = 0; x < ids_.size(); ++x) {
      if (!index_.emplace(ids_[x], x).second) {
        throw InputError("duplicate vertex id '" + ids_[x] + "'");
      }
    }
    adjacency_.resize(ids_.size());
    std::map<std::pair<Vertex, Vertex>, bool> seen;
    for (const auto& e : edges_) {
      if (e.u >= ids_.size() || e.w >= ids_.size()) {
        throw InputError("edge endpoint out of range");
      }
      const auto key = std::minmax(e.u, e.w);
      if (!seen.emplace(key, true).second) {
        throw InputError("edge {" + ids_[e.u] + "," + ids_[e.w] + "} given more than once");
      }
      if (e.u == e.w || !(e.b > 0.0) || !std::isfinite(e.b)) continue;
      adjacency_[e.u].push_back({e.w, e.b});
      adjacency_[e.w].push_back({e.u, e.b});
    }
    for (auto& row : adjacency_) {
      std::sort(row.begin(), row.end(),
                [](const Neighbor& a, const Neighbor& c) { return a.to < c.to; });
    }
  }

  std::size_t size() const noexcept { return ids_.size(); }
  const std::string& id(Vertex x) const { return ids_.at(x); }
  const std::vector<std::string>& ids() const noexcept { return ids_; }

  Vertex index_of(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw InputError("unknown vertex id '" + id + "'");
    return it->second;
  }
  std::optional<Vertex> find(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  double measure(Vertex x) const { return measure_.at(x); }
  std::span<const double> measures() const noexcept { return measure_; }

  /// b(x, y); symmetric, zero on the diagonal and for non-adjacent pairs.
  double weight(Vertex x, Vertex y) const {
    if (x == y) return 0.0;
    const auto& row = adjacency_.at(x);
    auto it = std::lower_bound(row.begin(), row.end(), y,
                               [](const Neighbor& n, Vertex v) { return n.to < v; });
    return (it != row.end() && it->to == y) ? it->b : 0.0;
  }

  std::span<const Neighbor> neighbors(Vertex x) const { return adjacency_.at(x); }
  std::span<const EdgeSpec> edges() const noexcept { return edges_; }

  void check_vertex(Vertex x) const {
    if (x >= ids_.size()) throw InputError("vertex index " + std::to_string(x) + " out of range");
  }

 private:
  std::vector<std::string> ids_;
  std::vector<double> measure_;
  std::vector<EdgeSpec> edges_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::unordered_map<std::string, Vertex> index_;
};

/// Antisymmetric magnetic potential theta on ordered edges.
///
/// One orientation is stored per unordered pair; the accessor negates for the
/// other one. Conflicting assignments of both orientations are kept as
/// breaches for `validate`, the first assignment wins.
class MagneticPotential {
 public:
  struct Breach {
    Vertex x;
    Vertex y;
    double forward;
    double backward;
  };

  void set(Vertex x, Vertex y, double value) {
    const auto key = std::minmax(x, y);
    const double oriented = (x <= y) ? value : -value;
    auto [it, inserted] = values_.emplace(key, oriented);
    if (!inserted && it->second != oriented) {
      breaches_.push_back({x, y, value, (x <= y) ? it->second : -it->second});
    }
  }

  double operator()(Vertex x, Vertex y) const {
    if (x == y) return 0.0;
    auto it = values_.find(std::minmax(x, y));
    if (it == values_.end()) return 0.0;
    return (x < y) ? it->second : -it->second;
  }

  bool empty() const noexcept { return values_.empty(); }
  /// Stored entries as ((x, y), theta(x, y)) with x <= y.
  const std::map<std::pair<Vertex, Vertex>, double>& entries() const noexcept { return values_; }
  const std::vector<Breach>& breaches() const noexcept { return breaches_; }

 private:
  std::map<std::pair<Vertex, Vertex>, double> values_;
  std::vector<Breach> breaches_;
};

/// Real electric potential v on vertices. Entries may be missing until validated.
class ElectricPotential {
 public:
  ElectricPotential() = default;
  explicit ElectricPotential(std::vector<std::optional<double>> values) : values_(std::move(values)) {}

  static ElectricPotential zeros(std::size_t n) {
    return ElectricPotential(std::vector<std::optional<double>>(n, 0.0));
  }
  static ElectricPotential from(std::span<const double> values) {
    return ElectricPotential(std::vector<std::optional<double>>(values.begin(), values.end()));
  }

  std::size_t size() const noexcept { return values_.size(); }
  bool has(Vertex x) const { return x < values_.size() && values_[x].has_value(); }

  double operator()(Vertex x) const {
    if (!has(x)) throw InputError("electric potential missing at vertex " + std::to_string(x));
    return *values_[x];
  }
  void set(Vertex x, double value) {
    if (x >= values_.size()) values_.resize(x + 1);
    values_[x] = value;
  }

 private:
  std::vector<std::optional<double>> values_;
};

/// A weighted graph together with its magnetic and electric potentials.
struct Instance {
  WeightedGraph graph;
  MagneticPotential theta;
  ElectricPotential v;
};

/// Weighted degree deg(x) = (1/m(x)) * sum_y b(x, y).
inline double degree(const WeightedGraph& g, Vertex x) {
  g.check_vertex(x);
  double sum = 0.0;
  for (const auto& n : g.neighbors(x)) sum += n.b;
  return sum / g.measure(x);
}

inline std::vector<double> degrees(const WeightedGraph& g) {
  std::vector<double> out(g.size());
  for (Vertex x = 0; x < g.size(); ++x) out[x] = degree(g, x);
  return out;
}

// ---------------------------------------------------------------------------
// Validation

enum class ViolationKind {
  nonpositive_measure,
  nonfinite_value,
  self_loop,
  nonpositive_weight,
  theta_on_non_edge,
  theta_antisymmetry,
  missing_potential,
};

struct Violation {
  ViolationKind kind;
  std::string message;
};

inline const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::nonpositive_measure: return "nonpositive measure";
    case ViolationKind::nonfinite_value: return "nonfinite value";
    case ViolationKind::self_loop: return "self-loop";
    case ViolationKind::nonpositive_weight: return "nonpositive edge weight";
    case ViolationKind::theta_on_non_edge: return "theta on non-edge";
    case ViolationKind::theta_antisymmetry: return "theta antisymmetry breach";
    case ViolationKind::missing_potential: return "v missing on a vertex";
  }
  return "unknown";
}

/// Report-style check of every standing hypothesis on a finite instance.
/// An empty result means the instance is valid.
inline std::vector<Violation> validate(const WeightedGraph& g, const MagneticPotential& theta,
                                       const ElectricPotential& v) {
  std::vector<Violation> out;
  auto add = [&](ViolationKind k, const std::string& where) {
    out.push_back({k, std::string(to_string(k)) + " " + where});
  };
  for (Vertex x = 0; x < g.size(); ++x) {
    const double m = g.measure(x);
    if (!std::isfinite(m)) {
      add(ViolationKind::nonfinite_value, "m(" + g.id(x) + ")");
    } else if (m <= 0.0) {
      add(ViolationKind::nonpositive_measure, "m(" + g.id(x) + ")");
    }
    if (!v.has(x)) {
      add(ViolationKind::missing_potential, "at " + g.id(x));
    } else if (!std::isfinite(v(x))) {
      add(ViolationKind::nonfinite_value, "v(" + g.id(x) + ")");
    }
  }
  for (const auto& e : g.edges()) {
    const std::string pair = "(" + g.id(e.u) + "," + g.id(e.w) + ")";
    if (e.u == e.w) add(ViolationKind::self_loop, "at " + g.id(e.u));
    if (!std::isfinite(e.b)) {
      add(ViolationKind::nonfinite_value, "b" + pair);
    } else if (e.b <= 0.0) {
      add(ViolationKind::nonpositive_weight, "b" + pair);
    }
  }
  for (const auto& [key, value] : theta.entries()) {
    const auto [x, y] = key;
    const bool known = x < g.size() && y < g.size();
    const std::string pair = known ? "(" + g.id(x) + "," + g.id(y) + ")"
                                   : "(" + std::to_string(x) + "," + std::to_string(y) + ")";
    if (!known || g.weight(x, y) <= 0.0) add(ViolationKind::theta_on_non_edge, pair);
    if (!std::isfinite(value)) add(ViolationKind::nonfinite_value, "theta" + pair);
  }
  for (const auto& b : theta.breaches()) {
    const bool known = b.x < g.size() && b.y < g.size();
    const std::string pair = known ? "(" + g.id(b.x) + "," + g.id(b.y) + ")" : "(?)";
    add(ViolationKind::theta_antisymmetry, pair);
  }
  return out;
}

inline std::vector<Violation> validate(const Instance& inst) {
  return validate(inst.graph, inst.theta, inst.v);
}

inline void require_valid(const Instance& inst) {
  const auto report = validate(inst);
  if (report.empty()) return;
  std::string msg = "invalid instance:";
  for (const auto& v : report) msg += "\n  " + v.message;
  throw InputError(msg);
}

// ---------------------------------------------------------------------------
// Vertex sets and Dirichlet restriction

/// Sorted set of ambient vertex indices.
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(std::vector<Vertex> members) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  }

  static VertexSet all(std::size_t n) {
    std::vector<Vertex> m(n);
    for (Vertex x = 0; x < n; ++x) m[x] = x;
    return VertexSet(std::move(m));
  }

  bool contains(Vertex x) const { return std::binary_search(members_.begin(), members_.end(), x); }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  std::span<const Vertex> members() const noexcept { return members_; }
  auto begin() const noexcept { return members_.begin(); }
  auto end() const noexcept { return members_.end(); }

  /// Position of x inside the set, or nullopt.
  std::optional<std::size_t> position(Vertex x) const {
    auto it = std::lower_bound(members_.begin(), members_.end(), x);
    if (it == members_.end() || *it != x) return std::nullopt;
    return static_cast<std::size_t>(it - members_.begin());
  }

  bool subset_of(const VertexSet& other) const {
    return std::includes(other.members_.begin(), other.members_.end(), members_.begin(),
                         members_.end());
  }

  void check_within(std::size_t ambient_size) const {
    if (!members_.empty() && members_.back() >= ambient_size) {
      throw InputError("vertex set contains a vertex outside the ambient graph");
    }
  }

  friend bool operator==(const VertexSet&, const VertexSet&) = default;

 private:
  std::vector<Vertex> members_;
};

/// Operator data for the Dirichlet restriction to W.
///
/// `local` holds the induced instance on W (only edges with both endpoints in
/// W). The diagonal of the restricted operator keeps the ambient degree, which
/// is stored alongside since it can no longer be recovered from `local`.
struct Restriction {
  VertexSet ambient;                  // W, as indices of the ambient graph
  Instance local;                     // induced data, vertex i <-> ambient.members()[i]
  std::vector<double> ambient_degree;  // deg_X(x) for x in W
};

inline Restriction restrict_to(const Instance& inst, const VertexSet& w) {
  if (w.empty()) throw InputError("restriction to an empty vertex set");
  w.check_within(inst.graph.size());
  const auto& g = inst.graph;

  std::vector<std::string> ids;
  std::vector<double> measure;
  std::vector<double> deg;
  std::vector<std::optional<double>> v;
  for (Vertex x : w) {
    ids.push_back(g.id(x));
    measure.push_back(g.measure(x));
    deg.push_back(degree(g, x));
    v.push_back(inst.v.has(x) ? std::optional<double>(inst.v(x)) : std::nullopt);
  }

  std::vector<EdgeSpec> edges;
  MagneticPotential theta;
  for (const auto& e : g.edges()) {
    if (e.u == e.w) continue;
    auto pu = w.position(e.u);
    auto pw = w.position(e.w);
    if (!pu || !pw) continue;
    edges.push_back({*pu, *pw, e.b});
  }
  for (const auto& [key, value] : inst.theta.entries()) {
    auto px = w.position(key.first);
    auto py = w.position(key.second);
    if (px && py) theta.set(*px, *py, value);
  }
  return Restriction{w, Instance{WeightedGraph(std::move(ids), std::move(measure), std::move(edges)),
                                 std::move(theta), ElectricPotential(std::move(v))},
                     std::move(deg)};
}

/// Restrict an existing restriction further; `w` is given in ambient indices
/// and must be a subset of `r.ambient`. Ambient degrees are carried over.
inline Restriction restrict_to(const Restriction& r, const VertexSet& w) {
  if (w.empty()) throw InputError("restriction to an empty vertex set");
  if (!w.subset_of(r.ambient)) throw InputError("vertex set is not inside the restriction");
  std::vector<Vertex> local;
  for (Vertex x : w) local.push_back(*r.ambient.position(x));
  Restriction out = restrict_to(r.local, VertexSet(std::move(local)));
  out.ambient = w;
  std::vector<double> deg;
  for (Vertex x : w) deg.push_back(r.ambient_degree[*r.ambient.position(x)]);
  out.ambient_degree = std::move(deg);
  return out;
}

// ---------------------------------------------------------------------------
// Combinatorial balls

/// Hop distances from `center`; unreachable vertices get SIZE_MAX.
inline std::vector<std::size_t> hop_distances(const WeightedGraph& g, Vertex center) {
  g.check_vertex(center);
  constexpr auto unreached = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dist(g.size(), unreached);
  std::deque<Vertex> queue{center};
  dist[center] = 0;
  while (!queue.empty()) {
    const Vertex x = queue.front();
    queue.pop_front();
    for (const auto& n : g.neighbors(x)) {
      if (n.b > 0.0 && dist[n.to] == unreached) {
        dist[n.to] = dist[x] + 1;
        queue.push_back(n.to);
      }
    }
  }
  return dist;
}

/// Balls B(center, r) for strictly increasing radii.
inline std::vector<VertexSet> ball_exhaustion(const WeightedGraph& g, Vertex center,
                                              std::span<const std::size_t> radii) {
  for (std::size_t i = 1; i < radii.size(); ++i) {
    if (radii[i] <= radii[i - 1]) throw InputError("radii must be strictly increasing");
  }
  const auto dist = hop_distances(g, center);
  std::vector<VertexSet> balls;
  balls.reserve(radii.size());
  for (std::size_t r : radii) {
    std::vector<Vertex> members;
    for (Vertex x = 0; x < g.size(); ++x) {
      if (dist[x] <= r) members.push_back(x);
    }
    balls.emplace_back(std::move(members));
  }
  return balls;
}

}  // namespace graphfeyn
