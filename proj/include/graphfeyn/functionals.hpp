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
#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "graphfeyn/graph.hpp"
#include "graphfeyn/sampler.hpp"

namespace graphfeyn {

/// Potentials of an instance in flat arrays for fast path evaluation.
class PathContext {
 public:
  PathContext(const WeightedGraph& g, const MagneticPotential& theta, const ElectricPotential& v)
      : deg_(graphfeyn::degrees(g)) {
    v_.resize(g.size());
    offset_.reserve(g.size() + 1);
    offset_.push_back(0);
    for (Vertex x = 0; x < g.size(); ++x) {
      v_[x] = v(x);
      for (const auto& nb : g.neighbors(x)) {
        target_.push_back(nb.to);
        theta_.push_back(theta(x, nb.to));
      }
      offset_.push_back(target_.size());
    }
  }

  explicit PathContext(const Instance& inst) : PathContext(inst.graph, inst.theta, inst.v) {}

  std::size_t size() const noexcept { return deg_.size(); }
  double degree(Vertex x) const { return deg_[x]; }
  double potential(Vertex x) const { return v_[x]; }
  std::span<const double> degrees() const noexcept { return deg_; }
  std::span<const double> potentials() const noexcept { return v_; }

  /// theta(x, y) if b(x, y) > 0, otherwise nullopt.
  std::optional<double> theta(Vertex x, Vertex y) const {
    const auto first = target_.begin() + static_cast<std::ptrdiff_t>(offset_[x]);
    const auto last = target_.begin() + static_cast<std::ptrdiff_t>(offset_[x + 1]);
    auto it = std::lower_bound(first, last, y);
    if (it == last || *it != y) return std::nullopt;
    return theta_[static_cast<std::size_t>(it - target_.begin())];
  }

 private:
  std::vector<double> deg_;
  std::vector<double> v_;
  std::vector<std::size_t> offset_;
  std::vector<Vertex> target_;
  std::vector<double> theta_;
};

/// Feynman weight i^N exp(action) of one path.
struct PathWeight {
  std::size_t n_jumps = 0;
  std::complex<double> action;
  std::complex<double> weight;
};

/// Sum of theta over the traversed edges. Zero for a jump-free path, and zero
/// as a whole if any traversed pair is not an edge.
inline double line_integral(const JumpPath& path, const PathContext& ctx) {
  double sum = 0.0;
  Vertex prev = path.start;
  for (const auto& j : path.jumps) {
    const auto th = ctx.theta(prev, j.target);
    if (!th) return 0.0;
    sum += *th;
    prev = j.target;
  }
  return sum;
}

/// Integral of f along the path over [0, horizon]; the last holding interval
/// is cut at the horizon.
inline double riemann_integral(const JumpPath& path, std::span<const double> f) {
  double sum = 0.0;
  double since = 0.0;
  Vertex here = path.start;
  for (const auto& j : path.jumps) {
    sum += f[here] * (j.time - since);
    since = j.time;
    here = j.target;
  }
  return sum + f[here] * (path.horizon - since);
}

/// action = i int theta(dX) - i int (v + deg) ds + int deg ds.
inline std::complex<double> action(const JumpPath& path, const PathContext& ctx) {
  double magnetic = line_integral(path, ctx);
#ifdef GRAPHFEYN_CORRUPT_PHASE_FOR_TESTING
  magnetic = -magnetic;  // harness-sensitivity fixture, never in release code
#endif
  // Both time integrals share the holding intervals, so walk the path once.
  double int_v = 0.0, int_deg = 0.0, since = 0.0;
  Vertex here = path.start;
  auto hold = [&](double until) {
    int_v += ctx.potential(here) * (until - since);
    int_deg += ctx.degree(here) * (until - since);
    since = until;
  };
  for (const auto& j : path.jumps) {
    hold(j.time);
    here = j.target;
  }
  hold(path.horizon);
  return {int_deg, magnetic - (int_v + int_deg)};
}

/// i^n from n mod 4.
inline std::complex<double> i_power(std::size_t n) {
  switch (n % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

inline PathWeight feynman_weight(const JumpPath& path, const PathContext& ctx) {
  if (path.exploded) throw ContractViolation("feynman_weight called on an exploded path");
  PathWeight w;
  w.n_jumps = path.jump_count();
  w.action = action(path, ctx);
  w.weight = i_power(w.n_jumps) * std::exp(w.action);
  return w;
}

/// Feynman-Kac-Ito integrand exp(i int theta(dX) - int v ds) for the semigroup.
inline std::complex<double> feynman_kac_weight(const JumpPath& path, const PathContext& ctx) {
  if (path.exploded) throw ContractViolation("feynman_kac_weight called on an exploded path");
  const double magnetic = line_integral(path, ctx);
  const double int_v = riemann_integral(path, ctx.potentials());
  return std::exp(std::complex<double>(-int_v, magnetic));
}

// Convenience overloads taking the raw instance data.

inline double line_integral(const JumpPath& path, const Instance& inst) {
  return line_integral(path, PathContext(inst));
}

inline std::complex<double> action(const JumpPath& path, const Instance& inst) {
  return action(path, PathContext(inst));
}

inline PathWeight feynman_weight(const JumpPath& path, const Instance& inst) {
  return feynman_weight(path, PathContext(inst));
}

}  // namespace graphfeyn
