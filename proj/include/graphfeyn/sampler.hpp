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

// Minimal jump process of a weighted graph: hold at x for an Exp(deg(x))
// time, then jump to y with probability b(x, y) / sum_z b(x, z).

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <span>
#include <vector>

#include "graphfeyn/estimate.hpp"
#include "graphfeyn/graph.hpp"
#include "graphfeyn/rng.hpp"

namespace graphfeyn {

struct Jump {
  double time;
  Vertex target;
};

/// One realization of the jump process on [0, horizon].
struct JumpPath {
  Vertex start = 0;
  std::vector<Jump> jumps;
  double horizon = 0.0;
  bool exploded = false;

  std::size_t jump_count() const noexcept { return jumps.size(); }
  Vertex end() const noexcept { return jumps.empty() ? start : jumps.back().target; }

  /// Position at time s in [0, horizon] (right-continuous).
  Vertex at(double s) const {
    auto it = std::upper_bound(jumps.begin(), jumps.end(), s,
                               [](double v, const Jump& j) { return v < j.time; });
    return it == jumps.begin() ? start : std::prev(it)->target;
  }
};

/// Returned by exit_time when the path stays in W up to the horizon.
inline constexpr double kNeverExits = std::numeric_limits<double>::infinity();

/// Jump rates and jump law of a weighted graph in flat arrays.
class JumpModel {
 public:
  explicit JumpModel(const WeightedGraph& g) : graph_(&g) {
    rate_.resize(g.size());
    offset_.reserve(g.size() + 1);
    offset_.push_back(0);
    for (Vertex x = 0; x < g.size(); ++x) {
      double total = 0.0;
      for (const auto& nb : g.neighbors(x)) {
        total += nb.b;
        target_.push_back(nb.to);
        cumulative_.push_back(total);
      }
      offset_.push_back(target_.size());
      rate_[x] = total / g.measure(x);
    }
  }

  const WeightedGraph& graph() const noexcept { return *graph_; }
  std::size_t size() const noexcept { return rate_.size(); }
  double rate(Vertex x) const { return rate_[x]; }

  /// Neighbor of x selected by u in [0, 1); only meaningful when rate(x) > 0.
  Vertex pick(Vertex x, double u) const {
    const auto first = cumulative_.begin() + static_cast<std::ptrdiff_t>(offset_[x]);
    const auto last = cumulative_.begin() + static_cast<std::ptrdiff_t>(offset_[x + 1]);
    const double total = *(last - 1);
    auto it = std::upper_bound(first, last, u * total);
    if (it == last) --it;
    return target_[static_cast<std::size_t>(it - cumulative_.begin())];
  }

 private:
  const WeightedGraph* graph_;
  std::vector<double> rate_;
  std::vector<std::size_t> offset_;
  std::vector<Vertex> target_;
  std::vector<double> cumulative_;
};

/// Samples a path from x on [0, t] into `out`, reusing its storage.
inline void sample_path_into(const JumpModel& model, Vertex x, double t, const SamplerConfig& cfg,
                             Stream& stream, JumpPath& out) {
  out.start = x;
  out.horizon = t;
  out.exploded = false;
  out.jumps.clear();
  Vertex here = x;
  double now = 0.0;
  while (true) {
    const double rate = model.rate(here);
    if (rate <= 0.0) return;  // holds forever
    now += stream.exponential(rate);
    if (now > t) return;
    if (out.jumps.size() >= cfg.max_jumps) {
      out.exploded = true;
      return;
    }
    here = model.pick(here, stream.uniform());
    out.jumps.push_back({now, here});
  }
}

inline JumpPath sample_path(const JumpModel& model, Vertex x, double t, const SamplerConfig& cfg,
                            Stream& stream) {
  model.graph().check_vertex(x);
  if (!(t >= 0.0) || !std::isfinite(t)) throw InputError("path horizon must be finite and >= 0");
  JumpPath path;
  sample_path_into(model, x, t, cfg, stream, path);
  return path;
}

/// First time the path leaves W: 0 if it starts outside, kNeverExits if it
/// stays inside up to the horizon.
inline double exit_time(const JumpPath& path, const VertexSet& w) {
  if (!w.contains(path.start)) return 0.0;
  for (const auto& j : path.jumps) {
    if (!w.contains(j.target)) return j.time;
  }
  return kNeverExits;
}

/// Throws InternalError unless jump times increase strictly inside
/// (0, horizon] and every jump follows an edge.
inline void check_path(const WeightedGraph& g, const JumpPath& path) {
  double last = 0.0;
  Vertex prev = path.start;
  for (const auto& j : path.jumps) {
    if (!(j.time > last) || j.time > path.horizon) {
      throw InternalError("jump times not strictly increasing within the horizon");
    }
    if (!(g.weight(prev, j.target) > 0.0)) {
      throw InternalError("jump between non-adjacent vertices " + g.id(prev) + " -> " +
                          g.id(j.target));
    }
    last = j.time;
    prev = j.target;
  }
}

/// Path dump CSV: path_id,step,time,vertex. Step 0 is (0, start); an exploded
/// path ends with a row whose vertex is "!exploded" at its last jump time.
inline void write_path_csv_header(std::ostream& os) { os << "path_id,step,time,vertex\n"; }

inline void write_path_csv(std::ostream& os, const WeightedGraph& g, std::uint64_t path_id,
                           const JumpPath& path) {
  const auto old = os.precision(17);
  os << path_id << ",0," << 0.0 << ',' << g.id(path.start) << '\n';
  std::size_t step = 1;
  for (const auto& j : path.jumps) os << path_id << ',' << step++ << ',' << j.time << ',' << g.id(j.target) << '\n';
  if (path.exploded) {
    const double at = path.jumps.empty() ? 0.0 : path.jumps.back().time;
    os << path_id << ',' << step << ',' << at << ",!exploded\n";
  }
  os.precision(old);
}

// ---------------------------------------------------------------------------
// Estimators of the jump law itself.

namespace detail {

template <class Contribution>
MCEstimate estimate_path_statistic(const WeightedGraph& g, Vertex x, double t, std::uint64_t n,
                                   const SamplerConfig& cfg, Contribution&& contribution) {
  g.check_vertex(x);
  if (!(t >= 0.0) || !std::isfinite(t)) throw InputError("time must be finite and >= 0");
  const JumpModel model(g);
  return run_chunked(1, n, cfg, [&](Stream& stream, Tally& tally) {
    thread_local JumpPath path;
    sample_path_into(model, x, t, cfg, stream, path);
    if (cfg.check_paths) check_path(g, path);
    if (!path.exploded) {
      const double value = contribution(path);
      if (value != 0.0) tally.emit(0, value);
    }
    return path.exploded;
  })[0];
}

}  // namespace detail

/// Fraction of paths from x without a jump up to t; the law is exp(-t deg(x)).
inline MCEstimate estimate_no_jump_prob(const WeightedGraph& g, Vertex x, double t, std::uint64_t n,
                                        const SamplerConfig& cfg) {
  return detail::estimate_path_statistic(
      g, x, t, n, cfg, [](const JumpPath& p) { return p.jump_count() == 0 ? 1.0 : 0.0; });
}

/// P_x(N_t = 1, X_{tau_1} = y) / t, which tends to b(x, y) / m(x) as t -> 0.
inline MCEstimate estimate_first_jump_rate(const WeightedGraph& g, Vertex x, Vertex y, double t,
                                           std::uint64_t n, const SamplerConfig& cfg) {
  g.check_vertex(y);
  if (!(t > 0.0)) throw InputError("first-jump rate needs t > 0");
  return detail::estimate_path_statistic(g, x, t, n, cfg, [&](const JumpPath& p) {
    return (p.jump_count() == 1 && p.jumps[0].target == y) ? 1.0 / t : 0.0;
  });
}

/// (1/t) E_x[1{2 <= N_t < inf} f(X_t)], which is O(t) for bounded deg.
inline MCEstimate estimate_two_jump_remainder(const WeightedGraph& g, std::span<const double> f,
                                              Vertex x, double t, std::uint64_t n,
                                              const SamplerConfig& cfg) {
  if (f.size() != g.size()) throw InputError("vertex function has the wrong length");
  if (!(t > 0.0)) throw InputError("two-jump remainder needs t > 0");
  return detail::estimate_path_statistic(g, x, t, n, cfg, [&](const JumpPath& p) {
    return p.jump_count() >= 2 ? f[p.end()] / t : 0.0;
  });
}

}  // namespace graphfeyn
