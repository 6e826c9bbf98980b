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

// Monte Carlo path-integral estimators for the unitary group and the
// semigroup of a magnetic Schrodinger operator.
//
// For t >= 0 and paths X of the jump process started at x,
//   exp(-itL)(x, y) = E_x[1{X_t = y, N_t < inf} i^{N_t} exp(A_t)] / m(y),
//   exp(-tL)(x, y)  = E_x[1{X_t = y} exp(i int theta(dX) - int v ds)] / m(y),
// with A_t the action from functionals.hpp. Paths that hit the jump cap
// contribute zero; estimates are never renormalized by the accepted count.

#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "graphfeyn/estimate.hpp"
#include "graphfeyn/exact.hpp"
#include "graphfeyn/functionals.hpp"
#include "graphfeyn/graph.hpp"
#include "graphfeyn/sampler.hpp"

namespace graphfeyn {

enum class PathWeighting {
  feynman,      // i^N exp(A_t), unitary group
  feynman_kac,  // exp(i int theta - int v), semigroup
};

namespace detail {

struct KernelQuery {
  Vertex start = 0;
  std::optional<Vertex> target;  // nullopt: estimate the whole row
  double t = 0.0;                // >= 0
  const VertexSet* inside = nullptr;
  PathWeighting weighting = PathWeighting::feynman;
  bool conjugate = false;
};

inline std::complex<double> path_weight(const JumpPath& path, const PathContext& ctx,
                                        PathWeighting weighting) {
  return weighting == PathWeighting::feynman ? feynman_weight(path, ctx).weight
                                             : feynman_kac_weight(path, ctx);
}

inline std::vector<MCEstimate> kernel_estimates(const Instance& inst, const KernelQuery& q,
                                                std::uint64_t n, const SamplerConfig& cfg) {
  const auto& g = inst.graph;
  g.check_vertex(q.start);
  if (q.target) g.check_vertex(*q.target);
  if (!(q.t >= 0.0) || !std::isfinite(q.t)) throw InputError("time must be finite");
  const JumpModel model(g);
  const PathContext ctx(inst);
  const std::size_t slots = q.target ? 1 : g.size();
  return run_chunked(slots, n, cfg, [&](Stream& stream, Tally& tally) {
    thread_local JumpPath path;
    sample_path_into(model, q.start, q.t, cfg, stream, path);
    if (cfg.check_paths) check_path(g, path);
    if (path.exploded) return true;
    const Vertex end = path.end();
    if (q.target && end != *q.target) return false;
    if (q.inside && exit_time(path, *q.inside) != kNeverExits) return false;
    std::complex<double> w = path_weight(path, ctx, q.weighting);
    if (q.conjugate) w = std::conj(w);
    tally.emit(q.target ? 0 : end, w / g.measure(end));
    return false;
  });
}

/// Kernel entry at any real t; t < 0 uses exp(itL)(x,y) = conj(exp(-itL)(y,x)),
/// i.e. paths from y weighted by the conjugate weight and divided by m(x).
inline MCEstimate signed_time_kernel(const Instance& inst, Vertex x, Vertex y, double t,
                                     const VertexSet* inside, std::uint64_t n,
                                     const SamplerConfig& cfg) {
  KernelQuery q;
  q.inside = inside;
  if (t >= 0.0) {
    q.start = x;
    q.target = y;
    q.t = t;
  } else {
    q.start = y;
    q.target = x;
    q.t = -t;
    q.conjugate = true;
  }
  return kernel_estimates(inst, q, n, cfg)[0];
}

}  // namespace detail

/// Estimate of exp(-itL_{v,theta})(x, y); t may be negative.
inline MCEstimate mc_unitary_kernel(const Instance& inst, Vertex x, Vertex y, double t,
                                    std::uint64_t n, const SamplerConfig& cfg) {
  require_valid(inst);
  return detail::signed_time_kernel(inst, x, y, t, nullptr, n, cfg);
}

/// Estimates of exp(-itL)(x, y) for every y from one set of paths; t >= 0.
inline std::vector<MCEstimate> mc_unitary_row(const Instance& inst, Vertex x, double t,
                                              std::uint64_t n, const SamplerConfig& cfg) {
  require_valid(inst);
  if (t < 0.0) throw InputError("row estimates need t >= 0");
  detail::KernelQuery q;
  q.start = x;
  q.t = t;
  return detail::kernel_estimates(inst, q, n, cfg);
}

/// Estimate of (exp(-itL^(W)) f)(x) = E_x[1{t < tau_W} i^N exp(A_t) f(X_t)];
/// `inside` = nullptr means W = X.
inline MCEstimate mc_unitary_apply(const Instance& inst, std::span<const std::complex<double>> f,
                                   Vertex x, double t, std::uint64_t n, const SamplerConfig& cfg,
                                   const VertexSet* inside = nullptr) {
  require_valid(inst);
  const auto& g = inst.graph;
  g.check_vertex(x);
  if (f.size() != g.size()) throw InputError("vertex function has the wrong length");
  if (!(t >= 0.0) || !std::isfinite(t)) throw InputError("apply needs finite t >= 0");
  const JumpModel model(g);
  const PathContext ctx(inst);
  return run_chunked(1, n, cfg, [&](Stream& stream, Tally& tally) {
    thread_local JumpPath path;
    sample_path_into(model, x, t, cfg, stream, path);
    if (cfg.check_paths) check_path(g, path);
    if (path.exploded) return true;
    if (inside && exit_time(path, *inside) != kNeverExits) return false;
    const auto value = f[path.end()];
    if (value != 0.0) tally.emit(0, feynman_weight(path, ctx).weight * value);
    return false;
  })[0];
}

/// Estimate of exp(-itL^(W)_{v,theta})(x, y) for x, y in W. The action keeps
/// the ambient degree.
inline MCEstimate mc_dirichlet_kernel(const Instance& inst, const VertexSet& w, Vertex x, Vertex y,
                                      double t, std::uint64_t n, const SamplerConfig& cfg) {
  require_valid(inst);
  w.check_within(inst.graph.size());
  if (!w.contains(x) || !w.contains(y)) throw InputError("Dirichlet kernel needs x, y in W");
  return detail::signed_time_kernel(inst, x, y, t, &w, n, cfg);
}

/// Estimate of exp(-tL_{v,theta})(x, y); t >= 0.
inline MCEstimate mc_semigroup_kernel(const Instance& inst, Vertex x, Vertex y, double t,
                                      std::uint64_t n, const SamplerConfig& cfg) {
  require_valid(inst);
  if (t < 0.0) throw InputError("semigroup kernel needs t >= 0");
  detail::KernelQuery q;
  q.start = x;
  q.target = y;
  q.t = t;
  q.weighting = PathWeighting::feynman_kac;
  return detail::kernel_estimates(inst, q, n, cfg)[0];
}

inline std::vector<MCEstimate> mc_semigroup_row(const Instance& inst, Vertex x, double t,
                                                std::uint64_t n, const SamplerConfig& cfg) {
  require_valid(inst);
  if (t < 0.0) throw InputError("semigroup kernel needs t >= 0");
  detail::KernelQuery q;
  q.start = x;
  q.t = t;
  q.weighting = PathWeighting::feynman_kac;
  return detail::kernel_estimates(inst, q, n, cfg);
}

// ---------------------------------------------------------------------------
// Kato-Simon domination |exp(-itL_{v,theta})(x,y)| <= exp(-tL_{-deg,0})(x,y).

/// Same graph with theta = 0 and v = -deg.
inline Instance comparison_instance(const Instance& inst) {
  const auto deg = degrees(inst.graph);
  std::vector<double> v(deg.size());
  for (std::size_t i = 0; i < deg.size(); ++i) v[i] = -deg[i];
  return Instance{inst.graph, MagneticPotential{}, ElectricPotential::from(v)};
}

enum class EvalMode { exact, mc };

struct KatoSimonResult {
  double margin = 0.0;         // semigroup - |unitary|
  double semigroup = 0.0;      // exp(-tL_{-deg,0})(x, y)
  double unitary_abs = 0.0;    // |exp(-itL_{v,theta})(x, y)|
  double stderr = 0.0;         // combined standard error, mc mode only
};

/// Margins for every (x, y) at one t from exact kernels, row-major.
inline std::vector<KatoSimonResult> kato_simon_exact_all(const Instance& inst, double t) {
  if (t < 0.0) throw InputError("Kato-Simon check needs t >= 0");
  const auto sg = semigroup_kernel_exact(assemble_operator(comparison_instance(inst)), t);
  const auto u = unitary_kernel_exact(assemble_operator(inst), t);
  std::vector<KatoSimonResult> out;
  out.reserve(u.size() * u.size());
  for (std::size_t x = 0; x < u.size(); ++x) {
    for (std::size_t y = 0; y < u.size(); ++y) {
      KatoSimonResult r;
      r.semigroup = sg.at(x, y).real();
      r.unitary_abs = std::abs(u.at(x, y));
      r.margin = r.semigroup - r.unitary_abs;
      out.push_back(r);
    }
  }
  return out;
}

inline KatoSimonResult kato_simon_margin(const Instance& inst, Vertex x, Vertex y, double t,
                                         EvalMode mode, std::uint64_t n = 1,
                                         const SamplerConfig& cfg = {}) {
  require_valid(inst);
  inst.graph.check_vertex(x);
  inst.graph.check_vertex(y);
  if (t < 0.0) throw InputError("Kato-Simon check needs t >= 0");
  if (mode == EvalMode::exact) return kato_simon_exact_all(inst, t)[x * inst.graph.size() + y];
  const auto sg = mc_semigroup_kernel(comparison_instance(inst), x, y, t, n, cfg);
  const auto u = mc_unitary_kernel(inst, x, y, t, n, cfg);
  KatoSimonResult r;
  r.semigroup = sg.mean.real();
  r.unitary_abs = std::abs(u.mean);
  r.margin = r.semigroup - r.unitary_abs;
  r.stderr = sg.combined_stderr() + u.combined_stderr();
  return r;
}

// ---------------------------------------------------------------------------
// Scattering: kernel of exp(-itL_{v,theta}) exp(itL_{v',theta'}).

inline bool same_weighted_graph(const WeightedGraph& a, const WeightedGraph& b) {
  if (a.ids() != b.ids()) return false;
  for (Vertex x = 0; x < a.size(); ++x) {
    if (a.measure(x) != b.measure(x)) return false;
    const auto na = a.neighbors(x);
    const auto nb = b.neighbors(x);
    if (na.size() != nb.size()) return false;
    for (std::size_t k = 0; k < na.size(); ++k) {
      if (na[k].to != nb[k].to || na[k].b != nb[k].b) return false;
    }
  }
  return true;
}

/// Pairs independent paths w from x and w' from y (same jump law) and averages
/// 1{w(t) = w'(t)} i^N exp(A_t(v,theta|w)) conj(i^N' exp(A_t(v',theta'|w'))) / m(w(t)).
inline MCEstimate mc_scattering_kernel(const Instance& inst, const Instance& primed, Vertex x,
                                       Vertex y, double t, std::uint64_t n,
                                       const SamplerConfig& cfg) {
  require_valid(inst);
  require_valid(primed);
  if (!same_weighted_graph(inst.graph, primed.graph)) {
    throw InputError("scattering needs both instances on the same weighted graph");
  }
  const auto& g = inst.graph;
  g.check_vertex(x);
  g.check_vertex(y);
  if (!(t >= 0.0) || !std::isfinite(t)) throw InputError("scattering needs finite t >= 0");
  const JumpModel model(g);
  const PathContext ctx(inst);
  const PathContext ctx_primed(primed);
  return run_chunked(1, n, cfg, [&](Stream& stream, Tally& tally) {
    thread_local JumpPath path, path_primed;
    sample_path_into(model, x, t, cfg, stream, path);
    sample_path_into(model, y, t, cfg, stream, path_primed);
    if (cfg.check_paths) {
      check_path(g, path);
      check_path(g, path_primed);
    }
    if (path.exploded || path_primed.exploded) return true;
    if (path.end() != path_primed.end()) return false;
    const auto w = feynman_weight(path, ctx).weight;
    const auto w_primed = feynman_weight(path_primed, ctx_primed).weight;
    tally.emit(0, w * std::conj(w_primed) / g.measure(path.end()));
    return false;
  })[0];
}

}  // namespace graphfeyn
