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

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "graphfeyn/exact.hpp"
#include "graphfeyn/graph.hpp"

namespace graphfeyn {

/// Zero extension of f from W to the ambient vertex list.
template <class T>
std::vector<T> embed(std::span<const T> f, const VertexSet& w, std::size_t ambient_size) {
  w.check_within(ambient_size);
  if (f.size() != w.size()) throw InputError("function length does not match the vertex set");
  std::vector<T> out(ambient_size, T(0));
  std::size_t i = 0;
  for (Vertex x : w) out[x] = f[i++];
  return out;
}

/// Restriction of an ambient function to W.
template <class T>
std::vector<T> project(std::span<const T> f, const VertexSet& w) {
  w.check_within(f.size());
  std::vector<T> out;
  out.reserve(w.size());
  for (Vertex x : w) out.push_back(f[x]);
  return out;
}

enum class Evolution { unitary, semigroup };

/// Distances of the Dirichlet evolutions on a ball exhaustion to the evolution
/// on the largest ball, in l2(m).
struct ExhaustionReport {
  std::vector<std::size_t> radii;
  std::vector<std::size_t> ball_sizes;
  std::vector<double> deviations;
  std::string reference;
  std::optional<std::string> warning;
};

/// For every radius r computes iota exp(-itL^(B_r)) pi f (or the semigroup) on
/// the Dirichlet restriction to B(center, r) and its distance to the same
/// quantity on the largest ball. `f` is an ambient function supported in the
/// smallest ball.
template <class Real = double>
ExhaustionReport exhaustion_study(const Instance& inst, std::span<const std::complex<double>> f,
                                  double t, std::span<const std::size_t> radii, Vertex center,
                                  Evolution mode) {
  require_valid(inst);
  const auto& g = inst.graph;
  g.check_vertex(center);
  if (radii.empty()) throw InputError("exhaustion needs at least one radius");
  if (f.size() != g.size()) throw InputError("vertex function has the wrong length");
  if (mode == Evolution::semigroup && t < 0.0) throw InputError("semigroup needs t >= 0");

  const auto balls = ball_exhaustion(g, center, radii);
  for (Vertex x = 0; x < g.size(); ++x) {
    if (f[x] != 0.0 && !balls.front().contains(x)) {
      throw InputError("support of f is not inside the smallest ball");
    }
  }

  // Evolved function on each ball, zero-extended to the ambient vertex list.
  std::vector<std::vector<std::complex<Real>>> evolved;
  std::vector<double> max_degree;
  for (const auto& ball : balls) {
    const Restriction r = restrict_to(inst, ball);
    const auto op = assemble_operator<Real>(r);
    const Spectrum<Real> spectrum(op);
    CVector<Real> local(static_cast<Eigen::Index>(ball.size()));
    std::size_t i = 0;
    for (Vertex x : ball) local(static_cast<Eigen::Index>(i++)) = from_double<Real>(f[x]);
    const CVector<Real> out = mode == Evolution::unitary ? spectrum.evolve_unitary(local, t)
                                                         : spectrum.evolve_semigroup(local, t);
    std::vector<std::complex<Real>> values(out.data(), out.data() + out.size());
    evolved.push_back(embed<std::complex<Real>>(values, ball, g.size()));
    max_degree.push_back(*std::max_element(r.ambient_degree.begin(), r.ambient_degree.end()));
  }

  ExhaustionReport report;
  report.radii.assign(radii.begin(), radii.end());
  const auto& reference = evolved.back();
  for (std::size_t k = 0; k < balls.size(); ++k) {
    using std::sqrt;
    Real sum(0);
    for (Vertex x : balls.back()) {
      sum += std::norm(evolved[k][x] - reference[x]) * Real(g.measure(x));
    }
    report.ball_sizes.push_back(balls[k].size());
    report.deviations.push_back(to_double(Real(sqrt(sum))));
  }
  report.reference = "Dirichlet evolution on B(" + g.id(center) + ", " +
                     std::to_string(radii.back()) + ") with " +
                     std::to_string(balls.back().size()) + " vertices";

  // Unbounded deg would void the standing semi-boundedness hypotheses; at
  // finite scale the best available signal is a maximum that keeps growing.
  bool growing = max_degree.size() >= 3;
  for (std::size_t k = 1; k < max_degree.size() && growing; ++k) {
    growing = max_degree[k] > max_degree[k - 1];
  }
  if (growing) report.warning = "maximum weighted degree grows with every ball; deg may be unbounded";
  return report;
}

}  // namespace graphfeyn
