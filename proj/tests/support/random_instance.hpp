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

// Test-only helpers: fixed small instances, seeded random instances and an
// independent dense matrix exponential used as an oracle.

#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "graphfeyn/graph.hpp"

#ifndef GRAPHFEYN_DATA_DIR
#error "GRAPHFEYN_DATA_DIR must point at the bundled graphs"
#endif

namespace graphfeyn::testing {

inline std::string data_path(const std::string& name) { return std::string(GRAPHFEYN_DATA_DIR) + "/" + name; }

/// K2 on {a, b} with one edge of weight b.
inline Instance k2(double theta = 0.0, double va = 0.0, double vb = 0.0, double ma = 1.0, double mb = 1.0,
                   double b = 1.0) {
  Instance inst{WeightedGraph({"a", "b"}, {ma, mb}, {{0, 1, b}}), {}, {}};
  inst.theta.set(0, 1, theta);
  const std::vector<double> v{va, vb};
  inst.v = ElectricPotential::from(v);
  return inst;
}

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin(double p) { return uniform(0.0, 1.0) < p; }
  std::complex<double> complex_unit() { return {uniform(-1.0, 1.0), uniform(-1.0, 1.0)}; }

 private:
  std::mt19937_64 rng_;
};

struct RandomSpec {
  int n_min = 2;
  int n_max = 12;
  double b_lo = 0.1, b_hi = 2.0;
  double m_lo = 0.5, m_hi = 2.0;
  double v_lo = -1.0, v_hi = 1.0;
  double theta_abs = M_PI;
  double extra_edge_prob = 0.3;
};

/// Connected random instance: a random spanning tree plus extra edges.
inline Instance random_instance(Gen& gen, const RandomSpec& spec = {}) {
  const int n = gen.integer(spec.n_min, spec.n_max);
  std::vector<std::string> ids;
  std::vector<double> m;
  for (int i = 0; i < n; ++i) {
    ids.push_back("v" + std::to_string(i));
    m.push_back(gen.uniform(spec.m_lo, spec.m_hi));
  }
  std::vector<EdgeSpec> edges;
  std::vector<std::vector<bool>> used(n, std::vector<bool>(n, false));
  for (int i = 1; i < n; ++i) {
    const int j = gen.integer(0, i - 1);
    edges.push_back({static_cast<Vertex>(j), static_cast<Vertex>(i), gen.uniform(spec.b_lo, spec.b_hi)});
    used[j][i] = used[i][j] = true;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!used[i][j] && gen.coin(spec.extra_edge_prob)) {
        edges.push_back({static_cast<Vertex>(i), static_cast<Vertex>(j), gen.uniform(spec.b_lo, spec.b_hi)});
      }
    }
  }
  Instance inst{WeightedGraph(ids, m, edges), {}, {}};
  for (const auto& e : inst.graph.edges()) inst.theta.set(e.u, e.w, gen.uniform(-spec.theta_abs, spec.theta_abs));
  std::vector<double> v(n);
  for (auto& x : v) x = gen.uniform(spec.v_lo, spec.v_hi);
  inst.v = ElectricPotential::from(v);
  return inst;
}

inline std::vector<std::complex<double>> random_function(Gen& gen, std::size_t n) {
  std::vector<std::complex<double>> f(n);
  for (auto& z : f) z = gen.complex_unit();
  return f;
}

using Dense = Eigen::MatrixXcd;

/// Operator matrix written out from the defining formula, independent of
/// assemble_operator.
inline Dense operator_matrix(const Instance& inst) {
  const auto& g = inst.graph;
  const auto n = static_cast<Eigen::Index>(g.size());
  Dense H = Dense::Zero(n, n);
  for (Vertex x = 0; x < g.size(); ++x) {
    double deg = 0.0;
    for (Vertex y = 0; y < g.size(); ++y) {
      const double b = g.weight(x, y);
      deg += b;
      if (b > 0.0) {
        H(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) =
            -b / g.measure(x) * std::polar(1.0, inst.theta(x, y));
      }
    }
    H(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(x)) += deg / g.measure(x) + inst.v(x);
  }
  return H;
}

/// exp(A) by scaling and squaring with a Taylor series.
inline Dense expm(const Dense& A) {
  const double norm = A.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (std::ldexp(norm, -squarings) > 0.25) ++squarings;
  const Dense S = A / std::ldexp(1.0, squarings);
  Dense term = Dense::Identity(A.rows(), A.cols());
  Dense sum = term;
  for (int k = 1; k <= 30; ++k) {
    term = term * S / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

/// Kernel of an operator matrix E: K(x, y) = E(x, y) / m(y).
inline Dense kernel_of(const Dense& E, const WeightedGraph& g) {
  Dense K = E;
  for (Eigen::Index y = 0; y < K.cols(); ++y) K.col(y) /= g.measure(static_cast<Vertex>(y));
  return K;
}

}  // namespace graphfeyn::testing
