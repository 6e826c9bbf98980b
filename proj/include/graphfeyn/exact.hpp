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

// Exact finite-dimensional magnetic Schrodinger operators and their kernels.
//
// Kernels follow the measure-weighted convention
//     (A f)(x) = sum_y A(x, y) f(y) m(y),
// so the identity operator has kernel delta_xy / m(y). Every routine is
// templated on the real scalar; `double` is the default and `quad` resolves
// differences far below double round-off.

#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "graphfeyn/graph.hpp"
#include "graphfeyn/precision.hpp"

namespace graphfeyn {

template <class Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <class Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <class Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

/// Largest vertex set handled by the dense routines.
inline constexpr std::size_t kMaxDenseVertices = 4096;

/// Relative tolerance of the Hermiticity check on the symmetrized operator.
inline constexpr double kHermitianTolerance = 1e-12;

/// Dense matrix of L^(W)_{v,theta} acting on functions on W:
///   H(x, x) = deg_X(x) + v(x),  H(x, y) = -(b(x, y) / m(x)) exp(i theta(x, y)).
template <class Real = double>
struct FiniteOperator {
  VertexSet vertices;  // ambient indices, in ambient order
  std::vector<std::string> ids;
  CMatrix<Real> H;
  RVector<Real> measure;

  std::size_t size() const noexcept { return ids.size(); }
};

/// Integral kernel K(x, y) of an operator on W at time t.
template <class Real = double>
struct KernelMatrix {
  VertexSet vertices;
  std::vector<std::string> ids;
  CMatrix<Real> K;
  RVector<Real> measure;
  double t = 0.0;

  std::size_t size() const noexcept { return ids.size(); }
  std::complex<double> at(std::size_t x, std::size_t y) const { return to_double(K(x, y)); }
};

template <class Real = double>
FiniteOperator<Real> assemble_operator(const Restriction& r) {
  using std::cos;
  using std::sin;
  const std::size_t n = r.ambient.size();
  if (n > kMaxDenseVertices) {
    throw ResourceError("vertex set of size " + std::to_string(n) + " exceeds the dense cap of " +
                        std::to_string(kMaxDenseVertices));
  }
  const Instance& local = r.local;
  require_valid(local);

  FiniteOperator<Real> op;
  op.vertices = r.ambient;
  op.ids = local.graph.ids();
  op.H = CMatrix<Real>::Zero(n, n);
  op.measure.resize(n);
  for (Vertex x = 0; x < n; ++x) {
    const Real m = Real(local.graph.measure(x));
    op.measure(x) = m;
    op.H(x, x) = std::complex<Real>(Real(r.ambient_degree[x]) + Real(local.v(x)), Real(0));
    for (const auto& nb : local.graph.neighbors(x)) {
      const Real phase = Real(local.theta(x, nb.to));
      op.H(x, nb.to) = std::complex<Real>(-Real(nb.b) / m * cos(phase), -Real(nb.b) / m * sin(phase));
    }
  }
  return op;
}

template <class Real = double>
FiniteOperator<Real> assemble_operator(const Instance& inst, const VertexSet& w) {
  require_valid(inst);
  if (w.size() > kMaxDenseVertices) {
    throw ResourceError("vertex set of size " + std::to_string(w.size()) +
                        " exceeds the dense cap of " + std::to_string(kMaxDenseVertices));
  }
  return assemble_operator<Real>(restrict_to(inst, w));
}

template <class Real = double>
FiniteOperator<Real> assemble_operator(const Instance& inst) {
  return assemble_operator<Real>(inst, VertexSet::all(inst.graph.size()));
}

/// M = D^{1/2} H D^{-1/2}, D = diag(m); Hermitian for a valid instance.
template <class Real>
CMatrix<Real> symmetrized(const FiniteOperator<Real>& op) {
  using std::sqrt;
  const auto n = static_cast<Eigen::Index>(op.size());
  CMatrix<Real> M(n, n);
  for (Eigen::Index x = 0; x < n; ++x) {
    for (Eigen::Index y = 0; y < n; ++y) {
      M(x, y) = op.H(x, y) * (sqrt(op.measure(x)) / sqrt(op.measure(y)));
    }
  }
  return M;
}

/// Max |M(x,y) - conj(M(y,x))| relative to max |M(x,y)|.
template <class Real>
double hermiticity_defect(const CMatrix<Real>& M) {
  using std::abs;
  Real scale(0), defect(0);
  for (Eigen::Index x = 0; x < M.rows(); ++x) {
    for (Eigen::Index y = 0; y < M.cols(); ++y) {
      scale = std::max(scale, Real(abs(M(x, y))));
      defect = std::max(defect, Real(abs(M(x, y) - std::conj(M(y, x)))));
    }
  }
  return scale == Real(0) ? 0.0 : to_double(Real(defect / scale));
}

/// Eigendecomposition of the symmetrized operator, reusable across times.
template <class Real = double>
class Spectrum {
 public:
  explicit Spectrum(const FiniteOperator<Real>& op)
      : vertices_(op.vertices), ids_(op.ids), measure_(op.measure) {
    using std::sqrt;
    const CMatrix<Real> M = symmetrized(op);
    if (const double d = hermiticity_defect(M); d > kHermitianTolerance) {
      throw InternalError("symmetrized operator is not Hermitian (relative defect " +
                          std::to_string(d) + ")");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix<Real>> solver(M);
    if (solver.info() != Eigen::Success) throw InternalError("Hermitian eigensolver failed");
    eigenvalues_ = solver.eigenvalues();
    vectors_ = solver.eigenvectors();
    sqrt_m_.resize(measure_.size());
    for (Eigen::Index i = 0; i < measure_.size(); ++i) sqrt_m_(i) = sqrt(measure_(i));
  }

  const RVector<Real>& eigenvalues() const noexcept { return eigenvalues_; }
  std::size_t size() const noexcept { return ids_.size(); }

  /// Kernel of exp(-itH); any real t.
  KernelMatrix<Real> unitary(double t) const {
    using std::cos;
    using std::sin;
    CVector<Real> phase(eigenvalues_.size());
    for (Eigen::Index k = 0; k < phase.size(); ++k) {
      const Real a = Real(t) * eigenvalues_(k);
      phase(k) = std::complex<Real>(cos(a), -sin(a));
    }
    return kernel_of(phase, t);
  }

  /// Kernel of exp(-tH); t >= 0.
  KernelMatrix<Real> semigroup(double t) const {
    using std::exp;
    if (!(t >= 0.0)) throw InputError("semigroup kernel needs t >= 0");
    CVector<Real> phase(eigenvalues_.size());
    for (Eigen::Index k = 0; k < phase.size(); ++k) {
      phase(k) = std::complex<Real>(exp(-Real(t) * eigenvalues_(k)), Real(0));
    }
    return kernel_of(phase, t);
  }

  /// exp(-itH) f for f given on W.
  CVector<Real> evolve_unitary(const CVector<Real>& f, double t) const {
    using std::cos;
    using std::sin;
    CVector<Real> phase(eigenvalues_.size());
    for (Eigen::Index k = 0; k < phase.size(); ++k) {
      const Real a = Real(t) * eigenvalues_(k);
      phase(k) = std::complex<Real>(cos(a), -sin(a));
    }
    return apply(phase, f);
  }

  /// exp(-tH) f for f given on W.
  CVector<Real> evolve_semigroup(const CVector<Real>& f, double t) const {
    using std::exp;
    if (!(t >= 0.0)) throw InputError("semigroup needs t >= 0");
    CVector<Real> phase(eigenvalues_.size());
    for (Eigen::Index k = 0; k < phase.size(); ++k) {
      phase(k) = std::complex<Real>(exp(-Real(t) * eigenvalues_(k)), Real(0));
    }
    return apply(phase, f);
  }

 private:
  // K(x,y) = sum_k V(x,k) conj(V(y,k)) phase_k / sqrt(m(x) m(y)). Each term is
  // grouped as (V(x,k) conj(V(y,k))) * phase_k, which makes
  // K(-t)(x,y) == conj(K(t)(y,x)) hold bit for bit.
  KernelMatrix<Real> kernel_of(const CVector<Real>& phase, double t) const {
    const auto n = static_cast<Eigen::Index>(size());
    KernelMatrix<Real> out{vertices_, ids_, CMatrix<Real>::Zero(n, n), measure_, t};
    if (t == 0.0) {  // exact delta_xy / m(y), no round-off from V V*
      for (Eigen::Index x = 0; x < n; ++x) out.K(x, x) = std::complex<Real>(Real(1) / measure_(x));
      return out;
    }
    const CMatrix<Real> rows = vectors_.transpose();  // column x is V(x, .)
    for (Eigen::Index x = 0; x < n; ++x) {
      for (Eigen::Index y = 0; y < n; ++y) {
        std::complex<Real> acc(0);
        for (Eigen::Index k = 0; k < n; ++k) {
          acc += (rows(k, x) * std::conj(rows(k, y))) * phase(k);
        }
        out.K(x, y) = acc / (sqrt_m_(x) * sqrt_m_(y));
      }
    }
    return out;
  }

  CVector<Real> apply(const CVector<Real>& phase, const CVector<Real>& f) const {
    if (f.size() != static_cast<Eigen::Index>(size())) {
      throw InputError("vector length does not match the operator");
    }
    if (phase.size() > 0 && (phase.array() == std::complex<Real>(1)).all()) return f;
    CVector<Real> g = f.cwiseProduct(sqrt_m_.template cast<std::complex<Real>>());
    CVector<Real> coeff = vectors_.adjoint() * g;
    coeff = coeff.cwiseProduct(phase);
    CVector<Real> out = vectors_ * coeff;
    return out.cwiseQuotient(sqrt_m_.template cast<std::complex<Real>>());
  }

  VertexSet vertices_;
  std::vector<std::string> ids_;
  RVector<Real> measure_;
  RVector<Real> sqrt_m_;
  RVector<Real> eigenvalues_;
  CMatrix<Real> vectors_;
};

template <class Real = double>
KernelMatrix<Real> unitary_kernel_exact(const FiniteOperator<Real>& op, double t) {
  return Spectrum<Real>(op).unitary(t);
}

template <class Real = double>
KernelMatrix<Real> semigroup_kernel_exact(const FiniteOperator<Real>& op, double t) {
  if (!(t >= 0.0)) throw InputError("semigroup kernel needs t >= 0");
  return Spectrum<Real>(op).semigroup(t);
}

/// Kernel delta_xy / m(y) of the identity operator on the operator's vertex set.
template <class Real = double>
KernelMatrix<Real> identity_kernel(const FiniteOperator<Real>& op) {
  const auto n = static_cast<Eigen::Index>(op.size());
  KernelMatrix<Real> out{op.vertices, op.ids, CMatrix<Real>::Zero(n, n), op.measure, 0.0};
  for (Eigen::Index x = 0; x < n; ++x) out.K(x, x) = std::complex<Real>(Real(1) / op.measure(x));
  return out;
}

/// [AB](x, y) = sum_z A(x, z) B(z, y) m(z).
template <class Real = double>
KernelMatrix<Real> compose_kernels(const KernelMatrix<Real>& a, const KernelMatrix<Real>& b) {
  if (a.ids != b.ids || a.vertices != b.vertices) {
    throw InputError("kernels live on different vertex lists");
  }
  if (a.measure != b.measure) throw InputError("kernels use different measures");
  KernelMatrix<Real> out{a.vertices, a.ids, CMatrix<Real>(), a.measure, a.t + b.t};
  out.K = a.K * a.measure.template cast<std::complex<Real>>().asDiagonal() * b.K;
  return out;
}

/// Kernel of exp(-itL_{v,theta}) exp(itL_{v',theta'}) on W.
template <class Real = double>
KernelMatrix<Real> scattering_kernel_exact(const Instance& inst, const Instance& primed,
                                           const VertexSet& w, double t) {
  const auto op = assemble_operator<Real>(inst, w);
  const auto op2 = assemble_operator<Real>(primed, w);
  if (op.ids != op2.ids || op.measure != op2.measure) {
    throw InputError("scattering needs both instances on the same weighted graph");
  }
  return compose_kernels(unitary_kernel_exact(op, t), unitary_kernel_exact(op2, -t));
}

// ---------------------------------------------------------------------------
// Pointwise formulas on the whole (finite) graph, double precision.

using VertexFunction = std::vector<std::complex<double>>;

/// (L f)(x) = (1/m(x)) sum_y b(x,y) (f(x) - e^{i theta(x,y)} f(y)) + v(x) f(x).
inline std::complex<double> apply_formal(const Instance& inst, std::span<const std::complex<double>> f,
                                         Vertex x) {
  const auto& g = inst.graph;
  g.check_vertex(x);
  if (f.size() != g.size()) throw InputError("vertex function has the wrong length");
  std::complex<double> acc = 0.0;
  for (const auto& nb : g.neighbors(x)) {
    acc += nb.b * (f[x] - std::polar(1.0, inst.theta(x, nb.to)) * f[nb.to]);
  }
  return acc / g.measure(x) + inst.v(x) * f[x];
}

/// Q(f, h) = 1/2 sum_{x~y} b (f(x) - e^{i theta} f(y)) conj(h(x) - e^{i theta} h(y))
///         + sum_x v f conj(h) m, the double sum running over ordered pairs.
inline std::complex<double> quadratic_form(const Instance& inst, std::span<const std::complex<double>> f,
                                           std::span<const std::complex<double>> h) {
  const auto& g = inst.graph;
  if (f.size() != g.size() || h.size() != g.size()) {
    throw InputError("vertex function has the wrong length");
  }
  std::complex<double> kinetic = 0.0, potential = 0.0;
  for (Vertex x = 0; x < g.size(); ++x) {
    for (const auto& nb : g.neighbors(x)) {
      const auto phase = std::polar(1.0, inst.theta(x, nb.to));
      kinetic += nb.b * (f[x] - phase * f[nb.to]) * std::conj(h[x] - phase * h[nb.to]);
    }
    potential += inst.v(x) * f[x] * std::conj(h[x]) * g.measure(x);
  }
  return 0.5 * kinetic + potential;
}

/// |Q(f, h) - sum_x (L f)(x) conj(h(x)) m(x)|.
inline double greens_identity_residual(const Instance& inst, std::span<const std::complex<double>> f,
                                       std::span<const std::complex<double>> h) {
  std::complex<double> rhs = 0.0;
  for (Vertex x = 0; x < inst.graph.size(); ++x) {
    rhs += apply_formal(inst, f, x) * std::conj(h[x]) * inst.graph.measure(x);
  }
  return std::abs(quadratic_form(inst, f, h) - rhs);
}

/// max_x |(exp(-itH) f - f)(x) / t + i (H f)(x)|.
inline double generator_limit_residual(const FiniteOperator<double>& op, const CVector<double>& f,
                                       double t) {
  if (!(t > 0.0)) throw InputError("generator limit needs t > 0");
  const Spectrum<double> spectrum(op);
  const CVector<double> evolved = spectrum.evolve_unitary(f, t);
  const CVector<double> hf = op.H * f;
  const std::complex<double> i(0.0, 1.0);
  double worst = 0.0;
  for (Eigen::Index x = 0; x < f.size(); ++x) {
    worst = std::max(worst, std::abs((evolved(x) - f(x)) / t + i * hf(x)));
  }
  return worst;
}

}  // namespace graphfeyn
