// Copyright 2026 The dualchan Authors
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

#ifndef DUALCHAN_CHANNEL_HPP
#define DUALCHAN_CHANNEL_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dualchan/linalg.hpp"
#include "dualchan/matrix.hpp"
#include "dualchan/rng.hpp"

namespace dualchan {

// Choi convention used throughout: for N mapping d_in -> d_out, the Choi
// operator lives on A'B with composite index (i, a) = i*d_out + a and is
// unnormalized, (I (x) N)(Phi) with tr Phi = d_in. Transpose and conjugate
// are taken in the computational basis, fixed globally.

inline constexpr double kCptpTol = 1e-9;
inline constexpr double kStateTol = 1e-10;

//------------------------------------------------------------------------------
// States and observables
//------------------------------------------------------------------------------

struct DensityOperator {
  ComplexMatrix matrix;

  Index dim() const { return matrix.rows(); }

  // Enforces Hermiticity, positivity and unit trace.
  static DensityOperator validated(const ComplexMatrix& m, double tol = kStateTol) {
    if (m.rows() != m.cols()) throw std::invalid_argument("DensityOperator: matrix must be square");
    if (!all_finite(m)) throw std::invalid_argument("DensityOperator: non-finite entries");
    const double herm = hermiticity_violation(m);
    if (herm > tol)
      throw std::invalid_argument("DensityOperator: Hermiticity violation " + std::to_string(herm));
    const double min_eig = min_hermitian_eigenvalue(m, tol);
    if (min_eig < -tol)
      throw std::invalid_argument("DensityOperator: negative eigenvalue " + std::to_string(min_eig));
    const double tr_err = std::abs(m.trace() - Complex(1.0, 0.0));
    if (tr_err > tol)
      throw std::invalid_argument("DensityOperator: trace deviates from 1 by " + std::to_string(tr_err));
    return DensityOperator{m};
  }

  static DensityOperator pure(const ComplexVector& ket) {
    ComplexVector psi = ket / ket.norm();
    return DensityOperator{psi * psi.adjoint()};
  }

  static DensityOperator maximally_mixed(Index d) {
    return DensityOperator{identity(d) / static_cast<double>(d)};
  }
};

// Hermitian observable with its spectral decomposition cached; estimator code
// samples measurement outcomes from the eigenbasis.
struct Observable {
  ComplexMatrix matrix;
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;  // columns aligned with eigenvalues

  Index dim() const { return matrix.rows(); }

  static Observable validated(const ComplexMatrix& m, double tol = kStateTol) {
    if (m.rows() != m.cols()) throw std::invalid_argument("Observable: matrix must be square");
    if (!all_finite(m)) throw std::invalid_argument("Observable: non-finite entries");
    auto es = hermitian_eigs(m, tol);
    return Observable{m, es.eigenvalues(), es.eigenvectors()};
  }

  double max_abs_eigenvalue() const { return eigenvalues.cwiseAbs().maxCoeff(); }

  // Estimator precondition: spectrum inside [-1, 1].
  void require_unit_bounded(double tol = 1e-9) const {
    const double m = max_abs_eigenvalue();
    if (m > 1.0 + tol)
      throw std::invalid_argument("Observable: eigenvalue " + std::to_string(m) +
                                  " outside [-1, 1]; rescale before estimation");
  }
};

//------------------------------------------------------------------------------
// Kraus <-> Choi
//------------------------------------------------------------------------------

inline ComplexMatrix kraus_to_choi(const std::vector<ComplexMatrix>& kraus, Index d_in,
                                   Index d_out) {
  if (kraus.empty()) throw std::invalid_argument("kraus_to_choi: empty Kraus list");
  ComplexMatrix choi = ComplexMatrix::Zero(d_in * d_out, d_in * d_out);
  for (const auto& k : kraus) {
    if (k.rows() != d_out || k.cols() != d_in)
      throw std::invalid_argument("kraus_to_choi: Kraus operator has wrong shape");
    ComplexVector v(d_in * d_out);
    for (Index i = 0; i < d_in; ++i)
      for (Index a = 0; a < d_out; ++a) v(i * d_out + a) = k(a, i);
    choi += v * v.adjoint();
  }
  return choi;
}

// Eigendecomposition of the Choi; one Kraus operator per eigenvalue above tol.
inline std::vector<ComplexMatrix> choi_to_kraus(const ComplexMatrix& choi, Index d_in,
                                                Index d_out, double tol = 1e-10) {
  if (choi.rows() != d_in * d_out || choi.cols() != d_in * d_out)
    throw std::invalid_argument("choi_to_kraus: Choi side must be d_in*d_out");
  auto es = hermitian_eigs(choi, std::max(tol, 1e-9));
  if (es.eigenvalues().minCoeff() < -std::max(tol, 1e-9))
    throw std::invalid_argument("choi_to_kraus: input is not PSD within tolerance");
  std::vector<ComplexMatrix> kraus;
  for (Index e = 0; e < es.eigenvalues().size(); ++e) {
    const double lambda = es.eigenvalues()(e);
    if (lambda <= tol) continue;
    const double c = std::sqrt(lambda);
    ComplexMatrix k(d_out, d_in);
    for (Index i = 0; i < d_in; ++i)
      for (Index a = 0; a < d_out; ++a) k(a, i) = c * es.eigenvectors()(i * d_out + a, e);
    kraus.push_back(std::move(k));
  }
  if (kraus.empty()) throw std::invalid_argument("choi_to_kraus: Choi has no support above tol");
  return kraus;
}

// sum_j K_j X K_j^dag for an arbitrary matrix argument (linear-map evaluation).
inline ComplexMatrix apply_map(const std::vector<ComplexMatrix>& kraus, const ComplexMatrix& x) {
  if (kraus.empty()) throw std::invalid_argument("apply_map: empty Kraus list");
  ComplexMatrix out = ComplexMatrix::Zero(kraus.front().rows(), kraus.front().rows());
  for (const auto& k : kraus) {
    if (k.cols() != x.rows() || x.rows() != x.cols())
      throw std::invalid_argument("apply_map: dimension mismatch");
    out += k * x * k.adjoint();
  }
  return out;
}

//------------------------------------------------------------------------------
// QuantumChannel
//------------------------------------------------------------------------------

struct CptpReport {
  bool ok = false;
  double min_eigenvalue = 0.0;   // of the Choi
  double tp_violation = 0.0;     // max-abs of tr_B(choi) - I
  double herm_violation = 0.0;
};

inline CptpReport is_cptp(const ComplexMatrix& choi, Index d_in, Index d_out,
                          double tol = kCptpTol) {
  if (choi.rows() != d_in * d_out || choi.cols() != choi.rows())
    throw std::invalid_argument("is_cptp: Choi side must be d_in*d_out");
  CptpReport rep;
  rep.herm_violation = hermiticity_violation(choi);
  if (rep.herm_violation > tol) {
    rep.ok = false;
    return rep;
  }
  rep.min_eigenvalue = min_hermitian_eigenvalue(choi, tol);
  const ComplexMatrix marginal = partial_trace(choi, SystemDims{d_in, d_out}, {0});
  rep.tp_violation = max_abs_diff(marginal, identity(d_in));
  rep.ok = rep.min_eigenvalue >= -tol && rep.tp_violation <= tol;
  return rep;
}

// A CPTP map held as a Kraus list plus cached Choi operator.
struct QuantumChannel {
  Index d_in = 0;
  Index d_out = 0;
  std::vector<ComplexMatrix> kraus;
  ComplexMatrix choi;

  static QuantumChannel from_kraus(std::vector<ComplexMatrix> ks, Index d_in, Index d_out,
                                   double tol = kCptpTol) {
    QuantumChannel ch;
    ch.d_in = d_in;
    ch.d_out = d_out;
    ch.kraus = std::move(ks);
    for (const auto& k : ch.kraus) {
      if (k.rows() != d_out || k.cols() != d_in)
        throw std::invalid_argument("QuantumChannel: Kraus operator has wrong shape");
      if (!all_finite(k)) throw std::invalid_argument("QuantumChannel: non-finite Kraus entries");
    }
    ComplexMatrix tp = ComplexMatrix::Zero(d_in, d_in);
    for (const auto& k : ch.kraus) tp += k.adjoint() * k;
    const double tp_err = max_abs_diff(tp, identity(d_in));
    if (tp_err > tol)
      throw std::invalid_argument("QuantumChannel: trace preservation violated by " +
                                  std::to_string(tp_err));
    ch.choi = kraus_to_choi(ch.kraus, d_in, d_out);
    return ch;
  }

  static QuantumChannel from_choi(const ComplexMatrix& choi, Index d_in, Index d_out,
                                  double tol = kCptpTol) {
    auto rep = is_cptp(choi, d_in, d_out, tol);
    if (!rep.ok)
      throw std::invalid_argument("QuantumChannel: Choi fails CPTP check (min eig " +
                                  std::to_string(rep.min_eigenvalue) + ", TP violation " +
                                  std::to_string(rep.tp_violation) + ")");
    QuantumChannel ch;
    ch.d_in = d_in;
    ch.d_out = d_out;
    ch.kraus = choi_to_kraus(choi, d_in, d_out, 1e-12);
    ch.choi = choi;
    return ch;
  }

  ComplexMatrix apply_matrix(const ComplexMatrix& x) const { return apply_map(kraus, x); }
};

inline DensityOperator apply_channel(const QuantumChannel& n, const DensityOperator& rho) {
  if (rho.dim() != n.d_in) throw std::invalid_argument("apply_channel: state dimension mismatch");
  return DensityOperator{n.apply_matrix(rho.matrix)};
}

//------------------------------------------------------------------------------
// Dual maps: conjugate, transpose, adjoint
//------------------------------------------------------------------------------

// Choi operators of N*, N^T and N^dag. The conjugate stays A->B; transpose
// and adjoint run B->A, their Chois live on B'A (input copy first).
struct DualChois {
  ComplexMatrix conj;       // on A'B, side d_in*d_out
  ComplexMatrix transpose;  // on B'A, side d_out*d_in
  ComplexMatrix adjoint;    // on B'A
};

inline DualChois dual_maps(const QuantumChannel& n) {
  const ComplexMatrix s = swap_operator(n.d_in, n.d_out);  // A'B -> BA'
  DualChois d;
  d.conj = n.choi.transpose();
  d.transpose = s * n.choi * s.adjoint();
  d.adjoint = s * n.choi.transpose() * s.adjoint();
  return d;
}

inline QuantumChannel conjugate_channel(const QuantumChannel& n) {
  std::vector<ComplexMatrix> ks;
  ks.reserve(n.kraus.size());
  for (const auto& k : n.kraus) ks.push_back(k.conjugate());
  return QuantumChannel::from_kraus(std::move(ks), n.d_in, n.d_out);
}

// N^T(x) = sum_j K_j^T x (K_j^T)^dag; generally not trace-preserving.
inline ComplexMatrix transpose_map_apply(const QuantumChannel& n, const ComplexMatrix& x) {
  ComplexMatrix out = ComplexMatrix::Zero(n.d_in, n.d_in);
  for (const auto& k : n.kraus) out += k.transpose() * x * k.conjugate();
  return out;
}

// N^dag(x) = sum_j K_j^dag x K_j; the Hilbert-Schmidt dual of N.
inline ComplexMatrix adjoint_map_apply(const QuantumChannel& n, const ComplexMatrix& x) {
  ComplexMatrix out = ComplexMatrix::Zero(n.d_in, n.d_in);
  for (const auto& k : n.kraus) out += k.adjoint() * x * k;
  return out;
}

//------------------------------------------------------------------------------
// Channel constructions
//------------------------------------------------------------------------------

enum class WernerSign { plus, minus };

inline int sign_value(WernerSign s) { return s == WernerSign::plus ? +1 : -1; }

// W_d^{+/-}(X) = (tr(X) I +/- X^T) / (d +/- 1), evaluated directly.
inline ComplexMatrix werner_apply(const ComplexMatrix& x, Index d, WernerSign sign) {
  if (x.rows() != d || x.cols() != d) throw std::invalid_argument("werner_apply: shape mismatch");
  const double s = sign_value(sign);
  return (x.trace() * identity(d) + s * x.transpose()) / (static_cast<double>(d) + s);
}

// Werner-Holevo channel with Choi 2 P^{s/a} / (d +/- 1).
inline QuantumChannel werner_holevo(Index d, WernerSign sign) {
  if (d < 2) throw std::invalid_argument("werner_holevo: d must be >= 2");
  const ComplexMatrix proj =
      sign == WernerSign::plus ? symmetric_projector(d) : antisymmetric_projector(d);
  const ComplexMatrix choi = (2.0 / (static_cast<double>(d) + sign_value(sign))) * proj;
  QuantumChannel ch;
  ch.d_in = d;
  ch.d_out = d;
  ch.kraus = choi_to_kraus(choi, d, d, 1e-12);
  ch.choi = choi;
  return ch;
}

inline QuantumChannel identity_channel(Index d) {
  return QuantumChannel::from_kraus({identity(d)}, d, d);
}

// R^rho(X) = tr(X) rho; Choi = I_{A'} (x) rho.
inline QuantumChannel state_preparation_channel(const DensityOperator& rho, Index d_in) {
  auto es = hermitian_eigs(rho.matrix);
  std::vector<ComplexMatrix> ks;
  for (Index e = 0; e < es.eigenvalues().size(); ++e) {
    const double lambda = es.eigenvalues()(e);
    if (lambda <= 1e-14) continue;
    for (Index i = 0; i < d_in; ++i) {
      ComplexMatrix k = ComplexMatrix::Zero(rho.dim(), d_in);
      k.col(i) = std::sqrt(lambda) * es.eigenvectors().col(e);
      ks.push_back(std::move(k));
    }
  }
  return QuantumChannel::from_kraus(std::move(ks), d_in, rho.dim());
}

inline QuantumChannel fully_depolarizing_channel(Index d_in, Index d_out) {
  return state_preparation_channel(DensityOperator::maximally_mixed(d_out), d_in);
}

//------------------------------------------------------------------------------
// Random instances
//------------------------------------------------------------------------------

inline ComplexMatrix random_gaussian_matrix(Index rows, Index cols, RngStream& rng) {
  ComplexMatrix g(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  return g;
}

// Haar-ish isometry from the QR of a Gaussian matrix, R-diagonal phases fixed.
inline ComplexMatrix random_isometry(Index rows, Index cols, RngStream& rng) {
  if (rows < cols) throw std::invalid_argument("random_isometry: rows must be >= cols");
  ComplexMatrix g = random_gaussian_matrix(rows, cols, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(rows, cols);
  ComplexMatrix r = q.adjoint() * g;
  for (Index j = 0; j < cols; ++j) {
    const Complex diag = r(j, j);
    if (std::abs(diag) > 0.0) q.col(j) *= std::conj(diag / std::abs(diag));
  }
  return q;
}

inline ComplexMatrix random_unitary(Index d, RngStream& rng) { return random_isometry(d, d, rng); }

// Stinespring sampling: slice a random isometry C^{d_in} -> C^{d_out (x) rank}
// into kraus_rank Kraus operators. Deterministic in the seed.
inline QuantumChannel random_channel(Index d_in, Index d_out, Index kraus_rank,
                                     std::uint64_t seed) {
  if (kraus_rank < 1 || kraus_rank > d_in * d_out)
    throw std::invalid_argument("random_channel: kraus_rank must be in [1, d_in*d_out]");
  if (d_out * kraus_rank < d_in)
    throw std::invalid_argument("random_channel: d_out*kraus_rank < d_in admits no isometry");
  RngStream rng(seed);
  const ComplexMatrix v = random_isometry(d_out * kraus_rank, d_in, rng);
  std::vector<ComplexMatrix> ks;
  ks.reserve(static_cast<std::size_t>(kraus_rank));
  for (Index e = 0; e < kraus_rank; ++e) {
    ComplexMatrix k(d_out, d_in);
    for (Index a = 0; a < d_out; ++a) k.row(a) = v.row(a * kraus_rank + e);
    ks.push_back(std::move(k));
  }
  return QuantumChannel::from_kraus(std::move(ks), d_in, d_out);
}

// Random mixed-unitary channel; unital by construction.
inline QuantumChannel random_unital_channel(Index d, Index num_unitaries, std::uint64_t seed) {
  if (num_unitaries < 1) throw std::invalid_argument("random_unital_channel: need >= 1 unitary");
  RngStream rng(seed);
  std::vector<double> w(static_cast<std::size_t>(num_unitaries));
  double total = 0.0;
  for (auto& x : w) {
    x = 0.05 + rng.uniform();
    total += x;
  }
  std::vector<ComplexMatrix> ks;
  for (Index j = 0; j < num_unitaries; ++j)
    ks.push_back(std::sqrt(w[static_cast<std::size_t>(j)] / total) * random_unitary(d, rng));
  return QuantumChannel::from_kraus(std::move(ks), d, d);
}

inline DensityOperator random_density_operator(Index d, RngStream& rng) {
  ComplexMatrix g = random_gaussian_matrix(d, d, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityOperator{rho};
}

inline DensityOperator random_density_operator(Index d, std::uint64_t seed) {
  RngStream rng(seed);
  return random_density_operator(d, rng);
}

// Random Hermitian observable rescaled to spectral norm 1.
inline Observable random_observable(Index d, RngStream& rng) {
  ComplexMatrix g = random_gaussian_matrix(d, d, rng);
  ComplexMatrix h = 0.5 * (g + g.adjoint());
  auto es = hermitian_eigs(h);
  const double norm = es.eigenvalues().cwiseAbs().maxCoeff();
  return Observable::validated(h / norm);
}

inline Observable random_observable(Index d, std::uint64_t seed) {
  RngStream rng(seed);
  return random_observable(d, rng);
}

}  // namespace dualchan

#endif  // DUALCHAN_CHANNEL_HPP
