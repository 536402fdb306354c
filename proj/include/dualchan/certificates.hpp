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

#ifndef DUALCHAN_CERTIFICATES_HPP
#define DUALCHAN_CERTIFICATES_HPP

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "dualchan/channel.hpp"
#include "dualchan/conj_sampler.hpp"
#include "dualchan/linalg.hpp"

namespace dualchan {

// Closed-form primal and dual feasible points certifying that the minimum
// sampling overhead (base norm) of a 1-slot virtual comb realizing channel
// conjugation equals d_A d_B - d_A + 1. No SDP solver is involved: both
// certificates are explicit, so verification reduces to constraint checks and
// objective evaluation.

//------------------------------------------------------------------------------
// Hermitian operator bases
//------------------------------------------------------------------------------

struct HermitianBasis {
  Index dimension = 0;
  std::vector<ComplexMatrix> elements;  // d^2 entries, elements[0] = I/sqrt(d)
};

// Generalized Gell-Mann basis, orthonormal under the Hilbert-Schmidt inner
// product. Order: identity, diagonal family, symmetric off-diagonal family,
// antisymmetric off-diagonal family. Kets here are 0-based; the off-diagonal
// symmetric family uses the Hermitian (+) sign convention.
inline HermitianBasis gell_mann_basis(Index d) {
  if (d < 2) throw std::invalid_argument("gell_mann_basis: d must be >= 2");
  HermitianBasis basis;
  basis.dimension = d;
  basis.elements.reserve(static_cast<std::size_t>(d * d));
  basis.elements.push_back(identity(d) / std::sqrt(static_cast<double>(d)));
  for (Index m = 1; m < d; ++m) {
    ComplexMatrix lam = ComplexMatrix::Zero(d, d);
    const double c = std::sqrt(1.0 / (static_cast<double>(m) * static_cast<double>(m + 1)));
    for (Index j = 0; j < m; ++j) lam(j, j) = c;
    lam(m, m) = -c * static_cast<double>(m);
    basis.elements.push_back(lam);
  }
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (Index j = 0; j < d; ++j)
    for (Index k = j + 1; k < d; ++k) {
      ComplexMatrix sym = ComplexMatrix::Zero(d, d);
      sym(j, k) = inv_sqrt2;
      sym(k, j) = inv_sqrt2;
      basis.elements.push_back(sym);
    }
  for (Index j = 0; j < d; ++j)
    for (Index k = j + 1; k < d; ++k) {
      ComplexMatrix anti = ComplexMatrix::Zero(d, d);
      anti(j, k) = Complex(0.0, -inv_sqrt2);
      anti(k, j) = Complex(0.0, inv_sqrt2);
      basis.elements.push_back(anti);
    }
  return basis;
}

// Orthonormal basis of ker(tr_B): the d_A^2 (d_B^2 - 1) products
// L_A^(alpha) (x) L_B^(beta) with beta >= 1, listed alpha-major. The first
// d_B^2 - 1 entries (alpha = 0) are the ones with tr_A != 0.
inline std::vector<ComplexMatrix> traceless_b_basis(Index d_a, Index d_b) {
  if (d_a < 2 || d_b < 2) throw std::invalid_argument("traceless_b_basis: dims must be >= 2");
  const HermitianBasis la = gell_mann_basis(d_a);
  const HermitianBasis lb = gell_mann_basis(d_b);
  std::vector<ComplexMatrix> delta;
  delta.reserve(static_cast<std::size_t>(d_a * d_a * (d_b * d_b - 1)));
  for (Index alpha = 0; alpha < d_a * d_a; ++alpha)
    for (Index beta = 1; beta < d_b * d_b; ++beta)
      delta.push_back(tensor(la.elements[static_cast<std::size_t>(alpha)],
                             lb.elements[static_cast<std::size_t>(beta)]));
  return delta;
}

//------------------------------------------------------------------------------
// Certificates
//------------------------------------------------------------------------------

struct PrimalCertificate {
  ComplexMatrix c1;  // on A'ABB'
  ComplexMatrix c2;
  double p1_hat = 0.0;
  double p2_hat = 0.0;
};

// C1 = (d_B+1)/2 W+ (x) W+ + (d_A-1)(d_B-1)/2 W- (x) W-,
// C2 = d_A(d_B-1)/2 W+ (x) W-; objective p1 + p2 = d_A d_B - d_A + 1.
inline PrimalCertificate primal_certificate(Index d_a, Index d_b) {
  if (d_a < 2 || d_b < 2) throw std::invalid_argument("primal_certificate: dims must be >= 2");
  const double da = static_cast<double>(d_a);
  const double db = static_cast<double>(d_b);
  const ComplexMatrix wa_plus = werner_holevo(d_a, WernerSign::plus).choi;
  const ComplexMatrix wa_minus = werner_holevo(d_a, WernerSign::minus).choi;
  const ComplexMatrix wb_plus = werner_holevo(d_b, WernerSign::plus).choi;
  const ComplexMatrix wb_minus = werner_holevo(d_b, WernerSign::minus).choi;
  PrimalCertificate cert;
  cert.c1 = 0.5 * (db + 1.0) * tensor(wa_plus, wb_plus) +
            0.5 * (da - 1.0) * (db - 1.0) * tensor(wa_minus, wb_minus);
  cert.c2 = 0.5 * da * (db - 1.0) * tensor(wa_plus, wb_minus);
  cert.p1_hat = 0.5 * (da * db - da + 2.0);
  cert.p2_hat = 0.5 * da * (db - 1.0);
  return cert;
}

struct DualCertificate {
  ComplexMatrix x;                 // on A'B'
  std::vector<ComplexMatrix> g;    // aligned with traceless_b_basis(d_a, d_b)
  ComplexMatrix z1, z2;            // on A'B
  ComplexMatrix y1, y2;            // on A'AB
};

// X = I/(d_A d_B), Z = I/(d_A d_B), Y = I, and G_j proportional to Delta_j^T
// with coefficient (d_A+d_B)/(d_A(d_B^2+d_B)) on the tr_A != 0 family and
// 1/(d_A(d_B+1)) otherwise. Pairing G_j with Delta_j^T makes
// sum_j Delta_j^T (x) G_j = (F + I/d_B) (x) (F - I/d_B) / (d_A(d_B+1)), whose
// extreme eigenvalues are (d_B-1)/(d_A d_B^2) and -(d_B+1)/(d_A d_B^2).
inline DualCertificate dual_certificate(Index d_a, Index d_b) {
  if (d_a < 2 || d_b < 2) throw std::invalid_argument("dual_certificate: dims must be >= 2");
  const double da = static_cast<double>(d_a);
  const double db = static_cast<double>(d_b);
  const auto delta = traceless_b_basis(d_a, d_b);
  DualCertificate cert;
  cert.x = identity(d_a * d_b) / (da * db);
  cert.z1 = identity(d_a * d_b) / (da * db);
  cert.z2 = cert.z1;
  cert.y1 = identity(d_a * d_a * d_b);
  cert.y2 = cert.y1;
  const double coeff_traceful = (da + db) / (da * (db * db + db));
  const double coeff_traceless = 1.0 / (da * (db + 1.0));
  const std::size_t traceful_count = static_cast<std::size_t>(d_b * d_b - 1);
  cert.g.reserve(delta.size());
  for (std::size_t j = 0; j < delta.size(); ++j) {
    const double c = j < traceful_count ? coeff_traceful : coeff_traceless;
    cert.g.push_back(c * delta[j].transpose());
  }
  return cert;
}

//------------------------------------------------------------------------------
// Verification
//------------------------------------------------------------------------------

struct CertificateReport {
  Index d_a = 0;
  Index d_b = 0;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double expected = 0.0;  // d_A d_B - d_A + 1
  std::map<std::string, double> max_violation;
  bool pass = false;
};

namespace detail {

// Causality-constraint residual tr_{B'} C - tr_{BB'} C (x) I_B/d_B.
inline double comb_causality_violation(const ComplexMatrix& c, Index d_a, Index d_b) {
  const SystemDims dims{d_a, d_a, d_b, d_b};
  const ComplexMatrix lhs = partial_trace(c, dims, {0, 1, 2});
  const ComplexMatrix marg = partial_trace(c, dims, {0, 1});
  const ComplexMatrix rhs = tensor(marg, identity(d_b) / static_cast<double>(d_b));
  return max_abs_diff(lhs, rhs);
}

inline double comb_marginal_violation(const ComplexMatrix& c, Index d_a, Index d_b, double p) {
  const SystemDims dims{d_a, d_a, d_b, d_b};
  const ComplexMatrix marg = partial_trace(c, dims, {0, 2});
  return max_abs_diff(marg, p * identity(d_a * d_b));
}

}  // namespace detail

// Checks every constraint of the primal and dual SDPs at the closed-form
// certificates and both objective values. Failures populate the violation
// map; nothing throws.
inline CertificateReport certify_base_norm(Index d_a, Index d_b, double tol = 1e-9) {
  if (tol <= 0.0) throw std::invalid_argument("certify_base_norm: tol must be positive");
  CertificateReport rep;
  rep.d_a = d_a;
  rep.d_b = d_b;
  rep.expected = static_cast<double>(d_a * d_b - d_a + 1);
  const double da = static_cast<double>(d_a);
  const double db = static_cast<double>(d_b);
  const SystemDims dims{d_a, d_a, d_b, d_b};
  auto record = [&rep](const std::string& family, double value) {
    auto it = rep.max_violation.find(family);
    if (it == rep.max_violation.end()) {
      rep.max_violation[family] = value;
    } else if (value > it->second) {
      it->second = value;
    }
  };

  const PrimalCertificate primal = primal_certificate(d_a, d_b);
  rep.primal_objective = primal.p1_hat + primal.p2_hat;

  record("primal_psd", std::max(0.0, -min_hermitian_eigenvalue(primal.c1, 1e-8)));
  record("primal_psd", std::max(0.0, -min_hermitian_eigenvalue(primal.c2, 1e-8)));
  record("primal_causality", detail::comb_causality_violation(primal.c1, d_a, d_b));
  record("primal_causality", detail::comb_causality_violation(primal.c2, d_a, d_b));
  record("primal_marginal", detail::comb_marginal_violation(primal.c1, d_a, d_b, primal.p1_hat));
  record("primal_marginal", detail::comb_marginal_violation(primal.c2, d_a, d_b, primal.p2_hat));

  // Reproduction constraint f(X) = tr_{AB}[(C1 - C2)(X^T (x) I)] - X^T, checked
  // on the depolarizing Choi and the whole ker(tr_B) basis, which spans the
  // affine hull of channel Chois.
  const ComplexMatrix action = comb_action_matrix(primal.c1 - primal.c2, d_a, d_b);
  auto reproduction_residual = [&](const ComplexMatrix& x) {
    return max_abs_diff(comb_action_apply(action, x), x.transpose().eval());
  };
  const ComplexMatrix depol_choi = identity(d_a * d_b) / db;
  record("primal_reproduction", reproduction_residual(depol_choi));
  const auto delta = traceless_b_basis(d_a, d_b);
  for (const auto& dj : delta) record("primal_reproduction", reproduction_residual(dj));
  // Cross-check the linearity argument on random CPTP channels.
  for (int t = 0; t < 20; ++t) {
    const QuantumChannel n =
        random_channel(d_a, d_b, d_a * d_b, 0x9000u + static_cast<std::uint64_t>(t));
    record("primal_reproduction_random", reproduction_residual(n.choi));
  }

  const DualCertificate dual = dual_certificate(d_a, d_b);
  record("dual_trace", std::abs(dual.z1.trace() - Complex(1.0, 0.0)));
  record("dual_trace", std::abs(dual.z2.trace() - Complex(1.0, 0.0)));

  ComplexMatrix coupling = ComplexMatrix::Zero(dims.total(), dims.total());
  for (std::size_t j = 0; j < delta.size(); ++j)
    coupling += embed_on_subsystems(delta[j].transpose().eval(), dims, {1, 2}) *
                embed_on_subsystems(dual.g[j], dims, {0, 3});
  const ComplexMatrix rhs =
      embed_on_subsystems(depol_choi.transpose().eval(), dims, {1, 2}) *
          embed_on_subsystems(dual.x, dims, {0, 3}) +
      coupling;

  const double lambda_max_expected = (db - 1.0) / (da * db * db);
  const double lambda_min_expected = -(db + 1.0) / (da * db * db);
  record("dual_coupling_spectrum",
         std::abs(max_hermitian_eigenvalue(coupling, 1e-8) - lambda_max_expected));
  record("dual_coupling_spectrum",
         std::abs(min_hermitian_eigenvalue(coupling, 1e-8) - lambda_min_expected));

  auto dual_lhs = [&](const ComplexMatrix& y, const ComplexMatrix& z) -> ComplexMatrix {
    const ComplexMatrix y_marg = partial_trace(y, SystemDims{d_a, d_a, d_b}, {0, 1});
    return embed_on_subsystems(y, dims, {0, 1, 2}) -
           embed_on_subsystems(y_marg, dims, {0, 1}) / db +
           embed_on_subsystems(z, dims, {0, 2});
  };
  const ComplexMatrix slack1 = dual_lhs(dual.y1, dual.z1) - rhs;
  const ComplexMatrix slack2 = rhs + dual_lhs(dual.y2, dual.z2);
  record("dual_ineq1", std::max(0.0, -min_hermitian_eigenvalue(slack1, 1e-8)));
  record("dual_ineq2", std::max(0.0, -min_hermitian_eigenvalue(slack2, 1e-8)));

  double objective = real_trace(dual.x * depol_choi.transpose(), 1e-9);
  for (std::size_t j = 0; j < delta.size(); ++j)
    objective += real_trace(dual.g[j] * delta[j].transpose(), 1e-9);
  rep.dual_objective = objective;

  record("objective_gap", std::abs(rep.primal_objective - rep.expected));
  record("objective_gap", std::abs(rep.dual_objective - rep.expected));

  rep.pass = true;
  for (const auto& [family, value] : rep.max_violation)
    if (!(value < tol)) rep.pass = false;
  return rep;
}

}  // namespace dualchan

#endif  // DUALCHAN_CERTIFICATES_HPP
