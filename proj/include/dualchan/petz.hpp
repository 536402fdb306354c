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

#ifndef DUALCHAN_PETZ_HPP
#define DUALCHAN_PETZ_HPP

#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dualchan/channel.hpp"
#include "dualchan/conj_sampler.hpp"
#include "dualchan/linalg.hpp"

namespace dualchan {

// Petz recovery map P_{sigma,N} = sigma^{1/2} N^dag( N(sigma)^{-1/2} (.)
// N(sigma)^{-1/2} ) sigma^{1/2}, a map B -> A. On rank-deficient N(sigma) the
// pseudo-inverse square root restricts everything to the support; that case is
// flagged, not an error, and the estimator below uses the same convention.

struct PetzMap {
  Index d_in = 0;   // = channel d_out (B)
  Index d_out = 0;  // = channel d_in (A)
  std::vector<ComplexMatrix> kraus;
  bool support_restricted = false;
  ComplexMatrix nsigma_inv_sqrt;  // N(sigma)^{-1/2} on the support
  ComplexMatrix sigma_sqrt;

  ComplexMatrix apply(const ComplexMatrix& x) const { return apply_map(kraus, x); }
  ComplexMatrix choi() const { return kraus_to_choi(kraus, d_in, d_out); }
};

inline PetzMap exact_petz(const QuantumChannel& n, const DensityOperator& sigma,
                          double tol = 1e-10) {
  if (sigma.dim() != n.d_in) throw std::invalid_argument("exact_petz: sigma must live on A");
  PetzMap p;
  p.d_in = n.d_out;
  p.d_out = n.d_in;
  p.sigma_sqrt = psd_power(sigma.matrix, 0.5, tol);
  const ComplexMatrix nsigma = n.apply_matrix(sigma.matrix);
  p.nsigma_inv_sqrt = psd_power(nsigma, -0.5, tol);
  auto es = hermitian_eigs(nsigma, 1e-8);
  p.support_restricted = (es.eigenvalues().array() <= tol).any();
  // N^dag has Kraus {K^dag}, so P has Kraus { sigma^{1/2} K^dag N(sigma)^{-1/2} }.
  for (const auto& k : n.kraus) p.kraus.push_back(p.sigma_sqrt * k.adjoint() * p.nsigma_inv_sqrt);
  return p;
}

//------------------------------------------------------------------------------
// Estimation instances
//------------------------------------------------------------------------------

struct PetzInstance {
  QuantumChannel channel;   // A -> B
  DensityOperator sigma;    // prior on A
  DensityOperator omega;    // input on B
  Observable observable;    // on A
  double support_tol = 1e-10;

  Index d_a() const { return channel.d_in; }
  Index d_b() const { return channel.d_out; }

  // Weight of omega outside the support of N(sigma); nonzero leakage means the
  // estimate targets the support-restricted instance.
  double support_leakage() const {
    const ComplexMatrix proj =
        support_projector(channel.apply_matrix(sigma.matrix), support_tol);
    const ComplexMatrix outside = identity(d_b()) - proj;
    return real_trace(outside * omega.matrix * outside, 1e-8);
  }

  bool support_restricted_flag() const { return support_leakage() > support_tol; }

  void validate() const {
    if (sigma.dim() != d_a()) throw std::invalid_argument("PetzInstance: sigma must live on A");
    if (omega.dim() != d_b()) throw std::invalid_argument("PetzInstance: omega must live on B");
    if (observable.dim() != d_a())
      throw std::invalid_argument("PetzInstance: observable must live on A");
    observable.require_unit_bounded();
  }
};

// Exact value of tr[O P_{sigma,N}(omega)].
inline double petz_expectation_oracle(const PetzInstance& inst) {
  inst.validate();
  const PetzMap p = exact_petz(inst.channel, inst.sigma, inst.support_tol);
  return real_trace(inst.observable.matrix * p.apply(inst.omega.matrix), 1e-10);
}

//------------------------------------------------------------------------------
// Acceptance-rate bound and attempt budgeting
//------------------------------------------------------------------------------

struct AcceptanceBound {
  double eta = 0.0;
  double zeta_max = 0.0;  // max eigenvalue of N(I/d_A)
};

// eta = min{ 1/(d_B(d_A+1)), (1 - zeta_max)/(d_B(d_A-1)) }, the per-round
// lower bound used for attempt budgeting.
inline AcceptanceBound acceptance_bound(const QuantumChannel& n) {
  if (n.d_in < 2) throw std::invalid_argument("acceptance_bound: d_A must be >= 2");
  AcceptanceBound b;
  const ComplexMatrix out = n.apply_matrix(identity(n.d_in) / static_cast<double>(n.d_in));
  b.zeta_max = max_hermitian_eigenvalue(out, 1e-8);
  const double da = static_cast<double>(n.d_in);
  const double db = static_cast<double>(n.d_out);
  const double branch_plus = 1.0 / (db * (da + 1.0));
  const double branch_minus = std::max(0.0, 1.0 - b.zeta_max) / (db * (da - 1.0));
  b.eta = std::min(branch_plus, branch_minus);
  return b;
}

// Smallest M with Pr[Binomial(M, eta) < n] <= delta by the Chernoff bound:
// M = ceil((n + L + sqrt(L^2 + 2 n L)) / eta), L = ln(2/delta).
inline std::int64_t chernoff_attempts(std::int64_t n_accepted_target, double delta, double eta) {
  if (n_accepted_target < 1) throw std::invalid_argument("chernoff_attempts: n must be >= 1");
  if (!(delta > 0.0) || !(delta < 1.0))
    throw std::invalid_argument("chernoff_attempts: delta must lie in (0, 1)");
  if (!(eta > 0.0) || eta > 1.0)
    throw std::invalid_argument("chernoff_attempts: eta must lie in (0, 1]");
  const double l = std::log(2.0 / delta);
  const double n = static_cast<double>(n_accepted_target);
  const double m_eta = n + l + std::sqrt(l * l + 2.0 * n * l);
  return static_cast<std::int64_t>(std::ceil(m_eta / eta));
}

// Attempt budget for estimate_petz: the accepted-sample Hoeffding count at the
// sign-rescaled sample range gamma, inflated by the Chernoff bound so that
// enough accepted samples arrive with probability 1 - delta/2 (delta split in
// two between the count shortfall and the estimate deviation).
inline std::int64_t petz_attempt_budget(double epsilon, double delta, double gamma, double eta) {
  const std::int64_t n_target = hoeffding_rounds(epsilon, delta / 2.0, gamma);
  return std::max(n_target, chernoff_attempts(n_target, delta / 2.0, eta));
}

//------------------------------------------------------------------------------
// Quasi-sampling estimator
//------------------------------------------------------------------------------

struct PetzEstimationReport {
  double estimate = 0.0;
  double std_error = 0.0;
  std::int64_t attempts = 0;
  std::int64_t accepted = 0;
  double empirical_acceptance = 0.0;
  double eta_bound = 0.0;
  std::uint64_t seed = 0;
  double oracle_value = 0.0;
  std::array<std::int64_t, 3> branch_attempts{};
  std::array<std::int64_t, 3> branch_accepted{};
  double elapsed_seconds = 0.0;
};

// Quasi-sampling estimator of tr[O P_{sigma,N}(omega)] with block-encoding
// subnormalizations simulated as exact CP maps and every postselection
// resolved at the density-matrix level. Each attempt samples a branch
// (x, y), accepts with the exact probability of the joint outcome
// |0><0|_{R'} (x) Phi_{B''B'} (x) |0><0|_R, and on acceptance contributes the
// unconditionally rescaled value
//     X = sign * gamma * d_A d_B * c1^2 c2^2 * A(outcome),
// zero on rejection, where c1 = ||N(sigma)^{-1/2}||_inf on the support and
// c2 = ||sigma^{1/2}||_inf. The mean over all attempts is unbiased for the
// target by linearity of the branch decomposition.
inline PetzEstimationReport estimate_petz_attempts(const PetzInstance& inst,
                                                   std::int64_t attempts, std::uint64_t seed,
                                                   int workers = 1) {
  inst.validate();
  if (attempts < 1) throw std::invalid_argument("estimate_petz_attempts: attempts must be >= 1");
  const auto t0 = std::chrono::steady_clock::now();

  const Index d_a = inst.d_a();
  const Index d_b = inst.d_b();
  const QuantumChannel& n = inst.channel;
  const QuasiSampler sampler = quasiprob_weights(d_a, d_b);

  const ComplexMatrix nsigma = n.apply_matrix(inst.sigma.matrix);
  const ComplexMatrix m1 = psd_power(nsigma, -0.5, inst.support_tol);  // N(sigma)^{-1/2}
  const ComplexMatrix sigma_sqrt = psd_power(inst.sigma.matrix, 0.5, inst.support_tol);
  const double c1 = max_hermitian_eigenvalue(m1, 1e-8);
  const double c2 = max_hermitian_eigenvalue(sigma_sqrt, 1e-8);

  // Subnormalized encoding of omega; its trace is the R-flag success probability.
  const ComplexMatrix k_enc = (m1 / c1) * inst.omega.matrix * (m1 / c1);
  if (real_trace(k_enc, 1e-8) < 1e-14)
    throw std::runtime_error(
        "estimate_petz: omega has numerically zero overlap with supp N(sigma); "
        "acceptance probability vanishes");

  // Per-branch unnormalized final state on A. The teleportation realizes the
  // transpose of the bracketed composite, W^x o N^T o W^y, with heralding
  // factor 1/(d_A d_B).
  std::array<double, 3> accept_prob{};
  std::vector<std::vector<double>> outcome_cdf(3);
  const double dim_factor = static_cast<double>(d_a * d_b);
  for (int i = 0; i < 3; ++i) {
    const auto& b = sampler.branches[static_cast<std::size_t>(i)];
    const ComplexMatrix teleported =
        werner_apply(transpose_map_apply(n, werner_apply(k_enc, d_b, b.post_sign)), d_a,
                     b.pre_sign) /
        dim_factor;
    const ComplexMatrix final_state = (sigma_sqrt / c2) * teleported * (sigma_sqrt / c2);
    double q = real_trace(final_state, 1e-8);
    if (q < 0.0 && q > -1e-12) q = 0.0;
    if (q < 0.0 || q > 1.0 + 1e-9)
      throw std::runtime_error("estimate_petz: acceptance probability out of range: " +
                               std::to_string(q));
    accept_prob[static_cast<std::size_t>(i)] = std::min(q, 1.0);
    std::vector<double> w(static_cast<std::size_t>(d_a));
    for (Index k = 0; k < d_a; ++k) {
      const Complex p = inst.observable.eigenvectors.col(k).adjoint() * final_state *
                        inst.observable.eigenvectors.col(k);
      w[static_cast<std::size_t>(k)] = std::max(p.real(), 0.0);
    }
    outcome_cdf[static_cast<std::size_t>(i)] = prefix_sums(w);
  }

  const std::vector<double> branch_cdf = prefix_sums({sampler.branches[0].probability,
                                                      sampler.branches[1].probability,
                                                      sampler.branches[2].probability});
  const double scale = sampler.gamma * dim_factor * c1 * c1 * c2 * c2;

  // Cell layout: per branch, outcomes 0..d_a-1 then a rejection cell.
  const std::size_t branch_cells = static_cast<std::size_t>(d_a) + 1;
  auto tally =
      detail::run_tallied_rounds(attempts, 3 * branch_cells, workers, [&](std::int64_t m) {
        RngStream rng(seed, static_cast<std::uint64_t>(m));
        const int branch = rng.sample_cdf(branch_cdf);
        const std::size_t base = static_cast<std::size_t>(branch) * branch_cells;
        if (rng.uniform() >= accept_prob[static_cast<std::size_t>(branch)])
          return base + static_cast<std::size_t>(d_a);  // rejected
        const int outcome = rng.sample_cdf(outcome_cdf[static_cast<std::size_t>(branch)]);
        return base + static_cast<std::size_t>(outcome);
      });

  PetzEstimationReport rep;
  rep.attempts = attempts;
  rep.seed = seed;
  rep.eta_bound = acceptance_bound(n).eta;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < 3; ++i) {
    const std::size_t base = static_cast<std::size_t>(i) * branch_cells;
    std::int64_t branch_total = 0, branch_acc = 0;
    for (Index k = 0; k < d_a; ++k) {
      const auto count = tally.counts[base + static_cast<std::size_t>(k)];
      branch_total += count;
      branch_acc += count;
      if (count == 0) continue;
      const double x = sampler.branches[static_cast<std::size_t>(i)].sign * scale *
                       inst.observable.eigenvalues(k);
      sum += static_cast<double>(count) * x;
      sum_sq += static_cast<double>(count) * x * x;
    }
    branch_total += tally.counts[base + static_cast<std::size_t>(d_a)];
    rep.branch_attempts[static_cast<std::size_t>(i)] = branch_total;
    rep.branch_accepted[static_cast<std::size_t>(i)] = branch_acc;
    rep.accepted += branch_acc;
  }
  rep.empirical_acceptance = static_cast<double>(rep.accepted) / static_cast<double>(attempts);
  rep.estimate = sum / static_cast<double>(attempts);
  if (attempts > 1) {
    const double var =
        std::max(0.0, (sum_sq - static_cast<double>(attempts) * rep.estimate * rep.estimate) /
                          static_cast<double>(attempts - 1));
    rep.std_error = std::sqrt(var / static_cast<double>(attempts));
  }
  rep.oracle_value = petz_expectation_oracle(inst);
  rep.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

inline PetzEstimationReport estimate_petz(const PetzInstance& inst, double epsilon, double delta,
                                          std::uint64_t seed, int workers = 1) {
  if (!(epsilon > 0.0) || !(epsilon < 1.0))
    throw std::invalid_argument("estimate_petz: epsilon must lie in (0, 1)");
  if (!(delta > 0.0) || !(delta < 1.0))
    throw std::invalid_argument("estimate_petz: delta must lie in (0, 1)");
  inst.validate();
  const double gamma = quasiprob_gamma(inst.d_a(), inst.d_b());
  const double eta = acceptance_bound(inst.channel).eta;
  if (!(eta > 0.0))
    throw std::runtime_error("estimate_petz: acceptance bound eta is zero for this channel");
  const std::int64_t attempts = petz_attempt_budget(epsilon, delta, gamma, eta);
  return estimate_petz_attempts(inst, attempts, seed, workers);
}

}  // namespace dualchan

#endif  // DUALCHAN_PETZ_HPP
