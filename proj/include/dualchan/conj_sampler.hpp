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

#ifndef DUALCHAN_CONJ_SAMPLER_HPP
#define DUALCHAN_CONJ_SAMPLER_HPP

#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "dualchan/channel.hpp"
#include "dualchan/linalg.hpp"
#include "dualchan/matrix.hpp"
#include "dualchan/rng.hpp"

namespace dualchan {

// Virtual-comb realization of channel complex conjugation. The comb Choi
// lives on A'ABB' (in that factor order): A'A carries the pre-processing
// Werner-Holevo channel W_{d_A}^x, BB' the post-processing W_{d_B}^y.

inline double quasiprob_gamma(Index d_a, Index d_b) {
  return static_cast<double>(d_a * d_b - d_a + 1);
}

struct QuasiBranch {
  double probability = 0.0;
  int sign = +1;
  WernerSign pre_sign = WernerSign::plus;
  WernerSign post_sign = WernerSign::plus;
  QuantumChannel pre_channel;   // W_{d_A}^x
  QuantumChannel post_channel;  // W_{d_B}^y
};

struct QuasiSampler {
  Index d_a = 0;
  Index d_b = 0;
  double gamma = 0.0;
  std::array<QuasiBranch, 3> branches;
};

// Branch probabilities and signs of the quasi-probability decomposition:
// p1 = (d_B+1)/(2 gamma), p2 = (d_A-1)(d_B-1)/(2 gamma),
// p3 = d_A(d_B-1)/(2 gamma), signs (+, +, -), branch channel pairs
// (x, y) in {(+,+), (-,-), (+,-)}.
inline QuasiSampler quasiprob_weights(Index d_a, Index d_b) {
  if (d_a < 2 || d_b < 2) throw std::invalid_argument("quasiprob_weights: dims must be >= 2");
  QuasiSampler s;
  s.d_a = d_a;
  s.d_b = d_b;
  s.gamma = quasiprob_gamma(d_a, d_b);
  const double da = static_cast<double>(d_a);
  const double db = static_cast<double>(d_b);
  const std::array<double, 3> probs = {(db + 1.0) / (2.0 * s.gamma),
                                       (da - 1.0) * (db - 1.0) / (2.0 * s.gamma),
                                       da * (db - 1.0) / (2.0 * s.gamma)};
  const std::array<int, 3> signs = {+1, +1, -1};
  const std::array<std::pair<WernerSign, WernerSign>, 3> pairs = {
      std::pair{WernerSign::plus, WernerSign::plus},
      std::pair{WernerSign::minus, WernerSign::minus},
      std::pair{WernerSign::plus, WernerSign::minus}};
  for (int i = 0; i < 3; ++i) {
    auto& b = s.branches[static_cast<std::size_t>(i)];
    b.probability = probs[static_cast<std::size_t>(i)];
    b.sign = signs[static_cast<std::size_t>(i)];
    b.pre_sign = pairs[static_cast<std::size_t>(i)].first;
    b.post_sign = pairs[static_cast<std::size_t>(i)].second;
    b.pre_channel = werner_holevo(d_a, b.pre_sign);
    b.post_channel = werner_holevo(d_b, b.post_sign);
  }
  return s;
}

struct VirtualCombChoi {
  Index d_a = 0;
  Index d_b = 0;
  ComplexMatrix choi;                    // on A'ABB'
  std::array<ComplexMatrix, 3> terms;    // Choi products W^x (x) W^y
  std::array<double, 3> weights{};       // gamma * p_i
  std::array<int, 3> signs{};

  double l1_weight() const { return weights[0] + weights[1] + weights[2]; }
};

// Signed weighted sum of the three Werner-Holevo Choi products. Equals the
// closed form F_{A'A} (x) F_{BB'} + I/(d_A+1) - d_A (F_{A'A} (x) I)/(d_A+1).
inline VirtualCombChoi virtual_comb_choi(Index d_a, Index d_b) {
  const QuasiSampler s = quasiprob_weights(d_a, d_b);
  VirtualCombChoi comb;
  comb.d_a = d_a;
  comb.d_b = d_b;
  comb.choi = ComplexMatrix::Zero(d_a * d_a * d_b * d_b, d_a * d_a * d_b * d_b);
  for (int i = 0; i < 3; ++i) {
    const auto& b = s.branches[static_cast<std::size_t>(i)];
    comb.terms[static_cast<std::size_t>(i)] = tensor(b.pre_channel.choi, b.post_channel.choi);
    comb.weights[static_cast<std::size_t>(i)] = s.gamma * b.probability;
    comb.signs[static_cast<std::size_t>(i)] = b.sign;
    comb.choi += static_cast<double>(b.sign) * comb.weights[static_cast<std::size_t>(i)] *
                 comb.terms[static_cast<std::size_t>(i)];
  }
  return comb;
}

// Choi of the map the comb induces on a channel with Choi n_choi:
// tr_{AB}[comb (n_choi^T (x) I_{A'B'})], an operator on A'B'.
inline ComplexMatrix apply_comb(const VirtualCombChoi& comb, const QuantumChannel& n) {
  if (n.d_in != comb.d_a || n.d_out != comb.d_b)
    throw std::invalid_argument("apply_comb: channel dimensions do not match the comb");
  const SystemDims dims{comb.d_a, comb.d_a, comb.d_b, comb.d_b};
  const ComplexMatrix slot = embed_on_subsystems(n.choi.transpose().eval(), dims, {1, 2});
  return partial_trace(comb.choi * slot, dims, {0, 3});
}

// Matrix L of the linear action X -> tr_{AB}[comb (X^T (x) I_{A'B'})] in the
// row-major vec basis: unvec(L vec(X^T)) evaluates the comb on the slot
// operator X. Precomputing L turns each evaluation into a matrix-vector
// product, which the certificate checks use heavily.
inline ComplexMatrix comb_action_matrix(const ComplexMatrix& comb_choi, Index d_a, Index d_b) {
  const Index n = d_a * d_b;
  if (comb_choi.rows() != n * n || comb_choi.cols() != n * n)
    throw std::invalid_argument("comb_action_matrix: Choi side must be (d_a*d_b)^2");
  ComplexMatrix l(n * n, n * n);
  // Full-space composite index over (A', A, B, B') is
  // ((ap*d_a + a)*d_b + b)*d_b + bp.
  for (Index ap = 0; ap < d_a; ++ap)
    for (Index bp = 0; bp < d_b; ++bp)
      for (Index app = 0; app < d_a; ++app)
        for (Index bpp = 0; bpp < d_b; ++bpp) {
          const Index row = (ap * d_b + bp) * n + (app * d_b + bpp);
          for (Index c = 0; c < d_a; ++c)
            for (Index d = 0; d < d_b; ++d)
              for (Index a = 0; a < d_a; ++a)
                for (Index b = 0; b < d_b; ++b) {
                  const Index col = (c * d_b + d) * n + (a * d_b + b);
                  l(row, col) = comb_choi(((ap * d_a + a) * d_b + b) * d_b + bp,
                                          ((app * d_a + c) * d_b + d) * d_b + bpp);
                }
        }
  return l;
}

inline ComplexMatrix comb_action_apply(const ComplexMatrix& action, const ComplexMatrix& slot_op) {
  const Index n = slot_op.rows();
  ComplexVector v(n * n);
  const ComplexMatrix xt = slot_op.transpose();
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) v(i * n + j) = xt(i, j);
  const ComplexVector w = action * v;
  ComplexMatrix out(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) out(i, j) = w(i * n + j);
  return out;
}

//------------------------------------------------------------------------------
// Monte Carlo estimation of tr[O N*(rho)]
//------------------------------------------------------------------------------

struct EstimationReport {
  double estimate = 0.0;
  double std_error = 0.0;
  std::int64_t rounds = 0;
  std::int64_t accepted = 0;  // every round of this protocol is accepted
  std::uint64_t seed = 0;
  double oracle_value = 0.0;
  double elapsed_seconds = 0.0;
  double max_abs_sample = 0.0;
};

namespace detail {

// Deterministic reduction for sampled estimators: rounds only ever produce one
// of a finite set of cell values, so workers tally integer counts per cell and
// the merged sums are identical for every parallelism degree.
struct CellTally {
  std::vector<std::int64_t> counts;

  explicit CellTally(std::size_t cells) : counts(cells, 0) {}
  void merge(const CellTally& other) {
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
  }
};

template <typename RoundFn>
inline CellTally run_tallied_rounds(std::int64_t rounds, std::size_t cells, int workers,
                                    RoundFn&& fn) {
  if (workers < 1) workers = 1;
  if (workers > 64) workers = 64;
  if (rounds < workers) workers = static_cast<int>(std::max<std::int64_t>(rounds, 1));

  std::vector<CellTally> partials(static_cast<std::size_t>(workers), CellTally(cells));
  auto run_chunk = [&](int w, std::int64_t begin, std::int64_t end) {
    auto& tally = partials[static_cast<std::size_t>(w)];
    for (std::int64_t m = begin; m < end; ++m) {
      const std::size_t cell = fn(m);
      ++tally.counts[cell];
    }
  };

  if (workers == 1) {
    run_chunk(0, 0, rounds);
  } else {
    std::vector<std::thread> pool;
    const std::int64_t chunk = (rounds + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const std::int64_t begin = w * chunk;
      const std::int64_t end = std::min<std::int64_t>(begin + chunk, rounds);
      if (begin >= end) break;
      pool.emplace_back(run_chunk, w, begin, end);
    }
    for (auto& t : pool) t.join();
  }

  CellTally total(cells);
  for (const auto& p : partials) total.merge(p);
  return total;
}

}  // namespace detail

// Quasi-probability estimator for tr[O N*(rho)]. Each round
// samples a branch, measures the exact branch output state in O's eigenbasis
// and records X = sign * gamma * A(outcome); the mean over rounds is unbiased
// with |X| <= gamma.
inline EstimationReport estimate_conjugate(const QuantumChannel& n, const DensityOperator& rho,
                                           const Observable& o, std::int64_t rounds,
                                           std::uint64_t seed, int workers = 1) {
  if (rounds < 1) throw std::invalid_argument("estimate_conjugate: rounds must be >= 1");
  if (rho.dim() != n.d_in) throw std::invalid_argument("estimate_conjugate: state side != d_in");
  if (o.dim() != n.d_out) throw std::invalid_argument("estimate_conjugate: observable side != d_out");
  o.require_unit_bounded();

  const auto t0 = std::chrono::steady_clock::now();
  const QuasiSampler sampler = quasiprob_weights(n.d_in, n.d_out);
  const Index d_out = n.d_out;

  // Exact branch output states and their Born distributions in O's eigenbasis.
  std::vector<double> branch_cdf;
  std::vector<std::vector<double>> outcome_cdf(3);
  std::array<double, 3> probs{};
  for (int i = 0; i < 3; ++i) {
    const auto& b = sampler.branches[static_cast<std::size_t>(i)];
    probs[static_cast<std::size_t>(i)] = b.probability;
    const ComplexMatrix state =
        werner_apply(n.apply_matrix(werner_apply(rho.matrix, n.d_in, b.pre_sign)), n.d_out,
                     b.post_sign);
    std::vector<double> w(static_cast<std::size_t>(d_out));
    for (Index k = 0; k < d_out; ++k) {
      const Complex p = o.eigenvectors.col(k).adjoint() * state * o.eigenvectors.col(k);
      w[static_cast<std::size_t>(k)] = std::max(p.real(), 0.0);
    }
    outcome_cdf[static_cast<std::size_t>(i)] = prefix_sums(w);
  }
  branch_cdf = prefix_sums({probs[0], probs[1], probs[2]});

  // Cell layout: branch * d_out + outcome.
  const std::size_t cells = 3 * static_cast<std::size_t>(d_out);
  auto tally = detail::run_tallied_rounds(rounds, cells, workers, [&](std::int64_t m) {
    RngStream rng(seed, static_cast<std::uint64_t>(m));
    const int branch = rng.sample_cdf(branch_cdf);
    const int outcome = rng.sample_cdf(outcome_cdf[static_cast<std::size_t>(branch)]);
    return static_cast<std::size_t>(branch) * static_cast<std::size_t>(d_out) +
           static_cast<std::size_t>(outcome);
  });

  double sum = 0.0, sum_sq = 0.0, max_abs_sample = 0.0;
  for (int i = 0; i < 3; ++i)
    for (Index k = 0; k < d_out; ++k) {
      const auto count = tally.counts[static_cast<std::size_t>(i) * static_cast<std::size_t>(d_out) +
                                      static_cast<std::size_t>(k)];
      if (count == 0) continue;
      const double x =
          sampler.branches[static_cast<std::size_t>(i)].sign * sampler.gamma * o.eigenvalues(k);
      sum += static_cast<double>(count) * x;
      sum_sq += static_cast<double>(count) * x * x;
      max_abs_sample = std::max(max_abs_sample, std::abs(x));
    }

  EstimationReport rep;
  rep.rounds = rounds;
  rep.accepted = rounds;
  rep.seed = seed;
  rep.estimate = sum / static_cast<double>(rounds);
  if (rounds > 1) {
    const double var =
        std::max(0.0, (sum_sq - static_cast<double>(rounds) * rep.estimate * rep.estimate) /
                          static_cast<double>(rounds - 1));
    rep.std_error = std::sqrt(var / static_cast<double>(rounds));
  }
  rep.max_abs_sample = max_abs_sample;
  rep.oracle_value =
      real_trace(o.matrix * apply_map(conjugate_channel(n).kraus, rho.matrix), 1e-8);
  rep.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

// Two-sided Hoeffding count for variables bounded in [-gamma, gamma]:
// ceil(2 gamma^2 ln(2/delta) / epsilon^2).
inline std::int64_t hoeffding_rounds(double epsilon, double delta, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("hoeffding_rounds: gamma must be positive");
  if (!(epsilon > 0.0) || epsilon > gamma)
    throw std::invalid_argument("hoeffding_rounds: epsilon must lie in (0, gamma]");
  if (!(delta > 0.0) || !(delta < 1.0))
    throw std::invalid_argument("hoeffding_rounds: delta must lie in (0, 1)");
  const double raw = 2.0 * gamma * gamma * std::log(2.0 / delta) / (epsilon * epsilon);
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(raw)));
}

}  // namespace dualchan

#endif  // DUALCHAN_CONJ_SAMPLER_HPP
