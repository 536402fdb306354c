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

#include <cmath>

#include <catch2/catch_amalgamated.hpp>

#include "dualchan/conj_sampler.hpp"

using namespace dualchan;

TEST_CASE("quasiprob_weights") {
  SECTION("(2,2): gamma 3, probabilities (1/2, 1/6, 1/3)") {
    const auto s = quasiprob_weights(2, 2);
    REQUIRE(s.gamma == 3.0);
    REQUIRE(s.branches[0].probability == Catch::Approx(0.5).margin(1e-15));
    REQUIRE(s.branches[1].probability == Catch::Approx(1.0 / 6.0).margin(1e-15));
    REQUIRE(s.branches[2].probability == Catch::Approx(1.0 / 3.0).margin(1e-15));
  }

  SECTION("(2,3): gamma 5, probabilities (2/5, 1/5, 2/5)") {
    const auto s = quasiprob_weights(2, 3);
    REQUIRE(s.gamma == 5.0);
    REQUIRE(s.branches[0].probability == Catch::Approx(0.4).margin(1e-15));
    REQUIRE(s.branches[1].probability == Catch::Approx(0.2).margin(1e-15));
    REQUIRE(s.branches[2].probability == Catch::Approx(0.4).margin(1e-15));
  }

  SECTION("normalization and the signed affine identity across dims") {
    for (Index da = 2; da <= 5; ++da)
      for (Index db = 2; db <= 5; ++db) {
        const auto s = quasiprob_weights(da, db);
        double total = 0.0, signed_total = 0.0;
        for (const auto& b : s.branches) {
          REQUIRE(b.probability >= 0.0);
          total += b.probability;
          signed_total += b.sign * b.probability;
        }
        REQUIRE(total == Catch::Approx(1.0).margin(1e-12));
        // gamma * (s1 p1 + s2 p2 + s3 p3) = 1: the decomposition is affine.
        REQUIRE(s.gamma * signed_total == Catch::Approx(1.0).margin(1e-12));
      }
  }

  SECTION("stored branch channels agree with the closed-form action") {
    const auto s = quasiprob_weights(2, 3);
    RngStream rng(61);
    const ComplexMatrix xa = random_density_operator(2, rng).matrix;
    const ComplexMatrix xb = random_density_operator(3, rng).matrix;
    for (const auto& b : s.branches) {
      REQUIRE(max_abs_diff(b.pre_channel.apply_matrix(xa), werner_apply(xa, 2, b.pre_sign)) <
              1e-12);
      REQUIRE(max_abs_diff(b.post_channel.apply_matrix(xb), werner_apply(xb, 3, b.post_sign)) <
              1e-12);
    }
  }

  SECTION("branch channel pairs are ((+,+),(-,-),(+,-)) with signs (+,+,-)") {
    const auto s = quasiprob_weights(3, 2);
    REQUIRE(s.branches[0].pre_sign == WernerSign::plus);
    REQUIRE(s.branches[0].post_sign == WernerSign::plus);
    REQUIRE(s.branches[1].pre_sign == WernerSign::minus);
    REQUIRE(s.branches[1].post_sign == WernerSign::minus);
    REQUIRE(s.branches[2].pre_sign == WernerSign::plus);
    REQUIRE(s.branches[2].post_sign == WernerSign::minus);
    REQUIRE(s.branches[0].sign == +1);
    REQUIRE(s.branches[1].sign == +1);
    REQUIRE(s.branches[2].sign == -1);
  }
}

TEST_CASE("virtual_comb_choi") {
  SECTION("(2,2) closed form F (x) F + I/3 - (2/3) F (x) I") {
    const auto comb = virtual_comb_choi(2, 2);
    const ComplexMatrix f2 = swap_operator(2);
    const ComplexMatrix closed =
        tensor(f2, f2) + identity(16) / 3.0 - (2.0 / 3.0) * tensor(f2, identity(4));
    REQUIRE(max_abs_diff(comb.choi, closed) < 1e-12);
  }

  SECTION("closed form holds for general dims") {
    for (auto [da, db] : {std::pair<Index, Index>{2, 3}, {3, 2}, {3, 3}}) {
      const auto comb = virtual_comb_choi(da, db);
      const double daf = static_cast<double>(da);
      const ComplexMatrix closed =
          tensor(swap_operator(da), swap_operator(db)) +
          identity(da * da * db * db) / (daf + 1.0) -
          (daf / (daf + 1.0)) * tensor(swap_operator(da), identity(db * db));
      REQUIRE(max_abs_diff(comb.choi, closed) < 1e-12);
    }
  }

  SECTION("comb marginal constraints") {
    for (auto [da, db] : {std::pair<Index, Index>{2, 2}, {2, 3}, {3, 2}, {3, 3}}) {
      const auto comb = virtual_comb_choi(da, db);
      const SystemDims dims{da, da, db, db};
      // tr_{AB'} comb = I_{A'B}
      REQUIRE(max_abs_diff(partial_trace(comb.choi, dims, {0, 2}), identity(da * db)) < 1e-10);
      // causality: tr_{B'} comb = tr_{BB'} comb (x) I_B / d_B
      const ComplexMatrix lhs = partial_trace(comb.choi, dims, {0, 1, 2});
      const ComplexMatrix rhs =
          tensor(partial_trace(comb.choi, dims, {0, 1}), identity(db) / static_cast<double>(db));
      REQUIRE(max_abs_diff(lhs, rhs) < 1e-10);
    }
  }

  SECTION("l1 weight equals gamma = d_A d_B - d_A + 1") {
    for (Index da = 2; da <= 4; ++da)
      for (Index db = 2; db <= 4; ++db) {
        const auto comb = virtual_comb_choi(da, db);
        REQUIRE(comb.l1_weight() ==
                Catch::Approx(static_cast<double>(da * db - da + 1)).margin(1e-12));
      }
  }
}

TEST_CASE("apply_comb reproduces the conjugate Choi") {
  SECTION("identity channel maps to Phi") {
    const auto comb = virtual_comb_choi(2, 2);
    REQUIRE(max_abs_diff(apply_comb(comb, identity_channel(2)), max_entangled_operator(2)) <
            1e-12);
  }

  SECTION("real-Kraus channel is a fixed point") {
    const auto w = werner_holevo(2, WernerSign::minus);
    REQUIRE(max_abs_diff(apply_comb(virtual_comb_choi(2, 2), w), w.choi) < 1e-12);
  }

  SECTION("exactness on 200 random channels with dims in {2,3}^2") {
    double worst = 0.0;
    for (std::uint64_t t = 0; t < 200; ++t) {
      const Index da = 2 + (t % 2);
      const Index db = 2 + ((t / 2) % 2);
      const auto comb = virtual_comb_choi(da, db);
      const Index min_rank = (da + db - 1) / db;
      const auto n = random_channel(da, db, min_rank + (t % (da * db - min_rank + 1)), 3000 + t);
      worst = std::max(worst, max_abs_diff(apply_comb(comb, n), dual_maps(n).conj));
    }
    REQUIRE(worst < 1e-9);
  }

  SECTION("dimension mismatch rejected") {
    REQUIRE_THROWS_AS(apply_comb(virtual_comb_choi(2, 2), random_channel(2, 3, 2, 1)),
                      std::invalid_argument);
  }
}

TEST_CASE("comb_action_matrix matches the direct embedding route") {
  for (auto [da, db] : {std::pair<Index, Index>{2, 2}, {2, 3}, {3, 2}}) {
    const auto comb = virtual_comb_choi(da, db);
    const ComplexMatrix action = comb_action_matrix(comb.choi, da, db);
    RngStream rng(50 + da * 10 + db);
    const SystemDims dims{da, da, db, db};
    for (int t = 0; t < 5; ++t) {
      const ComplexMatrix x = random_gaussian_matrix(da * db, da * db, rng);
      const ComplexMatrix direct = partial_trace(
          comb.choi * embed_on_subsystems(x.transpose().eval(), dims, {1, 2}), dims, {0, 3});
      REQUIRE(max_abs_diff(comb_action_apply(action, x), direct) < 1e-10);
    }
  }
}

TEST_CASE("estimate_conjugate") {
  ComplexMatrix pauli_z(2, 2);
  pauli_z << 1, 0, 0, -1;
  const Observable z = Observable::validated(pauli_z);
  const DensityOperator zero = DensityOperator::pure(ComplexVector::Unit(2, 0));

  SECTION("identity channel, rho = |0><0|, O = Z") {
    const auto rep = estimate_conjugate(identity_channel(2), zero, z, 100000, 12345);
    REQUIRE(rep.oracle_value == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(std::abs(rep.estimate - 1.0) <= 5.0 * rep.std_error);
    REQUIRE(rep.std_error <= 3.0 / std::sqrt(100000.0));
    REQUIRE(rep.rounds == 100000);
    REQUIRE(rep.accepted == 100000);
  }

  SECTION("random channel agrees with the exact conjugate expectation") {
    const auto n = random_channel(2, 2, 3, 77);
    RngStream rng(78);
    const DensityOperator rho = random_density_operator(2, rng);
    const Observable o = random_observable(2, rng);
    const auto rep = estimate_conjugate(n, rho, o, 200000, 9);
    const double exact = real_trace(o.matrix * conjugate_channel(n).apply_matrix(rho.matrix));
    REQUIRE(rep.oracle_value == Catch::Approx(exact).margin(1e-12));
    REQUIRE(std::abs(rep.estimate - exact) <= 5.0 * rep.std_error);
  }

  SECTION("boundedness |X| <= gamma") {
    const auto n = random_channel(2, 2, 4, 5);
    RngStream rng(6);
    const DensityOperator rho = random_density_operator(2, rng);
    const Observable o = random_observable(2, rng);
    const auto rep = estimate_conjugate(n, rho, o, 20000, 4);
    REQUIRE(rep.max_abs_sample <= 3.0 + 1e-12);
  }

  SECTION("zero rounds rejected") {
    REQUIRE_THROWS_AS(estimate_conjugate(identity_channel(2), zero, z, 0, 1),
                      std::invalid_argument);
  }

  SECTION("unbiasedness over 50 independent runs") {
    const auto n = random_channel(2, 2, 2, 4242);
    RngStream rng(4243);
    const DensityOperator rho = random_density_operator(2, rng);
    const Observable o = random_observable(2, rng);
    const double oracle = real_trace(o.matrix * conjugate_channel(n).apply_matrix(rho.matrix));
    double mean = 0.0, pooled_var = 0.0;
    const int runs = 50;
    for (int r = 0; r < runs; ++r) {
      const auto rep = estimate_conjugate(n, rho, o, 10000, 100 + static_cast<std::uint64_t>(r));
      mean += rep.estimate;
      pooled_var += rep.std_error * rep.std_error;
    }
    mean /= runs;
    const double pooled_se = std::sqrt(pooled_var) / runs;
    REQUIRE(std::abs(mean - oracle) < 4.0 * pooled_se);
  }

  SECTION("worker count does not change the result") {
    const auto n = random_channel(2, 2, 3, 11);
    RngStream rng(12);
    const DensityOperator rho = random_density_operator(2, rng);
    const Observable o = random_observable(2, rng);
    const auto a = estimate_conjugate(n, rho, o, 50001, 17, 1);
    const auto b = estimate_conjugate(n, rho, o, 50001, 17, 4);
    REQUIRE(a.estimate == b.estimate);
    REQUIRE(a.std_error == b.std_error);
  }
}

TEST_CASE("hoeffding_rounds") {
  SECTION("gamma 3, eps 0.1, delta 0.05") {
    // ceil(2 * 9 * ln(40) / 0.01) = ceil(6639.983...) = 6640.
    REQUIRE(hoeffding_rounds(0.1, 0.05, 3.0) == 6640);
  }

  SECTION("boundary inputs stay at a sane floor") {
    REQUIRE(hoeffding_rounds(3.0, 0.999, 3.0) >= 1);
    REQUIRE(hoeffding_rounds(3.0, 0.999, 3.0) <= 3);
  }

  SECTION("doubling gamma quadruples the count up to ceiling") {
    const auto m1 = hoeffding_rounds(0.05, 0.02, 3.0);
    const auto m2 = hoeffding_rounds(0.05, 0.02, 6.0);
    REQUIRE(std::abs(m2 - 4 * m1) <= 3);
  }

  SECTION("invalid ranges rejected") {
    REQUIRE_THROWS_AS(hoeffding_rounds(0.0, 0.05, 3.0), std::invalid_argument);
    REQUIRE_THROWS_AS(hoeffding_rounds(3.5, 0.05, 3.0), std::invalid_argument);
    REQUIRE_THROWS_AS(hoeffding_rounds(0.1, 0.0, 3.0), std::invalid_argument);
    REQUIRE_THROWS_AS(hoeffding_rounds(0.1, 1.0, 3.0), std::invalid_argument);
  }
}
