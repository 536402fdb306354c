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

#include "dualchan/certificates.hpp"

using namespace dualchan;

TEST_CASE("gell_mann_basis") {
  SECTION("d=2 reproduces {I, Z, X, Y}/sqrt(2)") {
    const auto basis = gell_mann_basis(2);
    REQUIRE(basis.elements.size() == 4);
    const double s = 1.0 / std::sqrt(2.0);
    ComplexMatrix z(2, 2), x(2, 2), y(2, 2);
    z << s, 0, 0, -s;
    x << 0, s, s, 0;
    y << 0, Complex(0, -s), Complex(0, s), 0;
    REQUIRE(max_abs_diff(basis.elements[0], (s * identity(2)).eval()) < 1e-15);
    REQUIRE(max_abs_diff(basis.elements[1], z) < 1e-15);
    REQUIRE(max_abs_diff(basis.elements[2], x) < 1e-15);
    REQUIRE(max_abs_diff(basis.elements[3], y) < 1e-15);
  }

  SECTION("orthonormal Hermitian family with identity leading element") {
    for (Index d : {2, 3, 4}) {
      const auto basis = gell_mann_basis(d);
      REQUIRE(static_cast<Index>(basis.elements.size()) == d * d);
      REQUIRE(max_abs_diff(basis.elements[0],
                           (identity(d) / std::sqrt(static_cast<double>(d))).eval()) < 1e-14);
      for (std::size_t i = 0; i < basis.elements.size(); ++i) {
        REQUIRE(hermiticity_violation(basis.elements[i]) < 1e-12);
        for (std::size_t j = 0; j < basis.elements.size(); ++j) {
          const Complex inner = (basis.elements[i].adjoint() * basis.elements[j]).trace();
          REQUIRE(std::abs(inner - (i == j ? Complex(1, 0) : Complex(0, 0))) < 1e-12);
        }
      }
    }
  }

  SECTION("d=3 diagonal family is traceless with unit norm") {
    const auto basis = gell_mann_basis(3);
    for (std::size_t m = 1; m <= 2; ++m) {
      REQUIRE(std::abs(basis.elements[m].trace()) < 1e-14);
      REQUIRE(std::abs((basis.elements[m] * basis.elements[m]).trace().real() - 1.0) < 1e-14);
      REQUIRE(max_abs_diff(basis.elements[m], basis.elements[m].diagonal().asDiagonal().toDenseMatrix()) <
              1e-15);
    }
  }
}

TEST_CASE("traceless_b_basis") {
  SECTION("(2,2) has 12 elements, (2,3) has 32") {
    REQUIRE(traceless_b_basis(2, 2).size() == 12);
    REQUIRE(traceless_b_basis(2, 3).size() == 32);
  }

  SECTION("every element is killed by tr_B and mutually orthonormal") {
    const auto delta = traceless_b_basis(2, 2);
    for (const auto& d : delta) {
      const ComplexMatrix tb = partial_trace(d, SystemDims{2, 2}, {0});
      REQUIRE(max_abs(tb) < 1e-12);
    }
    for (std::size_t i = 0; i < delta.size(); ++i)
      for (std::size_t j = 0; j < delta.size(); ++j) {
        const Complex inner = (delta[i].adjoint() * delta[j]).trace();
        REQUIRE(std::abs(inner - (i == j ? Complex(1, 0) : Complex(0, 0))) < 1e-12);
      }
  }

  SECTION("leading block carries the nonzero A-traces") {
    const auto delta = traceless_b_basis(2, 3);
    for (std::size_t j = 0; j < delta.size(); ++j) {
      const double ta = max_abs(partial_trace(delta[j], SystemDims{2, 3}, {1}));
      if (j < 8) {
        REQUIRE(ta > 1e-8);
      } else {
        REQUIRE(ta < 1e-12);
      }
    }
  }
}

TEST_CASE("primal_certificate") {
  SECTION("(2,2): p-hat values and objective 3") {
    const auto cert = primal_certificate(2, 2);
    REQUIRE(cert.p1_hat == 2.0);
    REQUIRE(cert.p2_hat == 1.0);
    REQUIRE(cert.p1_hat + cert.p2_hat == 3.0);
    REQUIRE(min_hermitian_eigenvalue(cert.c1) > -1e-12);
    REQUIRE(min_hermitian_eigenvalue(cert.c2) > -1e-12);
  }

  SECTION("(3,3): objective 7") {
    const auto cert = primal_certificate(3, 3);
    REQUIRE(cert.p1_hat + cert.p2_hat == 7.0);
  }

  SECTION("achievability weight matches the sampler overhead for dims in {2,3,4}^2") {
    for (Index da = 2; da <= 4; ++da)
      for (Index db = 2; db <= 4; ++db) {
        const auto cert = primal_certificate(da, db);
        REQUIRE(cert.p1_hat + cert.p2_hat ==
                Catch::Approx(quasiprob_gamma(da, db)).margin(1e-12));
        REQUIRE(cert.p1_hat + cert.p2_hat ==
                Catch::Approx(virtual_comb_choi(da, db).l1_weight()).margin(1e-12));
      }
  }
}

TEST_CASE("dual_certificate") {
  SECTION("(2,2): coupling spectrum 1/8 and -3/8") {
    const auto dual = dual_certificate(2, 2);
    const auto delta = traceless_b_basis(2, 2);
    const SystemDims dims{2, 2, 2, 2};
    ComplexMatrix coupling = ComplexMatrix::Zero(16, 16);
    for (std::size_t j = 0; j < delta.size(); ++j)
      coupling += embed_on_subsystems(delta[j].transpose().eval(), dims, {1, 2}) *
                  embed_on_subsystems(dual.g[j], dims, {0, 3});
    REQUIRE(max_hermitian_eigenvalue(coupling) == Catch::Approx(0.125).margin(1e-12));
    REQUIRE(min_hermitian_eigenvalue(coupling) == Catch::Approx(-0.375).margin(1e-12));
  }

  SECTION("Z traces are exactly 1") {
    const auto dual = dual_certificate(3, 2);
    REQUIRE(std::abs(dual.z1.trace() - Complex(1, 0)) < 1e-15);
    REQUIRE(std::abs(dual.z2.trace() - Complex(1, 0)) < 1e-15);
  }

  SECTION("(2,2): dual objective equals 3 through the term chain") {
    // 1/d_B + (d_A+d_B)(d_B-1)/(d_A d_B) + (d_A^2-1)(d_B-1)/d_A = 3 at (2,2).
    const auto dual = dual_certificate(2, 2);
    const auto delta = traceless_b_basis(2, 2);
    double objective = real_trace(dual.x * (identity(4) / 2.0).transpose());
    REQUIRE(objective == Catch::Approx(0.5).margin(1e-12));
    for (std::size_t j = 0; j < delta.size(); ++j)
      objective += real_trace(dual.g[j] * delta[j].transpose());
    REQUIRE(objective == Catch::Approx(3.0).margin(1e-12));
  }
}

TEST_CASE("certify_base_norm") {
  SECTION("(2,2) passes with both objectives 3") {
    const auto rep = certify_base_norm(2, 2, 1e-9);
    REQUIRE(rep.pass);
    REQUIRE(rep.primal_objective == Catch::Approx(3.0).margin(1e-12));
    REQUIRE(rep.dual_objective == Catch::Approx(3.0).margin(1e-9));
    REQUIRE(rep.expected == 3.0);
  }

  SECTION("(2,3) certifies 5") {
    const auto rep = certify_base_norm(2, 3, 1e-9);
    REQUIRE(rep.pass);
    REQUIRE(rep.expected == 5.0);
  }

  SECTION("(4,2) certifies 5 with small violations") {
    const auto rep = certify_base_norm(4, 2, 1e-9);
    REQUIRE(rep.pass);
    REQUIRE(rep.expected == 5.0);
    for (const auto& [family, value] : rep.max_violation) {
      INFO(family);
      REQUIRE(value < 1e-9);
    }
  }
}

TEST_CASE("weak duality under feasible dual perturbations") {
  const Index da = 2, db = 2;
  const auto rep = certify_base_norm(da, db, 1e-9);
  const auto delta = traceless_b_basis(da, db);
  const SystemDims dims{da, da, db, db};
  const ComplexMatrix depol_t = (identity(da * db) / static_cast<double>(db)).transpose();
  RngStream rng(91);

  for (int trial = 0; trial < 20; ++trial) {
    // Shrink X and every G_j by a random factor and jitter Y; the slack the
    // shrink opens up dominates the jitter, so feasibility is preserved.
    auto dual = dual_certificate(da, db);
    const double shrink = 1.0 - (0.01 + 0.19 * rng.uniform());
    dual.x *= shrink;
    for (auto& g : dual.g) g *= shrink;
    const double margin = (1.0 - shrink) / static_cast<double>(da * db);
    const ComplexMatrix raw = random_gaussian_matrix(da * da * db, da * da * db, rng);
    ComplexMatrix jitter = 0.5 * (raw + raw.adjoint());
    const double op_norm = std::max(std::abs(max_hermitian_eigenvalue(jitter)),
                                    std::abs(min_hermitian_eigenvalue(jitter)));
    jitter *= (margin / 4.0) / op_norm;
    dual.y1 += jitter;
    dual.y2 += jitter;

    ComplexMatrix coupling = ComplexMatrix::Zero(dims.total(), dims.total());
    for (std::size_t j = 0; j < delta.size(); ++j)
      coupling += embed_on_subsystems(delta[j].transpose().eval(), dims, {1, 2}) *
                  embed_on_subsystems(dual.g[j], dims, {0, 3});
    const ComplexMatrix rhs = embed_on_subsystems(depol_t, dims, {1, 2}) *
                                  embed_on_subsystems(dual.x, dims, {0, 3}) +
                              coupling;
    auto lhs = [&](const ComplexMatrix& y, const ComplexMatrix& z) -> ComplexMatrix {
      const ComplexMatrix y_marg = partial_trace(y, SystemDims{da, da, db}, {0, 1});
      return embed_on_subsystems(y, dims, {0, 1, 2}) -
             embed_on_subsystems(y_marg, dims, {0, 1}) / static_cast<double>(db) +
             embed_on_subsystems(z, dims, {0, 2});
    };
    REQUIRE(min_hermitian_eigenvalue(lhs(dual.y1, dual.z1) - rhs, 1e-8) > -1e-9);
    REQUIRE(min_hermitian_eigenvalue(rhs + lhs(dual.y2, dual.z2), 1e-8) > -1e-9);

    double objective = real_trace(dual.x * depol_t);
    for (std::size_t j = 0; j < delta.size(); ++j)
      objective += real_trace(dual.g[j] * delta[j].transpose());
    REQUIRE(objective <= rep.primal_objective + 1e-9);
  }
}

TEST_CASE("sampled single-slot testers never exceed the certified base norm") {
  // Feasible points of the tester SDP: T = Theta (x) I_{B'} with Theta a
  // random PSD operator on A'AB of trace d_A, split by a random projector into
  // a binary POVM-like pair. Each gives a lower bound on the comb diamond
  // norm, which by the certified duality equals gamma.
  RngStream rng(93);
  for (auto [da, db] : {std::pair<Index, Index>{2, 2}, {2, 3}}) {
    const auto comb = virtual_comb_choi(da, db);
    const double gamma = quasiprob_gamma(da, db);
    const SystemDims dims{da, da, db, db};
    const Index side = da * da * db;
    for (int t = 0; t < 25; ++t) {
      ComplexMatrix g = random_gaussian_matrix(side, side, rng);
      ComplexMatrix theta = g * g.adjoint();
      theta *= static_cast<double>(da) / theta.trace().real();
      const ComplexMatrix big = embed_on_subsystems(theta, dims, {0, 1, 2});
      const ComplexMatrix root = psd_power(big, 0.5, 1e-12);
      // Random projector from the leading eigenvectors of a random Hermitian.
      const ComplexMatrix hg = random_gaussian_matrix(dims.total(), dims.total(), rng);
      const ComplexMatrix h = 0.5 * (hg + hg.adjoint());
      auto es = hermitian_eigs(h);
      ComplexMatrix proj = ComplexMatrix::Zero(dims.total(), dims.total());
      for (Index k = 0; k < dims.total() / 2; ++k)
        proj += es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
      const ComplexMatrix t0 = root * proj * root;
      const ComplexMatrix t1 = root * (identity(dims.total()) - proj) * root;
      const double value = real_trace((t0 - t1).adjoint() * comb.choi, 1e-8);
      REQUIRE(value <= gamma + 1e-9);
    }
  }
}
