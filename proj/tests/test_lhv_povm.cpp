// Copyright 2026 The lhvlab Authors
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
#include <numbers>
#include <vector>

#include "doctest.h"

#include "lhv/lhv_povm.hpp"
#include "lhv/lhv_projective.hpp"
#include "lhv/nielsen.hpp"
#include "test_support.hpp"

using namespace lhv;
using lhv::testing::max_abs;

namespace {

MCConfig quick(std::uint64_t seed) {
    MCConfig cfg;
    cfg.samples = 200'000;
    cfg.seed = seed;
    cfg.threads = 1;
    return cfg;
}

RealMatrix oracle_for(const Matrix &rho, const RankOnePovm &m, const RankOnePovm &n) {
    const std::vector<Matrix> em = m.effects();
    const std::vector<Matrix> en = n.effects();
    return joint_prob(DensityMatrix{rho}, em, en);
}

// Random general POVM with `count` elements of random rank, made complete by
// S^{-1/2} G_k S^{-1/2}.
std::vector<Matrix> random_general_povm(int d, int count, RngStream &rng) {
    std::vector<Matrix> g;
    Matrix s = Matrix::Zero(d, d);
    for (int k = 0; k < count; ++k) {
        const int rank = 1 + static_cast<int>(rng.uniform() * d);
        Matrix x(d, rank);
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < rank; ++j) {
                x(i, j) = rng.complex_normal();
            }
        }
        g.push_back(x * x.adjoint());
        s += g.back();
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(s);
    const Matrix t = es.operatorInverseSqrt();
    for (Matrix &e : g) {
        e = t * e * t;
        e = 0.5 * (e + e.adjoint());
    }
    return g;
}

} // namespace

TEST_CASE("RankOnePovm validation") {
    Vector e0 = Vector::Zero(2);
    e0[0] = 1.0;
    CHECK_THROWS_AS(RankOnePovm({{1.0, e0}}), Error);
    CHECK_THROWS_AS(RankOnePovm(std::vector<RankOnePovm::Element>{}), Error);
    const RankOnePovm trine = trine_povm();
    CHECK(trine.size() == 3);
    double total = 0.0;
    for (const auto &el : trine.elements()) {
        CHECK(el.weight == doctest::Approx(2.0 / 3.0));
        total += el.weight;
    }
    CHECK(total == doctest::Approx(2.0));
    const RankOnePovm tetra = tetrahedral_povm();
    CHECK(tetra.size() == 4);
    for (const auto &el : tetra.elements()) {
        CHECK(el.weight == doctest::Approx(0.5));
    }
}

TEST_CASE("refine_povm examples") {
    RngStream rng(1);
    const auto basis = haar_basis(3, rng);
    const RefinedPovm proj = refine_povm(basis.projectors());
    CHECK(proj.fine.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(proj.fine.element(k).weight == doctest::Approx(1.0));
        CHECK(proj.map.fine_to_coarse[k] == k);
    }

    const std::vector<Matrix> trine = trine_povm().effects();
    const RefinedPovm t = refine_povm(trine);
    CHECK(t.fine.size() == 3);
    for (const auto &el : t.fine.elements()) {
        CHECK(el.weight == doctest::Approx(2.0 / 3.0));
    }

    const Matrix half = Matrix::Identity(2, 2) * 0.5;
    const std::vector<Matrix> halves{half, half};
    const RefinedPovm h = refine_povm(halves);
    CHECK(h.fine.size() == 4);
    for (const auto &el : h.fine.elements()) {
        CHECK(el.weight == doctest::Approx(0.5));
    }
    CHECK(h.map.fine_to_coarse == std::vector<std::size_t>{0, 0, 1, 1});
    CHECK(h.map.coarse_outcomes == 2);

    Matrix neg = Matrix::Zero(2, 2);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    Matrix rest = Matrix::Identity(2, 2) - neg;
    const std::vector<Matrix> bad{neg, rest};
    CHECK_THROWS_AS(refine_povm(bad), Error);
    const std::vector<Matrix> incomplete{half};
    CHECK_THROWS_AS(refine_povm(incomplete), Error);
}

TEST_CASE("property: refine_povm round trip") {
    RngStream rng(2);
    for (int d = 2; d <= 4; ++d) {
        for (int count = 2; count <= 6; ++count) {
            const std::vector<Matrix> povm = random_general_povm(d, count, rng);
            const RefinedPovm r = refine_povm(povm);
            const BipartitePureState psi = haar_pure_state(d, rng);
            const Matrix rho = lhv::testing::partial_trace_b(psi.amplitudes(), d);
            RealVector fine(static_cast<Eigen::Index>(r.fine.size()));
            const std::vector<Matrix> fe = r.fine.effects();
            for (std::size_t k = 0; k < fe.size(); ++k) {
                fine[static_cast<Eigen::Index>(k)] = (rho * fe[k]).trace().real();
            }
            const RealVector coarse = r.map.apply(fine);
            for (int a = 0; a < count; ++a) {
                CHECK(std::abs(coarse[a] - (rho * povm[a]).trace().real()) < 1e-10);
            }
        }
    }
}

TEST_CASE("coarse graining of joint tables") {
    CoarseGraining map{{0, 0, 1}, 2};
    RealMatrix fine(3, 3);
    fine << 1, 2, 3, 4, 5, 6, 7, 8, 9;
    const RealMatrix rows = map.apply_rows(fine);
    CHECK(rows.rows() == 2);
    CHECK(rows(0, 0) == 5.0);
    CHECK(rows(1, 2) == 9.0);
    const RealMatrix cols = map.apply_cols(fine);
    CHECK(cols.cols() == 2);
    CHECK(cols(0, 0) == 3.0);
    CHECK(cols(2, 1) == 9.0);
}

TEST_CASE("response function examples") {
    RngStream rng(3);
    const auto comp2 = RankOnePovm::from_projective(ProjectiveMeasurement::computational(2));
    HiddenVariable e0 = Vector::Zero(2);
    e0[0] = 1.0;
    const RealVector bob = bob_response_povm(comp2, e0);
    CHECK(bob[0] == doctest::Approx(1.0));
    CHECK(std::abs(bob[1]) < 1e-15);
    const RealVector alice = alice_response_povm(comp2, e0);
    CHECK(alice[0] == doctest::Approx(1.0));
    CHECK(std::abs(alice[1]) < 1e-15);

    for (int k = 0; k < 100; ++k) {
        const auto q = haar_basis(3, rng);
        const HiddenVariable lambda = haar_state(3, rng);
        CHECK(max_abs(alice_response_povm(RankOnePovm::from_projective(q), lambda) -
                      alice_response(q, lambda)) < 1e-14);
    }
    CHECK_THROWS_AS(bob_response_povm(comp2, haar_state(3, rng)), Error);
    CHECK_THROWS_AS(alice_response_povm(comp2, haar_state(3, rng)), Error);
}

TEST_CASE("property: responses are conditional distributions") {
    RngStream rng(4);
    double worst_sum = 0.0;
    double worst_neg = 0.0;
    double worst_bracket = 0.0;
    for (int d = 2; d <= 5; ++d) {
        for (int k = 0; k < 2500; ++k) {
            const RankOnePovm n = random_rank_one_povm(d, d + 1 + k % 4, rng);
            const HiddenVariable lambda = haar_state(d, rng);
            const RealVector a = alice_response_povm(n, lambda);
            const RealVector b = bob_response_povm(n, lambda);
            worst_sum = std::max({worst_sum, std::abs(a.sum() - 1.0), std::abs(b.sum() - 1.0)});
            worst_neg = std::min({worst_neg, a.minCoeff(), b.minCoeff()});
            // Bracket term recovered from the kept mass.
            double kept = 0.0;
            for (std::size_t j = 0; j < n.size(); ++j) {
                const auto &el = n.element(j);
                const double overlap = std::norm(el.direction.dot(lambda));
                if (overlap > 1.0 / d) {
                    kept += el.weight * overlap;
                }
            }
            worst_bracket = std::min(worst_bracket, 1.0 - kept);
        }
    }
    CHECK(worst_sum < 1e-12);
    CHECK(worst_neg >= -1e-12);
    CHECK(worst_bracket >= -1e-12);
}

TEST_CASE("property: bob_response_povm covariance") {
    RngStream rng(5);
    for (int d = 2; d <= 4; ++d) {
        for (int k = 0; k < 200; ++k) {
            const RankOnePovm n = random_rank_one_povm(d, d + 2, rng);
            const Matrix u = haar_unitary(d, rng);
            const HiddenVariable lambda = haar_state(d, rng);
            CHECK(max_abs(bob_response_povm(n.conjugated(u), lambda) -
                          bob_response_povm(n, u * lambda)) < 1e-12);
        }
    }
}

TEST_CASE("mc_joint_povm reproduces the isotropic state at p_phi_povm") {
    const auto comp2 = RankOnePovm::from_projective(ProjectiveMeasurement::computational(2));
    const Matrix iso2 = lhv::testing::isotropic_by_hand(2, 5.0 / 12.0);
    const JointEstimate c = mc_joint_povm(comp2, comp2, quick(1));
    CHECK(max_sigma_deviation(c, oracle_for(iso2, comp2, comp2)) < 5.0);
    // Distinct from the projective model's threshold.
    CHECK(max_sigma_deviation(c, oracle_for(lhv::testing::isotropic_by_hand(2, 0.5), comp2,
                                            comp2)) > 20.0);

    const RankOnePovm tetra = tetrahedral_povm();
    CHECK(max_sigma_deviation(mc_joint_povm(tetra, tetra, quick(2)),
                              oracle_for(iso2, tetra, tetra)) < 5.0);
    const RankOnePovm trine = trine_povm();
    CHECK(max_sigma_deviation(mc_joint_povm(trine, tetra, quick(3)),
                              oracle_for(iso2, trine, tetra)) < 5.0);

    RngStream rng(6);
    const Matrix iso3 = lhv::testing::isotropic_by_hand(3, 8.0 / 27.0);
    for (int k = 0; k < 2; ++k) {
        const RankOnePovm m = random_rank_one_povm(3, 5, rng);
        const RankOnePovm n = random_rank_one_povm(3, 4, rng);
        CHECK(max_sigma_deviation(mc_joint_povm(m, n, quick(10 + k)), oracle_for(iso3, m, n)) <
              5.0);
    }
}

TEST_CASE("POVM responses through the source measurement") {
    RngStream rng(7);
    for (int k = 0; k < 2; ++k) {
        const BipartitePureState psi = haar_pure_state(2, rng);
        const RankOnePovm m = random_rank_one_povm(2, 3, rng);
        const RankOnePovm n = tetrahedral_povm();
        const Matrix target = lhv::testing::tilde_by_hand(psi.amplitudes(), 2, 5.0 / 12.0);
        CHECK(max_sigma_deviation(mc_joint_povm_extended(psi, m, n, quick(20 + k)),
                                  oracle_for(target, m, n)) < 5.0);
    }
}

TEST_CASE("POVM thresholds") {
    CHECK(p_phi_povm(2) == doctest::Approx(5.0 / 12.0).epsilon(1e-15));
    CHECK(p_phi_povm(3) == doctest::Approx(8.0 / 27.0).epsilon(1e-15));
    CHECK(p_rho_povm(2) == doctest::Approx(5.0 / 19.0).epsilon(1e-15));
    CHECK(p_rho_povm(3) == doctest::Approx(8.0 / 65.0).epsilon(1e-15));
    const double d = 1e4;
    CHECK(std::abs(p_phi_povm(10'000) * std::numbers::e * d / 3.0 - 1.0) < 0.01);
    CHECK(std::abs(p_rho_povm(10'000) * std::numbers::e * d * d / 3.0 - 1.0) < 0.05);
    CHECK_THROWS_AS(p_phi_povm(1), Error);
    CHECK_THROWS_AS(p_rho_povm(1), Error);
}
