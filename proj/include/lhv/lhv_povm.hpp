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

/// \file lhv_povm.hpp
/// \brief Local model for isotropic states under general (rank-1) POVMs.
///
/// Any POVM is first refined into rank-1 elements c_k |v_k><v_k|; outcomes
/// of the original POVM are recovered by coarse-graining. Bob's response
/// keeps the projective weight <lambda|N_b|lambda> only for outcomes whose
/// direction overlap exceeds 1/d and redistributes the remaining mass in
/// proportion to c_b / d.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "lhv/montecarlo.hpp"
#include "lhv/qcore.hpp"

namespace lhv {

class RankOnePovm {
  public:
    struct Element {
        double weight;
        Vector direction; ///< unit norm
    };

    /// Validates sum_k c_k |v_k><v_k| = 1 within 1e-10. Directions are
    /// normalized on construction; weights must be nonnegative.
    explicit RankOnePovm(std::vector<Element> elements);

    static RankOnePovm from_projective(const ProjectiveMeasurement &m);

    [[nodiscard]] int dim() const noexcept { return dim_; }
    [[nodiscard]] std::size_t size() const noexcept { return elements_.size(); }
    [[nodiscard]] const Element &element(std::size_t k) const { return elements_.at(k); }
    [[nodiscard]] const std::vector<Element> &elements() const noexcept { return elements_; }
    /// c_k |v_k><v_k| for every k.
    [[nodiscard]] std::vector<Matrix> effects() const;
    /// Directions mapped v -> U^dagger v, so effects become U^dagger N U.
    [[nodiscard]] RankOnePovm conjugated(const Matrix &unitary) const;

  private:
    int dim_ = 0;
    std::vector<Element> elements_;
};

struct CoarseGraining {
    std::vector<std::size_t> fine_to_coarse;
    std::size_t coarse_outcomes = 0;

    /// Sums fine-outcome probabilities (vector) into coarse outcomes.
    [[nodiscard]] RealVector apply(const RealVector &fine) const;
    /// Coarse-grains a joint table along rows (Alice) and/or columns (Bob).
    [[nodiscard]] RealMatrix apply_rows(const RealMatrix &fine) const;
    [[nodiscard]] RealMatrix apply_cols(const RealMatrix &fine) const;
};

struct RefinedPovm {
    RankOnePovm fine;
    CoarseGraining map;
};

/// Eigendecomposes every element; eigenvalues below 1e-12 are dropped.
/// Throws InvalidArgument for non-PSD elements or incomplete POVMs.
RefinedPovm refine_povm(std::span<const Matrix> elements);

/// a -> c_a |<v_a^*|lambda>|^2 = <lambda|M_a^T|lambda>.
RealVector alice_response_povm(const RankOnePovm &m, const HiddenVariable &lambda);

/// b -> <lambda|N_b|lambda> Theta_b + (c_b/d)(1 - sum_k <lambda|N_k|lambda> Theta_k)
/// with Theta_k = [ |<v_k|lambda>|^2 > 1/d ].
RealVector bob_response_povm(const RankOnePovm &n, const HiddenVariable &lambda);

/// Estimates E_lambda[ alice_response_povm(M)[a] * bob_response_povm(N)[b] ].
JointEstimate mc_joint_povm(const RankOnePovm &alice, const RankOnePovm &bob,
                            const MCConfig &cfg);

/// The same responses driven through the source measurement of the
/// Nielsen extension. Target: joint_prob(tilde_rho(psi, p_phi_povm(d)), M, N).
JointEstimate mc_joint_povm_extended(const BipartitePureState &psi, const RankOnePovm &alice,
                                     const RankOnePovm &bob, const MCConfig &cfg);

/// (3d - 1)(d - 1)^{d-1} / ((d + 1) d^d).
double p_phi_povm(std::int64_t d);

/// p_phi_povm(d) / ((1 - p_phi_povm(d))(d - 1) + 1).
double p_rho_povm(std::int64_t d);

/// Qubit trine: weights 2/3, real directions 120 degrees apart on the Bloch
/// sphere.
RankOnePovm trine_povm();
/// Qubit symmetric informationally complete POVM: weights 1/2, Bloch
/// vectors on a regular tetrahedron.
RankOnePovm tetrahedral_povm();
/// k Haar directions with random weights, symmetrized to completeness by
/// S^{-1/2} (.) S^{-1/2} with S the sum of the raw elements. Needs k >= d.
RankOnePovm random_rank_one_povm(int d, int k, RngStream &rng);

} // namespace lhv
