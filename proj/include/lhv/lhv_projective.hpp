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

/// \file lhv_projective.hpp
/// \brief Local hidden-variable model for isotropic states under projective
/// measurements.
///
/// The hidden variable is a Haar-random unit vector lambda in C^d. Alice
/// answers with the Born-like distribution <lambda|Q_a^T|lambda>; Bob
/// deterministically outputs the outcome b maximizing <lambda|R_b|lambda>.
/// Averaged over lambda, the pair reproduces the isotropic state with
/// mixing weight p_phi(d).

#pragma once

#include <cstddef>
#include <cstdint>

#include "lhv/montecarlo.hpp"
#include "lhv/qcore.hpp"

namespace lhv {

struct LocalResponseSample {
    HiddenVariable lambda;
    RealVector alice_probs;
    std::size_t bob_outcome = 0;
};

/// a -> <lambda|Q_a^T|lambda>.
RealVector alice_response(const ProjectiveMeasurement &alice, const HiddenVariable &lambda);

/// argmax_b <lambda|R_b|lambda>, lowest index on ties.
std::size_t bob_response(const ProjectiveMeasurement &bob, const HiddenVariable &lambda);

LocalResponseSample sample_local_response(const ProjectiveMeasurement &alice,
                                          const ProjectiveMeasurement &bob, RngStream &rng);

/// Estimates P(a, b) = E_lambda[ alice_response(Q)[a] * [bob_response(R) = b] ].
/// Alice's distribution enters exactly (no outcome sampling).
JointEstimate mc_joint(const ProjectiveMeasurement &alice, const ProjectiveMeasurement &bob,
                       const MCConfig &cfg);

/// Estimates E_lambda[ <lambda|R_b|lambda> [bob_response(R) = b] ], which
/// equals ((d - 1) p_phi(d) + 1) / d^2 = H_d / d^2.
ScalarEstimate mc_selfcorr(const ProjectiveMeasurement &bob, std::size_t outcome,
                           const MCConfig &cfg);

/// H_d = sum_{k=1}^d 1/k. Exact summation for moderate d, asymptotic
/// expansion beyond.
double harmonic_number(std::int64_t d);

/// (H_d - 1) / (d - 1). Throws InvalidDimension for d < 2.
double p_phi(std::int64_t d);

} // namespace lhv
