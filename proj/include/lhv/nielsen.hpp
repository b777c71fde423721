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

/// \file nielsen.hpp
/// \brief Extension of the isotropic local model to arbitrary pure states.
///
/// For |psi> = sum_j nu_j |jj> (Schmidt form) the operators
/// A_i = D_nu Pi_i, with Pi_i the cyclic shift |j> -> |j - i mod d>, satisfy
/// sqrt(d) (A_i (x) Pi_i)|phi_d> = |psi>. The source draws lambda, simulates
/// the measurement {A_i^*} on it, and hands Alice A_i^* lambda / sqrt(q_i)
/// and Bob Pi_i lambda. States not in Schmidt form are handled by rotating
/// the measurements into the Schmidt bases.

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lhv/montecarlo.hpp"
#include "lhv/qcore.hpp"

namespace lhv {

/// Pi_i = sum_j |j><j + i mod d|.
Matrix cyclic_shift(int d, int i);

struct NielsenOperators {
    int d = 0;
    RealVector nu;
    std::vector<Matrix> A; ///< A_i = D_nu Pi_i
    std::vector<Matrix> W; ///< W_i = A_i^dagger A_i
    /// A_i^T A_i^*, the source-measurement effects acting on lambda.
    std::vector<Matrix> source_effects;
};

/// Throws InvalidArgument unless nu >= 0 and sum nu_j^2 = 1 within 1e-12.
NielsenOperators nielsen_operators(const RealVector &nu);

struct SourceSample {
    std::size_t branch = 0;
    HiddenVariable lambda_a;
    HiddenVariable lambda_b;
    double weight = 0.0; ///< q_branch(lambda)
};

/// q_i(lambda) = <lambda|A_i^T A_i^*|lambda> for every branch.
RealVector branch_weights(const HiddenVariable &lambda, const NielsenOperators &ops);

/// Draws branch i with probability q_i(lambda) by inverse CDF, skipping
/// branches with q_i < 1e-14.
SourceSample source_step(const HiddenVariable &lambda, const NielsenOperators &ops,
                         RngStream &rng);
/// Allocation-free variant for hot loops; `out` vectors must be sized d.
void source_step_into(const HiddenVariable &lambda, const NielsenOperators &ops,
                      RngStream &rng, SourceSample &out);

/// Schmidt data of psi in the form consumed by the Monte Carlo drivers.
struct SchmidtFrame {
    SchmidtForm form;
    NielsenOperators ops;
};
SchmidtFrame schmidt_frame(const BipartitePureState &psi);

/// p |psi><psi| + (1 - p) sigma (x) 1/d with sigma = tr_B |psi><psi|.
DensityMatrix tilde_rho(const BipartitePureState &psi, double p);
/// tilde_rho(psi, p_phi(d)).
DensityMatrix tilde_rho(const BipartitePureState &psi);

/// Monte Carlo estimate of the extended model's joint distribution. Its
/// target is joint_prob(tilde_rho(psi), Q, R).
JointEstimate mc_joint_extended(const BipartitePureState &psi,
                                const ProjectiveMeasurement &alice,
                                const ProjectiveMeasurement &bob, const MCConfig &cfg);

struct NoiseCompletion {
    DensityMatrix state;
    double p;
    double q;
};

/// sigma_k = sum_j mu_{j+k mod d}^2 |a_j><a_j| in the Schmidt basis of Alice.
std::vector<DensityMatrix> shifted_reduced_states(const BipartitePureState &psi);

/// q tilde_rho + (1 - q)/(d - 1) sum_{k>=1} sigma_k (x) 1/d with
/// q (1 - p_phi) = (1 - q)/(d - 1); equals noisy_state(|psi><psi|, p_rho(d)).
NoiseCompletion noise_completion(const BipartitePureState &psi);

/// p_iso / ((1 - p_iso)(d - 1) + 1): the depolarized-noise weight reachable
/// from a model reproducing the isotropic state at weight p_iso.
double completed_threshold(double p_iso, std::int64_t d);

double p_rho(std::int64_t d);

} // namespace lhv
