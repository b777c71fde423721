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

#include "lhv/lhv_projective.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace lhv {

namespace {

void require_match(int measurement_dim, Eigen::Index lambda_dim) {
    if (measurement_dim != lambda_dim) {
        throw Error(ErrorKind::InvalidArgument,
                    "measurement acts on C^" + std::to_string(measurement_dim) +
                        " but hidden variable has dimension " + std::to_string(lambda_dim));
    }
}

std::vector<Matrix> transposed(const ProjectiveMeasurement &m) {
    std::vector<Matrix> out;
    out.reserve(m.outcomes());
    for (const Matrix &p : m.projectors()) {
        out.emplace_back(p.transpose());
    }
    return out;
}

std::size_t argmax_outcome(const std::vector<Matrix> &projectors, const Vector &lambda) {
    std::size_t best = 0;
    double best_val = -1.0;
    for (std::size_t b = 0; b < projectors.size(); ++b) {
        const double v = quadratic_form(projectors[b], lambda).real();
        if (v > best_val) {
            best_val = v;
            best = b;
        }
    }
    return best;
}

// Cell sampler for mc_joint: one Haar lambda -> rank-1 row of alice probs
// placed in Bob's column.
struct ProjectiveSampler {
    std::vector<Matrix> alice_t;
    std::vector<Matrix> bob;
    Vector lambda;

    void operator()(RngStream &rng, RealMatrix &x) {
        haar_state_into(lambda, rng);
        const std::size_t b = argmax_outcome(bob, lambda);
        x.setZero();
        for (std::size_t a = 0; a < alice_t.size(); ++a) {
            x(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                quadratic_form(alice_t[a], lambda).real();
        }
    }
};

struct SelfCorrSampler {
    std::vector<Matrix> bob;
    std::size_t outcome;
    Vector lambda;

    void operator()(RngStream &rng, RealMatrix &x) {
        haar_state_into(lambda, rng);
        const std::size_t b = argmax_outcome(bob, lambda);
        x(0, 0) = b == outcome ? quadratic_form(bob[outcome], lambda).real() : 0.0;
    }
};

} // namespace

RealVector alice_response(const ProjectiveMeasurement &alice, const HiddenVariable &lambda) {
    require_match(alice.dim(), lambda.size());
    RealVector out(static_cast<Eigen::Index>(alice.outcomes()));
    for (std::size_t a = 0; a < alice.outcomes(); ++a) {
        out[static_cast<Eigen::Index>(a)] =
            quadratic_form(alice.projector(a).transpose(), lambda).real();
    }
    return out;
}

std::size_t bob_response(const ProjectiveMeasurement &bob, const HiddenVariable &lambda) {
    require_match(bob.dim(), lambda.size());
    return argmax_outcome(bob.projectors(), lambda);
}

LocalResponseSample sample_local_response(const ProjectiveMeasurement &alice,
                                          const ProjectiveMeasurement &bob, RngStream &rng) {
    if (alice.dim() != bob.dim()) {
        throw Error(ErrorKind::InvalidArgument, "Alice and Bob measure different dimensions");
    }
    LocalResponseSample s;
    s.lambda = haar_state(alice.dim(), rng);
    s.alice_probs = alice_response(alice, s.lambda);
    s.bob_outcome = bob_response(bob, s.lambda);
    return s;
}

JointEstimate mc_joint(const ProjectiveMeasurement &alice, const ProjectiveMeasurement &bob,
                       const MCConfig &cfg) {
    if (alice.dim() != bob.dim()) {
        throw Error(ErrorKind::InvalidArgument, "Alice and Bob measure different dimensions");
    }
    ProjectiveSampler sampler{transposed(alice), bob.projectors(), Vector(alice.dim())};
    return run_chunked(static_cast<Eigen::Index>(alice.outcomes()),
                       static_cast<Eigen::Index>(bob.outcomes()), cfg, sampler);
}

ScalarEstimate mc_selfcorr(const ProjectiveMeasurement &bob, std::size_t outcome,
                           const MCConfig &cfg) {
    if (outcome >= bob.outcomes()) {
        throw Error(ErrorKind::InvalidArgument, "outcome index out of range");
    }
    SelfCorrSampler sampler{bob.projectors(), outcome, Vector(bob.dim())};
    const JointEstimate est = run_chunked(1, 1, cfg, sampler);
    return {est.estimate(0, 0), est.stderr_(0, 0)};
}

double harmonic_number(std::int64_t d) {
    if (d < 1) {
        throw Error(ErrorKind::InvalidDimension, "harmonic number needs d >= 1");
    }
    constexpr std::int64_t kExactLimit = 1 << 20;
    if (d <= kExactLimit) {
        // Smallest terms first.
        double sum = 0.0;
        for (std::int64_t k = d; k >= 1; --k) {
            sum += 1.0 / static_cast<double>(k);
        }
        return sum;
    }
    constexpr double kEulerGamma = 0.57721566490153286061;
    const auto n = static_cast<double>(d);
    const double inv2 = 1.0 / (n * n);
    return std::log(n) + kEulerGamma + 0.5 / n -
           inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 / 252.0));
}

double p_phi(std::int64_t d) {
    if (d < 2) {
        throw Error(ErrorKind::InvalidDimension, "p_phi needs d >= 2");
    }
    return (harmonic_number(d) - 1.0) / static_cast<double>(d - 1);
}

} // namespace lhv
