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

#include "lhv/nielsen.hpp"

#include <cmath>

#include "lhv/lhv_projective.hpp"

namespace lhv {

namespace {

constexpr double kPrunedBranch = 1e-14;

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

struct ExtendedSampler {
    NielsenOperators ops;
    std::vector<Matrix> alice_t;
    std::vector<Matrix> bob;
    Vector lambda;
    SourceSample src;

    void operator()(RngStream &rng, RealMatrix &x) {
        haar_state_into(lambda, rng);
        source_step_into(lambda, ops, rng, src);
        const std::size_t b = argmax_outcome(bob, src.lambda_b);
        x.setZero();
        for (std::size_t a = 0; a < alice_t.size(); ++a) {
            x(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                quadratic_form(alice_t[a], src.lambda_a).real();
        }
    }
};

} // namespace

Matrix cyclic_shift(int d, int i) {
    Matrix pi = Matrix::Zero(d, d);
    for (int j = 0; j < d; ++j) {
        pi(j, (j + i) % d) = 1.0;
    }
    return pi;
}

NielsenOperators nielsen_operators(const RealVector &nu) {
    const auto d = static_cast<int>(nu.size());
    if (d < 1) {
        throw Error(ErrorKind::InvalidDimension, "Schmidt vector is empty");
    }
    if (nu.minCoeff() < 0.0) {
        throw Error(ErrorKind::InvalidArgument, "Schmidt coefficients must be nonnegative");
    }
    if (std::abs(nu.squaredNorm() - 1.0) > tol::kNormalization) {
        throw Error(ErrorKind::InvalidArgument, "Schmidt coefficients are not normalized");
    }
    NielsenOperators ops;
    ops.d = d;
    ops.nu = nu;
    const Matrix dnu = nu.cast<Complex>().asDiagonal();
    for (int i = 0; i < d; ++i) {
        Matrix a = dnu * cyclic_shift(d, i);
        ops.W.emplace_back(a.adjoint() * a);
        ops.source_effects.emplace_back(a.transpose() * a.conjugate());
        ops.A.emplace_back(std::move(a));
    }
    return ops;
}

RealVector branch_weights(const HiddenVariable &lambda, const NielsenOperators &ops) {
    if (lambda.size() != ops.d) {
        throw Error(ErrorKind::InvalidArgument, "hidden variable dimension does not match");
    }
    RealVector q(ops.d);
    for (int i = 0; i < ops.d; ++i) {
        q[i] = quadratic_form(ops.source_effects[static_cast<std::size_t>(i)], lambda).real();
    }
    return q;
}

void source_step_into(const HiddenVariable &lambda, const NielsenOperators &ops,
                      RngStream &rng, SourceSample &out) {
    const int d = ops.d;
    double weights[64];
    double *q = weights;
    std::vector<double> heap;
    if (d > 64) {
        heap.resize(static_cast<std::size_t>(d));
        q = heap.data();
    }
    double total = 0.0;
    for (int i = 0; i < d; ++i) {
        const double w = quadratic_form(ops.source_effects[static_cast<std::size_t>(i)], lambda).real();
        q[i] = w < kPrunedBranch ? 0.0 : w;
        total += q[i];
    }
    const double u = rng.uniform() * total;
    int chosen = -1;
    double cumulative = 0.0;
    for (int i = 0; i < d; ++i) {
        if (q[i] == 0.0) {
            continue;
        }
        chosen = i;
        cumulative += q[i];
        if (u < cumulative) {
            break;
        }
    }
    if (chosen < 0) {
        throw Error(ErrorKind::InvalidArgument, "all source branches have zero weight");
    }
    const auto branch = static_cast<std::size_t>(chosen);
    out.branch = branch;
    out.weight = q[chosen];
    out.lambda_a.noalias() = ops.A[branch].conjugate() * lambda;
    out.lambda_a /= std::sqrt(out.weight);
    // (Pi_i lambda)_j = lambda_{j + i mod d}
    for (int j = 0; j < d; ++j) {
        out.lambda_b[j] = lambda[(j + chosen) % d];
    }
}

SourceSample source_step(const HiddenVariable &lambda, const NielsenOperators &ops,
                         RngStream &rng) {
    if (lambda.size() != ops.d) {
        throw Error(ErrorKind::InvalidArgument, "hidden variable dimension does not match");
    }
    SourceSample s;
    s.lambda_a.resize(ops.d);
    s.lambda_b.resize(ops.d);
    source_step_into(lambda, ops, rng, s);
    return s;
}

SchmidtFrame schmidt_frame(const BipartitePureState &psi) {
    SchmidtForm form = schmidt(psi);
    NielsenOperators ops = nielsen_operators(form.coefficients / form.coefficients.norm());
    return {std::move(form), std::move(ops)};
}

DensityMatrix tilde_rho(const BipartitePureState &psi, double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw Error(ErrorKind::InvalidParameter, "mixing weight p must lie in [0, 1]");
    }
    const DensityMatrix sigma = reduced_density(psi);
    const Matrix noise = kron(sigma.matrix(), Matrix::Identity(psi.dim_b(), psi.dim_b()) /
                                                  static_cast<double>(psi.dim_b()));
    return DensityMatrix(p * psi.density().matrix() + (1.0 - p) * noise);
}

DensityMatrix tilde_rho(const BipartitePureState &psi) {
    return tilde_rho(psi, p_phi(psi.dim_a()));
}

JointEstimate mc_joint_extended(const BipartitePureState &psi,
                                const ProjectiveMeasurement &alice,
                                const ProjectiveMeasurement &bob, const MCConfig &cfg) {
    if (alice.dim() != psi.dim_a() || bob.dim() != psi.dim_b()) {
        throw Error(ErrorKind::InvalidArgument, "measurement dimensions do not match the state");
    }
    SchmidtFrame frame = schmidt_frame(psi);
    const ProjectiveMeasurement alice_s = alice.conjugated(frame.form.basis_a);
    const ProjectiveMeasurement bob_s = bob.conjugated(frame.form.basis_b);

    ExtendedSampler sampler;
    const int d = frame.ops.d;
    sampler.ops = std::move(frame.ops);
    for (const Matrix &p : alice_s.projectors()) {
        sampler.alice_t.emplace_back(p.transpose());
    }
    sampler.bob = bob_s.projectors();
    sampler.lambda.resize(d);
    sampler.src.lambda_a.resize(d);
    sampler.src.lambda_b.resize(d);
    return run_chunked(static_cast<Eigen::Index>(alice.outcomes()),
                       static_cast<Eigen::Index>(bob.outcomes()), cfg, sampler);
}

std::vector<DensityMatrix> shifted_reduced_states(const BipartitePureState &psi) {
    const SchmidtForm form = schmidt(psi);
    const auto d = static_cast<int>(form.coefficients.size());
    const RealVector mu2 = form.coefficients.cwiseAbs2() / form.coefficients.squaredNorm();
    std::vector<DensityMatrix> out;
    out.reserve(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) {
        RealVector shifted(d);
        for (int j = 0; j < d; ++j) {
            shifted[j] = mu2[(j + k) % d];
        }
        Matrix s = form.basis_a * shifted.cast<Complex>().asDiagonal() * form.basis_a.adjoint();
        out.emplace_back(0.5 * (s + s.adjoint()));
    }
    return out;
}

double completed_threshold(double p_iso, std::int64_t d) {
    if (d < 2) {
        throw Error(ErrorKind::InvalidDimension, "noise completion needs d >= 2");
    }
    return p_iso / ((1.0 - p_iso) * static_cast<double>(d - 1) + 1.0);
}

double p_rho(std::int64_t d) {
    if (d < 2) {
        throw Error(ErrorKind::InvalidDimension, "p_rho needs d >= 2");
    }
    return completed_threshold(p_phi(d), d);
}

NoiseCompletion noise_completion(const BipartitePureState &psi) {
    const int d = psi.dim_a();
    if (d < 2) {
        throw Error(ErrorKind::InvalidDimension, "noise completion needs d >= 2");
    }
    const double pphi = p_phi(d);
    const double q = 1.0 / ((1.0 - pphi) * (d - 1) + 1.0);
    const std::vector<DensityMatrix> sigmas = shifted_reduced_states(psi);
    const Matrix local_noise = Matrix::Identity(d, d) / static_cast<double>(d);

    Matrix m = q * tilde_rho(psi, pphi).matrix();
    for (int k = 1; k < d; ++k) {
        m += ((1.0 - q) / (d - 1)) * kron(sigmas[static_cast<std::size_t>(k)].matrix(), local_noise);
    }
    return {DensityMatrix(std::move(m)), q * pphi, q};
}

} // namespace lhv
