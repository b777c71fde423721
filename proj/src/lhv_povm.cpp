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

#include "lhv/lhv_povm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "lhv/nielsen.hpp"

namespace lhv {

namespace {

constexpr double kDroppedEigenvalue = 1e-12;

void require_match(int povm_dim, Eigen::Index lambda_dim) {
    if (povm_dim != lambda_dim) {
        throw Error(ErrorKind::InvalidArgument,
                    "POVM acts on C^" + std::to_string(povm_dim) +
                        " but hidden variable has dimension " + std::to_string(lambda_dim));
    }
}

// Precomputed (weight, direction) arrays for the sampling loops.
struct PovmTables {
    RealVector weights;
    Matrix directions; ///< column k is v_k

    explicit PovmTables(const RankOnePovm &m)
        : weights(static_cast<Eigen::Index>(m.size())),
          directions(m.dim(), static_cast<Eigen::Index>(m.size())) {
        for (std::size_t k = 0; k < m.size(); ++k) {
            const auto kk = static_cast<Eigen::Index>(k);
            weights[kk] = m.element(k).weight;
            directions.col(kk) = m.element(k).direction;
        }
    }
};

// out[a] = c_a |sum_i v_a(i) lambda(i)|^2
void alice_into(const PovmTables &t, const Vector &lambda, RealVector &out) {
    const Eigen::Index d = lambda.size();
    for (Eigen::Index a = 0; a < t.weights.size(); ++a) {
        Complex s{0.0, 0.0};
        for (Eigen::Index i = 0; i < d; ++i) {
            s += t.directions(i, a) * lambda[i];
        }
        out[a] = t.weights[a] * std::norm(s);
    }
}

void bob_into(const PovmTables &t, const Vector &lambda, RealVector &out) {
    const Eigen::Index d = lambda.size();
    const double threshold = 1.0 / static_cast<double>(d);
    double kept = 0.0;
    for (Eigen::Index b = 0; b < t.weights.size(); ++b) {
        Complex s{0.0, 0.0};
        for (Eigen::Index i = 0; i < d; ++i) {
            s += std::conj(t.directions(i, b)) * lambda[i];
        }
        const double overlap = std::norm(s);
        // Heaviside convention: Theta(0) = 0.
        const double first = overlap - threshold > 0.0 ? t.weights[b] * overlap : 0.0;
        out[b] = first;
        kept += first;
    }
    const double rest = 1.0 - kept;
    for (Eigen::Index b = 0; b < t.weights.size(); ++b) {
        out[b] += t.weights[b] * threshold * rest;
    }
}

struct PovmSampler {
    PovmTables alice;
    PovmTables bob;
    Vector lambda;
    RealVector pa;
    RealVector pb;

    void operator()(RngStream &rng, RealMatrix &x) {
        haar_state_into(lambda, rng);
        alice_into(alice, lambda, pa);
        bob_into(bob, lambda, pb);
        x.noalias() = pa * pb.transpose();
    }
};

struct ExtendedPovmSampler {
    NielsenOperators ops;
    PovmTables alice;
    PovmTables bob;
    Vector lambda;
    SourceSample src;
    RealVector pa;
    RealVector pb;

    void operator()(RngStream &rng, RealMatrix &x) {
        haar_state_into(lambda, rng);
        source_step_into(lambda, ops, rng, src);
        alice_into(alice, src.lambda_a, pa);
        bob_into(bob, src.lambda_b, pb);
        x.noalias() = pa * pb.transpose();
    }
};

RankOnePovm::Element bloch_element(double weight, double x, double y, double z) {
    const double theta = std::acos(std::clamp(z, -1.0, 1.0));
    const double phi = std::atan2(y, x);
    Vector v(2);
    v << std::cos(theta / 2.0), std::polar(std::sin(theta / 2.0), phi);
    return {weight, std::move(v)};
}

} // namespace

// ---------------------------------------------------------------------------
// RankOnePovm

RankOnePovm::RankOnePovm(std::vector<Element> elements) : elements_(std::move(elements)) {
    if (elements_.empty()) {
        throw Error(ErrorKind::InvalidArgument, "POVM has no elements");
    }
    dim_ = static_cast<int>(elements_.front().direction.size());
    Matrix sum = Matrix::Zero(dim_, dim_);
    for (Element &e : elements_) {
        if (e.direction.size() != dim_) {
            throw Error(ErrorKind::InvalidArgument, "POVM directions differ in dimension");
        }
        if (e.weight < 0.0) {
            throw Error(ErrorKind::InvalidArgument, "POVM weights must be nonnegative");
        }
        const double n = e.direction.norm();
        if (n == 0.0) {
            throw Error(ErrorKind::InvalidArgument, "POVM direction is the zero vector");
        }
        e.direction /= n;
        sum += e.weight * e.direction * e.direction.adjoint();
    }
    if ((sum - Matrix::Identity(dim_, dim_)).cwiseAbs().maxCoeff() > tol::kStructural) {
        throw Error(ErrorKind::InvalidArgument, "POVM elements do not sum to the identity");
    }
}

RankOnePovm RankOnePovm::from_projective(const ProjectiveMeasurement &m) {
    std::vector<Element> es;
    for (const Matrix &p : m.projectors()) {
        Eigen::SelfAdjointEigenSolver<Matrix> eig(p);
        const Eigen::Index top = p.rows() - 1;
        if (std::abs(p.trace().real() - 1.0) > tol::kStructural) {
            throw Error(ErrorKind::InvalidArgument, "projective measurement is not rank-1");
        }
        es.push_back({1.0, eig.eigenvectors().col(top)});
    }
    return RankOnePovm(std::move(es));
}

std::vector<Matrix> RankOnePovm::effects() const {
    std::vector<Matrix> out;
    out.reserve(elements_.size());
    for (const Element &e : elements_) {
        out.emplace_back(e.weight * e.direction * e.direction.adjoint());
    }
    return out;
}

RankOnePovm RankOnePovm::conjugated(const Matrix &unitary) const {
    std::vector<Element> es;
    es.reserve(elements_.size());
    for (const Element &e : elements_) {
        es.push_back({e.weight, unitary.adjoint() * e.direction});
    }
    return RankOnePovm(std::move(es));
}

// ---------------------------------------------------------------------------
// Coarse graining

RealVector CoarseGraining::apply(const RealVector &fine) const {
    if (static_cast<std::size_t>(fine.size()) != fine_to_coarse.size()) {
        throw Error(ErrorKind::InvalidArgument, "fine distribution has the wrong length");
    }
    RealVector out = RealVector::Zero(static_cast<Eigen::Index>(coarse_outcomes));
    for (std::size_t k = 0; k < fine_to_coarse.size(); ++k) {
        out[static_cast<Eigen::Index>(fine_to_coarse[k])] += fine[static_cast<Eigen::Index>(k)];
    }
    return out;
}

RealMatrix CoarseGraining::apply_rows(const RealMatrix &fine) const {
    if (static_cast<std::size_t>(fine.rows()) != fine_to_coarse.size()) {
        throw Error(ErrorKind::InvalidArgument, "fine table has the wrong row count");
    }
    RealMatrix out = RealMatrix::Zero(static_cast<Eigen::Index>(coarse_outcomes), fine.cols());
    for (std::size_t k = 0; k < fine_to_coarse.size(); ++k) {
        out.row(static_cast<Eigen::Index>(fine_to_coarse[k])) +=
            fine.row(static_cast<Eigen::Index>(k));
    }
    return out;
}

RealMatrix CoarseGraining::apply_cols(const RealMatrix &fine) const {
    return apply_rows(fine.transpose()).transpose();
}

RefinedPovm refine_povm(std::span<const Matrix> elements) {
    validate_effects(elements);
    std::vector<RankOnePovm::Element> fine;
    CoarseGraining map;
    map.coarse_outcomes = elements.size();
    for (std::size_t a = 0; a < elements.size(); ++a) {
        const Matrix h = 0.5 * (elements[a] + elements[a].adjoint());
        Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
        for (Eigen::Index k = 0; k < h.rows(); ++k) {
            const double lam = eig.eigenvalues()[k];
            if (lam < kDroppedEigenvalue) {
                continue;
            }
            fine.push_back({lam, eig.eigenvectors().col(k)});
            map.fine_to_coarse.push_back(a);
        }
    }
    return {RankOnePovm(std::move(fine)), std::move(map)};
}

// ---------------------------------------------------------------------------
// Responses and Monte Carlo

RealVector alice_response_povm(const RankOnePovm &m, const HiddenVariable &lambda) {
    require_match(m.dim(), lambda.size());
    RealVector out(static_cast<Eigen::Index>(m.size()));
    alice_into(PovmTables(m), lambda, out);
    return out;
}

RealVector bob_response_povm(const RankOnePovm &n, const HiddenVariable &lambda) {
    require_match(n.dim(), lambda.size());
    RealVector out(static_cast<Eigen::Index>(n.size()));
    bob_into(PovmTables(n), lambda, out);
    return out;
}

JointEstimate mc_joint_povm(const RankOnePovm &alice, const RankOnePovm &bob,
                            const MCConfig &cfg) {
    if (alice.dim() != bob.dim()) {
        throw Error(ErrorKind::InvalidArgument, "Alice and Bob measure different dimensions");
    }
    const auto ka = static_cast<Eigen::Index>(alice.size());
    const auto kb = static_cast<Eigen::Index>(bob.size());
    PovmSampler sampler{PovmTables(alice), PovmTables(bob), Vector(alice.dim()),
                        RealVector(ka), RealVector(kb)};
    return run_chunked(ka, kb, cfg, sampler);
}

JointEstimate mc_joint_povm_extended(const BipartitePureState &psi, const RankOnePovm &alice,
                                     const RankOnePovm &bob, const MCConfig &cfg) {
    if (alice.dim() != psi.dim_a() || bob.dim() != psi.dim_b()) {
        throw Error(ErrorKind::InvalidArgument, "POVM dimensions do not match the state");
    }
    SchmidtFrame frame = schmidt_frame(psi);
    const int d = frame.ops.d;
    const auto ka = static_cast<Eigen::Index>(alice.size());
    const auto kb = static_cast<Eigen::Index>(bob.size());
    ExtendedPovmSampler sampler{std::move(frame.ops),
                                PovmTables(alice.conjugated(frame.form.basis_a)),
                                PovmTables(bob.conjugated(frame.form.basis_b)),
                                Vector(d),
                                SourceSample{0, Vector(d), Vector(d), 0.0},
                                RealVector(ka),
                                RealVector(kb)};
    return run_chunked(ka, kb, cfg, sampler);
}

// ---------------------------------------------------------------------------
// Thresholds

double p_phi_povm(std::int64_t d) {
    if (d < 2) {
        throw Error(ErrorKind::InvalidDimension, "p_phi_povm needs d >= 2");
    }
    const auto n = static_cast<double>(d);
    // ((d-1)/d)^(d-1) via log1p for large d.
    const double decay = std::exp((n - 1.0) * std::log1p(-1.0 / n));
    return (3.0 * n - 1.0) / ((n + 1.0) * n) * decay;
}

double p_rho_povm(std::int64_t d) { return completed_threshold(p_phi_povm(d), d); }

// ---------------------------------------------------------------------------
// Standard POVMs

RankOnePovm trine_povm() {
    std::vector<RankOnePovm::Element> es;
    for (int j = 0; j < 3; ++j) {
        const double angle = 2.0 * std::numbers::pi * j / 3.0;
        es.push_back(bloch_element(2.0 / 3.0, std::sin(angle), 0.0, std::cos(angle)));
    }
    return RankOnePovm(std::move(es));
}

RankOnePovm tetrahedral_povm() {
    const double s = 1.0 / std::sqrt(3.0);
    std::vector<RankOnePovm::Element> es;
    es.push_back(bloch_element(0.5, s, s, s));
    es.push_back(bloch_element(0.5, s, -s, -s));
    es.push_back(bloch_element(0.5, -s, s, -s));
    es.push_back(bloch_element(0.5, -s, -s, s));
    return RankOnePovm(std::move(es));
}

RankOnePovm random_rank_one_povm(int d, int k, RngStream &rng) {
    if (d < 1) {
        throw Error(ErrorKind::InvalidDimension, "random POVM needs d >= 1");
    }
    if (k < d) {
        throw Error(ErrorKind::InvalidParameter, "random POVM needs at least d elements");
    }
    std::vector<Vector> raw;
    Matrix s = Matrix::Zero(d, d);
    for (int j = 0; j < k; ++j) {
        Vector v = haar_state(d, rng) * std::sqrt(0.2 + 0.8 * rng.uniform());
        s += v * v.adjoint();
        raw.push_back(std::move(v));
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (s + s.adjoint()));
    const Matrix s_inv_sqrt = eig.operatorInverseSqrt();
    std::vector<RankOnePovm::Element> es;
    for (const Vector &v : raw) {
        Vector w = s_inv_sqrt * v;
        const double c = w.squaredNorm();
        es.push_back({c, w / std::sqrt(c)});
    }
    return RankOnePovm(std::move(es));
}

} // namespace lhv
