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

#include "lhv/qcore.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace lhv {

namespace {

void require_dim(int d, const char *what) {
    if (d < 1) {
        throw Error(ErrorKind::InvalidDimension,
                    std::string(what) + ": dimension must be >= 1, got " +
                        std::to_string(d));
    }
}

int perfect_square_root(Eigen::Index n) {
    const auto r = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(n))));
    if (r * r != n) {
        throw Error(ErrorKind::InvalidArgument,
                    "operator dimension " + std::to_string(n) +
                        " is not a perfect square");
    }
    return static_cast<int>(r);
}

} // namespace

Matrix kron(const Matrix &a, const Matrix &b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// BipartitePureState

BipartitePureState::BipartitePureState(int dim_a, int dim_b, Vector amplitudes)
    : dim_a_(dim_a), dim_b_(dim_b), amps_(std::move(amplitudes)) {
    require_dim(dim_a, "BipartitePureState");
    require_dim(dim_b, "BipartitePureState");
    if (amps_.size() != static_cast<Eigen::Index>(dim_a) * dim_b) {
        throw Error(ErrorKind::InvalidArgument,
                    "amplitude vector length does not match dim_a * dim_b");
    }
    if (std::abs(amps_.squaredNorm() - 1.0) > tol::kNormalization) {
        throw Error(ErrorKind::InvalidArgument, "pure state is not normalized");
    }
}

Matrix BipartitePureState::coefficients() const {
    Matrix c(dim_a_, dim_b_);
    for (int i = 0; i < dim_a_; ++i) {
        for (int j = 0; j < dim_b_; ++j) {
            c(i, j) = amplitude(i, j);
        }
    }
    return c;
}

DensityMatrix BipartitePureState::density() const {
    return DensityMatrix(amps_ * amps_.adjoint());
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(Matrix entries) : m_(std::move(entries)) {
    if (m_.rows() == 0 || m_.rows() != m_.cols()) {
        throw Error(ErrorKind::InvalidArgument, "density matrix must be square and non-empty");
    }
    if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > tol::kNormalization) {
        throw Error(ErrorKind::InvalidArgument, "density matrix is not Hermitian");
    }
    if (std::abs(m_.trace() - Complex(1.0, 0.0)) > tol::kNormalization) {
        throw Error(ErrorKind::InvalidArgument, "density matrix trace is not 1");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < tol::kMinEigenvalue) {
        throw Error(ErrorKind::InvalidArgument, "density matrix is not positive semidefinite");
    }
}

int DensityMatrix::local_dim() const { return perfect_square_root(m_.rows()); }

// ---------------------------------------------------------------------------
// ProjectiveMeasurement

ProjectiveMeasurement::ProjectiveMeasurement(std::vector<Matrix> projectors)
    : dim_(0), projectors_(std::move(projectors)) {
    if (projectors_.empty()) {
        throw Error(ErrorKind::InvalidArgument, "measurement has no outcomes");
    }
    dim_ = static_cast<int>(projectors_.front().rows());
    Matrix sum = Matrix::Zero(dim_, dim_);
    for (std::size_t a = 0; a < projectors_.size(); ++a) {
        const Matrix &p = projectors_[a];
        if (p.rows() != dim_ || p.cols() != dim_) {
            throw Error(ErrorKind::InvalidArgument, "projector dimensions differ");
        }
        if ((p * p - p).cwiseAbs().maxCoeff() > tol::kStructural ||
            (p - p.adjoint()).cwiseAbs().maxCoeff() > tol::kStructural) {
            throw Error(ErrorKind::InvalidArgument,
                        "element " + std::to_string(a) + " is not an orthogonal projector");
        }
        for (std::size_t b = 0; b < a; ++b) {
            if ((p * projectors_[b]).cwiseAbs().maxCoeff() > tol::kStructural) {
                throw Error(ErrorKind::InvalidArgument, "projectors are not mutually orthogonal");
            }
        }
        sum += p;
    }
    if ((sum - Matrix::Identity(dim_, dim_)).cwiseAbs().maxCoeff() > tol::kStructural) {
        throw Error(ErrorKind::InvalidArgument, "projectors do not sum to the identity");
    }
}

ProjectiveMeasurement ProjectiveMeasurement::from_basis(const Matrix &unitary) {
    std::vector<Matrix> ps;
    ps.reserve(static_cast<std::size_t>(unitary.cols()));
    for (Eigen::Index k = 0; k < unitary.cols(); ++k) {
        ps.emplace_back(unitary.col(k) * unitary.col(k).adjoint());
    }
    return ProjectiveMeasurement(std::move(ps));
}

ProjectiveMeasurement ProjectiveMeasurement::computational(int d) {
    require_dim(d, "computational basis");
    return from_basis(Matrix::Identity(d, d));
}

ProjectiveMeasurement ProjectiveMeasurement::conjugated(const Matrix &unitary) const {
    std::vector<Matrix> ps;
    ps.reserve(projectors_.size());
    for (const Matrix &p : projectors_) {
        Matrix q = unitary.adjoint() * p * unitary;
        // Re-Hermitize to keep the validation tolerance after rounding.
        ps.emplace_back(0.5 * (q + q.adjoint()));
    }
    return ProjectiveMeasurement(std::move(ps));
}

// ---------------------------------------------------------------------------
// Schmidt

BipartitePureState SchmidtForm::reconstruct() const {
    const auto da = static_cast<int>(basis_a.rows());
    const auto db = static_cast<int>(basis_b.rows());
    Vector amps = Vector::Zero(static_cast<Eigen::Index>(da) * db);
    for (Eigen::Index k = 0; k < coefficients.size(); ++k) {
        for (int i = 0; i < da; ++i) {
            for (int j = 0; j < db; ++j) {
                amps[static_cast<Eigen::Index>(i) * db + j] +=
                    coefficients[k] * basis_a(i, k) * basis_b(j, k);
            }
        }
    }
    amps.normalize();
    return BipartitePureState(da, db, std::move(amps));
}

SchmidtForm schmidt(const BipartitePureState &psi) {
    if (psi.dim_a() != psi.dim_b()) {
        throw Error(ErrorKind::Unsupported, "Schmidt decomposition requires dim_a == dim_b");
    }
    // C = U S V^dagger, so C(i, j) = sum_k s_k U(i, k) conj(V(j, k)).
    Eigen::JacobiSVD<Matrix> svd(psi.coefficients(), Eigen::ComputeFullU | Eigen::ComputeFullV);
    SchmidtForm out;
    out.coefficients = svd.singularValues();
    out.basis_a = svd.matrixU();
    out.basis_b = svd.matrixV().conjugate();
    return out;
}

DensityMatrix reduced_density(const BipartitePureState &psi) {
    const Matrix c = psi.coefficients();
    Matrix sigma = c * c.adjoint();
    sigma = 0.5 * (sigma + sigma.adjoint());
    return DensityMatrix(std::move(sigma));
}

// ---------------------------------------------------------------------------
// States and probabilities

BipartitePureState max_entangled(int d) {
    require_dim(d, "max_entangled");
    Vector amps = Vector::Zero(static_cast<Eigen::Index>(d) * d);
    const double a = 1.0 / std::sqrt(static_cast<double>(d));
    for (int i = 0; i < d; ++i) {
        amps[static_cast<Eigen::Index>(i) * d + i] = a;
    }
    return BipartitePureState(d, d, std::move(amps));
}

DensityMatrix noisy_state(const DensityMatrix &rho, double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw Error(ErrorKind::InvalidParameter, "mixing weight p must lie in [0, 1]");
    }
    const int n = rho.dim();
    Matrix m = p * rho.matrix();
    m.diagonal().array() += (1.0 - p) / n;
    return DensityMatrix(std::move(m));
}

DensityMatrix isotropic_state(int d, double p) {
    return noisy_state(max_entangled(d).density(), p);
}

void validate_effects(std::span<const Matrix> effects) {
    if (effects.empty()) {
        throw Error(ErrorKind::InvalidArgument, "measurement has no outcomes");
    }
    const Eigen::Index n = effects.front().rows();
    Matrix sum = Matrix::Zero(n, n);
    for (const Matrix &e : effects) {
        if (e.rows() != n || e.cols() != n) {
            throw Error(ErrorKind::InvalidArgument, "measurement effects differ in dimension");
        }
        if ((e - e.adjoint()).cwiseAbs().maxCoeff() > tol::kStructural) {
            throw Error(ErrorKind::InvalidArgument, "measurement effect is not Hermitian");
        }
        Eigen::SelfAdjointEigenSolver<Matrix> es(e, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < tol::kMinEigenvalue) {
            throw Error(ErrorKind::InvalidArgument, "measurement effect is not PSD");
        }
        sum += e;
    }
    if ((sum - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() > tol::kStructural) {
        throw Error(ErrorKind::InvalidArgument, "measurement effects do not sum to the identity");
    }
}

RealMatrix joint_prob(const DensityMatrix &rho, std::span<const Matrix> alice,
                      std::span<const Matrix> bob) {
    validate_effects(alice);
    validate_effects(bob);
    const Eigen::Index da = alice.front().rows();
    const Eigen::Index db = bob.front().rows();
    if (da * db != rho.dim()) {
        throw Error(ErrorKind::InvalidArgument,
                    "measurement dimensions do not match the state");
    }
    RealMatrix out(static_cast<Eigen::Index>(alice.size()),
                   static_cast<Eigen::Index>(bob.size()));
    for (std::size_t a = 0; a < alice.size(); ++a) {
        for (std::size_t b = 0; b < bob.size(); ++b) {
            // tr(rho (M (x) N)) = sum_{ik,jl} rho(jl, ik) M(i,j) N(k,l)
            Complex acc{0.0, 0.0};
            for (Eigen::Index i = 0; i < da; ++i) {
                for (Eigen::Index j = 0; j < da; ++j) {
                    const Complex m = alice[a](i, j);
                    if (m == Complex{}) {
                        continue;
                    }
                    for (Eigen::Index k = 0; k < db; ++k) {
                        for (Eigen::Index l = 0; l < db; ++l) {
                            acc += rho.matrix()(j * db + l, i * db + k) * m * bob[b](k, l);
                        }
                    }
                }
            }
            out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = acc.real();
        }
    }
    return out;
}

RealMatrix joint_prob(const DensityMatrix &rho, const ProjectiveMeasurement &alice,
                      const ProjectiveMeasurement &bob) {
    return joint_prob(rho, std::span<const Matrix>(alice.projectors()),
                      std::span<const Matrix>(bob.projectors()));
}

RealMatrix iso_joint_closed(int d, double p, const ProjectiveMeasurement &alice,
                            const ProjectiveMeasurement &bob) {
    require_dim(d, "iso_joint_closed");
    if (!(p >= 0.0 && p <= 1.0)) {
        throw Error(ErrorKind::InvalidParameter, "mixing weight p must lie in [0, 1]");
    }
    if (alice.dim() != d || bob.dim() != d) {
        throw Error(ErrorKind::InvalidArgument, "measurement dimension does not match d");
    }
    const auto dd = static_cast<double>(d);
    RealMatrix out(static_cast<Eigen::Index>(alice.outcomes()),
                   static_cast<Eigen::Index>(bob.outcomes()));
    for (std::size_t a = 0; a < alice.outcomes(); ++a) {
        for (std::size_t b = 0; b < bob.outcomes(); ++b) {
            // tr(Q^T R) = sum_ij Q(j,i) R(j,i)
            const double overlap =
                (alice.projector(a).array() * bob.projector(b).array()).sum().real();
            const double tra = alice.projector(a).trace().real();
            const double trb = bob.projector(b).trace().real();
            out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                (p / dd) * overlap + (1.0 - p) * tra * trb / (dd * dd);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Partial transpose

Matrix partial_transpose_b(const Matrix &rho, int d) {
    Matrix out(rho.rows(), rho.cols());
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            for (int k = 0; k < d; ++k) {
                for (int l = 0; l < d; ++l) {
                    out(i * d + j, k * d + l) = rho(i * d + l, k * d + j);
                }
            }
        }
    }
    return out;
}

double ppt_min_eigenvalue(const DensityMatrix &rho) {
    const int d = rho.local_dim();
    Eigen::SelfAdjointEigenSolver<Matrix> es(partial_transpose_b(rho.matrix(), d),
                                             Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

// ---------------------------------------------------------------------------
// Haar sampling

void haar_state_into(Vector &out, RngStream &rng) {
    double norm2 = 0.0;
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        out[i] = rng.complex_normal();
        norm2 += std::norm(out[i]);
    }
    out /= std::sqrt(norm2);
}

HiddenVariable haar_state(int d, RngStream &rng) {
    require_dim(d, "haar_state");
    Vector v(d);
    haar_state_into(v, rng);
    return v;
}

Matrix haar_unitary(int d, RngStream &rng) {
    require_dim(d, "haar_unitary");
    Matrix g(d, d);
    for (int j = 0; j < d; ++j) {
        for (int i = 0; i < d; ++i) {
            g(i, j) = rng.complex_normal();
        }
    }
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix &r = qr.matrixQR();
    for (int k = 0; k < d; ++k) {
        const Complex rkk = r(k, k);
        const double mag = std::abs(rkk);
        if (mag > 0.0) {
            q.col(k) *= rkk / mag;
        }
    }
    return q;
}

ProjectiveMeasurement haar_basis(int d, RngStream &rng) {
    return ProjectiveMeasurement::from_basis(haar_unitary(d, rng));
}

BipartitePureState haar_pure_state(int d, RngStream &rng) {
    require_dim(d, "haar_pure_state");
    Vector v(static_cast<Eigen::Index>(d) * d);
    haar_state_into(v, rng);
    return BipartitePureState(d, d, std::move(v));
}

} // namespace lhv
