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

/// \file qcore.hpp
/// \brief Dense complex linear algebra for bipartite C^d x C^d systems.
///
/// All bipartite vectors and operators use the row-major pair index
/// (i, j) -> i * dim_b + j, i.e. the ordering produced by kron(A, B).
/// Transposes and complex conjugates are always taken in the
/// computational basis.

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lhv/error.hpp"
#include "lhv/rng.hpp"

namespace lhv {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// A unit vector in C^d drawn from (or transformed from a draw of) the
/// unitarily invariant measure.
using HiddenVariable = Vector;

namespace tol {
inline constexpr double kNormalization = 1e-12;
inline constexpr double kStructural = 1e-10;
inline constexpr double kMinEigenvalue = -1e-10;
} // namespace tol

Matrix kron(const Matrix &a, const Matrix &b);

/// <v|m|v> without temporaries.
inline Complex quadratic_form(const Matrix &m, const Vector &v) {
    const Eigen::Index n = v.size();
    Complex acc{0.0, 0.0};
    for (Eigen::Index j = 0; j < n; ++j) {
        Complex row{0.0, 0.0};
        for (Eigen::Index i = 0; i < n; ++i) {
            row += std::conj(v[i]) * m(i, j);
        }
        acc += row * v[j];
    }
    return acc;
}

class DensityMatrix;

class BipartitePureState {
  public:
    /// Validates unit norm within 1e-12.
    BipartitePureState(int dim_a, int dim_b, Vector amplitudes);

    [[nodiscard]] int dim_a() const noexcept { return dim_a_; }
    [[nodiscard]] int dim_b() const noexcept { return dim_b_; }
    [[nodiscard]] const Vector &amplitudes() const noexcept { return amps_; }
    [[nodiscard]] Complex amplitude(int i, int j) const {
        return amps_[static_cast<Eigen::Index>(i) * dim_b_ + j];
    }
    /// Coefficient matrix C(i, j) = amplitude(i, j).
    [[nodiscard]] Matrix coefficients() const;
    [[nodiscard]] DensityMatrix density() const;

  private:
    int dim_a_;
    int dim_b_;
    Vector amps_;
};

class DensityMatrix {
  public:
    /// Validates Hermiticity, unit trace and min eigenvalue >= -1e-10.
    explicit DensityMatrix(Matrix entries);

    [[nodiscard]] int dim() const noexcept {
        return static_cast<int>(m_.rows());
    }
    [[nodiscard]] const Matrix &matrix() const noexcept { return m_; }
    /// Local dimension d for a state on C^d x C^d; throws otherwise.
    [[nodiscard]] int local_dim() const;

  private:
    Matrix m_;
};

class ProjectiveMeasurement {
  public:
    /// Validates idempotence, Hermiticity, orthogonality and completeness.
    explicit ProjectiveMeasurement(std::vector<Matrix> projectors);

    /// Rank-1 projectors onto the columns of a unitary.
    static ProjectiveMeasurement from_basis(const Matrix &unitary);
    static ProjectiveMeasurement computational(int d);

    [[nodiscard]] int dim() const noexcept { return dim_; }
    [[nodiscard]] std::size_t outcomes() const noexcept {
        return projectors_.size();
    }
    [[nodiscard]] const Matrix &projector(std::size_t a) const {
        return projectors_.at(a);
    }
    [[nodiscard]] const std::vector<Matrix> &projectors() const noexcept {
        return projectors_;
    }
    /// Measurement with projectors U^dagger P U.
    [[nodiscard]] ProjectiveMeasurement conjugated(const Matrix &unitary) const;

  private:
    int dim_;
    std::vector<Matrix> projectors_;
};

struct SchmidtForm {
    RealVector coefficients; ///< descending, sum of squares 1
    Matrix basis_a;          ///< column j is |a_j>
    Matrix basis_b;          ///< column j is |b_j>

    [[nodiscard]] BipartitePureState reconstruct() const;
};

/// |phi_d> = d^{-1/2} sum_i |ii>.
BipartitePureState max_entangled(int d);

/// p rho + (1 - p) 1/n for a state on C^n.
DensityMatrix noisy_state(const DensityMatrix &rho, double p);

/// p |phi_d><phi_d| + (1 - p) 1/d^2.
DensityMatrix isotropic_state(int d, double p);

/// Throws unless the effects are square, PSD and sum to the identity.
void validate_effects(std::span<const Matrix> effects);

/// P(a, b) = tr(rho M_a (x) N_b).
RealMatrix joint_prob(const DensityMatrix &rho, std::span<const Matrix> alice,
                      std::span<const Matrix> bob);
RealMatrix joint_prob(const DensityMatrix &rho, const ProjectiveMeasurement &alice,
                      const ProjectiveMeasurement &bob);

/// Closed form for isotropic states: (p/d) tr(Q_a^T R_b) + (1 - p)/d^2.
RealMatrix iso_joint_closed(int d, double p, const ProjectiveMeasurement &alice,
                            const ProjectiveMeasurement &bob);

SchmidtForm schmidt(const BipartitePureState &psi);

/// tr_B |psi><psi|.
DensityMatrix reduced_density(const BipartitePureState &psi);

Matrix partial_transpose_b(const Matrix &rho, int d);
double ppt_min_eigenvalue(const DensityMatrix &rho);

HiddenVariable haar_state(int d, RngStream &rng);
/// Overwrites `out` (resized to d) with a Haar-random unit vector.
void haar_state_into(Vector &out, RngStream &rng);
/// Ginibre matrix, QR, with the R diagonal made positive.
Matrix haar_unitary(int d, RngStream &rng);
ProjectiveMeasurement haar_basis(int d, RngStream &rng);
BipartitePureState haar_pure_state(int d, RngStream &rng);

} // namespace lhv
