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

#include "lhv/bell_bounds.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "lhv/lhv_povm.hpp"
#include "lhv/lhv_projective.hpp"
#include "lhv/nielsen.hpp"

namespace lhv {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

void require_d(std::int64_t d, const char *what) {
    if (d < 2) {
        throw Error(ErrorKind::InvalidDimension, std::string(what) + " needs d >= 2");
    }
}

// tr_B[(1 (x) B) rho], an operator on Alice's side.
Matrix reduce_with_bob(const Matrix &rho, const Matrix &b, int d) {
    Matrix out = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        for (int k = 0; k < d; ++k) {
            Complex acc{0.0, 0.0};
            for (int j = 0; j < d; ++j) {
                for (int l = 0; l < d; ++l) {
                    acc += b(j, l) * rho(i * d + l, k * d + j);
                }
            }
            out(i, k) = acc;
        }
    }
    return 0.5 * (out + out.adjoint());
}

// tr_A[(A (x) 1) rho], an operator on Bob's side.
Matrix reduce_with_alice(const Matrix &rho, const Matrix &a, int d) {
    Matrix out = Matrix::Zero(d, d);
    for (int j = 0; j < d; ++j) {
        for (int l = 0; l < d; ++l) {
            Complex acc{0.0, 0.0};
            for (int i = 0; i < d; ++i) {
                for (int k = 0; k < d; ++k) {
                    acc += a(i, k) * rho(k * d + j, i * d + l);
                }
            }
            out(j, l) = acc;
        }
    }
    return 0.5 * (out + out.adjoint());
}

// Best +-1 response to a Hermitian operator: sign of its spectrum, +1 on
// the kernel.
Matrix sign_of(const Matrix &h) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    const RealVector signs = es.eigenvalues().unaryExpr(
        [](double x) { return x >= 0.0 ? 1.0 : -1.0; });
    Matrix s = es.eigenvectors() * signs.cast<Complex>().asDiagonal() *
               es.eigenvectors().adjoint();
    return 0.5 * (s + s.adjoint());
}

Matrix random_binary_observable(int d, RngStream &rng) {
    const Matrix u = haar_unitary(d, rng);
    RealVector signs(d);
    for (int k = 0; k < d; ++k) {
        signs[k] = rng.uniform() < 0.5 ? -1.0 : 1.0;
    }
    Matrix s = u * signs.cast<Complex>().asDiagonal() * u.adjoint();
    return 0.5 * (s + s.adjoint());
}

double chsh_raw(const Matrix &rho, const Matrix &a0, const Matrix &a1, const Matrix &b0,
                const Matrix &b1, int d) {
    const Matrix m0 = reduce_with_bob(rho, b0 + b1, d);
    const Matrix m1 = reduce_with_bob(rho, b0 - b1, d);
    return ((a0 * m0).trace() + (a1 * m1).trace()).real();
}

} // namespace

BinaryObservable::BinaryObservable(Matrix m) : m_(std::move(m)) {
    if (m_.rows() == 0 || m_.rows() != m_.cols()) {
        throw Error(ErrorKind::InvalidArgument, "observable must be square and non-empty");
    }
    if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > tol::kStructural) {
        throw Error(ErrorKind::InvalidArgument, "observable is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1.0 - tol::kStructural ||
        es.eigenvalues().maxCoeff() > 1.0 + tol::kStructural) {
        throw Error(ErrorKind::InvalidArgument, "observable spectrum leaves [-1, 1]");
    }
}

DensityMatrix embedded_state(int d, double p) {
    require_d(d, "embedded_state");
    if (!(p >= 0.0 && p <= 1.0)) {
        throw Error(ErrorKind::InvalidParameter, "mixing weight p must lie in [0, 1]");
    }
    Vector phi2 = Vector::Zero(static_cast<Eigen::Index>(d) * d);
    phi2[0] = 1.0 / kSqrt2;
    phi2[d + 1] = 1.0 / kSqrt2;
    Matrix m = p * (phi2 * phi2.adjoint());
    m.diagonal().array() += (1.0 - p) / (static_cast<double>(d) * d);
    return DensityMatrix(std::move(m));
}

double chsh_value(const DensityMatrix &rho, const BinaryObservable &a0,
                  const BinaryObservable &a1, const BinaryObservable &b0,
                  const BinaryObservable &b1) {
    const int d = rho.local_dim();
    for (const BinaryObservable *o : {&a0, &a1, &b0, &b1}) {
        if (o->dim() != d) {
            throw Error(ErrorKind::InvalidArgument, "observable dimension does not match the state");
        }
    }
    return chsh_raw(rho.matrix(), a0.matrix(), a1.matrix(), b0.matrix(), b1.matrix(), d);
}

double chsh_value(const DensityMatrix &rho, const ChshSettings &s) {
    return chsh_value(rho, s.a0, s.a1, s.b0, s.b1);
}

ChshSettings embedded_settings(int d) {
    require_d(d, "embedded_settings");
    auto embed = [d](const Eigen::Matrix2cd &qubit) {
        Matrix m = Matrix::Identity(d, d);
        m.topLeftCorner(2, 2) = qubit;
        return BinaryObservable(std::move(m));
    };
    Eigen::Matrix2cd z;
    z << 1.0, 0.0, 0.0, -1.0;
    Eigen::Matrix2cd x;
    x << 0.0, 1.0, 1.0, 0.0;
    return {embed(z), embed(x), embed((z + x) / kSqrt2), embed((z - x) / kSqrt2)};
}

double embedded_chsh_analytic(int d, double p) {
    const auto n = static_cast<double>(d);
    return p * 2.0 * kSqrt2 + (1.0 - p) * 2.0 * (n - 2.0) * (n - 2.0) / (n * n);
}

double p_chsh(std::int64_t d) {
    require_d(d, "p_chsh");
    const auto n = static_cast<double>(d);
    return 4.0 * (n - 1.0) / ((kSqrt2 - 1.0) * n * n + 4.0 * n - 4.0);
}

ChshOptimum optimize_chsh(const DensityMatrix &rho, int restarts, RngStream &rng) {
    if (restarts < 1) {
        throw Error(ErrorKind::InvalidParameter, "optimize_chsh needs restarts >= 1");
    }
    const int d = rho.local_dim();
    const Matrix &r = rho.matrix();
    constexpr int kMaxSweeps = 1000;
    constexpr double kConverged = 1e-13;

    double best = -std::numeric_limits<double>::infinity();
    Matrix best_a0, best_a1, best_b0, best_b1;
    for (int attempt = 0; attempt < restarts; ++attempt) {
        Matrix b0 = random_binary_observable(d, rng);
        Matrix b1 = random_binary_observable(d, rng);
        Matrix a0, a1;
        double value = -std::numeric_limits<double>::infinity();
        for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
            a0 = sign_of(reduce_with_bob(r, b0 + b1, d));
            a1 = sign_of(reduce_with_bob(r, b0 - b1, d));
            b0 = sign_of(reduce_with_alice(r, a0 + a1, d));
            b1 = sign_of(reduce_with_alice(r, a0 - a1, d));
            const double next = chsh_raw(r, a0, a1, b0, b1, d);
            const bool done = next - value < kConverged;
            value = std::max(value, next);
            if (done) {
                break;
            }
        }
        if (value > best) {
            best = value;
            best_a0 = a0;
            best_a1 = a1;
            best_b0 = b0;
            best_b1 = b1;
        }
    }
    return {best,
            {BinaryObservable(best_a0), BinaryObservable(best_a1), BinaryObservable(best_b0),
             BinaryObservable(best_b1)}};
}

std::int64_t crossover_dimension() {
    auto crossed = [](std::int64_t d) { return p_chsh(d) < p_phi(d); };
    std::int64_t lo = 2;
    std::int64_t hi = 4;
    while (!crossed(hi)) {
        lo = hi;
        hi *= 2;
    }
    // Invariant: !crossed(lo), crossed(hi).
    while (hi - lo > 1) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        (crossed(mid) ? hi : lo) = mid;
    }
    return hi;
}

SeparabilityBounds separability_bounds(std::int64_t d) {
    require_d(d, "separability_bounds");
    const auto n = static_cast<double>(d);
    return {1.0 / (n * n - 1.0), 2.0 / (n * n + 2.0), 1.0 / (n + 1.0)};
}

double BoundsRow::ratio_phi() const {
    const auto n = static_cast<double>(d);
    return p_phi * n / std::log(n);
}
double BoundsRow::ratio_phi_povm() const {
    const auto n = static_cast<double>(d);
    return p_phi_povm * std::numbers::e * n / 3.0;
}
double BoundsRow::ratio_rho() const {
    const auto n = static_cast<double>(d);
    return p_rho * n * n / std::log(n);
}
double BoundsRow::ratio_rho_povm() const {
    const auto n = static_cast<double>(d);
    return p_rho_povm * std::numbers::e * n * n / 3.0;
}
double BoundsRow::ratio_chsh() const {
    const auto n = static_cast<double>(d);
    return p_chsh * (kSqrt2 - 1.0) * n / 4.0;
}

BoundsRow bounds_row(std::int64_t d) {
    require_d(d, "bounds_row");
    const SeparabilityBounds sep = separability_bounds(d);
    BoundsRow row;
    row.d = d;
    row.p_sep_iso = sep.iso;
    row.p_sep_lower = sep.lower;
    row.p_sep_upper = sep.upper;
    row.p_phi = lhv::p_phi(d);
    row.p_phi_povm = lhv::p_phi_povm(d);
    row.p_rho = lhv::p_rho(d);
    row.p_rho_povm = lhv::p_rho_povm(d);
    row.p_chsh = lhv::p_chsh(d);
    return row;
}

} // namespace lhv
