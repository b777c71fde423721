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

/// \file bell_bounds.hpp
/// \brief CHSH-based upper bounds on the locality threshold, the
/// separability constants, and the per-dimension bounds table.

#pragma once

#include <cstdint>

#include "lhv/qcore.hpp"

namespace lhv {

/// Hermitian operator with spectrum in [-1, 1].
class BinaryObservable {
  public:
    explicit BinaryObservable(Matrix m);

    [[nodiscard]] int dim() const noexcept { return static_cast<int>(m_.rows()); }
    [[nodiscard]] const Matrix &matrix() const noexcept { return m_; }

  private:
    Matrix m_;
};

struct ChshSettings {
    BinaryObservable a0;
    BinaryObservable a1;
    BinaryObservable b0;
    BinaryObservable b1;
};

/// p |phi_2><phi_2| + (1 - p) 1/d^2 with |phi_2> on span{|0>,|1>}^{(x)2}.
DensityMatrix embedded_state(int d, double p);

/// tr(rho [A0 (x) (B0 + B1) + A1 (x) (B0 - B1)]).
double chsh_value(const DensityMatrix &rho, const BinaryObservable &a0,
                  const BinaryObservable &a1, const BinaryObservable &b0,
                  const BinaryObservable &b1);
double chsh_value(const DensityMatrix &rho, const ChshSettings &s);

/// Qubit-optimal settings A0 = Z, A1 = X, B0,1 = (Z +- X)/sqrt 2 on the first
/// two levels, +1 on the remaining d - 2.
ChshSettings embedded_settings(int d);

/// p 2 sqrt 2 + (1 - p) 2 (d - 2)^2 / d^2.
double embedded_chsh_analytic(int d, double p);

/// 4(d - 1) / ((sqrt 2 - 1) d^2 + 4d - 4).
double p_chsh(std::int64_t d);

struct ChshOptimum {
    double value;
    ChshSettings settings;
};

/// See-saw maximization of the CHSH value over +-1 observables. Each restart
/// starts Bob from Haar-random eigenbases with random sign patterns, then
/// alternates exact best responses until the value stops improving.
ChshOptimum optimize_chsh(const DensityMatrix &rho, int restarts, RngStream &rng);

/// Smallest d >= 2 with p_chsh(d) < p_phi(d).
std::int64_t crossover_dimension();

struct SeparabilityBounds {
    double lower; ///< 1/(d^2 - 1)
    double upper; ///< 2/(d^2 + 2)
    double iso;   ///< 1/(d + 1)
};
SeparabilityBounds separability_bounds(std::int64_t d);

struct BoundsRow {
    std::int64_t d = 0;
    double p_sep_iso = 0.0;
    double p_sep_lower = 0.0;
    double p_sep_upper = 0.0;
    double p_phi = 0.0;
    double p_phi_povm = 0.0;
    double p_rho = 0.0;
    double p_rho_povm = 0.0;
    double p_chsh = 0.0;
    double cglmp_const = 0.67; ///< external constant pi^2/(16 K), not computed

    /// Ratios to the large-d asymptotes: log d / d, 3/(e d), log d / d^2,
    /// 3/(e d^2) and 4/((sqrt 2 - 1) d).
    [[nodiscard]] double ratio_phi() const;
    [[nodiscard]] double ratio_phi_povm() const;
    [[nodiscard]] double ratio_rho() const;
    [[nodiscard]] double ratio_rho_povm() const;
    [[nodiscard]] double ratio_chsh() const;
};

/// Closed-form thresholds only; never allocates d-dimensional matrices.
BoundsRow bounds_row(std::int64_t d);

} // namespace lhv
