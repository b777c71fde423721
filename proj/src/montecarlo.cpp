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

#include "lhv/montecarlo.hpp"

#include <cmath>
#include <limits>

namespace lhv {

void MCConfig::validate() const {
    if (samples == 0) {
        throw Error(ErrorKind::InvalidParameter, "Monte Carlo sample count must be >= 1");
    }
    if (chunk_size == 0) {
        throw Error(ErrorKind::InvalidParameter, "Monte Carlo chunk size must be >= 1");
    }
}

void CellAccumulator::merge(const CellAccumulator &other) {
    if (other.n_ == 0) {
        return;
    }
    if (n_ == 0) {
        *this = other;
        return;
    }
    const auto na = static_cast<double>(n_);
    const auto nb = static_cast<double>(other.n_);
    const double n = na + nb;
    const RealMatrix delta = other.mean_ - mean_;
    mean_ += delta * (nb / n);
    m2_ += other.m2_ + delta.cwiseProduct(delta) * (na * nb / n);
    n_ += other.n_;
}

JointEstimate CellAccumulator::finish() const {
    JointEstimate out;
    out.samples = n_;
    out.estimate = mean_;
    if (n_ > 1) {
        const auto n = static_cast<double>(n_);
        out.stderr_ = (m2_ / ((n - 1.0) * n)).cwiseMax(0.0).cwiseSqrt();
    } else {
        out.stderr_ = RealMatrix::Zero(mean_.rows(), mean_.cols());
    }
    return out;
}

double max_sigma_deviation(const JointEstimate &est, const RealMatrix &oracle) {
    if (est.estimate.rows() != oracle.rows() || est.estimate.cols() != oracle.cols()) {
        throw Error(ErrorKind::InvalidArgument, "estimate and oracle shapes differ");
    }
    double worst = 0.0;
    for (Eigen::Index k = 0; k < oracle.size(); ++k) {
        const double diff = std::abs(est.estimate.data()[k] - oracle.data()[k]);
        const double se = est.stderr_.data()[k];
        double dev = 0.0;
        if (se > 0.0) {
            dev = diff / se;
        } else if (diff > 1e-15) {
            dev = std::numeric_limits<double>::infinity();
        }
        worst = std::max(worst, dev);
    }
    return worst;
}

double total_variation(const RealMatrix &estimate, const RealMatrix &oracle) {
    return 0.5 * (estimate - oracle).cwiseAbs().sum();
}

} // namespace lhv
