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

#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace lhv {

/// splitmix64 finalizer applied to (seed, index). Used to derive
/// independent substream seeds, e.g. one per Monte Carlo chunk.
std::uint64_t mix64(std::uint64_t seed, std::uint64_t index) noexcept;

/// A reproducible random stream. Two streams built from the same
/// (seed, stream_index) emit identical sequences.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream_index = 0);

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] std::uint64_t stream_index() const noexcept {
        return stream_index_;
    }

    double normal() { return normal_(engine_); }
    /// Uniform on [0, 1).
    double uniform() { return uniform_(engine_); }
    /// Standard complex Gaussian, E|z|^2 = 2.
    std::complex<double> complex_normal() {
        const double re = normal();
        const double im = normal();
        return {re, im};
    }
    std::mt19937_64 &engine() noexcept { return engine_; }

  private:
    std::uint64_t seed_;
    std::uint64_t stream_index_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

} // namespace lhv
