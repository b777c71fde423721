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

/// \file montecarlo.hpp
/// \brief Chunked, reproducible Monte Carlo estimation of probability tables.
///
/// Samples are split into chunks of `chunk_size`; chunk c draws from
/// RngStream(seed, c). Per-chunk Welford statistics are merged in ascending
/// chunk order, so the result depends only on (samples, seed, chunk_size)
/// and not on the number of worker threads.

#pragma once

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

#include "lhv/qcore.hpp"

namespace lhv {

struct MCConfig {
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 0;
    std::uint64_t chunk_size = 1u << 16;
    /// 0 selects std::thread::hardware_concurrency(). Does not affect results.
    unsigned threads = 0;

    void validate() const;
};

/// Monte Carlo estimate of a table of expectations with per-cell standard
/// errors.
struct JointEstimate {
    RealMatrix estimate;
    RealMatrix stderr_;
    std::uint64_t samples = 0;
};

struct ScalarEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
};

/// Running per-cell mean and M2 (Welford), mergeable with Chan's update.
class CellAccumulator {
  public:
    CellAccumulator() = default;
    CellAccumulator(Eigen::Index rows, Eigen::Index cols)
        : mean_(RealMatrix::Zero(rows, cols)), m2_(RealMatrix::Zero(rows, cols)) {}

    void add(const RealMatrix &x) {
        ++n_;
        const double inv = 1.0 / static_cast<double>(n_);
        const Eigen::Index size = x.size();
        const double *xs = x.data();
        double *mean = mean_.data();
        double *m2 = m2_.data();
        for (Eigen::Index k = 0; k < size; ++k) {
            const double delta = xs[k] - mean[k];
            mean[k] += delta * inv;
            m2[k] += delta * (xs[k] - mean[k]);
        }
    }

    void merge(const CellAccumulator &other);

    [[nodiscard]] std::uint64_t count() const noexcept { return n_; }
    [[nodiscard]] JointEstimate finish() const;

  private:
    std::uint64_t n_ = 0;
    RealMatrix mean_;
    RealMatrix m2_;
};

/// Runs `cfg.samples` draws of `sampler`, a copyable callable
/// `void(RngStream&, RealMatrix& out)` that writes one sample's cell values
/// into `out` (pre-sized rows x cols). Each chunk gets its own copy of the
/// sampler, so samplers may carry scratch buffers.
template <class Sampler>
JointEstimate run_chunked(Eigen::Index rows, Eigen::Index cols, const MCConfig &cfg,
                          const Sampler &sampler) {
    cfg.validate();
    const std::uint64_t n_chunks = (cfg.samples + cfg.chunk_size - 1) / cfg.chunk_size;
    std::vector<CellAccumulator> partial(n_chunks);

    auto run_chunk = [&](std::uint64_t c) {
        Sampler local = sampler;
        RngStream rng(cfg.seed, c);
        CellAccumulator acc(rows, cols);
        RealMatrix x(rows, cols);
        const std::uint64_t begin = c * cfg.chunk_size;
        const std::uint64_t end = std::min(cfg.samples, begin + cfg.chunk_size);
        for (std::uint64_t s = begin; s < end; ++s) {
            local(rng, x);
            acc.add(x);
        }
        partial[c] = std::move(acc);
    };

    unsigned workers = cfg.threads != 0 ? cfg.threads : std::thread::hardware_concurrency();
    workers = static_cast<unsigned>(
        std::clamp<std::uint64_t>(workers == 0 ? 1 : workers, 1, n_chunks));
    if (workers == 1) {
        for (std::uint64_t c = 0; c < n_chunks; ++c) {
            run_chunk(c);
        }
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::uint64_t c = w; c < n_chunks; c += workers) {
                    run_chunk(c);
                }
            });
        }
    }

    CellAccumulator total(rows, cols);
    for (const CellAccumulator &acc : partial) {
        total.merge(acc);
    }
    return total.finish();
}

/// Largest |estimate - oracle| / stderr over all cells. A cell with zero
/// standard error counts as 0 if it matches the oracle to 1e-15, and as
/// infinity otherwise.
double max_sigma_deviation(const JointEstimate &est, const RealMatrix &oracle);

/// Half the L1 distance between the estimate and the oracle table.
double total_variation(const RealMatrix &estimate, const RealMatrix &oracle);

} // namespace lhv
