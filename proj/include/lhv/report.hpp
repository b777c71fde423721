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

/// \file report.hpp
/// \brief Drivers behind the `lhvlab` command line: threshold tables,
/// seeded Monte Carlo verification suites, and their text/JSON/CSV output.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "lhv/bell_bounds.hpp"
#include "lhv/qcore.hpp"

namespace lhv {

enum class Command {
    Bounds,
    VerifyProjective,
    VerifyNielsen,
    VerifyPovm,
    VerifyChsh,
    Crossover,
};

enum class Format { Text, Json, Csv };

Command parse_command(std::string_view name);
std::string_view command_name(Command c);
Format parse_format(std::string_view name);
std::string_view format_name(Format f);
bool is_verify(Command c);

/// Largest local dimension accepted by commands that build matrices.
inline constexpr std::int64_t kMaxMatrixDim = 64;

struct RunConfig {
    Command command = Command::Bounds;
    std::vector<std::int64_t> dims{2, 3, 4};
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 0;
    double sigma_tolerance = 5.0;
    Format format = Format::Text;
    std::optional<std::string> output_path;
    std::uint64_t chunk_size = 1u << 16;
    /// Random measurement pairs per dimension (verify-projective,
    /// verify-nielsen) or random POVM pairs (verify-povm).
    int pairs = 20;
    /// Random pure states per dimension (verify-nielsen).
    int states = 10;
    /// See-saw restarts (verify-chsh).
    int restarts = 20;

    /// Throws Error(InvalidParameter) with a usage message on bad input.
    void validate() const;
    [[nodiscard]] nlohmann::json to_json() const;
};

struct CaseRecord {
    std::int64_t d = 0;
    std::string descriptor;
    /// "max_sigma_deviation" for Monte Carlo cases, an absolute error name
    /// otherwise.
    std::string metric;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    nlohmann::json detail;
};

struct VerificationReport {
    Command command = Command::VerifyProjective;
    std::vector<CaseRecord> cases;
    std::size_t failures = 0;
    double wall_ms = 0.0;

    [[nodiscard]] bool passed() const noexcept { return failures == 0; }
};

struct CrossoverResult {
    std::int64_t d_star = 0;
    double p_chsh_at = 0.0;
    double p_phi_at = 0.0;
    double p_chsh_before = 0.0;
    double p_phi_before = 0.0;
};

std::vector<BoundsRow> run_bounds(const RunConfig &cfg);
VerificationReport run_verify(const RunConfig &cfg);
CrossoverResult run_crossover();

nlohmann::json to_json(const BoundsRow &row);
nlohmann::json to_json(const CaseRecord &c);
/// Row-major array of [re, im] pairs.
nlohmann::json complex_matrix_json(const Matrix &m);
nlohmann::json real_matrix_json(const RealMatrix &m);

std::string render_bounds(const std::vector<BoundsRow> &rows, const RunConfig &cfg,
                          double wall_ms);
std::string render_report(const VerificationReport &report, const RunConfig &cfg);
std::string render_crossover(const CrossoverResult &result, const RunConfig &cfg,
                             double wall_ms);

/// Quotes a CSV field per RFC 4180 when needed.
std::string csv_field(std::string_view s);
/// 12 significant digits, '.' decimal separator.
std::string csv_number(double x);

} // namespace lhv
