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

// lhvlab: threshold tables and Monte Carlo verification of local
// hidden-variable models for noisy entangled states.
//
// Exit codes: 0 all cases pass, 1 statistical failure, 2 usage error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "lhv/report.hpp"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

int emit(const std::string &text, const lhv::RunConfig &cfg) {
    if (!cfg.output_path) {
        std::cout << text;
        return 0;
    }
    std::ofstream out(*cfg.output_path, std::ios::binary);
    if (!out) {
        std::cerr << "lhvlab: cannot open " << *cfg.output_path << " for writing\n";
        return kExitUsage;
    }
    out << text;
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Local hidden-variable models for noisy entangled states"};
    app.set_help_flag("-h,--help", "Print this help message and exit");

    std::string command;
    std::vector<std::int64_t> dims;
    std::string format = "text";
    std::string out_path;
    lhv::RunConfig cfg;

    app.add_option("command", command,
                   "bounds | verify-projective | verify-nielsen | verify-povm | verify-chsh | "
                   "crossover")
        ->required();
    app.add_option("--dims", dims, "Comma-separated local dimensions")->delimiter(',');
    app.add_option("--samples", cfg.samples, "Monte Carlo samples per case")
        ->capture_default_str();
    app.add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
    app.add_option("--sigma-tol", cfg.sigma_tolerance, "Pass threshold in standard errors")
        ->capture_default_str();
    app.add_option("--format", format, "text | json | csv")->capture_default_str();
    app.add_option("--out", out_path, "Write the report to this file instead of stdout");
    app.add_option("--chunk-size", cfg.chunk_size, "Samples per reproducible chunk")
        ->capture_default_str();
    app.add_option("--pairs", cfg.pairs, "Random measurement pairs per case group (0 = default)")
        ->capture_default_str();
    app.add_option("--states", cfg.states, "Random pure states per dimension (verify-nielsen)")
        ->capture_default_str();
    app.add_option("--restarts", cfg.restarts, "See-saw restarts (verify-chsh)")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        cfg.command = lhv::parse_command(command);
        cfg.format = lhv::parse_format(format);
        if (!dims.empty()) {
            cfg.dims = dims;
        }
        if (!out_path.empty()) {
            cfg.output_path = out_path;
        }
        cfg.validate();
    } catch (const lhv::Error &e) {
        std::cerr << "lhvlab: " << e.what() << "\n" << app.help();
        return kExitUsage;
    }

    try {
        const auto start = std::chrono::steady_clock::now();
        auto elapsed_ms = [&] {
            return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                             start)
                .count();
        };
        switch (cfg.command) {
        case lhv::Command::Bounds: {
            const auto rows = lhv::run_bounds(cfg);
            return emit(lhv::render_bounds(rows, cfg, elapsed_ms()), cfg);
        }
        case lhv::Command::Crossover: {
            const auto result = lhv::run_crossover();
            return emit(lhv::render_crossover(result, cfg, elapsed_ms()), cfg);
        }
        default: {
            const lhv::VerificationReport report = lhv::run_verify(cfg);
            const int rc = emit(lhv::render_report(report, cfg), cfg);
            if (rc != 0) {
                return rc;
            }
            return report.passed() ? 0 : kExitFailure;
        }
        }
    } catch (const lhv::Error &e) {
        std::cerr << "lhvlab: " << e.what() << '\n';
        return kExitUsage;
    }
}
