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

#include "lhv/report.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <locale>
#include <sstream>

#include "lhv/lhv_povm.hpp"
#include "lhv/lhv_projective.hpp"
#include "lhv/montecarlo.hpp"
#include "lhv/nielsen.hpp"

namespace lhv {

namespace {

using json = nlohmann::json;

constexpr int kDefaultProjectivePairs = 20;
constexpr int kDefaultNielsenPairs = 10;
constexpr int kDefaultPovmPairs = 5;

// Stream offsets keep measurement generation and Monte Carlo seeds apart.
constexpr std::uint64_t kInputStream = 0x1000;
constexpr std::uint64_t kCaseStride = 0x10000;

struct Clock {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    [[nodiscard]] double elapsed_ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

int pairs_or(const RunConfig &cfg, int fallback) { return cfg.pairs > 0 ? cfg.pairs : fallback; }

MCConfig mc_config(const RunConfig &cfg, std::int64_t d, std::uint64_t case_index) {
    MCConfig mc;
    mc.samples = cfg.samples;
    mc.chunk_size = cfg.chunk_size;
    mc.seed = mix64(cfg.seed, static_cast<std::uint64_t>(d) * kCaseStride + case_index);
    return mc;
}

CaseRecord mc_case(std::int64_t d, std::string descriptor, const JointEstimate &est,
                   const RealMatrix &oracle, const MCConfig &mc, double sigma_tol) {
    CaseRecord c;
    c.d = d;
    c.descriptor = std::move(descriptor);
    c.metric = "max_sigma_deviation";
    c.value = max_sigma_deviation(est, oracle);
    c.tolerance = sigma_tol;
    c.pass = c.value <= sigma_tol;
    c.detail = {{"d", d},
                {"samples", mc.samples},
                {"seed", mc.seed},
                {"estimate", real_matrix_json(est.estimate)},
                {"stderr", real_matrix_json(est.stderr_)},
                {"oracle", real_matrix_json(oracle)},
                {"max_sigma_deviation", c.value},
                {"total_variation", total_variation(est.estimate, oracle)}};
    return c;
}

CaseRecord exact_case(std::int64_t d, std::string descriptor, std::string metric, double value,
                      double tolerance, json detail = json::object()) {
    CaseRecord c;
    c.d = d;
    c.descriptor = std::move(descriptor);
    c.metric = std::move(metric);
    c.value = value;
    c.tolerance = tolerance;
    c.pass = value <= tolerance;
    c.detail = std::move(detail);
    return c;
}

json povm_json(const RankOnePovm &m) {
    json out = json::array();
    for (const auto &e : m.elements()) {
        json dir = json::array();
        for (Eigen::Index i = 0; i < e.direction.size(); ++i) {
            dir.push_back({e.direction[i].real(), e.direction[i].imag()});
        }
        out.push_back({{"weight", e.weight}, {"direction", dir}});
    }
    return out;
}

json real_vector_json(const RealVector &v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(v[i]);
    }
    return out;
}

void verify_projective(const RunConfig &cfg, std::int64_t d, std::vector<CaseRecord> &out) {
    const int n = static_cast<int>(d);
    RngStream gen(cfg.seed, kInputStream + static_cast<std::uint64_t>(d));
    const double p = p_phi(d);
    for (int k = 0; k < pairs_or(cfg, kDefaultProjectivePairs); ++k) {
        const ProjectiveMeasurement q = haar_basis(n, gen);
        const ProjectiveMeasurement r = haar_basis(n, gen);
        const MCConfig mc = mc_config(cfg, d, static_cast<std::uint64_t>(k));
        const JointEstimate est = mc_joint(q, r, mc);
        out.push_back(mc_case(d, "haar-pair-" + std::to_string(k), est,
                              iso_joint_closed(n, p, q, r), mc, cfg.sigma_tolerance));
    }
}

void verify_nielsen(const RunConfig &cfg, std::int64_t d, std::vector<CaseRecord> &out) {
    const int n = static_cast<int>(d);
    RngStream gen(cfg.seed, kInputStream + static_cast<std::uint64_t>(d));
    std::uint64_t index = 0;
    for (int s = 0; s < cfg.states; ++s) {
        const BipartitePureState psi = haar_pure_state(n, gen);
        const DensityMatrix target = tilde_rho(psi);
        const RealVector nu = schmidt(psi).coefficients;
        for (int k = 0; k < pairs_or(cfg, kDefaultNielsenPairs); ++k) {
            const ProjectiveMeasurement q = haar_basis(n, gen);
            const ProjectiveMeasurement r = haar_basis(n, gen);
            const MCConfig mc = mc_config(cfg, d, index++);
            const JointEstimate est = mc_joint_extended(psi, q, r, mc);
            CaseRecord c = mc_case(d, "state-" + std::to_string(s) + "/pair-" + std::to_string(k),
                                   est, joint_prob(target, q, r), mc, cfg.sigma_tolerance);
            c.detail["schmidt"] = real_vector_json(nu);
            out.push_back(std::move(c));
        }
    }
}

void verify_povm(const RunConfig &cfg, std::int64_t d, std::vector<CaseRecord> &out) {
    const int n = static_cast<int>(d);
    RngStream gen(cfg.seed, kInputStream + static_cast<std::uint64_t>(d));
    const DensityMatrix iso = isotropic_state(n, p_phi_povm(d));
    std::uint64_t index = 0;

    auto run = [&](const std::string &name, const RankOnePovm &m, const RankOnePovm &nn) {
        const MCConfig mc = mc_config(cfg, d, index++);
        const JointEstimate est = mc_joint_povm(m, nn, mc);
        const std::vector<Matrix> em = m.effects();
        const std::vector<Matrix> en = nn.effects();
        CaseRecord c = mc_case(d, name, est, joint_prob(iso, em, en), mc, cfg.sigma_tolerance);
        c.detail["alice_povm"] = povm_json(m);
        c.detail["bob_povm"] = povm_json(nn);
        out.push_back(std::move(c));
    };

    const RankOnePovm comp = RankOnePovm::from_projective(ProjectiveMeasurement::computational(n));
    run("projective-computational", comp, comp);
    run("projective-haar", RankOnePovm::from_projective(haar_basis(n, gen)),
        RankOnePovm::from_projective(haar_basis(n, gen)));
    if (d == 2) {
        run("trine", trine_povm(), trine_povm());
        run("tetrahedral", tetrahedral_povm(), tetrahedral_povm());
    }
    for (int k = 0; k < pairs_or(cfg, kDefaultPovmPairs); ++k) {
        run("random-rank1-" + std::to_string(k), random_rank_one_povm(n, n + 2, gen),
            random_rank_one_povm(n, n + 2, gen));
    }

    // Nielsen-extended POVM model on a random pure state.
    const BipartitePureState psi = haar_pure_state(n, gen);
    const RankOnePovm m = random_rank_one_povm(n, n + 1, gen);
    const RankOnePovm nn = random_rank_one_povm(n, n + 1, gen);
    const MCConfig mc = mc_config(cfg, d, index++);
    const JointEstimate est = mc_joint_povm_extended(psi, m, nn, mc);
    const std::vector<Matrix> em = m.effects();
    const std::vector<Matrix> en = nn.effects();
    CaseRecord c = mc_case(d, "nielsen-extended", est,
                           joint_prob(tilde_rho(psi, p_phi_povm(d)), em, en), mc,
                           cfg.sigma_tolerance);
    c.detail["schmidt"] = real_vector_json(schmidt(psi).coefficients);
    out.push_back(std::move(c));
}

void verify_chsh(const RunConfig &cfg, std::int64_t d, std::vector<CaseRecord> &out) {
    const int n = static_cast<int>(d);
    const ChshSettings settings = embedded_settings(n);

    double identity_err = 0.0;
    for (double p : {0.0, 0.5, 1.0}) {
        identity_err = std::max(identity_err, std::abs(chsh_value(embedded_state(n, p), settings) -
                                                       embedded_chsh_analytic(n, p)));
    }
    out.push_back(exact_case(d, "embedded-analytic-identity", "abs_error", identity_err, 1e-9));

    const double pc = p_chsh(d);
    const double root_err = std::abs(chsh_value(embedded_state(n, pc), settings) - 2.0);
    out.push_back(exact_case(d, "embedded-threshold-root", "abs_error", root_err, 1e-9,
                             {{"p_chsh", pc}}));

    RngStream rng(cfg.seed, kInputStream + static_cast<std::uint64_t>(d));
    const ChshOptimum opt = optimize_chsh(embedded_state(n, pc), cfg.restarts, rng);
    out.push_back(exact_case(d, "seesaw-at-threshold", "abs_error", std::abs(opt.value - 2.0), 1e-3,
                             {{"p_chsh", pc}, {"seesaw_value", opt.value},
                              {"restarts", cfg.restarts}}));
}

std::string fmt_fixed(double x, int width, int precision) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setw(width) << std::setprecision(precision) << x;
    return os.str();
}

json envelope(Command command, const RunConfig &cfg) {
    json j;
    j["command"] = command_name(command);
    j["config"] = cfg.to_json();
    return j;
}

} // namespace

// ---------------------------------------------------------------------------
// Names and config

Command parse_command(std::string_view name) {
    if (name == "bounds") return Command::Bounds;
    if (name == "verify-projective") return Command::VerifyProjective;
    if (name == "verify-nielsen") return Command::VerifyNielsen;
    if (name == "verify-povm") return Command::VerifyPovm;
    if (name == "verify-chsh") return Command::VerifyChsh;
    if (name == "crossover") return Command::Crossover;
    throw Error(ErrorKind::InvalidParameter, "unknown command '" + std::string(name) + "'");
}

std::string_view command_name(Command c) {
    switch (c) {
    case Command::Bounds: return "bounds";
    case Command::VerifyProjective: return "verify-projective";
    case Command::VerifyNielsen: return "verify-nielsen";
    case Command::VerifyPovm: return "verify-povm";
    case Command::VerifyChsh: return "verify-chsh";
    case Command::Crossover: return "crossover";
    }
    return "unknown";
}

Format parse_format(std::string_view name) {
    if (name == "text") return Format::Text;
    if (name == "json") return Format::Json;
    if (name == "csv") return Format::Csv;
    throw Error(ErrorKind::InvalidParameter, "unknown format '" + std::string(name) + "'");
}

std::string_view format_name(Format f) {
    switch (f) {
    case Format::Text: return "text";
    case Format::Json: return "json";
    case Format::Csv: return "csv";
    }
    return "unknown";
}

bool is_verify(Command c) {
    return c == Command::VerifyProjective || c == Command::VerifyNielsen ||
           c == Command::VerifyPovm || c == Command::VerifyChsh;
}

void RunConfig::validate() const {
    if (command != Command::Crossover) {
        if (dims.empty()) {
            throw Error(ErrorKind::InvalidParameter, "--dims must list at least one dimension");
        }
        for (std::int64_t d : dims) {
            if (d < 2) {
                throw Error(ErrorKind::InvalidParameter,
                            "every dimension must be >= 2, got " + std::to_string(d));
            }
            if (is_verify(command) && d > kMaxMatrixDim) {
                throw Error(ErrorKind::InvalidParameter,
                            "refusing d = " + std::to_string(d) + ": " +
                                std::string(command_name(command)) +
                                " builds d^2 x d^2 matrices; the limit is d <= " +
                                std::to_string(kMaxMatrixDim));
            }
        }
    }
    if (is_verify(command) && samples < 1000) {
        throw Error(ErrorKind::InvalidParameter, "--samples must be >= 1000 for verify commands");
    }
    if (!(sigma_tolerance >= 1.0)) {
        throw Error(ErrorKind::InvalidParameter, "--sigma-tol must be >= 1");
    }
    if (chunk_size == 0) {
        throw Error(ErrorKind::InvalidParameter, "--chunk-size must be >= 1");
    }
    if (pairs < 0 || states < 1 || restarts < 1) {
        throw Error(ErrorKind::InvalidParameter, "--pairs >= 0, --states >= 1, --restarts >= 1");
    }
}

json RunConfig::to_json() const {
    json j;
    j["dims"] = dims;
    j["samples"] = samples;
    j["seed"] = seed;
    j["sigma_tolerance"] = sigma_tolerance;
    j["format"] = format_name(format);
    j["chunk_size"] = chunk_size;
    j["pairs"] = pairs;
    j["states"] = states;
    j["restarts"] = restarts;
    return j;
}

// ---------------------------------------------------------------------------
// Drivers

std::vector<BoundsRow> run_bounds(const RunConfig &cfg) {
    cfg.validate();
    std::vector<BoundsRow> rows;
    rows.reserve(cfg.dims.size());
    for (std::int64_t d : cfg.dims) {
        rows.push_back(bounds_row(d));
    }
    return rows;
}

VerificationReport run_verify(const RunConfig &cfg) {
    cfg.validate();
    if (!is_verify(cfg.command)) {
        throw Error(ErrorKind::InvalidParameter, "run_verify needs a verify-* command");
    }
    const Clock clock;
    VerificationReport report;
    report.command = cfg.command;
    for (std::int64_t d : cfg.dims) {
        switch (cfg.command) {
        case Command::VerifyProjective: verify_projective(cfg, d, report.cases); break;
        case Command::VerifyNielsen: verify_nielsen(cfg, d, report.cases); break;
        case Command::VerifyPovm: verify_povm(cfg, d, report.cases); break;
        case Command::VerifyChsh: verify_chsh(cfg, d, report.cases); break;
        default: break;
        }
    }
    for (const CaseRecord &c : report.cases) {
        report.failures += c.pass ? 0 : 1;
    }
    report.wall_ms = clock.elapsed_ms();
    return report;
}

CrossoverResult run_crossover() {
    CrossoverResult r;
    r.d_star = crossover_dimension();
    r.p_chsh_at = p_chsh(r.d_star);
    r.p_phi_at = p_phi(r.d_star);
    r.p_chsh_before = p_chsh(r.d_star - 1);
    r.p_phi_before = p_phi(r.d_star - 1);
    return r;
}

// ---------------------------------------------------------------------------
// Serialization

json complex_matrix_json(const Matrix &m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back({m(i, j).real(), m(i, j).imag()});
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

json real_matrix_json(const RealMatrix &m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(m(i, j));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

json to_json(const BoundsRow &row) {
    return {{"d", row.d},
            {"p_sep_iso", row.p_sep_iso},
            {"p_sep_lower", row.p_sep_lower},
            {"p_sep_upper", row.p_sep_upper},
            {"p_phi", row.p_phi},
            {"p_phi_povm", row.p_phi_povm},
            {"p_rho", row.p_rho},
            {"p_rho_povm", row.p_rho_povm},
            {"p_chsh", row.p_chsh},
            {"cglmp_const", row.cglmp_const},
            {"ratio_phi", row.ratio_phi()},
            {"ratio_phi_povm", row.ratio_phi_povm()},
            {"ratio_rho", row.ratio_rho()},
            {"ratio_rho_povm", row.ratio_rho_povm()},
            {"ratio_chsh", row.ratio_chsh()}};
}

json to_json(const CaseRecord &c) {
    json j = {{"d", c.d},
              {"measurement", c.descriptor},
              {"metric", c.metric},
              {"value", c.value},
              {"tolerance", c.tolerance},
              {"pass", c.pass}};
    if (!c.detail.empty()) {
        j["detail"] = c.detail;
    }
    return j;
}

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) {
        return std::string(s);
    }
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') {
            out += '"';
        }
        out += ch;
    }
    out += '"';
    return out;
}

std::string csv_number(double x) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(12) << x;
    return os.str();
}

namespace {
const char *const kBoundsColumns[] = {
    "d",          "p_sep_iso", "p_sep_lower", "p_sep_upper",    "p_phi",
    "p_phi_povm", "p_rho",     "p_rho_povm",  "p_chsh",         "cglmp_const",
    "ratio_phi",  "ratio_phi_povm", "ratio_rho", "ratio_rho_povm", "ratio_chsh"};

std::vector<double> bounds_values(const BoundsRow &r) {
    return {static_cast<double>(r.d), r.p_sep_iso,       r.p_sep_lower, r.p_sep_upper,
            r.p_phi,                  r.p_phi_povm,      r.p_rho,       r.p_rho_povm,
            r.p_chsh,                 r.cglmp_const,     r.ratio_phi(), r.ratio_phi_povm(),
            r.ratio_rho(),            r.ratio_rho_povm(), r.ratio_chsh()};
}
} // namespace

std::string render_bounds(const std::vector<BoundsRow> &rows, const RunConfig &cfg,
                          double wall_ms) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    switch (cfg.format) {
    case Format::Json: {
        json j = envelope(Command::Bounds, cfg);
        j["rows"] = json::array();
        for (const BoundsRow &r : rows) {
            j["rows"].push_back(to_json(r));
        }
        j["summary"] = {{"cases", rows.size()}, {"failures", 0}, {"wall_ms", wall_ms}};
        os << j.dump(2) << '\n';
        break;
    }
    case Format::Csv: {
        bool first = true;
        for (const char *c : kBoundsColumns) {
            os << (first ? "" : ",") << c;
            first = false;
        }
        os << "\r\n";
        for (const BoundsRow &r : rows) {
            os << r.d;
            const std::vector<double> v = bounds_values(r);
            for (std::size_t k = 1; k < v.size(); ++k) {
                os << ',' << csv_number(v[k]);
            }
            os << "\r\n";
        }
        break;
    }
    case Format::Text: {
        os << std::left << std::setw(9) << "d";
        for (std::size_t k = 1; k < std::size(kBoundsColumns); ++k) {
            os << std::right << std::setw(15) << kBoundsColumns[k];
        }
        os << '\n';
        for (const BoundsRow &r : rows) {
            os << std::left << std::setw(9) << r.d;
            const std::vector<double> v = bounds_values(r);
            for (std::size_t k = 1; k < v.size(); ++k) {
                os << std::right << fmt_fixed(v[k], 15, 8);
            }
            os << '\n';
        }
        break;
    }
    }
    return os.str();
}

std::string render_report(const VerificationReport &report, const RunConfig &cfg) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    switch (cfg.format) {
    case Format::Json: {
        json j = envelope(report.command, cfg);
        j["cases"] = json::array();
        for (const CaseRecord &c : report.cases) {
            j["cases"].push_back(to_json(c));
        }
        j["summary"] = {{"cases", report.cases.size()},
                        {"failures", report.failures},
                        {"wall_ms", report.wall_ms}};
        os << j.dump(2) << '\n';
        break;
    }
    case Format::Csv:
        os << "d,measurement,metric,value,tolerance,pass\r\n";
        for (const CaseRecord &c : report.cases) {
            os << c.d << ',' << csv_field(c.descriptor) << ',' << csv_field(c.metric) << ','
               << csv_number(c.value) << ',' << csv_number(c.tolerance) << ','
               << (c.pass ? "true" : "false") << "\r\n";
        }
        break;
    case Format::Text:
        for (const CaseRecord &c : report.cases) {
            os << (c.pass ? "PASS " : "FAIL ") << "d=" << c.d << ' ' << std::left
               << std::setw(28) << c.descriptor << ' ' << c.metric << '='
               << std::setprecision(6) << c.value << " (tol " << c.tolerance << ")\n";
        }
        os << command_name(report.command) << ": " << report.cases.size() << " cases, "
           << report.failures << " failures, " << std::fixed << std::setprecision(0)
           << report.wall_ms << " ms\n";
        break;
    }
    return os.str();
}

std::string render_crossover(const CrossoverResult &r, const RunConfig &cfg, double wall_ms) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    switch (cfg.format) {
    case Format::Json: {
        json j = envelope(Command::Crossover, cfg);
        j["rows"] = json::array({{{"d_star", r.d_star},
                                  {"p_chsh", r.p_chsh_at},
                                  {"p_phi", r.p_phi_at},
                                  {"p_chsh_prev", r.p_chsh_before},
                                  {"p_phi_prev", r.p_phi_before}}});
        j["summary"] = {{"cases", 1}, {"failures", 0}, {"wall_ms", wall_ms}};
        os << j.dump(2) << '\n';
        break;
    }
    case Format::Csv:
        os << "d_star,p_chsh,p_phi,p_chsh_prev,p_phi_prev\r\n"
           << r.d_star << ',' << csv_number(r.p_chsh_at) << ',' << csv_number(r.p_phi_at) << ','
           << csv_number(r.p_chsh_before) << ',' << csv_number(r.p_phi_before) << "\r\n";
        break;
    case Format::Text:
        os << std::setprecision(12) << "crossover dimension d* = " << r.d_star << '\n'
           << "  p_chsh(d*)   = " << r.p_chsh_at << "  <  p_phi(d*)   = " << r.p_phi_at << '\n'
           << "  p_chsh(d*-1) = " << r.p_chsh_before << "  >= p_phi(d*-1) = " << r.p_phi_before
           << '\n';
        break;
    }
    return os.str();
}

} // namespace lhv
