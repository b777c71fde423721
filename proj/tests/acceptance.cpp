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

// Acceptance suite: one PASS/FAIL line per criterion, full sample sizes.
// Exits nonzero if any criterion fails.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "json.hpp"

#include "lhv/bell_bounds.hpp"
#include "lhv/lhv_povm.hpp"
#include "lhv/lhv_projective.hpp"
#include "lhv/nielsen.hpp"
#include "lhv/qcore.hpp"
#include "test_support.hpp"

using namespace lhv;
using lhv::testing::max_abs;

namespace {

constexpr std::uint64_t kSamples = 1'000'000;
constexpr double kSigma = 5.0;

MCConfig full(std::uint64_t seed) {
    MCConfig cfg;
    cfg.samples = kSamples;
    cfg.seed = seed;
    return cfg;
}

struct Outcome {
    bool pass = true;
    std::ostringstream note;

    void require(bool ok, const std::string &what) {
        if (!ok) {
            pass = false;
            note << " [failed: " << what << "]";
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

RealMatrix povm_oracle(const Matrix &rho, const RankOnePovm &m, const RankOnePovm &n) {
    const std::vector<Matrix> em = m.effects();
    const std::vector<Matrix> en = n.effects();
    return joint_prob(DensityMatrix{rho}, em, en);
}

std::string run_cli(const std::string &args, int &code) {
    const std::string cmd = std::string(LHVLAB_CLI_PATH) + " " + args;
    FILE *pipe = ::popen(cmd.c_str(), "r");
    std::string out;
    if (pipe == nullptr) {
        code = -1;
        return out;
    }
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) {
        out.append(buf.data(), n);
    }
    const int status = ::pclose(pipe);
    code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return out;
}

// 1. Projective model equivalence.
void criterion1(Outcome &o) {
    RngStream gen(1001);
    double worst_sigma = 0.0;
    double worst_tv = 0.0;
    int cases = 0;
    for (int d = 2; d <= 5; ++d) {
        const double p = p_phi(d);
        const Matrix iso = lhv::testing::isotropic_by_hand(d, p);
        for (int k = 0; k < 20; ++k) {
            const auto q = haar_basis(d, gen);
            const auto r = haar_basis(d, gen);
            const JointEstimate est = mc_joint(q, r, full(mix64(1, d * 100 + k)));
            const RealMatrix closed = iso_joint_closed(d, p, q, r);
            const RealMatrix direct = joint_prob(DensityMatrix{iso}, q, r);
            o.require(max_abs(closed - direct) < 1e-12, "closed form vs explicit state");
            worst_sigma = std::max(worst_sigma, max_sigma_deviation(est, closed));
            worst_tv = std::max(worst_tv, total_variation(est.estimate, closed));
            ++cases;
        }
    }
    o.require(worst_sigma <= kSigma, "5 sigma");
    o.require(worst_tv < 3e-3, "total variation");
    o.note << cases << " cases, max deviation " << worst_sigma << " sigma, max TV " << worst_tv;
}

// 2. Threshold values.
void criterion2(Outcome &o) {
    o.require(p_phi(2) == 0.5, "p_phi(2) == 1/2");
    const ScalarEstimate s = mc_selfcorr(ProjectiveMeasurement::computational(2), 0, full(2002));
    const double z = std::abs(s.value - 3.0 / 8.0) / s.stderr_;
    o.require(z <= kSigma, "selfcorr 3/8");
    const double d = 1e6;
    const double ratio = p_phi(1'000'000) * d / std::log(d);
    o.require(std::abs(ratio - 1.0) < 0.05, "asymptote");
    o.note << "p_phi(2)=" << p_phi(2) << ", selfcorr=" << s.value << " (" << z
           << " sigma from 3/8), p_phi*d/log d at 1e6=" << ratio;
}

// 3. Nielsen extension.
void criterion3(Outcome &o) {
    RngStream gen(3003);
    double worst_sigma = 0.0;
    double worst_identity = 0.0;
    int cases = 0;
    for (int d = 2; d <= 3; ++d) {
        const Vector phi = max_entangled(d).amplitudes();
        for (int s = 0; s < 10; ++s) {
            const BipartitePureState psi = haar_pure_state(d, gen);
            // Operator identities in the Schmidt frame.
            const SchmidtForm form = schmidt(psi);
            const NielsenOperators ops = nielsen_operators(form.coefficients);
            Vector diag = Vector::Zero(d * d);
            for (int j = 0; j < d; ++j) {
                diag[j * d + j] = form.coefficients[j];
            }
            Matrix sum_w = Matrix::Zero(d, d);
            Matrix sum_aa = Matrix::Zero(d, d);
            for (int i = 0; i < d; ++i) {
                sum_w += ops.W[i];
                sum_aa += ops.A[i] * ops.A[i].adjoint();
                const Vector image = std::sqrt(static_cast<double>(d)) *
                                     (kron(ops.A[i], cyclic_shift(d, i)) * phi);
                worst_identity = std::max(worst_identity, max_abs(image - diag));
                const Vector lifted = kron(ops.W[i], Matrix::Identity(d, d)) * phi;
                worst_identity = std::max(worst_identity, std::abs(phi.dot(lifted) - 1.0 / d));
            }
            Matrix sigma = Matrix::Zero(d, d);
            sigma.diagonal() = form.coefficients.cwiseAbs2().cast<Complex>();
            worst_identity = std::max(worst_identity, max_abs(sum_w - Matrix::Identity(d, d)));
            worst_identity = std::max(worst_identity, max_abs(sum_aa - d * sigma));

            const DensityMatrix target{lhv::testing::tilde_by_hand(psi.amplitudes(), d, p_phi(d))};
            for (int k = 0; k < 10; ++k) {
                const auto q = haar_basis(d, gen);
                const auto r = haar_basis(d, gen);
                const JointEstimate est =
                    mc_joint_extended(psi, q, r, full(mix64(3, d * 1000 + s * 10 + k)));
                worst_sigma = std::max(worst_sigma, max_sigma_deviation(est, joint_prob(target, q, r)));
                ++cases;
            }
        }
    }
    o.require(worst_sigma <= kSigma, "5 sigma");
    o.require(worst_identity <= 1e-10, "operator identities");
    o.note << cases << " cases, max deviation " << worst_sigma
           << " sigma, worst operator identity residual " << worst_identity;
}

// 4. Noise completion.
void criterion4(Outcome &o) {
    RngStream gen(4004);
    double worst = 0.0;
    for (int d = 2; d <= 5; ++d) {
        for (int k = 0; k < 50; ++k) {
            const BipartitePureState psi = haar_pure_state(d, gen);
            const DensityMatrix expected = noisy_state(psi.density(), p_rho(d));
            worst = std::max(worst, max_abs(noise_completion(psi).state.matrix() - expected.matrix()));
        }
    }
    o.require(worst <= 1e-12, "cell-wise 1e-12");
    o.require(std::abs(p_rho(2) - 1.0 / 3.0) < 1e-15, "p_rho(2) == 1/3");
    o.note << "200 states, worst cell difference " << worst << ", p_rho(2)=" << p_rho(2);
}

// 5. POVM model.
void criterion5(Outcome &o) {
    RngStream gen(5005);
    double worst_norm = 0.0;
    double worst_neg = 0.0;
    int inputs = 0;
    for (int d = 2; d <= 5; ++d) {
        for (int k = 0; k < 10'000; ++k) {
            const RankOnePovm n = random_rank_one_povm(d, d + 1 + k % 5, gen);
            const HiddenVariable lambda = haar_state(d, gen);
            const RealVector a = alice_response_povm(n, lambda);
            const RealVector b = bob_response_povm(n, lambda);
            worst_norm = std::max({worst_norm, std::abs(a.sum() - 1.0), std::abs(b.sum() - 1.0)});
            worst_neg = std::min({worst_neg, a.minCoeff(), b.minCoeff()});
            ++inputs;
        }
    }
    o.require(worst_norm <= 1e-12, "normalization");
    o.require(worst_neg >= -1e-12, "nonnegativity");

    struct Case {
        int d;
        std::string name;
        RankOnePovm m;
        RankOnePovm n;
    };
    std::vector<Case> cases;
    for (int d = 2; d <= 3; ++d) {
        const auto comp = RankOnePovm::from_projective(ProjectiveMeasurement::computational(d));
        cases.push_back({d, "computational", comp, comp});
        cases.push_back({d, "haar-projective",
                         RankOnePovm::from_projective(haar_basis(d, gen)),
                         RankOnePovm::from_projective(haar_basis(d, gen))});
        cases.push_back({d, "random-rank1", random_rank_one_povm(d, d + 2, gen),
                         random_rank_one_povm(d, d + 1, gen)});
    }
    cases.push_back({2, "trine", trine_povm(), trine_povm()});
    cases.push_back({2, "tetrahedral", tetrahedral_povm(), tetrahedral_povm()});
    cases.push_back({2, "trine-tetrahedral", trine_povm(), tetrahedral_povm()});
    double worst_sigma = 0.0;
    std::uint64_t index = 0;
    for (const Case &c : cases) {
        const Matrix iso = lhv::testing::isotropic_by_hand(c.d, p_phi_povm(c.d));
        const JointEstimate est = mc_joint_povm(c.m, c.n, full(mix64(5, index++)));
        const double dev = max_sigma_deviation(est, povm_oracle(iso, c.m, c.n));
        if (dev > kSigma) {
            o.note << "(" << c.name << " d=" << c.d << " at " << dev << " sigma) ";
        }
        worst_sigma = std::max(worst_sigma, dev);
    }
    o.require(worst_sigma <= kSigma, "5 sigma");
    o.require(std::abs(p_phi_povm(2) - 5.0 / 12.0) < 1e-15, "p_phi_povm(2) == 5/12");
    const double d = 1e4;
    const double ratio = p_phi_povm(10'000) * std::numbers::e * d / 3.0;
    o.require(std::abs(ratio - 1.0) < 0.01, "asymptote");
    o.note << inputs << " response inputs (worst |sum-1| " << worst_norm << ", min " << worst_neg
           << "), " << cases.size() << " Monte Carlo cases, max deviation " << worst_sigma
           << " sigma, p_phi_povm*e*d/3 at 1e4=" << ratio;
}

// 6. CHSH upper bound.
void criterion6(Outcome &o) {
    const double s2 = std::sqrt(2.0);
    double worst_identity = 0.0;
    double worst_root = 0.0;
    for (int d = 2; d <= 10; ++d) {
        const ChshSettings s = embedded_settings(d);
        for (double p : {0.0, 0.5, 1.0}) {
            const double oracle = p * 2.0 * s2 + (1.0 - p) * 2.0 * (d - 2.0) * (d - 2.0) / (d * d);
            worst_identity = std::max(worst_identity, std::abs(chsh_value(embedded_state(d, p), s) - oracle));
        }
        worst_root = std::max(worst_root, std::abs(chsh_value(embedded_state(d, p_chsh(d)), s) - 2.0));
    }
    o.require(worst_identity <= 1e-9, "analytic identity");
    o.require(worst_root <= 1e-9, "root at p_chsh");
    o.require(std::abs(p_chsh(2) - 1.0 / s2) <= 1e-12, "p_chsh(2) == 1/sqrt 2");
    RngStream rng(6006);
    double worst_seesaw = 0.0;
    for (int d = 2; d <= 5; ++d) {
        const ChshOptimum opt = optimize_chsh(embedded_state(d, p_chsh(d)), 20, rng);
        worst_seesaw = std::max(worst_seesaw, std::abs(opt.value - 2.0));
    }
    o.require(worst_seesaw <= 1e-3, "see-saw threshold");
    o.note << "identity residual " << worst_identity << ", root residual " << worst_root
           << ", see-saw |value - 2| " << worst_seesaw;
}

// 7. Crossover.
void criterion7(Outcome &o) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::int64_t d = crossover_dimension();
    const double secs = seconds_since(t0);
    o.require(secs < 1.0, "under 1 s");
    o.require(p_chsh(d) < p_phi(d), "crossed at d*");
    o.require(p_chsh(d - 1) >= p_phi(d - 1), "not crossed at d*-1");
    // Independent check with an incremental harmonic sum.
    const double h = lhv::testing::harmonic_forward(d);
    const double h1 = h - 1.0 / static_cast<double>(d);
    const double s2 = std::sqrt(2.0);
    auto chsh = [s2](double n) { return 4.0 * (n - 1.0) / ((s2 - 1.0) * n * n + 4.0 * n - 4.0); };
    o.require(chsh(static_cast<double>(d)) < (h - 1.0) / static_cast<double>(d - 1), "oracle at d*");
    o.require(chsh(static_cast<double>(d - 1)) >= (h1 - 1.0) / static_cast<double>(d - 2),
              "oracle at d*-1");
    o.note << "d*=" << d << " in " << secs * 1e3 << " ms";
}

// 8. Separability.
void criterion8(Outcome &o) {
    double worst = 0.0;
    for (int d = 2; d <= 5; ++d) {
        double lo = 0.0;
        double hi = 1.0;
        while (hi - lo > 1e-12) {
            const double mid = 0.5 * (lo + hi);
            (ppt_min_eigenvalue(isotropic_state(d, mid)) >= 0.0 ? lo : hi) = mid;
        }
        worst = std::max(worst, std::abs(0.5 * (lo + hi) - 1.0 / (d + 1.0)));
    }
    o.require(worst <= 1e-9, "PPT root");
    const SeparabilityBounds s = separability_bounds(2);
    o.require(std::abs(s.lower - 1.0 / 3.0) < 1e-15 && std::abs(s.upper - 1.0 / 3.0) < 1e-15 &&
                  std::abs(s.iso - 1.0 / 3.0) < 1e-15,
              "separability_bounds(2)");
    o.note << "worst PPT root offset " << worst;
}

// 9. Table regeneration through the command line.
void criterion9(Outcome &o) {
    int code = 0;
    const std::string table = run_cli("bounds --dims 2,3,4,10,100 --format csv", code);
    o.require(code == 0, "bounds exit code");
    int lines = 0;
    for (char c : table) {
        lines += c == '\n';
    }
    o.require(lines == 6, "header plus 5 rows");

    const std::string big = run_cli("bounds --dims 1000000 --format json", code);
    o.require(code == 0, "bounds exit code at 1e6");
    const auto j = nlohmann::json::parse(big, nullptr, false);
    o.require(!j.is_discarded() && j["rows"].size() == 1, "json rows");
    if (!o.pass) {
        return;
    }
    const auto &row = j["rows"][0];
    double worst = 0.0;
    for (const char *key : {"ratio_phi", "ratio_rho", "ratio_phi_povm", "ratio_rho_povm"}) {
        const double r = row[key].get<double>();
        worst = std::max(worst, std::abs(r - 1.0));
        o.note << key << "=" << r << " ";
    }
    o.require(worst < 0.05, "ratios within 5%");
}

} // namespace

int main() {
    const std::vector<std::pair<const char *, std::function<void(Outcome &)>>> criteria{
        {"projective model equivalence", criterion1},
        {"threshold values", criterion2},
        {"pure-state extension", criterion3},
        {"noise completion", criterion4},
        {"general-measurement model", criterion5},
        {"CHSH upper bound", criterion6},
        {"crossover dimension", criterion7},
        {"separability", criterion8},
        {"bounds table", criterion9},
    };
    int failures = 0;
    int index = 0;
    for (const auto &[name, fn] : criteria) {
        ++index;
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            fn(o);
        } catch (const std::exception &e) {
            o.pass = false;
            o.note << " [exception: " << e.what() << "]";
        }
        failures += o.pass ? 0 : 1;
        std::cout << "criterion " << index << " " << (o.pass ? "PASS" : "FAIL") << " " << name
                  << ": " << o.note.str() << " (" << seconds_since(t0) << " s)" << std::endl;
    }
    std::cout << (failures == 0 ? "all criteria passed" : "some criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
