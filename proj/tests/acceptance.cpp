/**
 * Copyright 2026 The qfp-herald Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/**
 * Acceptance suite. One PASS or FAIL line per criterion; the exit status is
 * nonzero when any criterion fails.
 */

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "qfp/fock_oracle.hpp"
#include "qfp/herald.hpp"
#include "qfp/optimizer.hpp"
#include "test_support.hpp"

using namespace qfp;
using qfp::testing::Rng;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int g_failures = 0;

void criterion(const std::string& name, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!out.pass) ++g_failures;
    std::printf("%s  %-28s %s (%.1f s)\n", out.pass ? "PASS" : "FAIL", name.c_str(), out.detail.c_str(), secs);
    std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

CMatrix sigma_of(const CMatrix& u, const SqueezingVector& r) {
    return sigma_from_h_inverse(h_inverse(gamma_inverse_blocks(unitary_to_symplectic(u), r))).entries;
}

RMatrix dense_gamma(const CMatrix& u, const SqueezingVector& r) {
    const RMatrix s = testing::symplectic_from_parts(u);
    const int n = static_cast<int>(u.rows());
    RMatrix v0 = RMatrix::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        v0(i, i) = 0.5 * std::exp(2.0 * r[i]);
        v0(i + n, i + n) = 0.5 * std::exp(-2.0 * r[i]);
    }
    return s * v0 * s.transpose() + 0.5 * RMatrix::Identity(2 * n, 2 * n);
}

/// Every pattern on `modes` modes with total photon number at most `max_total`.
void all_patterns(int modes, int max_total, std::vector<PhotonPattern>& out) {
    std::vector<int> counts(static_cast<std::size_t>(modes), 0);
    std::function<void(int, int)> rec = [&](int j, int left) {
        if (j == modes) {
            out.push_back(PhotonPattern{counts});
            return;
        }
        for (int k = 0; k <= left; ++k) {
            counts[static_cast<std::size_t>(j)] = k;
            rec(j + 1, left - k);
        }
    };
    rec(0, max_total);
}

/// Tail sum_{n > n_c} |tau_n|^2 of the even cat, from log-space Poisson terms.
double cat_tail(double alpha, int n_c) {
    const double a2 = alpha * alpha;
    const double norm = 2.0 / (1.0 + std::exp(-2.0 * a2));
    double tail = 0.0;
    for (int n = n_c + 1; n <= n_c + 400; ++n) {
        if (n % 2) continue;
        tail += norm * std::exp(-a2 + n * std::log(a2) - std::lgamma(n + 1.0));
    }
    return tail;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string("\"") + QFP_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int worker_threads() { return std::max(1, static_cast<int>(std::thread::hardware_concurrency())); }

}  // namespace

int main() {
    criterion("hafnian-vs-wick", [] {
        Rng rng(101);
        double worst = 0.0;
        std::size_t compared = 0;
        for (int trial = 0; trial < 500; ++trial) {
            const int modes = 1 + trial % 4;
            const CMatrix s = testing::random_symmetric(modes, rng);
            std::vector<PhotonPattern> patterns;
            all_patterns(modes, 8, patterns);
            for (const auto& p : patterns) {
                const Complex wick = loop_hafnian_wick(s, p);
                const Complex kan = loop_hafnian(s, p);
                worst = std::max(worst, std::abs(kan - wick) / std::max(1.0, std::abs(wick)));
                ++compared;
            }
        }
        return Outcome{worst <= 1e-10, std::to_string(compared) + " pairs, max rel err " + fmt("%.2e", worst)};
    });

    criterion("worked-moment-example", [] {
        Rng rng(102);
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            const CMatrix s = testing::random_symmetric(3, rng);
            const Complex expected = s(0, 0) * s(1, 2) + 2.0 * s(0, 1) * s(0, 2);
            worst = std::max(worst, std::abs(loop_hafnian(s, PhotonPattern{{2, 1, 1}}) - expected));
            worst = std::max(worst, std::abs(loop_hafnian_wick(s, PhotonPattern{{2, 1, 1}}) - expected));
        }
        return Outcome{worst <= 1e-12, "100 sigma, max err " + fmt("%.2e", worst)};
    });

    criterion("gaussian-identities", [] {
        Rng rng(103);
        const FrequencyLattice lattice{16, 16, 8};
        double det_h = 0.0, det_g = 0.0, inv_g = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            const int q = 1 + 2 * rng.integer(0, 3);
            const UnitaryMatrix u = compose_unitary(testing::random_circuit(lattice, q, 2.0, rng));
            const SqueezingVector r(testing::random_squeezing(16, 1.5, rng));
            const GammaBlocks blocks = gamma_inverse_blocks(unitary_to_symplectic(u), r);
            const CMatrix h = b_matrix(blocks) + 0.5 * CMatrix::Identity(32, 32);
            det_h = std::max(det_h, std::abs(h.determinant() - 1.0));
            const RMatrix g = dense_gamma(u.entries, r);
            const double dense = g.determinant();
            det_g = std::max(det_g, std::abs(det_gamma(r) - dense) / dense);
            inv_g = std::max(inv_g, testing::max_abs(RMatrix(blocks.assemble() - g.inverse())));
        }
        const bool ok = det_h <= 1e-8 && det_g <= 1e-10 && inv_g <= 1e-8;
        return Outcome{ok, "|det H - 1| " + fmt("%.2e", det_h) + ", det Gamma rel " + fmt("%.2e", det_g) +
                               ", Gamma^-1 " + fmt("%.2e", inv_g)};
    });

    criterion("fock-oracle-cross-check", [] {
        const auto report = oracle::cross_check(50, 104);
        return Outcome{report.passed && report.max_coefficient_error <= 1e-6 && report.max_probability_error <= 1e-6,
                       "50 trials, |c|^2 err " + fmt("%.2e", report.max_coefficient_error) + ", P err " +
                           fmt("%.2e", report.max_probability_error)};
    });

    criterion("single-mode-passthrough", [] {
        const HafnianTables tables(1, 1, 40);
        const SqueezingVector sq({0.5});
        const HeraldedState st =
            heralded_coefficients(sigma_of(CMatrix::Identity(1, 1), sq), sq, DetectionLayout{1, 1, 0}, tables);
        const double err = std::abs(std::abs(st.coefficients[2] / st.coefficients[0]) - std::tanh(0.5) / std::sqrt(2.0));
        return Outcome{err <= 1e-10, "||c2/c0| - tanh(r)/sqrt2| " + fmt("%.2e", err)};
    });

    criterion("parity-and-normalization", [] {
        Rng rng(106);
        double odd = 0.0, norm = 0.0;
        int states = 0;
        for (int num_sq : {3, 5}) {
            const FrequencyLattice lattice{num_sq + 8, num_sq + 8, (num_sq + 8) / 2};
            const HafnianTables tables(1, num_sq, 16);
            const DetectionLayout layout{1, num_sq, lattice.center_index};
            for (int trial = 0; trial < 20; ++trial) {
                const UnitaryMatrix u = compose_unitary(testing::random_circuit(lattice, 3, 2.0, rng));
                const auto centre = testing::random_squeezing(num_sq, 1.0, rng);
                const SqueezingVector r = SqueezingVector::centered(lattice.n_modes, lattice.center_index, centre);
                const CMatrix block = sigma_of(u.entries, r)(layout.squeezed_bins(), layout.squeezed_bins());
                const HeraldedState st = heralded_coefficients(block, r, layout, tables);
                double total = 0.0;
                for (std::size_t n = 0; n < st.coefficients.size(); ++n) {
                    if (n % 2) odd = std::max(odd, std::abs(st.coefficients[n]));
                    total += std::norm(st.coefficients[n]);
                }
                norm = std::max(norm, std::abs(total - 1.0));
                ++states;
            }
        }
        return Outcome{odd < 1e-12 && norm <= 1e-12, std::to_string(states) + " states, max odd |c| " +
                                                         fmt("%.2e", odd) + ", |sum - 1| " + fmt("%.2e", norm)};
    });

    criterion("cat-truncation", [] {
        const double limits[3] = {1e-3, 1e-8, 1e-14};
        const int cutoffs[3] = {20, 30, 40};
        bool ok = true;
        std::string detail;
        for (int i = 0; i < 3; ++i) {
            const double lib = cat_target(3.0, cutoffs[i]).truncation_error();
            const double ref = cat_tail(3.0, cutoffs[i]);
            const bool agree = std::abs(lib - ref) <= std::max(1e-15, 1e-9 * ref);
            ok = ok && lib < limits[i] && ref < limits[i] && agree;
            detail += "eps" + std::to_string(cutoffs[i]) + " " + fmt("%.2e", lib) + " (ref " + fmt("%.2e", ref) + ") ";
        }
        detail.pop_back();
        return Outcome{ok, detail};
    });

    criterion("desk-scale-design", [] {
        DesignSpace space;
        const TargetState target = cat_target(1.0, space.n_c);
        const HafnianTables tables(space.n_s, space.num_squeezed, space.n_c);
        std::string detail;
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            PsoConfig pso;
            pso.swarm_size = 60;
            pso.iterations = 300;
            pso.seed = seed;
            pso.threads = worker_threads();
            const DesignResult res = pso_run(space, target, pso, &tables);
            std::vector<const DesignRecord*> records{&res.best_by_cost};
            if (res.best_by_fidelity) records.push_back(&*res.best_by_fidelity);
            for (const auto* rec : records) {
                const auto& ev = rec->evaluation;
                if (ev.valid && ev.fidelity >= 0.95 && ev.probability >= 0.01) {
                    return Outcome{true, detail + "seed " + std::to_string(seed) + ": F " + fmt("%.5f", ev.fidelity) +
                                             ", P " + fmt("%.4f", ev.probability)};
                }
            }
            detail += "seed " + std::to_string(seed) + ": F " + fmt("%.4f", res.best_by_cost.evaluation.fidelity) +
                      ", P " + fmt("%.4f", res.best_by_cost.evaluation.probability) + "; ";
        }
        return Outcome{false, detail + "no design with F >= 0.95 and P >= 0.01"};
    });

    criterion("design-determinism", [] {
        const fs::path dir = fs::path(QFP_TEST_WORK_DIR) / "acceptance";
        fs::remove_all(dir);
        fs::create_directories(dir);
        std::ofstream(dir / "cfg.json") << R"({
  "schema_version": "1.0",
  "target": {"kind": "even_cat", "alpha": 1.0},
  "space": {"Q": 3, "N": 32, "passband": 16, "N_s": 3, "n_c": 30},
  "pso": {"swarm_size": 20, "iterations": 20}
})";
        const std::string base = "design --config " + (dir / "cfg.json").string() + " --seed 42";
        const int a = run_cli(base + " --threads 1 --out " + (dir / "a.json").string());
        const int b = run_cli(base + " --threads 1 --out " + (dir / "b.json").string());
        const int c =
            run_cli(base + " --threads " + std::to_string(std::max(2, worker_threads())) + " --out " +
                    (dir / "c.json").string());
        const std::string ja = slurp(dir / "a.json");
        const bool same = !ja.empty() && ja == slurp(dir / "b.json") && ja == slurp(dir / "c.json");
        const bool ran = (a == 0 || a == 3) && a == b && b == c;
        return Outcome{ran && same, same ? "three runs, byte-identical JSON (" + std::to_string(ja.size()) + " bytes)"
                                         : "outputs differ or runs failed"};
    });

    std::printf("%s: %d criterion(s) failed\n", g_failures ? "FAIL" : "PASS", g_failures);
    return g_failures ? 1 : 0;
}
