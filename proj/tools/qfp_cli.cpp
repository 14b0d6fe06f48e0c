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

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qfp/qfp.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitHerald = 3;
constexpr int kExitInternal = 4;

// thrown inside a command to leave with a given exit code
struct Exit {
    int code;
};

int exit_code(qfp_status s) {
    switch (s) {
        case QFP_OK:
            return kExitOk;
        case QFP_ERR_HERALD_IMPOSSIBLE:
        case QFP_ERR_NON_UNITARY:
            return kExitHerald;
        case QFP_ERR_INTERNAL:
            return kExitInternal;
        default:
            return kExitConfig;
    }
}

void check(qfp_status s) {
    if (s != QFP_OK) {
        std::cerr << "qfp: " << qfp_status_name(s) << ": " << qfp_last_error() << "\n";
        throw Exit{exit_code(s)};
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::cerr << "qfp: cannot read " << path << "\n";
        throw Exit{kExitConfig};
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text << "\n";
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text << "\n")) {
        std::cerr << "qfp: cannot write " << path << "\n";
        throw Exit{kExitConfig};
    }
}

std::string take(char* s) {
    std::string out(s ? s : "");
    qfp_string_free(s);
    return out;
}

std::string number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

struct ResultHandle {
    qfp_result* ptr = nullptr;
    ~ResultHandle() { qfp_result_free(ptr); }
};

void summary(const char* what, qfp_result* r) {
    std::cerr << what << ": seed " << qfp_result_seed(r) << ", P " << number(qfp_result_probability(r)) << ", F "
              << number(qfp_result_fidelity(r)) << ", cost " << number(qfp_result_cost(r)) << "\n";
}

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    int n_c = 0;
    int threads = 0;
};

int cmd_design(const Common& o) {
    const std::string text = read_file(o.config);
    ResultHandle r;
    check(qfp_design_run(text.c_str(), o.seed ? 1 : 0, o.seed.value_or(0), o.threads, o.n_c, &r.ptr));
    std::string path = o.out.empty() ? qfp_result_output_path(r.ptr) : o.out;
    write_output(path, take([&] {
                     char* s = nullptr;
                     check(qfp_result_to_json(r.ptr, &s));
                     return s;
                 }()));
    if (!qfp_result_valid(r.ptr)) {
        std::cerr << "qfp: no visited design could herald the requested pattern (seed " << qfp_result_seed(r.ptr)
                  << ")\n";
        return kExitHerald;
    }
    summary("design", r.ptr);
    return kExitOk;
}

int cmd_evaluate(const Common& o, const std::string& file, const std::string& pick) {
    const std::string text = read_file(file);
    ResultHandle r;
    check(qfp_evaluate(text.c_str(), pick.c_str(), o.n_c, &r.ptr));
    char* s = nullptr;
    check(qfp_result_to_json(r.ptr, &s));
    write_output(o.out, take(s));
    summary("evaluate", r.ptr);
    return kExitOk;
}

int cmd_oracle(const Common& o, int trials) {
    const std::uint64_t seed = o.seed ? *o.seed : qfp_entropy_seed();
    if (trials == 0) std::cerr << "qfp: warning: zero trials, the check passes vacuously\n";
    char* s = nullptr;
    check(qfp_oracle_check(trials, seed, &s));
    const std::string text = take(s);
    write_output(o.out, text);
    const auto report = nlohmann::json::parse(text);
    std::cerr << "oracle-check: " << report.at("trials").get<int>() << " trials, seed " << seed
              << ", max |d|c|^2| " << number(report.at("max_coefficient_error").get<double>()) << ", max |dP| "
              << number(report.at("max_probability_error").get<double>()) << " -> "
              << (report.at("passed").get<bool>() ? "pass" : "FAIL") << "\n";
    return report.at("passed").get<bool>() ? kExitOk : kExitInternal;
}

void write_state_csvs(qfp_result* r, qfp_state_kind which, const std::string& prefix, double q_min, double q_max,
                      int points) {
    const std::size_t n_coef = qfp_result_num_coefficients(r, which);
    std::vector<double> q(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        q[static_cast<std::size_t>(i)] = points == 1 ? q_min : q_min + (q_max - q_min) * i / (points - 1);
    }
    std::vector<double> re(q.size()), im(q.size());
    check(qfp_result_wavefunction(r, which, q.data(), q.size(), re.data(), im.data()));

    std::string wf = "q,re,im,abs2\n";
    for (std::size_t i = 0; i < q.size(); ++i) {
        wf += number(q[i]) + "," + number(re[i]) + "," + number(im[i]) + "," + number(re[i] * re[i] + im[i] * im[i]) +
              "\n";
    }
    std::string fock = "n,prob\n";
    for (std::size_t n = 0; n < n_coef; ++n) {
        double a = 0.0, b = 0.0;
        check(qfp_result_coefficient(r, which, n, &a, &b));
        fock += std::to_string(n) + "," + number(a * a + b * b) + "\n";
    }
    const std::string tag = which == QFP_STATE_TARGET ? "_target" : "";
    std::ofstream(prefix + tag + "_wavefunction.csv", std::ios::binary) << wf;
    std::ofstream(prefix + tag + "_fock.csv", std::ios::binary) << fock;
    std::cerr << "wrote " << prefix << tag << "_wavefunction.csv and " << prefix << tag << "_fock.csv\n";
}

int cmd_wavefunction(const Common& o, const std::string& file, double q_min, double q_max, int points) {
    if (points <= 0) {
        std::cerr << "qfp: --points must be positive\n";
        return kExitConfig;
    }
    if (!(q_max > q_min) && points > 1) {
        std::cerr << "qfp: --q-max must exceed --q-min\n";
        return kExitConfig;
    }
    const std::string text = read_file(file);
    ResultHandle r;
    check(qfp_result_from_json(text.c_str(), &r.ptr));
    std::string prefix = o.out;
    if (prefix.empty()) {
        const fs::path p(file);
        prefix = (p.parent_path() / p.stem()).string();
    }
    write_state_csvs(r.ptr, QFP_STATE_HERALDED, prefix, q_min, q_max, points);
    if (qfp_result_num_coefficients(r.ptr, QFP_STATE_TARGET) > 0) {
        write_state_csvs(r.ptr, QFP_STATE_TARGET, prefix, q_min, q_max, points);
    }
    return kExitOk;
}

int cmd_tables(const Common& o, int n_s, int num_squeezed) {
    int n_c = o.n_c > 0 ? o.n_c : 30;
    if (!o.config.empty()) {
        nlohmann::json cfg;
        try {
            cfg = nlohmann::json::parse(read_file(o.config));
            const auto& space = cfg.at("space");
            n_s = space.value("n_s", n_s);
            num_squeezed = space.value("N_s", num_squeezed);
            if (o.n_c <= 0) n_c = space.value("n_c", n_c);
        } catch (const nlohmann::json::exception& e) {
            std::cerr << "qfp: bad configuration: " << e.what() << "\n";
            return kExitConfig;
        }
    }
    qfp_tables* t = nullptr;
    check(qfp_tables_create(n_s, num_squeezed, n_c, &t));
    char* s = nullptr;
    const qfp_status st = qfp_tables_to_json(t, &s);
    qfp_tables_free(t);
    check(st);
    write_output(o.out, take(s));
    return kExitOk;
}

int cmd_report(const Common& o, const std::string& dir) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) {
        std::cerr << "qfp: " << dir << " is not a directory\n";
        return kExitConfig;
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    nlohmann::json bundle = nlohmann::json::array();
    for (const auto& path : files) {
        const std::string text = read_file(path.string());
        ResultHandle r;
        if (qfp_result_from_json(text.c_str(), &r.ptr) != QFP_OK) {
            std::cerr << "qfp: skipping " << path.filename().string() << ": " << qfp_last_error() << "\n";
            continue;
        }
        const auto doc = nlohmann::json::parse(text);
        nlohmann::json rec;
        rec["schema_version"] = doc.at("schema_version");
        rec["source"] = path.filename().string();
        rec["kind"] = doc.value("kind", "state");
        rec["alpha"] = doc.contains("target") ? doc["target"].value("alpha", nlohmann::json(nullptr)) : nullptr;
        if (doc.contains("space")) {
            rec["Q"] = doc["space"].value("Q", 0);
            rec["N_s"] = doc["space"].value("N_s", 0);
            rec["N"] = doc["space"].value("N", 0);
        }
        rec["seed"] = qfp_result_seed(r.ptr);
        rec["fidelity"] = qfp_result_fidelity(r.ptr);
        rec["probability"] = qfp_result_probability(r.ptr);
        rec["cost"] = qfp_result_cost(r.ptr);
        nlohmann::json coeffs = nlohmann::json::array();
        for (std::size_t n = 0; n < qfp_result_num_coefficients(r.ptr, QFP_STATE_HERALDED); ++n) {
            double a = 0.0, b = 0.0;
            qfp_result_coefficient(r.ptr, QFP_STATE_HERALDED, n, &a, &b);
            coeffs.push_back({{"re", a}, {"im", b}});
        }
        rec["coefficients"] = coeffs;
        const fs::path csv = path.parent_path() / (path.stem().string() + "_wavefunction.csv");
        rec["wavefunction_csv"] = fs::exists(csv) ? nlohmann::json(csv.filename().string()) : nlohmann::json(nullptr);
        bundle.push_back(rec);
    }
    write_output(o.out, bundle.dump(2));
    std::cerr << "report: " << bundle.size() << " records\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Design and simulate frequency-bin circuits that herald non-Gaussian states"};
    app.set_version_flag("--version", std::string(qfp_version()));
    app.require_subcommand(1);

    Common o;
    std::uint64_t seed_value = 0;
    auto add_seed = [&](CLI::App* sub) {
        sub->add_option("--seed", seed_value, "RNG seed (default: OS entropy, recorded in the output)");
    };

    auto* design = app.add_subcommand("design", "Optimize a circuit for a target state");
    design->add_option("--config", o.config, "Run configuration (JSON)")->required();
    add_seed(design);
    design->add_option("--out", o.out, "Result file (default: config output path, else stdout)");
    design->add_option("--n-c", o.n_c, "Fock cutoff override")->check(CLI::PositiveNumber);
    design->add_option("--threads", o.threads, "Evaluation threads")->check(CLI::PositiveNumber);

    std::string eval_file, pick = "cost";
    auto* evaluate = app.add_subcommand("evaluate", "Re-evaluate a stored design");
    evaluate->add_option("file", eval_file, "Design result or circuit document")->required();
    evaluate->add_option("--pick", pick, "Record of a design result")->check(CLI::IsMember({"cost", "fidelity"}));
    evaluate->add_option("--n-c", o.n_c, "Probe cutoff for the convergence flag (default n_c + 10)");
    evaluate->add_option("--out", o.out, "Evaluation file (default stdout)");

    int trials = 50;
    auto* oracle = app.add_subcommand("oracle-check", "Cross-check the hafnian route against Fock evolution");
    oracle->add_option("--trials", trials, "Number of random circuits")->check(CLI::NonNegativeNumber);
    add_seed(oracle);
    oracle->add_option("--out", o.out, "Report file (default stdout)");

    std::string wf_file;
    double q_min = -6.0, q_max = 6.0;
    int points = 241;
    auto* wave = app.add_subcommand("wavefunction", "Quadrature wavefunction and Fock probabilities as CSV");
    wave->add_option("file", wf_file, "Design result or evaluation document")->required();
    wave->add_option("--q-min", q_min, "Lower end of the q grid");
    wave->add_option("--q-max", q_max, "Upper end of the q grid");
    wave->add_option("--points", points, "Grid points");
    wave->add_option("--out", o.out, "Output prefix (default: input path without extension)");

    int n_s = 1, num_squeezed = 3;
    auto* tables = app.add_subcommand("tables", "Loop-hafnian table statistics");
    tables->add_option("--config", o.config, "Take n_s, N_s and n_c from a run configuration");
    tables->add_option("--n-s", n_s, "Photons detected per side bin");
    tables->add_option("--N-s", num_squeezed, "Squeezed bins (odd)");
    tables->add_option("--n-c", o.n_c, "Fock cutoff");
    tables->add_option("--out", o.out, "Output file (default stdout)");

    std::string report_dir;
    auto* report = app.add_subcommand("report", "Bundle a directory of results into one JSON array");
    report->add_option("dir", report_dir, "Directory of result files")->required();
    report->add_option("--out", o.out, "Bundle file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }
    for (auto* sub : {design, oracle}) {
        if (sub->parsed() && sub->count("--seed") > 0) o.seed = seed_value;
    }

    try {
        if (design->parsed()) return cmd_design(o);
        if (evaluate->parsed()) return cmd_evaluate(o, eval_file, pick);
        if (oracle->parsed()) return cmd_oracle(o, trials);
        if (wave->parsed()) return cmd_wavefunction(o, wf_file, q_min, q_max, points);
        if (tables->parsed()) return cmd_tables(o, n_s, num_squeezed);
        if (report->parsed()) return cmd_report(o, report_dir);
    } catch (const Exit& e) {
        return e.code;
    } catch (const std::exception& e) {
        std::cerr << "qfp: internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitConfig;
}
