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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kWork = fs::path(QFP_TEST_WORK_DIR) / "cli";

fs::path work(const std::string& name) { return kWork / name; }

void write(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run(const std::string& args) {
    const std::string cmd = std::string("\"") + QFP_CLI_PATH + "\" " + args + " >" + work("stdout.txt").string() +
                            " 2>" + work("stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::vector<double>> read_csv(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

const char* kConfig = R"({
  "schema_version": "1.0",
  "target": {"kind": "even_cat", "alpha": 1.0},
  "space": {"Q": 3, "N": 12, "passband": 8, "N_s": 3, "n_c": 10, "m_max": 1.5},
  "pso": {"swarm_size": 10, "iterations": 6}
})";

struct Fixture {
    Fixture() {
        fs::remove_all(kWork);
        fs::create_directories(kWork);
        write(work("cfg.json"), kConfig);
    }
};

}  // namespace

TEST_CASE_FIXTURE(Fixture, "design is deterministic and evaluate reproduces it") {
    REQUIRE(run("design --config " + work("cfg.json").string() + " --seed 7 --out " + work("a.json").string()) == 0);
    REQUIRE(run("design --config " + work("cfg.json").string() + " --seed 7 --threads 3 --out " +
                work("b.json").string()) == 0);
    CHECK(slurp(work("a.json")) == slurp(work("b.json")));

    const json a = json::parse(slurp(work("a.json")));
    CHECK(a.at("seed") == 7);
    CHECK(a.at("schema_version") == "1.0");
    CHECK(a.at("tables").at("kappa").size() == 11);
    CHECK(a.at("trace").size() == 7);

    REQUIRE(run("evaluate " + work("a.json").string() + " --out " + work("e.json").string()) == 0);
    const json e = json::parse(slurp(work("e.json")));
    CHECK(e.at("state").at("probability").get<double>() == a.at("best_by_cost").at("state").at("probability").get<double>());
    CHECK(e.at("state").at("fidelity").get<double>() == a.at("best_by_cost").at("state").at("fidelity").get<double>());
    CHECK(e.at("convergence").at("n_c_probe") == 20);

    REQUIRE(run("evaluate " + work("a.json").string() + " --n-c 40 --out " + work("e40.json").string()) == 0);
    const json e40 = json::parse(slurp(work("e40.json")));
    CHECK(e40.at("convergence").at("n_c_probe") == 40);
    CHECK(e40.at("convergence").at("converged").is_boolean());
}

TEST_CASE_FIXTURE(Fixture, "absent seed is drawn and recorded") {
    REQUIRE(run("design --config " + work("cfg.json").string() + " --out " + work("r.json").string()) == 0);
    const json r = json::parse(slurp(work("r.json")));
    CHECK(r.at("seed").is_number_unsigned());
    CHECK(r.at("pso").at("seed") == r.at("seed"));
}

TEST_CASE_FIXTURE(Fixture, "configuration errors exit with 2") {
    write(work("bad.json"), "{\n  \"schema_version\": \"1.0\",\n  \"space\": {\n}");
    CHECK(run("design --config " + work("bad.json").string()) == 2);
    const std::string err = slurp(work("stderr.txt"));
    CHECK(err.find("line") != std::string::npos);
    CHECK(err.find("column") != std::string::npos);

    json even = json::parse(kConfig);
    even["space"]["N_s"] = 4;
    write(work("even.json"), even.dump());
    CHECK(run("design --config " + work("even.json").string()) == 2);

    json unknown = json::parse(kConfig);
    unknown["space"]["passbnd"] = 3;
    write(work("unknown.json"), unknown.dump());
    CHECK(run("design --config " + work("unknown.json").string()) == 2);

    CHECK(run("design --config " + work("missing.json").string()) == 2);
    CHECK(run("frobnicate") == 2);
}

TEST_CASE_FIXTURE(Fixture, "vacuum design cannot herald") {
    write(work("vac.json"), R"({"schema_version": "1.0", "kind": "circuit",
      "target": {"kind": "even_cat", "alpha": 1.0},
      "space": {"Q": 1, "N": 8, "passband": 8, "N_s": 3, "n_c": 6},
      "circuit": {"eoms": [{"m": 0.0, "theta": 0.0}], "shapers": []},
      "squeezing": [0.0, 0.0, 0.0]})");
    CHECK(run("evaluate " + work("vac.json").string()) == 3);
}

TEST_CASE_FIXTURE(Fixture, "oracle check") {
    REQUIRE(run("oracle-check --trials 4 --seed 3 --out " + work("o1.json").string()) == 0);
    REQUIRE(run("oracle-check --trials 4 --seed 3 --out " + work("o2.json").string()) == 0);
    CHECK(slurp(work("o1.json")) == slurp(work("o2.json")));
    const json o = json::parse(slurp(work("o1.json")));
    CHECK(o.at("passed") == true);
    CHECK(o.at("max_coefficient_error").get<double>() <= 1e-6);

    CHECK(run("oracle-check --trials 0 --seed 3") == 0);
    CHECK(slurp(work("stderr.txt")).find("warning") != std::string::npos);
}

TEST_CASE_FIXTURE(Fixture, "wavefunction csv") {
    write(work("vac_state.json"),
          R"({"schema_version": "1.0", "kind": "state", "state": {"coefficients": [{"re": 1.0, "im": 0.0}]}})");
    REQUIRE(run("wavefunction " + work("vac_state.json").string() + " --q-min -2 --q-max 2 --points 5") == 0);
    const auto rows = read_csv(work("vac_state_wavefunction.csv"));
    REQUIRE(rows.size() == 5);
    CHECK(rows[2][0] == 0.0);
    CHECK(std::abs(rows[2][3] - 1.0 / std::sqrt(M_PI)) < 1e-12);
    const auto fock = read_csv(work("vac_state_fock.csv"));
    REQUIRE(fock.size() == 1);
    CHECK(fock[0][1] == 1.0);

    REQUIRE(run("design --config " + work("cfg.json").string() + " --seed 7 --out " + work("cat.json").string()) == 0);
    REQUIRE(run("wavefunction " + work("cat.json").string() + " --points 81 --out " + work("cat").string()) == 0);
    for (const char* name : {"cat_wavefunction.csv", "cat_target_wavefunction.csv"}) {
        const auto psi = read_csv(work(name));
        REQUIRE(psi.size() == 81);
        for (std::size_t i = 0; i < psi.size(); ++i) {
            CHECK(psi[i][0] == doctest::Approx(-psi[80 - i][0]));
            CHECK(std::abs(psi[i][3] - psi[80 - i][3]) < 1e-9);
        }
    }
    CHECK(fs::exists(work("cat_fock.csv")));
    CHECK(fs::exists(work("cat_target_fock.csv")));

    CHECK(run("wavefunction " + work("cat.json").string() + " --points 0") == 2);
}

TEST_CASE_FIXTURE(Fixture, "tables and report") {
    REQUIRE(run("tables --n-s 1 --N-s 5 --n-c 4") == 0);
    const json t = json::parse(slurp(work("stdout.txt")));
    CHECK(t.at("kappa").back() == 80);
    REQUIRE(run("tables --config " + work("cfg.json").string()) == 0);
    CHECK(json::parse(slurp(work("stdout.txt"))).at("n_c") == 10);

    fs::create_directories(work("bundle"));
    REQUIRE(run("design --config " + work("cfg.json").string() + " --seed 1 --out " +
                work("bundle/r1.json").string()) == 0);
    REQUIRE(run("design --config " + work("cfg.json").string() + " --seed 2 --out " +
                work("bundle/r2.json").string()) == 0);
    write(work("bundle/notes.json"), R"({"schema_version": "1.0", "kind": "misc"})");
    REQUIRE(run("report " + work("bundle").string() + " --out " + work("bundle.json").string()) == 0);
    const json b = json::parse(slurp(work("bundle.json")));
    REQUIRE(b.is_array());
    CHECK(b.size() == 2);
    CHECK(b[0].at("source") == "r1.json");
    CHECK(b[0].at("schema_version") == "1.0");
    CHECK(b[0].at("Q") == 3);
    CHECK(b[1].at("seed") == 2);
}
