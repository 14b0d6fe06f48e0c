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

#include "qfp/io.hpp"

#include <algorithm>
#include <set>

#include "qfp/version.hpp"

using nlohmann::json;

namespace qfp::io {

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::Config, msg); }

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) config_error(where + " must be an object");
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) config_error("unknown key '" + key + "' in " + where);
    }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback, const std::string& where) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        config_error(where + "." + key + " has the wrong type");
    }
}

template <typename T>
T require(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key)) config_error("missing " + where + "." + key);
    return get_or<T>(obj, key, T{}, where);
}

int require_int(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key)) config_error("missing " + where + "." + key);
    if (!obj.at(key).is_number_integer()) config_error(where + "." + key + " must be an integer");
    return obj.at(key).get<int>();
}

int int_or(const json& obj, const char* key, int fallback, const std::string& where) {
    if (!obj.contains(key)) return fallback;
    return require_int(obj, key, where);
}

Tolerances tolerances_from_json(const json& j) {
    reject_unknown(j, {"unitarity", "identity", "p_floor"}, "tolerances");
    Tolerances t;
    t.unitarity = get_or(j, "unitarity", t.unitarity, "tolerances");
    t.identity = get_or(j, "identity", t.identity, "tolerances");
    t.p_floor = get_or(j, "p_floor", t.p_floor, "tolerances");
    if (!(t.unitarity > 0.0 && t.identity > 0.0 && t.p_floor >= 0.0)) config_error("tolerances must be positive");
    return t;
}

json tolerances_to_json(const Tolerances& t) {
    return json{{"unitarity", t.unitarity}, {"identity", t.identity}, {"p_floor", t.p_floor}};
}

PsoConfig pso_from_json(const json& j, bool& has_seed) {
    reject_unknown(j, {"swarm_size", "iterations", "inertia", "cognitive", "social", "seed", "threads"}, "pso");
    PsoConfig p;
    p.swarm_size = int_or(j, "swarm_size", p.swarm_size, "pso");
    p.iterations = int_or(j, "iterations", p.iterations, "pso");
    p.inertia = get_or(j, "inertia", p.inertia, "pso");
    p.cognitive = get_or(j, "cognitive", p.cognitive, "pso");
    p.social = get_or(j, "social", p.social, "pso");
    p.threads = int_or(j, "threads", p.threads, "pso");
    has_seed = j.contains("seed");
    if (has_seed) {
        if (!j.at("seed").is_number_unsigned()) config_error("pso.seed must be a nonnegative integer");
        p.seed = j.at("seed").get<std::uint64_t>();
    }
    p.validate();
    return p;
}

json record_to_json(const DesignRecord& record, const DesignSpace& space) {
    json j = design_to_json(record.params, space);
    j["params"] = record.params;
    j["valid"] = record.evaluation.valid;
    j["leakage"] = record.evaluation.leakage;
    if (record.evaluation.valid) {
        j["state"] = state_to_json(record.evaluation, space.layout());
    } else {
        j["invalid_reason"] = record.evaluation.invalid_reason;
    }
    return j;
}

std::vector<double> params_from_circuit_json(const json& doc, const DesignSpace& space) {
    const json& c = doc.at("circuit");
    QfpCircuit circuit = QfpCircuit::identity(space.lattice, space.q);
    const json& eoms = c.at("eoms");
    const json& shapers = c.at("shapers");
    if (eoms.size() != circuit.eoms.size() || shapers.size() != circuit.shapers.size()) {
        config_error("circuit layer counts do not match Q");
    }
    for (std::size_t i = 0; i < eoms.size(); ++i) {
        circuit.eoms[i].modulation_index = eoms[i].at("m").get<double>();
        circuit.eoms[i].temporal_phase = eoms[i].at("theta").get<double>();
    }
    for (std::size_t i = 0; i < shapers.size(); ++i) {
        circuit.shapers[i].phases = shapers[i].at("phases").get<std::vector<double>>();
    }
    const auto r = doc.at("squeezing").get<std::vector<double>>();
    SqueezingVector squeezing;
    if (static_cast<int>(r.size()) == space.num_squeezed) {
        squeezing = SqueezingVector::centered(space.lattice.n_modes, space.lattice.center_index, r, space.r_max);
    } else if (static_cast<int>(r.size()) == space.lattice.n_modes) {
        squeezing = SqueezingVector(r, space.r_max);
    } else {
        config_error("squeezing must list N_s or N values");
    }
    return encode_params(circuit, squeezing, space);
}

}  // namespace

TargetState TargetSpec::build(int n_c) const {
    if (kind != "even_cat") config_error("unsupported target kind '" + kind + "'");
    return cat_target(alpha, n_c);
}

json parse_document(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::Config, std::string("malformed JSON: ") + e.what());
    }
}

void check_schema_version(const json& doc) {
    if (!doc.is_object() || !doc.contains("schema_version") || !doc.at("schema_version").is_string()) {
        config_error("document lacks a string schema_version");
    }
    const auto v = doc.at("schema_version").get<std::string>();
    int major = 0;
    try {
        major = std::stoi(v.substr(0, v.find('.')));
    } catch (const std::exception&) {
        config_error("unreadable schema_version '" + v + "'");
    }
    if (major > kSchemaMajor) {
        config_error("schema_version " + v + " is newer than supported " + kSchemaVersion);
    }
}

json complex_to_json(Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

Complex complex_from_json(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_object() || !j.contains("re") || !j.contains("im")) config_error("complex values need re and im");
    return {j.at("re").get<double>(), j.at("im").get<double>()};
}

json coefficients_to_json(const std::vector<Complex>& c) {
    json arr = json::array();
    for (const auto& z : c) arr.push_back(complex_to_json(z));
    return arr;
}

std::vector<Complex> coefficients_from_json(const json& j) {
    if (!j.is_array()) config_error("coefficients must be an array");
    std::vector<Complex> c;
    for (const auto& z : j) c.push_back(complex_from_json(z));
    return c;
}

json space_to_json(const DesignSpace& s) {
    return json{{"Q", s.q},
                {"N", s.lattice.n_modes},
                {"passband", s.lattice.passband},
                {"center_index", s.lattice.center_index},
                {"N_s", s.num_squeezed},
                {"n_s", s.n_s},
                {"n_c", s.n_c},
                {"m_max", s.m_max},
                {"r_max", s.r_max},
                {"tolerances", tolerances_to_json(s.tol)}};
}

DesignSpace space_from_json(const json& j) {
    const std::string where = "space";
    reject_unknown(j, {"Q", "N", "passband", "center_index", "N_s", "n_s", "n_c", "m_max", "r_max", "tolerances"},
                   where);
    DesignSpace s;
    s.q = require_int(j, "Q", where);
    s.lattice.n_modes = require_int(j, "N", where);
    s.lattice.passband = int_or(j, "passband", s.lattice.n_modes, where);
    s.lattice.center_index = int_or(j, "center_index", s.lattice.n_modes / 2, where);
    s.num_squeezed = require_int(j, "N_s", where);
    s.n_s = int_or(j, "n_s", 1, where);
    s.n_c = int_or(j, "n_c", 40, where);
    s.m_max = get_or(j, "m_max", s.m_max, where);
    s.r_max = get_or(j, "r_max", s.r_max, where);
    if (j.contains("tolerances")) s.tol = tolerances_from_json(j.at("tolerances"));
    s.validate();
    return s;
}

json pso_to_json(const PsoConfig& p) {
    return json{{"swarm_size", p.swarm_size}, {"iterations", p.iterations}, {"inertia", p.inertia},
                {"cognitive", p.cognitive},   {"social", p.social},         {"seed", p.seed}};
}

json target_to_json(const TargetSpec& t) { return json{{"kind", t.kind}, {"alpha", complex_to_json(t.alpha)}}; }

TargetSpec target_from_json(const json& j) {
    reject_unknown(j, {"kind", "alpha"}, "target");
    TargetSpec t;
    t.kind = require<std::string>(j, "kind", "target");
    if (t.kind != "even_cat") config_error("unsupported target kind '" + t.kind + "'");
    if (!j.contains("alpha")) config_error("missing target.alpha");
    t.alpha = complex_from_json(j.at("alpha"));
    return t;
}

RunConfig parse_run_config(const json& doc) {
    check_schema_version(doc);
    reject_unknown(doc, {"schema_version", "target", "space", "pso", "tolerances", "output"}, "config");
    RunConfig cfg;
    if (!doc.contains("space")) config_error("missing space");
    if (!doc.contains("target")) config_error("missing target");
    json space = doc.at("space");
    if (doc.contains("tolerances")) {
        if (space.contains("tolerances")) config_error("tolerances given twice");
        space["tolerances"] = doc.at("tolerances");
    }
    cfg.space = space_from_json(space);
    cfg.target = target_from_json(doc.at("target"));
    if (doc.contains("pso")) {
        cfg.pso = pso_from_json(doc.at("pso"), cfg.has_seed);
    }
    if (doc.contains("output")) {
        if (!doc.at("output").is_string()) config_error("output must be a path string");
        cfg.output_path = doc.at("output").get<std::string>();
    }
    return cfg;
}

json design_to_json(std::span<const double> params, const DesignSpace& space) {
    const DecodedDesign d = decode_params(params, space);
    json eoms = json::array();
    for (const auto& e : d.circuit.eoms) eoms.push_back({{"m", e.modulation_index}, {"theta", e.temporal_phase}});
    json shapers = json::array();
    for (const auto& s : d.circuit.shapers) shapers.push_back({{"phases", s.phases}});
    return json{{"circuit", {{"eoms", eoms}, {"shapers", shapers}}}, {"squeezing", d.squeezing.values()}};
}

json state_to_json(const Evaluation& ev, const DetectionLayout& layout) {
    if (!ev.state) config_error("no heralded state to serialize");
    std::vector<Complex> c = ev.state->coefficients;
    normalize_global_phase(c);
    return json{{"coefficients", coefficients_to_json(c)},
                {"probability", ev.probability},
                {"fidelity", ev.fidelity},
                {"cost", ev.cost},
                {"phase_flatness", phase_flatness(c)},
                {"pattern", {{"n_s", layout.n_s}, {"N_s", layout.num_squeezed}, {"K", layout.center_index}}}};
}

json tables_to_json(const HafnianTables& tables) {
    json kappa = json::array();
    std::size_t bytes = 0;
    for (int n_k = 0; n_k <= tables.cutoff(); ++n_k) {
        const PatternTable& t = tables.for_n_k(n_k);
        kappa.push_back(t.kappa());
        bytes += t.kappa() * (sizeof(double) + 1 + static_cast<std::size_t>(t.modes()) * (sizeof(double) + sizeof(int)));
    }
    return json{{"n_s", tables.detected_photons()},
                {"N_s", tables.num_squeezed()},
                {"n_c", tables.cutoff()},
                {"kappa", kappa},
                {"total_rows", tables.total_rows()},
                {"bytes", bytes}};
}

json design_result_to_json(const RunConfig& config, const DesignResult& result, const HafnianTables& tables) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "design_result";
    j["version"] = kVersionString;
    j["seed"] = result.seed;
    j["evaluations"] = result.evaluations;
    j["space"] = space_to_json(config.space);
    j["target"] = target_to_json(config.target);
    PsoConfig pso = config.pso;
    pso.seed = result.seed;
    j["pso"] = pso_to_json(pso);
    j["tables"] = tables_to_json(tables);
    j["best_by_cost"] = record_to_json(result.best_by_cost, config.space);
    j["best_by_fidelity"] =
        result.best_by_fidelity ? record_to_json(*result.best_by_fidelity, config.space) : json(nullptr);
    j["trace"] = result.trace;
    return j;
}

StoredDesign stored_design_from_json(const json& doc, const std::string& pick) {
    check_schema_version(doc);
    try {
        StoredDesign d;
        d.space = space_from_json(doc.at("space"));
        d.target = target_from_json(doc.at("target"));
        if (doc.contains("seed") && doc.at("seed").is_number_unsigned()) d.seed = doc.at("seed").get<std::uint64_t>();
        const std::string kind = doc.value("kind", std::string("circuit"));

        const json* record = &doc;
        if (kind == "design_result") {
            const char* key = pick == "fidelity" ? "best_by_fidelity" : "best_by_cost";
            if (pick != "cost" && pick != "fidelity") config_error("pick must be 'cost' or 'fidelity'");
            if (!doc.contains(key) || doc.at(key).is_null()) config_error(std::string("result has no ") + key);
            record = &doc.at(key);
        }
        if (record->contains("params")) {
            d.params = record->at("params").get<std::vector<double>>();
        } else {
            d.params = params_from_circuit_json(*record, d.space);
        }
        if (d.params.size() != d.space.dimension()) config_error("parameter vector does not match the space");
        return d;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Config, std::string("bad design document: ") + e.what());
    }
}

EvaluationReport evaluate_stored(const StoredDesign& design, int n_c_probe) {
    EvaluationReport report;
    report.design = design;
    const HafnianTables tables(design.space.n_s, design.space.num_squeezed, design.space.n_c);
    const TargetState target = design.target.build(design.space.n_c);
    report.evaluation = evaluate_design(design.params, design.space, target, tables);
    if (!report.evaluation.valid) {
        if (report.evaluation.invalid_reason == "leakage") {
            throw Error(ErrorCode::NonUnitary, "design leaks light out of the passband (leakage " +
                                                   std::to_string(report.evaluation.leakage) + ")");
        }
        throw Error(ErrorCode::HeraldImpossible, "design cannot herald the requested pattern");
    }
    report.n_c_probe = n_c_probe > design.space.n_c ? n_c_probe : design.space.n_c + 10;
    report.converged = convergence_check(*report.evaluation.state, report.n_c_probe);
    std::vector<Complex> c = report.evaluation.state->coefficients;
    report.phase_flatness = phase_flatness(c);
    return report;
}

json evaluation_to_json(const EvaluationReport& report) {
    const auto& space = report.design.space;
    json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "evaluation";
    j["version"] = kVersionString;
    j["seed"] = report.design.seed;
    j["space"] = space_to_json(space);
    j["target"] = target_to_json(report.design.target);
    j.update(design_to_json(report.design.params, space));
    j["params"] = report.design.params;
    j["leakage"] = report.evaluation.leakage;
    j["state"] = state_to_json(report.evaluation, space.layout());
    j["target_coefficients"] = coefficients_to_json(report.design.target.build(space.n_c).coefficients);
    j["convergence"] = {{"n_c", space.n_c}, {"n_c_probe", report.n_c_probe}, {"converged", report.converged}};
    return j;
}

StateView state_view_from_json(const json& doc) {
    check_schema_version(doc);
    try {
        StateView v;
        const std::string kind = doc.value("kind", std::string());
        const json* state = nullptr;
        if (kind == "design_result") {
            if (!doc.at("best_by_cost").contains("state")) {
                throw Error(ErrorCode::HeraldImpossible, "result holds no valid design");
            }
            state = &doc.at("best_by_cost").at("state");
        } else if (doc.contains("state")) {
            state = &doc.at("state");
        } else {
            config_error("document has no heralded state");
        }
        v.coefficients = coefficients_from_json(state->at("coefficients"));
        v.probability = state->value("probability", 0.0);
        v.fidelity = state->value("fidelity", 0.0);
        v.cost = state->value("cost", 0.0);
        if (doc.contains("seed") && doc.at("seed").is_number_unsigned()) v.seed = doc.at("seed").get<std::uint64_t>();
        if (doc.contains("target")) {
            const TargetSpec t = target_from_json(doc.at("target"));
            v.target = t.build(static_cast<int>(v.coefficients.size()) - 1).coefficients;
        }
        return v;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Config, std::string("bad state document: ") + e.what());
    }
}

json oracle_report_to_json(const oracle::OracleReport& r) {
    return json{{"schema_version", kSchemaVersion},
                {"kind", "oracle_check"},
                {"trials", r.trials},
                {"seed", r.seed},
                {"max_coefficient_error", r.max_coefficient_error},
                {"max_probability_error", r.max_probability_error},
                {"tolerance", r.tolerance},
                {"passed", r.passed}};
}

}  // namespace qfp::io
