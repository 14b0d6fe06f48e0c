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

#include "qfp/qfp.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <random>
#include <string>

#include "qfp/io.hpp"
#include "qfp/version.hpp"

struct qfp_tables {
    qfp::HafnianTables tables;
};

struct qfp_result {
    bool valid = false;
    double probability = 0.0;
    double fidelity = 0.0;
    double cost = 0.0;
    std::uint64_t seed = 0;
    std::string output_path;
    std::vector<qfp::Complex> coefficients;
    std::vector<qfp::Complex> target;
    nlohmann::json document;
};

namespace {

thread_local std::string g_last_error;

qfp_status status_of(qfp::ErrorCode code) {
    using qfp::ErrorCode;
    switch (code) {
        case ErrorCode::Config:
            return QFP_ERR_CONFIG;
        case ErrorCode::HeraldImpossible:
            return QFP_ERR_HERALD_IMPOSSIBLE;
        case ErrorCode::NonUnitary:
            return QFP_ERR_NON_UNITARY;
        case ErrorCode::TableTooLarge:
            return QFP_ERR_TABLE_TOO_LARGE;
        case ErrorCode::Io:
            return QFP_ERR_IO;
        case ErrorCode::Internal:
            return QFP_ERR_INTERNAL;
        case ErrorCode::InvalidDimension:
        case ErrorCode::InvalidCircuit:
        case ErrorCode::InvalidArguments:
        case ErrorCode::OracleTooLarge:
            return QFP_ERR_INVALID_ARGUMENT;
    }
    return QFP_ERR_INTERNAL;
}

qfp_status fail(qfp_status status, const std::string& message) {
    g_last_error = message;
    return status;
}

template <typename Fn>
qfp_status guarded(Fn&& fn) {
    try {
        g_last_error.clear();
        return fn();
    } catch (const qfp::Error& e) {
        return fail(status_of(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(QFP_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(QFP_ERR_INTERNAL, e.what());
    }
}

char* copy_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

const std::vector<qfp::Complex>* pick_state(const qfp_result* r, qfp_state_kind which) {
    if (!r) return nullptr;
    if (which == QFP_STATE_HERALDED) return &r->coefficients;
    if (which == QFP_STATE_TARGET) return &r->target;
    return nullptr;
}

void fill_from_evaluation(qfp_result& r, const qfp::Evaluation& ev) {
    r.valid = ev.valid;
    r.probability = ev.probability;
    r.fidelity = ev.fidelity;
    r.cost = ev.cost;
    if (ev.state) {
        r.coefficients = ev.state->coefficients;
        qfp::normalize_global_phase(r.coefficients);
    }
}

}  // namespace

extern "C" {

const char* qfp_version(void) { return qfp::kVersionString; }

const char* qfp_last_error(void) { return g_last_error.c_str(); }

const char* qfp_status_name(qfp_status status) {
    switch (status) {
        case QFP_OK:
            return "ok";
        case QFP_ERR_INVALID_ARGUMENT:
            return "invalid argument";
        case QFP_ERR_CONFIG:
            return "configuration error";
        case QFP_ERR_HERALD_IMPOSSIBLE:
            return "herald impossible";
        case QFP_ERR_INTERNAL:
            return "internal error";
        case QFP_ERR_NON_UNITARY:
            return "non-unitary transformation";
        case QFP_ERR_TABLE_TOO_LARGE:
            return "table too large";
        case QFP_ERR_IO:
            return "i/o error";
    }
    return "unknown status";
}

void qfp_string_free(char* s) { std::free(s); }

uint64_t qfp_entropy_seed(void) {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ static_cast<std::uint64_t>(rd());
}

qfp_status qfp_tables_create(int n_s, int num_squeezed, int n_c, qfp_tables** out) {
    if (!out) return fail(QFP_ERR_INVALID_ARGUMENT, "null output handle");
    return guarded([&] {
        *out = new qfp_tables{qfp::HafnianTables(n_s, num_squeezed, n_c)};
        return QFP_OK;
    });
}

qfp_status qfp_tables_kappa(const qfp_tables* tables, int n_k, size_t* out) {
    if (!tables || !out) return fail(QFP_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out = tables->tables.kappa(n_k);
        return QFP_OK;
    });
}

size_t qfp_tables_total_rows(const qfp_tables* tables) { return tables ? tables->tables.total_rows() : 0; }

qfp_status qfp_tables_to_json(const qfp_tables* tables, char** out) {
    if (!tables || !out) return fail(QFP_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        nlohmann::json j = qfp::io::tables_to_json(tables->tables);
        j["schema_version"] = qfp::io::kSchemaVersion;
        j["kind"] = "tables";
        *out = copy_string(j.dump(2));
        return QFP_OK;
    });
}

void qfp_tables_free(qfp_tables* tables) { delete tables; }

qfp_status qfp_design_run(const char* config_json, int has_seed, uint64_t seed, int threads, int n_c,
                          qfp_result** out) {
    if (!config_json || !out) return fail(QFP_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        qfp::io::RunConfig cfg = qfp::io::parse_run_config(qfp::io::parse_document(config_json));
        if (has_seed) {
            cfg.pso.seed = seed;
        } else if (!cfg.has_seed) {
            cfg.pso.seed = qfp_entropy_seed();
        }
        cfg.has_seed = true;
        if (threads > 0) cfg.pso.threads = threads;
        if (n_c > 0) {
            cfg.space.n_c = n_c;
            cfg.space.validate();
        }
        const qfp::HafnianTables tables(cfg.space.n_s, cfg.space.num_squeezed, cfg.space.n_c);
        const qfp::TargetState target = cfg.target.build(cfg.space.n_c);
        const qfp::DesignResult result = qfp::pso_run(cfg.space, target, cfg.pso, &tables);

        auto r = std::make_unique<qfp_result>();
        fill_from_evaluation(*r, result.best_by_cost.evaluation);
        r->seed = result.seed;
        r->output_path = cfg.output_path;
        r->target = target.coefficients;
        r->document = qfp::io::design_result_to_json(cfg, result, tables);
        *out = r.release();
        return QFP_OK;
    });
}

qfp_status qfp_evaluate(const char* document_json, const char* pick, int n_c_probe, qfp_result** out) {
    if (!document_json || !out) return fail(QFP_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const auto doc = qfp::io::parse_document(document_json);
        const auto design = qfp::io::stored_design_from_json(doc, pick ? pick : "cost");
        const auto report = qfp::io::evaluate_stored(design, n_c_probe);

        auto r = std::make_unique<qfp_result>();
        fill_from_evaluation(*r, report.evaluation);
        r->seed = design.seed;
        r->target = design.target.build(design.space.n_c).coefficients;
        r->document = qfp::io::evaluation_to_json(report);
        *out = r.release();
        return QFP_OK;
    });
}

qfp_status qfp_result_from_json(const char* document_json, qfp_result** out) {
    if (!document_json || !out) return fail(QFP_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        auto r = std::make_unique<qfp_result>();
        r->document = qfp::io::parse_document(document_json);
        const qfp::io::StateView view = qfp::io::state_view_from_json(r->document);
        r->valid = true;
        r->coefficients = view.coefficients;
        if (view.target) r->target = *view.target;
        r->probability = view.probability;
        r->fidelity = view.fidelity;
        r->cost = view.cost;
        r->seed = view.seed;
        *out = r.release();
        return QFP_OK;
    });
}

int qfp_result_valid(const qfp_result* result) { return result && result->valid ? 1 : 0; }
double qfp_result_probability(const qfp_result* result) { return result ? result->probability : 0.0; }
double qfp_result_fidelity(const qfp_result* result) { return result ? result->fidelity : 0.0; }
double qfp_result_cost(const qfp_result* result) { return result ? result->cost : 0.0; }
uint64_t qfp_result_seed(const qfp_result* result) { return result ? result->seed : 0; }
const char* qfp_result_output_path(const qfp_result* result) { return result ? result->output_path.c_str() : ""; }

size_t qfp_result_num_coefficients(const qfp_result* result, qfp_state_kind which) {
    const auto* c = pick_state(result, which);
    return c ? c->size() : 0;
}

qfp_status qfp_result_coefficient(const qfp_result* result, qfp_state_kind which, size_t n, double* re, double* im) {
    const auto* c = pick_state(result, which);
    if (!c || !re || !im) return fail(QFP_ERR_INVALID_ARGUMENT, "null argument or unknown state");
    if (n >= c->size()) return fail(QFP_ERR_INVALID_ARGUMENT, "coefficient index out of range");
    *re = (*c)[n].real();
    *im = (*c)[n].imag();
    return QFP_OK;
}

qfp_status qfp_result_wavefunction(const qfp_result* result, qfp_state_kind which, const double* q, size_t n,
                                   double* re, double* im) {
    const auto* c = pick_state(result, which);
    if (!c || (n > 0 && (!q || !re || !im))) return fail(QFP_ERR_INVALID_ARGUMENT, "null argument or unknown state");
    if (c->empty()) return fail(QFP_ERR_INVALID_ARGUMENT, "result holds no such state");
    return guarded([&] {
        const auto psi = qfp::quadrature_wavefunction(*c, std::span<const double>(q, n));
        for (size_t i = 0; i < n; ++i) {
            re[i] = psi[i].real();
            im[i] = psi[i].imag();
        }
        return QFP_OK;
    });
}

qfp_status qfp_result_to_json(const qfp_result* result, char** out) {
    if (!result || !out) return fail(QFP_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out = copy_string(result->document.dump(2));
        return QFP_OK;
    });
}

void qfp_result_free(qfp_result* result) { delete result; }

qfp_status qfp_oracle_check(int trials, uint64_t seed, char** report_json) {
    if (!report_json) return fail(QFP_ERR_INVALID_ARGUMENT, "null argument");
    if (trials < 0) return fail(QFP_ERR_INVALID_ARGUMENT, "trial count must be nonnegative");
    return guarded([&] {
        const auto report = qfp::oracle::cross_check(trials, seed);
        *report_json = copy_string(qfp::io::oracle_report_to_json(report).dump(2));
        return QFP_OK;
    });
}

}  // extern "C"
