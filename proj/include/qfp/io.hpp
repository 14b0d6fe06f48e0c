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

#ifndef QFP_IO_HPP
#define QFP_IO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qfp/fock_oracle.hpp"
#include "qfp/optimizer.hpp"

// JSON documents exchanged by the command-line tool. Complex numbers are
// {"re": x, "im": y}; every document carries "schema_version".

namespace qfp::io {

inline constexpr const char* kSchemaVersion = "1.0";
inline constexpr int kSchemaMajor = 1;

struct TargetSpec {
    std::string kind = "even_cat";
    Complex alpha = 1.0;

    TargetState build(int n_c) const;
};

struct RunConfig {
    DesignSpace space;
    PsoConfig pso;
    TargetSpec target;
    bool has_seed = false;
    std::string output_path;
};

/// Parses text into JSON; syntax errors become ErrorCode::Config with line and column.
nlohmann::json parse_document(const std::string& text);

/// Rejects documents without a schema version or with a newer major version.
void check_schema_version(const nlohmann::json& doc);

/// Schema-validated run configuration.
RunConfig parse_run_config(const nlohmann::json& doc);

nlohmann::json space_to_json(const DesignSpace& space);
DesignSpace space_from_json(const nlohmann::json& j);
nlohmann::json pso_to_json(const PsoConfig& pso);
nlohmann::json target_to_json(const TargetSpec& target);
TargetSpec target_from_json(const nlohmann::json& j);

nlohmann::json complex_to_json(Complex z);
Complex complex_from_json(const nlohmann::json& j);
nlohmann::json coefficients_to_json(const std::vector<Complex>& c);
std::vector<Complex> coefficients_from_json(const nlohmann::json& j);

/// Circuit settings and the full squeezing vector of a decoded parameter vector.
nlohmann::json design_to_json(std::span<const double> params, const DesignSpace& space);

/// State record with the global phase normalized (largest coefficient real positive).
nlohmann::json state_to_json(const Evaluation& ev, const DetectionLayout& layout);

nlohmann::json tables_to_json(const HafnianTables& tables);

nlohmann::json design_result_to_json(const RunConfig& config, const DesignResult& result,
                                     const HafnianTables& tables);

/// Parameters of a stored design: "best_by_cost"/"best_by_fidelity" of a result, or a circuit document.
struct StoredDesign {
    DesignSpace space;
    TargetSpec target;
    std::vector<double> params;
    std::uint64_t seed = 0;
};

StoredDesign stored_design_from_json(const nlohmann::json& doc, const std::string& pick = "cost");

struct EvaluationReport {
    StoredDesign design;
    Evaluation evaluation;
    int n_c_probe = 0;
    bool converged = false;
    double phase_flatness = 0.0;
};

/**
@brief Re-runs the pipeline on a stored design.

Throws ErrorCode::HeraldImpossible for designs that cannot herald and
ErrorCode::NonUnitary for leaking ones. `n_c_probe` <= n_c selects n_c + 10.
*/
EvaluationReport evaluate_stored(const StoredDesign& design, int n_c_probe);

nlohmann::json evaluation_to_json(const EvaluationReport& report);

/// Heralded coefficients and, when present, target coefficients of a result or evaluation document.
struct StateView {
    std::vector<Complex> coefficients;
    std::optional<std::vector<Complex>> target;
    double probability = 0.0;
    double fidelity = 0.0;
    double cost = 0.0;
    std::uint64_t seed = 0;
};

StateView state_view_from_json(const nlohmann::json& doc);

nlohmann::json oracle_report_to_json(const oracle::OracleReport& report);

}  // namespace qfp::io

#endif
