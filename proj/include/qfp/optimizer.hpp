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

#ifndef QFP_OPTIMIZER_HPP
#define QFP_OPTIMIZER_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qfp/circuit.hpp"
#include "qfp/gaussian.hpp"
#include "qfp/hafnian.hpp"
#include "qfp/herald.hpp"

namespace qfp {

/// Cost assigned to designs that leak or cannot herald; never beats a valid design.
inline constexpr double kInvalidCost = 1.0;

/// Threshold of the second ("corrected") archive.
inline constexpr double kCorrectedFidelity = 0.9;

struct ParameterBound {
    double lo = 0.0;
    double hi = 1.0;
    bool periodic = false;
};

/**
@brief Search space of the circuit optimizer.

Parameter layout: (m, theta) per EOM, then the passband phases of every shaper,
then the N_s squeezing values of the central bins.
*/
struct DesignSpace {
    int q = 3;
    FrequencyLattice lattice{32, 16, 16};
    int num_squeezed = 3;
    int n_s = 1;
    int n_c = 30;
    double m_max = 5.0;
    double r_max = kDefaultMaxSqueezing;
    Tolerances tol;

    int num_eoms() const { return (q + 1) / 2; }
    int num_shapers() const { return (q - 1) / 2; }
    std::size_t dimension() const;
    std::vector<ParameterBound> bounds() const;
    DetectionLayout layout() const;

    /// Throws ErrorCode::Config on a malformed space.
    void validate() const;
};

struct DecodedDesign {
    QfpCircuit circuit;
    SqueezingVector squeezing;
    bool clamped = false;  ///< some entry was outside its bound
};

DecodedDesign decode_params(std::span<const double> params, const DesignSpace& space);
std::vector<double> encode_params(const QfpCircuit& circuit, const SqueezingVector& squeezing,
                                  const DesignSpace& space);

struct Evaluation {
    bool valid = false;
    double probability = 0.0;
    double fidelity = 0.0;
    double cost = kInvalidCost;
    double leakage = 0.0;
    std::string invalid_reason;
    std::optional<HeraldedState> state;
};

/// Full pipeline from a parameter vector to (P, F, cost); invalid designs get kInvalidCost.
Evaluation evaluate_design(std::span<const double> params, const DesignSpace& space, const TargetState& target,
                           const HafnianTables& tables);

struct PsoConfig {
    int swarm_size = 60;
    int iterations = 500;
    double inertia = 0.729;
    double cognitive = 1.49445;
    double social = 1.49445;
    std::uint64_t seed = 0;
    int threads = 1;
    /// Optional starting positions for the first particles.
    std::vector<std::vector<double>> initial_positions;

    void validate() const;
};

struct DesignRecord {
    std::vector<double> params;
    Evaluation evaluation;
};

struct DesignResult {
    DesignRecord best_by_cost;
    std::optional<DesignRecord> best_by_fidelity;  ///< lowest cost among F > 0.9
    std::vector<double> trace;                     ///< best cost after init and after each iteration
    std::uint64_t seed = 0;
    std::size_t evaluations = 0;
};

/**
@brief Global-best particle swarm over a DesignSpace.

Deterministic for a fixed seed regardless of `threads`: each particle owns an RNG
stream derived from the seed and its index, and the best-so-far reduction runs
in particle order with ties going to the lower index.
*/
DesignResult pso_run(const DesignSpace& space, const TargetState& target, const PsoConfig& config,
                     const HafnianTables* tables = nullptr);

}  // namespace qfp

#endif
