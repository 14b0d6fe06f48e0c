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

#ifndef QFP_TYPES_HPP
#define QFP_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qfp {

using Complex = std::complex<double>;

using CMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
using RMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic>;
using CVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;
using RVector = Eigen::Matrix<double, Eigen::Dynamic, 1>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Numerical thresholds shared by the pipeline.
struct Tolerances {
    double unitarity = 1e-6;   ///< maximum accepted leakage of a mode transformation
    double identity = 1e-8;    ///< algebraic identity checks
    double p_floor = 1e-12;    ///< below this a herald is treated as impossible
};

enum class ErrorCode {
    InvalidDimension,
    InvalidCircuit,
    NonUnitary,
    InvalidArguments,
    TableTooLarge,
    HeraldImpossible,
    OracleTooLarge,
    Config,
    Io,
    Internal,
};

/**
@brief Exception carrying a machine-readable error code.

Every recoverable failure in the library is reported through this type; the C
interface maps the code onto its status enumeration.
*/
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace qfp

#endif
