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

#include "qfp/circuit.hpp"

#include <cmath>
#include <string>

namespace qfp {

void FrequencyLattice::validate() const {
    if (n_modes <= 0) {
        throw Error(ErrorCode::InvalidCircuit, "lattice needs at least one mode");
    }
    if (passband <= 0 || passband > n_modes) {
        throw Error(ErrorCode::InvalidCircuit,
                    "passband " + std::to_string(passband) + " outside (0, " + std::to_string(n_modes) + "]");
    }
    if (center_index < 0 || center_index >= n_modes || !in_passband(center_index)) {
        throw Error(ErrorCode::InvalidCircuit,
                    "center index " + std::to_string(center_index) + " is not inside the passband");
    }
}

void QfpCircuit::validate(double m_max) const {
    lattice.validate();
    if (eoms.empty() || eoms.size() != shapers.size() + 1) {
        throw Error(ErrorCode::InvalidCircuit,
                    "layers must alternate EOM/shaper and start and end with an EOM");
    }
    for (const auto& eom : eoms) {
        if (!(eom.modulation_index >= 0.0 && eom.modulation_index <= m_max)) {
            throw Error(ErrorCode::InvalidCircuit, "modulation index outside [0, m_max]");
        }
    }
    for (const auto& shaper : shapers) {
        if (static_cast<int>(shaper.phases.size()) != lattice.passband) {
            throw Error(ErrorCode::InvalidCircuit, "shaper phase count must equal the passband");
        }
    }
}

QfpCircuit QfpCircuit::identity(const FrequencyLattice& lattice, int q) {
    if (q < 1 || q % 2 == 0) {
        throw Error(ErrorCode::InvalidCircuit, "component count must be odd and positive");
    }
    QfpCircuit circuit;
    circuit.lattice = lattice;
    circuit.eoms.resize(static_cast<std::size_t>((q + 1) / 2));
    circuit.shapers.assign(static_cast<std::size_t>((q - 1) / 2),
                           ShaperSetting{std::vector<double>(static_cast<std::size_t>(lattice.passband), 0.0)});
    return circuit;
}

CMatrix dft_matrix(int n) {
    if (n <= 0) {
        throw Error(ErrorCode::InvalidDimension, "DFT dimension must be positive");
    }
    CMatrix f(n, n);
    const double norm = 1.0 / std::sqrt(static_cast<double>(n));
    for (int m = 0; m < n; ++m) {
        for (int k = 0; k < n; ++k) {
            // reduce m*k mod n first so large products keep full phase accuracy
            const double angle = kTwoPi * static_cast<double>((static_cast<long long>(m) * k) % n) / n;
            f(m, k) = std::polar(norm, angle);
        }
    }
    return f;
}

CMatrix eom_layer(const EomSetting& setting, const FrequencyLattice& lattice) {
    const int n = lattice.n_modes;
    std::vector<Complex> drive(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) {
        const double phase =
            setting.modulation_index * std::sin(kTwoPi * t / n + setting.temporal_phase);
        drive[static_cast<std::size_t>(t)] = std::polar(1.0, phase);
    }

    // (F D F^dagger)_{jk} = (1/N) sum_t D_t exp(2 pi i t (j-k) / N)
    std::vector<Complex> band(static_cast<std::size_t>(n));
    for (int d = 0; d < n; ++d) {
        Complex acc = 0.0;
        for (int t = 0; t < n; ++t) {
            const double angle = kTwoPi * static_cast<double>((static_cast<long long>(t) * d) % n) / n;
            acc += drive[static_cast<std::size_t>(t)] * std::polar(1.0, angle);
        }
        band[static_cast<std::size_t>(d)] = acc / static_cast<double>(n);
    }

    CMatrix out(n, n);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            out(j, k) = band[static_cast<std::size_t>(((j - k) % n + n) % n)];
        }
    }
    return out;
}

CMatrix shaper_layer(const ShaperSetting& setting, const FrequencyLattice& lattice) {
    if (static_cast<int>(setting.phases.size()) != lattice.passband) {
        throw Error(ErrorCode::InvalidCircuit, "shaper phase count must equal the passband");
    }
    CMatrix out = CMatrix::Zero(lattice.n_modes, lattice.n_modes);
    const int start = lattice.passband_start();
    for (int i = 0; i < lattice.passband; ++i) {
        out(start + i, start + i) = std::polar(1.0, setting.phases[static_cast<std::size_t>(i)]);
    }
    return out;
}

UnitaryMatrix compose_unitary(const QfpCircuit& circuit, std::span<const int> active_inputs) {
    circuit.lattice.validate();
    if (circuit.eoms.empty() || circuit.eoms.size() != circuit.shapers.size() + 1) {
        throw Error(ErrorCode::InvalidCircuit,
                    "layers must alternate EOM/shaper and start and end with an EOM");
    }
    const FrequencyLattice& lattice = circuit.lattice;
    const int start = lattice.passband_start();

    CMatrix u = eom_layer(circuit.eoms.front(), lattice);
    for (std::size_t q = 0; q < circuit.shapers.size(); ++q) {
        const auto& phases = circuit.shapers[q].phases;
        if (static_cast<int>(phases.size()) != lattice.passband) {
            throw Error(ErrorCode::InvalidCircuit, "shaper phase count must equal the passband");
        }
        // the shaper is diagonal: scale passband rows, zero the blocked ones
        for (int row = 0; row < lattice.n_modes; ++row) {
            if (lattice.in_passband(row)) {
                u.row(row) *= std::polar(1.0, phases[static_cast<std::size_t>(row - start)]);
            } else {
                u.row(row).setZero();
            }
        }
        u = eom_layer(circuit.eoms[q + 1], lattice) * u;
    }

    UnitaryMatrix out;
    out.leakage = active_inputs.empty() ? leakage_check(u) : leakage_check(u, active_inputs);
    out.entries = std::move(u);
    return out;
}

double leakage_check(const CMatrix& u) {
    if (u.rows() != u.cols()) {
        throw Error(ErrorCode::InvalidDimension, "leakage check needs a square matrix");
    }
    const CMatrix gram = u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols());
    return gram.cwiseAbs().maxCoeff();
}

double leakage_check(const CMatrix& u, std::span<const int> columns) {
    double worst = 0.0;
    for (int a : columns) {
        if (a < 0 || a >= u.cols()) {
            throw Error(ErrorCode::InvalidDimension, "leakage column out of range");
        }
        for (int b : columns) {
            const Complex inner = u.col(a).dot(u.col(b));  // conjugates the first argument
            const double dev = std::abs(inner - (a == b ? 1.0 : 0.0));
            worst = std::max(worst, dev);
        }
    }
    return worst;
}

}  // namespace qfp
