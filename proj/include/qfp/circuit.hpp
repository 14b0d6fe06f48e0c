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

#ifndef QFP_CIRCUIT_HPP
#define QFP_CIRCUIT_HPP

#include <span>
#include <vector>

#include "qfp/types.hpp"

namespace qfp {

/**
@brief Truncated set of equispaced frequency bins.

Bins are indexed 0..n_modes-1. Pulse shapers transmit the central `passband`
bins starting at passband_start() and block the rest.
*/
struct FrequencyLattice {
    int n_modes = 1;
    int passband = 1;
    int center_index = 0;

    int passband_start() const { return (n_modes - passband) / 2; }
    int passband_end() const { return passband_start() + passband; }
    bool in_passband(int bin) const { return bin >= passband_start() && bin < passband_end(); }

    /// Throws ErrorCode::InvalidCircuit when an invariant is broken.
    void validate() const;
};

/// Single-sinewave phase modulation m*sin(2*pi*n/N + theta).
struct EomSetting {
    double modulation_index = 0.0;
    double temporal_phase = 0.0;
};

/// Per-bin phases over the passband; blocked bins carry no phase.
struct ShaperSetting {
    std::vector<double> phases;
};

struct QfpCircuit {
    FrequencyLattice lattice;
    std::vector<EomSetting> eoms;
    std::vector<ShaperSetting> shapers;

    int component_count() const { return static_cast<int>(eoms.size() + shapers.size()); }

    /// Checks layer counts, shaper lengths and modulation bounds.
    void validate(double m_max) const;

    /// Circuit of `q` components with every setting zeroed.
    static QfpCircuit identity(const FrequencyLattice& lattice, int q);
};

/// Mode transformation plus its measured departure from unitarity.
struct UnitaryMatrix {
    CMatrix entries;
    double leakage = 0.0;
};

/// F_{mn} = exp(2 pi i m n / n) / sqrt(n).
CMatrix dft_matrix(int n);

/// F D F^dagger with D_nn = exp(i m sin(2 pi n / N + theta)); a circulant matrix.
CMatrix eom_layer(const EomSetting& setting, const FrequencyLattice& lattice);

/// Diagonal phase mask; bins outside the passband are zeroed.
CMatrix shaper_layer(const ShaperSetting& setting, const FrequencyLattice& lattice);

/**
@brief Multiply the layers of a circuit, first layer acting first.

Layer order is eom[0], shaper[0], eom[1], ..., eom[last]. The returned leakage is
measured on `active_inputs` (all columns when empty): only columns carrying
light need to be isometric for the heralding algebra to hold, and a bandpass
filter always removes the edge columns.
*/
UnitaryMatrix compose_unitary(const QfpCircuit& circuit, std::span<const int> active_inputs = {});

/// Largest absolute entry of U^dagger U - I.
double leakage_check(const CMatrix& u);

/// Same as leakage_check, restricted to the listed columns of U.
double leakage_check(const CMatrix& u, std::span<const int> columns);

}  // namespace qfp

#endif
