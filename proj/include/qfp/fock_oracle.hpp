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

#ifndef QFP_FOCK_ORACLE_HPP
#define QFP_FOCK_ORACLE_HPP

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "qfp/gaussian.hpp"
#include "qfp/hafnian.hpp"
#include "qfp/types.hpp"

// Brute-force truncated Fock-space simulation. Independent of the covariance
// and hafnian code paths; used only to cross-check them on a few modes.

namespace qfp::oracle {

inline constexpr int kMaxOracleModes = 4;
inline constexpr int kMaxOracleCutoff = 10;

/// Two-mode factor acting on bins (mode, mode + 1); `block` is row-major [[a, b], [c, d]].
struct GivensFactor {
    int mode = 0;
    std::array<Complex, 4> block{1.0, 0.0, 0.0, 1.0};

    /// Mixing angle atan2(|c|, |a|).
    double angle() const;
};

/// U = diag(phases) * R_k * ... * R_1, with R_1 acting first.
struct ReckDecomposition {
    int n_modes = 0;
    std::vector<GivensFactor> rotations;
    std::vector<Complex> phases;

    CMatrix recompose() const;
};

ReckDecomposition reck_decompose(const CMatrix& u, double unitarity_tol = 1e-6);

/// Dense amplitudes over (n_1, ..., n_N), each n_i <= cutoff; mode 0 is most significant.
class FockTensor {
public:
    FockTensor(int modes, int cutoff);

    /// Tensor product of single-mode amplitude vectors of length cutoff + 1.
    static FockTensor product(const std::vector<std::vector<Complex>>& factors);

    int modes() const { return modes_; }
    int cutoff() const { return cutoff_; }
    std::size_t size() const { return amps_.size(); }

    Complex& at(std::span<const int> occupation);
    Complex at(std::span<const int> occupation) const;
    std::span<Complex> amplitudes() { return amps_; }
    std::span<const Complex> amplitudes() const { return amps_; }

    double norm_squared() const;

    /// Probability mass per total photon number 0..modes*cutoff.
    std::vector<double> total_photon_distribution() const;

    /// Zeroes every amplitude whose total photon number exceeds the cutoff.
    void drop_incomplete_sectors();

private:
    int modes_;
    int cutoff_;
    std::vector<Complex> amps_;
};

/// Single-mode squeezed vacuum with the q-quadrature antisqueezed.
std::vector<Complex> squeezed_vacuum_fock(double r, int cutoff);

/// Product of squeezed vacua, one per lattice mode.
FockTensor squeezed_input(const SqueezingVector& r, int cutoff);

/// (s+1) x (s+1) amplitude matrix of a two-mode factor on the sector n_1 + n_2 = s.
CMatrix beamsplitter_sector(const std::array<Complex, 4>& block, int s);

/**
@brief Applies the factors to a state, rotations first and phases last.

Sectors whose total photon number exceeds the cutoff cannot be represented and
are discarded; all lower sectors transform exactly.
*/
FockTensor apply_circuit_fock(FockTensor state, const ReckDecomposition& factors);

struct FockHerald {
    std::vector<Complex> coefficients;
    double probability = 0.0;
};

/**
@brief Projects all modes except `undetected` onto the photon numbers in `pattern`.

Returns amplitudes for n = 0..n_c in the undetected mode; n_c plus the detected
photons must fit within the cutoff so every retained amplitude is exact.
*/
FockHerald herald_fock(const FockTensor& state, const PhotonPattern& pattern, int undetected, int n_c,
                       double p_floor = 1e-12);

/// Randomized comparison of the hafnian pipeline against this oracle on three-bin circuits.
struct OracleReport {
    int trials = 0;
    std::uint64_t seed = 0;
    double max_coefficient_error = 0.0;  ///< max over n of | |c_n|^2 - |c_n^oracle|^2 |
    double max_probability_error = 0.0;
    double tolerance = 1e-6;
    bool passed = true;
};

/**
@brief Random N = 3 QFP circuits, r <= 0.5, cutoff 8, n_c 6, one photon heralded on each side bin.

Compares heralded |c_n|^2 and P between the covariance/hafnian route and brute-force Fock evolution.
*/
OracleReport cross_check(int trials, std::uint64_t seed, double tolerance = 1e-6);

}  // namespace qfp::oracle

#endif
