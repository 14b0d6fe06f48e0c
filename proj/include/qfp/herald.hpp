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

#ifndef QFP_HERALD_HPP
#define QFP_HERALD_HPP

#include <span>
#include <string>
#include <vector>

#include "qfp/gaussian.hpp"
#include "qfp/hafnian.hpp"
#include "qfp/types.hpp"

namespace qfp {

/// Fock-basis target |Phi_t>, truncated at n_c.
struct TargetState {
    std::vector<Complex> coefficients;
    std::string label;
    Complex alpha = 0.0;

    int cutoff() const { return static_cast<int>(coefficients.size()) - 1; }

    /// 1 - sum |tau_n|^2
    double truncation_error() const;
};

/// Which bins are squeezed and detected: n_s photons in each of the N_s - 1 side bins.
struct DetectionLayout {
    int n_s = 1;
    int num_squeezed = 3;
    int center_index = 0;

    /// Lattice indices of the squeezed block, ascending.
    std::vector<int> squeezed_bins() const;
};

/**
@brief Heralded single-mode state in the undetected bin.

`coefficients` are normalized by sqrt(P). The sigma block and cosh product that
produced them are kept so the state can be re-evaluated at another cutoff.
*/
struct HeraldedState {
    std::vector<Complex> coefficients;
    double probability = 0.0;
    double fidelity = 0.0;
    double cost = 0.0;
    DetectionLayout layout;
    CMatrix sigma_center;
    double cosh_product = 1.0;

    int cutoff() const { return static_cast<int>(coefficients.size()) - 1; }
};

/// |I|^2 / prod_i (n_i! 2^{n_i} cosh r_i) for a full-lattice pattern; sigma is N x N.
double pattern_probability(const CMatrix& sigma, const SqueezingVector& r, const PhotonPattern& pattern);

/// Same, with sigma restricted to the squeezed block and the pattern taken from the tables.
double pattern_probability(const CMatrix& sigma_center, const SqueezingVector& r, int n_k,
                           const HafnianTables& tables);

/**
@brief Fock coefficients c_{n_K}, n_K = 0..n_c, and the success probability P.

Throws ErrorCode::HeraldImpossible when P <= p_floor.
*/
HeraldedState heralded_coefficients(const CMatrix& sigma_center, const SqueezingVector& r,
                                    const DetectionLayout& layout, const HafnianTables& tables,
                                    double p_floor = 1e-12);

/// Recomputes P up to `n_c_probe` and reports whether it moved by less than `tol`.
bool convergence_check(const HeraldedState& state, int n_c_probe, double tol = 1e-9);

/// |sum_n tau_n^* c_n|^2
double fidelity(std::span<const Complex> c, std::span<const Complex> tau);

/// P log10(1 - F) with 1 - F clamped at 1e-16.
double cost(double probability, double fid);

/// Even Schrodinger cat (|alpha> + |-alpha>) / sqrt(2 (1 + exp(-2|alpha|^2))), unrenormalized after truncation.
TargetState cat_target(Complex alpha, int n_c);

/// <q|Phi> on the given grid (hbar = 1).
std::vector<Complex> quadrature_wavefunction(std::span<const Complex> c, std::span<const double> q);

/// Largest deviation of arg(c_n) from the magnitude-weighted mean phase, over |c_n| > 1e-6.
double phase_flatness(std::span<const Complex> c);

/// Rotates c so its largest-magnitude entry is real and positive.
void normalize_global_phase(std::vector<Complex>& c);

}  // namespace qfp

#endif
