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

#ifndef QFP_GAUSSIAN_HPP
#define QFP_GAUSSIAN_HPP

#include <span>
#include <vector>

#include "qfp/circuit.hpp"
#include "qfp/types.hpp"

// Covariance algebra for pure Gaussian states in qqpp ordering, hbar = 1
// (vacuum covariance I/2). No matrix inverse or determinant is evaluated on
// the production path; the dense routes exist for verification only.

namespace qfp {

inline constexpr double kDefaultMaxSqueezing = 1.5;

/// Squeezing parameters r_i >= 0 of the input modes.
class SqueezingVector {
public:
    SqueezingVector() = default;

    /// Arbitrary per-mode squeezing; every entry must lie in [0, r_max].
    explicit SqueezingVector(std::vector<double> r, double r_max = kDefaultMaxSqueezing);

    /// Zeros everywhere except the `center.size()` bins centered on `center_index`.
    static SqueezingVector centered(int n_modes, int center_index, std::span<const double> center,
                                    double r_max = kDefaultMaxSqueezing);

    int size() const { return static_cast<int>(r_.size()); }
    double operator[](int i) const { return r_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& values() const { return r_; }

    /// Indices with r_i > 0.
    std::vector<int> support() const;

    /// prod_i cosh r_i
    double cosh_product() const;

private:
    std::vector<double> r_;
};

/// Blocks of S_p = [[S_A, S_B], [-S_B, S_A]].
struct SymplecticOrthogonal {
    RMatrix sa;
    RMatrix sb;

    int modes() const { return static_cast<int>(sa.rows()); }

    /// Full 2N x 2N real matrix.
    RMatrix assemble() const;

    /// Largest violation among the four block identities.
    double block_identity_error() const;
};

/// Gamma^{-1} = [[A, C], [C, 2I - A]].
struct GammaBlocks {
    RMatrix a;
    RMatrix c;

    int modes() const { return static_cast<int>(a.rows()); }
    RMatrix assemble() const;
};

/// Symmetric (not Hermitian) 2N x 2N inverse of H = B + I/2.
struct HInverse {
    CMatrix entries;
};

/// sigma_ij = <s_i s_j>, complex symmetric.
struct SigmaMatrix {
    CMatrix entries;

    /// Square sub-block on the listed indices.
    CMatrix block(std::span<const int> indices) const;
};

/// W = (1/sqrt 2) [[I, I], [-iI, iI]].
CMatrix w_matrix(int n);

/**
@brief Symplectic image of a mode unitary, S_p = W diag(U, U*) W^dagger.

Throws ErrorCode::NonUnitary when the recorded leakage exceeds `unitarity_tol`.
The raw-matrix overload measures leakage on all columns.
*/
SymplecticOrthogonal unitary_to_symplectic(const UnitaryMatrix& u, double unitarity_tol = 1e-6);
SymplecticOrthogonal unitary_to_symplectic(const CMatrix& u, double unitarity_tol = 1e-6);

/// A = I - S_A T S_A^T + S_B T S_B^T, C = S_A T S_B^T + S_B T S_A^T with T = diag(tanh r).
GammaBlocks gamma_inverse_blocks(const SymplecticOrthogonal& s, const SqueezingVector& r);

/// prod_i cosh^2 r_i
double det_gamma(const SqueezingVector& r);

/// Closed-form H^{-1} from the Gamma^{-1} blocks.
HInverse h_inverse(const GammaBlocks& blocks);

/// B = (1/2) [[A + iC, C - i(A - I)], [C - i(A - I), 2I - A - iC]].
CMatrix b_matrix(const GammaBlocks& blocks);

/// sigma_ij = 2 (Hinv_{ij} - Hinv_{i+N, j+N}).
SigmaMatrix sigma_from_h_inverse(const HInverse& h);

/// Diagonal squeezed-vacuum covariance V_0 = (1/2) diag(e^{2r}, e^{-2r}).
RMatrix squeezed_covariance(const SqueezingVector& r);

}  // namespace qfp

#endif
