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

#ifndef QFP_HAFNIAN_HPP
#define QFP_HAFNIAN_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qfp/types.hpp"

namespace qfp {

/// Photon numbers n_i per mode.
struct PhotonPattern {
    std::vector<int> counts;

    int modes() const { return static_cast<int>(counts.size()); }
    int total() const;
};

inline constexpr std::size_t kDefaultMaxTableRows = std::size_t{1} << 21;
inline constexpr int kDefaultWickCap = 12;

/**
@brief Precomputed terms of the alternating-binomial loop-hafnian sum for one pattern.

Row i holds one choice of silent indices nu (the D matrix row), the parity of
sum(nu), the binomial product prod C(n_j, nu_j) and the half-integer vector
z_j = n_j/2 - nu_j. Rows are ordered with the last mode varying fastest.
*/
struct PatternTable {
    std::vector<int> counts;
    int total = 0;
    double inv_half_factorial = 1.0;  ///< 1 / (total/2)!, unused for odd totals
    std::vector<int> nu;              ///< kappa x modes, row-major
    std::vector<std::uint8_t> odd;    ///< parity of sum(nu) per row
    std::vector<double> binomial;     ///< per row
    std::vector<double> z;            ///< kappa x modes, row-major

    int modes() const { return static_cast<int>(counts.size()); }
    std::size_t kappa() const { return binomial.size(); }
};

/// Builds the table for an arbitrary pattern; throws TableTooLarge past `max_rows`.
PatternTable make_pattern_table(const PhotonPattern& pattern, std::size_t max_rows = kDefaultMaxTableRows);

/**
@brief Tables for every undetected photon number n_K in 0..n_c.

The pattern for a given n_K is s = (n_s, ..., n_s, n_K, n_s, ..., n_s) over the
N_s squeezed bins, with n_K in the middle slot. Immutable once built and safe to
share across threads.
*/
class HafnianTables {
public:
    HafnianTables(int n_s, int num_squeezed, int n_c, std::size_t max_rows = kDefaultMaxTableRows);

    int detected_photons() const { return n_s_; }
    int num_squeezed() const { return num_squeezed_; }
    int cutoff() const { return n_c_; }

    const PatternTable& for_n_k(int n_k) const;
    PhotonPattern pattern(int n_k) const;
    std::size_t kappa(int n_k) const { return for_n_k(n_k).kappa(); }
    std::size_t total_rows() const;

    /// (n_s + 1)^(N_s - 1) (n_K + 1)
    static std::size_t kappa_formula(int n_s, int num_squeezed, int n_k);

private:
    int n_s_;
    int num_squeezed_;
    int n_c_;
    std::vector<PatternTable> tables_;
};

/// Loop hafnian <s_1^{n_1} ... s_S^{n_S}> from a prepared table; exactly zero for odd totals.
Complex loop_hafnian(const CMatrix& sigma, const PatternTable& table);

/// Table lookup by the middle entry of `pattern`; the pattern must match the table layout.
Complex loop_hafnian(const CMatrix& sigma, const PhotonPattern& pattern, const HafnianTables& tables);

/// Convenience form that builds the table on the fly.
Complex loop_hafnian(const CMatrix& sigma, const PhotonPattern& pattern);

/// Reference value by explicit perfect-matching enumeration; refuses totals above `cap`.
Complex loop_hafnian_wick(const CMatrix& sigma, const PhotonPattern& pattern, int cap = kDefaultWickCap);

/// Gaussian moment: 0 for odd totals, the loop hafnian otherwise.
Complex moment_integral(const CMatrix& sigma, const PhotonPattern& pattern, const HafnianTables& tables);
Complex moment_integral(const CMatrix& sigma, const PhotonPattern& pattern);

}  // namespace qfp

#endif
