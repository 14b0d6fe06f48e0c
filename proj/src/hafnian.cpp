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

#include "qfp/hafnian.hpp"

#include <numeric>
#include <string>

namespace qfp {

namespace {

double binomial(int n, int k) {
    double b = 1.0;
    for (int i = 1; i <= k; ++i) {
        b = b * (n - k + i) / i;
    }
    return b;
}

double factorial(int n) {
    if (n > 170) {
        throw Error(ErrorCode::InvalidArguments, "factorial overflows double");
    }
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

Complex ipow(Complex base, int exponent) {
    Complex result = 1.0;
    while (exponent > 0) {
        if (exponent & 1) result *= base;
        base *= base;
        exponent >>= 1;
    }
    return result;
}

void check_sigma(const CMatrix& sigma, int modes) {
    if (sigma.rows() != sigma.cols() || sigma.rows() != modes) {
        throw Error(ErrorCode::InvalidArguments, "sigma block is " + std::to_string(sigma.rows()) + "x" +
                                                     std::to_string(sigma.cols()) + ", pattern has " +
                                                     std::to_string(modes) + " modes");
    }
}

Complex matchings(const CMatrix& sigma, const std::vector<int>& factors, std::vector<bool>& used) {
    std::size_t first = 0;
    while (first < factors.size() && used[first]) ++first;
    if (first == factors.size()) return 1.0;

    used[first] = true;
    Complex sum = 0.0;
    for (std::size_t j = first + 1; j < factors.size(); ++j) {
        if (used[j]) continue;
        used[j] = true;
        sum += sigma(factors[first], factors[j]) * matchings(sigma, factors, used);
        used[j] = false;
    }
    used[first] = false;
    return sum;
}

}  // namespace

int PhotonPattern::total() const { return std::accumulate(counts.begin(), counts.end(), 0); }

PatternTable make_pattern_table(const PhotonPattern& pattern, std::size_t max_rows) {
    PatternTable t;
    t.counts = pattern.counts;
    const int modes = pattern.modes();

    std::size_t rows = 1;
    for (int n : pattern.counts) {
        if (n < 0) {
            throw Error(ErrorCode::InvalidArguments, "photon numbers must be nonnegative");
        }
        rows *= static_cast<std::size_t>(n + 1);
        if (rows > max_rows) {
            throw Error(ErrorCode::TableTooLarge,
                        "hafnian table would exceed " + std::to_string(max_rows) + " rows");
        }
    }
    t.total = pattern.total();
    if (t.total % 2 == 0) {
        t.inv_half_factorial = 1.0 / factorial(t.total / 2);
    }

    t.nu.reserve(rows * static_cast<std::size_t>(modes));
    t.z.reserve(rows * static_cast<std::size_t>(modes));
    t.odd.reserve(rows);
    t.binomial.reserve(rows);

    std::vector<int> nu(static_cast<std::size_t>(modes), 0);
    for (std::size_t row = 0; row < rows; ++row) {
        int parity = 0;
        double bin = 1.0;
        for (int j = 0; j < modes; ++j) {
            const int n = pattern.counts[static_cast<std::size_t>(j)];
            const int v = nu[static_cast<std::size_t>(j)];
            t.nu.push_back(v);
            t.z.push_back(0.5 * n - v);
            parity += v;
            bin *= binomial(n, v);
        }
        t.odd.push_back(static_cast<std::uint8_t>(parity & 1));
        t.binomial.push_back(bin);

        // odometer, last mode fastest
        for (int j = modes - 1; j >= 0; --j) {
            auto& v = nu[static_cast<std::size_t>(j)];
            if (v < pattern.counts[static_cast<std::size_t>(j)]) {
                ++v;
                break;
            }
            v = 0;
        }
    }
    return t;
}

HafnianTables::HafnianTables(int n_s, int num_squeezed, int n_c, std::size_t max_rows)
    : n_s_(n_s), num_squeezed_(num_squeezed), n_c_(n_c) {
    if (n_s < 0 || n_c < 0 || num_squeezed < 1 || num_squeezed % 2 == 0) {
        throw Error(ErrorCode::InvalidArguments, "need n_s >= 0, n_c >= 0 and odd N_s >= 1");
    }
    if (kappa_formula(n_s, num_squeezed, n_c) > max_rows) {
        throw Error(ErrorCode::TableTooLarge, "kappa at n_c exceeds the table cap of " + std::to_string(max_rows));
    }
    tables_.reserve(static_cast<std::size_t>(n_c + 1));
    for (int n_k = 0; n_k <= n_c; ++n_k) {
        tables_.push_back(make_pattern_table(pattern(n_k), max_rows));
    }
}

const PatternTable& HafnianTables::for_n_k(int n_k) const {
    if (n_k < 0 || n_k > n_c_) {
        throw Error(ErrorCode::InvalidArguments, "n_K " + std::to_string(n_k) + " outside the table range");
    }
    return tables_[static_cast<std::size_t>(n_k)];
}

PhotonPattern HafnianTables::pattern(int n_k) const {
    PhotonPattern p;
    p.counts.assign(static_cast<std::size_t>(num_squeezed_), n_s_);
    p.counts[static_cast<std::size_t>(num_squeezed_ / 2)] = n_k;
    return p;
}

std::size_t HafnianTables::total_rows() const {
    std::size_t sum = 0;
    for (const auto& t : tables_) sum += t.kappa();
    return sum;
}

std::size_t HafnianTables::kappa_formula(int n_s, int num_squeezed, int n_k) {
    std::size_t k = static_cast<std::size_t>(n_k + 1);
    for (int i = 0; i < num_squeezed - 1; ++i) k *= static_cast<std::size_t>(n_s + 1);
    return k;
}

Complex loop_hafnian(const CMatrix& sigma, const PatternTable& table) {
    const int modes = table.modes();
    check_sigma(sigma, modes);
    if (table.total % 2 != 0) return 0.0;
    if (table.total == 0) return 1.0;

    const int half = table.total / 2;
    Complex sum = 0.0;
    const double* z = table.z.data();
    for (std::size_t row = 0; row < table.kappa(); ++row, z += modes) {
        Complex quad = 0.0;
        for (int i = 0; i < modes; ++i) {
            if (z[i] == 0.0) continue;
            Complex inner = 0.5 * z[i] * sigma(i, i);
            for (int j = i + 1; j < modes; ++j) {
                inner += z[j] * sigma(i, j);
            }
            quad += z[i] * inner;
        }
        // quad == (1/2) z^T sigma z for symmetric sigma
        const Complex term = table.binomial[row] * ipow(quad, half);
        if (table.odd[row]) {
            sum -= term;
        } else {
            sum += term;
        }
    }
    return sum * table.inv_half_factorial;
}

Complex loop_hafnian(const CMatrix& sigma, const PhotonPattern& pattern, const HafnianTables& tables) {
    const PhotonPattern expected_shape = tables.pattern(0);
    if (pattern.modes() != expected_shape.modes()) {
        throw Error(ErrorCode::InvalidArguments, "pattern length does not match the tables");
    }
    const int n_k = pattern.counts[static_cast<std::size_t>(pattern.modes() / 2)];
    const PatternTable& table = tables.for_n_k(n_k);
    if (table.counts != pattern.counts) {
        throw Error(ErrorCode::InvalidArguments, "pattern does not match the precomputed layout");
    }
    return loop_hafnian(sigma, table);
}

Complex loop_hafnian(const CMatrix& sigma, const PhotonPattern& pattern) {
    check_sigma(sigma, pattern.modes());
    if (pattern.total() % 2 != 0) return 0.0;
    return loop_hafnian(sigma, make_pattern_table(pattern));
}

Complex loop_hafnian_wick(const CMatrix& sigma, const PhotonPattern& pattern, int cap) {
    check_sigma(sigma, pattern.modes());
    const int total = pattern.total();
    if (total > cap) {
        throw Error(ErrorCode::InvalidArguments,
                    "Wick enumeration refused for " + std::to_string(total) + " factors (cap " + std::to_string(cap) + ")");
    }
    if (total % 2 != 0) return 0.0;

    std::vector<int> factors;
    for (int i = 0; i < pattern.modes(); ++i) {
        for (int k = 0; k < pattern.counts[static_cast<std::size_t>(i)]; ++k) factors.push_back(i);
    }
    std::vector<bool> used(factors.size(), false);
    return matchings(sigma, factors, used);
}

Complex moment_integral(const CMatrix& sigma, const PhotonPattern& pattern, const HafnianTables& tables) {
    if (pattern.total() % 2 != 0) return 0.0;
    return loop_hafnian(sigma, pattern, tables);
}

Complex moment_integral(const CMatrix& sigma, const PhotonPattern& pattern) {
    if (pattern.total() % 2 != 0) return 0.0;
    return loop_hafnian(sigma, pattern);
}

}  // namespace qfp
