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

#include "qfp/fock_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <random>

#include "qfp/circuit.hpp"
#include "qfp/herald.hpp"

namespace qfp::oracle {

namespace {

double binom(int n, int k) {
    double b = 1.0;
    for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
    return b;
}

double sqrt_factorial(int n) {
    double v = 1.0;
    for (int i = 2; i <= n; ++i) v *= std::sqrt(static_cast<double>(i));
    return v;
}

Complex ipow(Complex b, int e) {
    Complex r = 1.0;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

std::size_t stride_of(int modes, int cutoff, int mode) {
    std::size_t s = 1;
    for (int i = mode + 1; i < modes; ++i) s *= static_cast<std::size_t>(cutoff + 1);
    return s;
}

// Right-multiplies columns (j, j+1) of u by g.
void rotate_columns(CMatrix& u, int j, const std::array<Complex, 4>& g) {
    for (Eigen::Index row = 0; row < u.rows(); ++row) {
        const Complex x = u(row, j);
        const Complex y = u(row, j + 1);
        u(row, j) = x * g[0] + y * g[2];
        u(row, j + 1) = x * g[1] + y * g[3];
    }
}

}  // namespace

double GivensFactor::angle() const { return std::atan2(std::abs(block[2]), std::abs(block[0])); }

CMatrix ReckDecomposition::recompose() const {
    CMatrix m = CMatrix::Identity(n_modes, n_modes);
    for (const auto& f : rotations) {
        CMatrix r = CMatrix::Identity(n_modes, n_modes);
        r(f.mode, f.mode) = f.block[0];
        r(f.mode, f.mode + 1) = f.block[1];
        r(f.mode + 1, f.mode) = f.block[2];
        r(f.mode + 1, f.mode + 1) = f.block[3];
        m = r * m;
    }
    for (int i = 0; i < n_modes; ++i) m.row(i) *= phases[static_cast<std::size_t>(i)];
    return m;
}

ReckDecomposition reck_decompose(const CMatrix& u, double unitarity_tol) {
    if (u.rows() != u.cols()) {
        throw Error(ErrorCode::InvalidDimension, "decomposition needs a square matrix");
    }
    const double leak = leakage_check(u);
    if (leak > unitarity_tol) {
        throw Error(ErrorCode::NonUnitary, "cannot decompose a matrix with leakage " + std::to_string(leak));
    }
    const int n = static_cast<int>(u.rows());
    CMatrix work = u;

    // null the strict lower triangle row by row from the bottom: U G_1 ... G_k = D
    std::vector<GivensFactor> nulling;
    for (int row = n - 1; row >= 1; --row) {
        for (int j = 0; j < row; ++j) {
            const Complex x = work(row, j);
            if (x == 0.0) continue;
            const Complex y = work(row, j + 1);
            const double rho = std::hypot(std::abs(x), std::abs(y));
            GivensFactor g;
            g.mode = j;
            g.block = {y / rho, std::conj(x) / rho, -x / rho, std::conj(y) / rho};
            rotate_columns(work, j, g.block);
            work(row, j) = 0.0;
            nulling.push_back(g);
        }
    }

    // U = D G_k^dagger ... G_1^dagger, so G_1^dagger acts first
    ReckDecomposition out;
    out.n_modes = n;
    for (const auto& g : nulling) {
        GivensFactor h;
        h.mode = g.mode;
        h.block = {std::conj(g.block[0]), std::conj(g.block[2]), std::conj(g.block[1]), std::conj(g.block[3])};
        out.rotations.push_back(h);
    }
    out.phases.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out.phases[static_cast<std::size_t>(i)] = work(i, i);
    return out;
}

FockTensor::FockTensor(int modes, int cutoff) : modes_(modes), cutoff_(cutoff) {
    if (modes < 1 || cutoff < 0) {
        throw Error(ErrorCode::InvalidArguments, "Fock tensor needs modes >= 1 and cutoff >= 0");
    }
    if (modes > kMaxOracleModes || cutoff > kMaxOracleCutoff) {
        throw Error(ErrorCode::OracleTooLarge, "oracle limited to " + std::to_string(kMaxOracleModes) +
                                                   " modes and cutoff " + std::to_string(kMaxOracleCutoff));
    }
    std::size_t size = 1;
    for (int i = 0; i < modes; ++i) size *= static_cast<std::size_t>(cutoff + 1);
    amps_.assign(size, 0.0);
}

FockTensor FockTensor::product(const std::vector<std::vector<Complex>>& factors) {
    if (factors.empty()) {
        throw Error(ErrorCode::InvalidArguments, "product state needs at least one mode");
    }
    const int cutoff = static_cast<int>(factors.front().size()) - 1;
    FockTensor t(static_cast<int>(factors.size()), cutoff);
    for (const auto& f : factors) {
        if (static_cast<int>(f.size()) != cutoff + 1) {
            throw Error(ErrorCode::InvalidArguments, "all factors must share the cutoff");
        }
    }
    std::vector<int> occ(factors.size(), 0);
    for (std::size_t idx = 0; idx < t.amps_.size(); ++idx) {
        Complex a = 1.0;
        for (std::size_t m = 0; m < factors.size(); ++m) a *= factors[m][static_cast<std::size_t>(occ[m])];
        t.amps_[idx] = a;
        for (int m = t.modes_ - 1; m >= 0; --m) {
            if (++occ[static_cast<std::size_t>(m)] <= cutoff) break;
            occ[static_cast<std::size_t>(m)] = 0;
        }
    }
    return t;
}

Complex& FockTensor::at(std::span<const int> occupation) {
    std::size_t idx = 0;
    for (int m = 0; m < modes_; ++m) {
        const int n = occupation[static_cast<std::size_t>(m)];
        if (n < 0 || n > cutoff_) throw Error(ErrorCode::InvalidArguments, "occupation beyond cutoff");
        idx = idx * static_cast<std::size_t>(cutoff_ + 1) + static_cast<std::size_t>(n);
    }
    return amps_[idx];
}

Complex FockTensor::at(std::span<const int> occupation) const {
    return const_cast<FockTensor*>(this)->at(occupation);
}

double FockTensor::norm_squared() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
}

std::vector<double> FockTensor::total_photon_distribution() const {
    std::vector<double> dist(static_cast<std::size_t>(modes_ * cutoff_ + 1), 0.0);
    std::vector<int> occ(static_cast<std::size_t>(modes_), 0);
    for (std::size_t idx = 0; idx < amps_.size(); ++idx) {
        const int total = std::accumulate(occ.begin(), occ.end(), 0);
        dist[static_cast<std::size_t>(total)] += std::norm(amps_[idx]);
        for (int m = modes_ - 1; m >= 0; --m) {
            if (++occ[static_cast<std::size_t>(m)] <= cutoff_) break;
            occ[static_cast<std::size_t>(m)] = 0;
        }
    }
    return dist;
}

void FockTensor::drop_incomplete_sectors() {
    std::vector<int> occ(static_cast<std::size_t>(modes_), 0);
    for (std::size_t idx = 0; idx < amps_.size(); ++idx) {
        if (std::accumulate(occ.begin(), occ.end(), 0) > cutoff_) amps_[idx] = 0.0;
        for (int m = modes_ - 1; m >= 0; --m) {
            if (++occ[static_cast<std::size_t>(m)] <= cutoff_) break;
            occ[static_cast<std::size_t>(m)] = 0;
        }
    }
}

std::vector<Complex> squeezed_vacuum_fock(double r, int cutoff) {
    if (r < 0.0 || cutoff < 0) {
        throw Error(ErrorCode::InvalidArguments, "squeezed vacuum needs r >= 0 and cutoff >= 0");
    }
    const double t = std::tanh(r);
    std::vector<Complex> a(static_cast<std::size_t>(cutoff + 1), 0.0);
    // a_{2k} = t^k sqrt((2k)!) / (2^k k!) / sqrt(cosh r)
    double term = 1.0 / std::sqrt(std::cosh(r));
    for (int k = 0; 2 * k <= cutoff; ++k) {
        if (k > 0) term *= t * std::sqrt((2.0 * k - 1.0) * (2.0 * k)) / (2.0 * k);
        a[static_cast<std::size_t>(2 * k)] = term;
    }
    return a;
}

FockTensor squeezed_input(const SqueezingVector& r, int cutoff) {
    std::vector<std::vector<Complex>> factors;
    for (int i = 0; i < r.size(); ++i) factors.push_back(squeezed_vacuum_fock(r[i], cutoff));
    FockTensor t = FockTensor::product(factors);
    t.drop_incomplete_sectors();
    return t;
}

CMatrix beamsplitter_sector(const std::array<Complex, 4>& g, int s) {
    // a_p^dag -> g00 a_p^dag + g10 a_q^dag, a_q^dag -> g01 a_p^dag + g11 a_q^dag
    CMatrix m = CMatrix::Zero(s + 1, s + 1);
    for (int n1 = 0; n1 <= s; ++n1) {
        const int n2 = s - n1;
        const double in_norm = sqrt_factorial(n1) * sqrt_factorial(n2);
        for (int k = 0; k <= n1; ++k) {
            const Complex left = binom(n1, k) * ipow(g[0], k) * ipow(g[2], n1 - k);
            for (int l = 0; l <= n2; ++l) {
                const Complex right = binom(n2, l) * ipow(g[1], l) * ipow(g[3], n2 - l);
                const int out1 = k + l;
                m(out1, n1) += left * right * sqrt_factorial(out1) * sqrt_factorial(s - out1) / in_norm;
            }
        }
    }
    return m;
}

FockTensor apply_circuit_fock(FockTensor state, const ReckDecomposition& factors) {
    const int modes = state.modes();
    const int cutoff = state.cutoff();
    if (factors.n_modes != modes) {
        throw Error(ErrorCode::InvalidArguments, "decomposition and state disagree on the mode count");
    }
    state.drop_incomplete_sectors();

    std::vector<CMatrix> sectors;
    auto amps = state.amplitudes();
    for (const auto& f : factors.rotations) {
        sectors.clear();
        for (int s = 0; s <= cutoff; ++s) sectors.push_back(beamsplitter_sector(f.block, s));

        const std::size_t sp = stride_of(modes, cutoff, f.mode);
        const std::size_t sq = stride_of(modes, cutoff, f.mode + 1);
        std::vector<int> occ(static_cast<std::size_t>(modes), 0);
        // visit each configuration of the spectator modes once (n_p = n_q = 0)
        for (std::size_t idx = 0; idx < amps.size(); ++idx) {
            const bool base = occ[static_cast<std::size_t>(f.mode)] == 0 && occ[static_cast<std::size_t>(f.mode + 1)] == 0;
            if (base) {
                int spectators = 0;
                for (int m = 0; m < modes; ++m) {
                    if (m != f.mode && m != f.mode + 1) spectators += occ[static_cast<std::size_t>(m)];
                }
                for (int s = 0; s <= cutoff - spectators; ++s) {
                    CVector in(s + 1);
                    for (int n1 = 0; n1 <= s; ++n1) in(n1) = amps[idx + n1 * sp + (s - n1) * sq];
                    const CVector out = sectors[static_cast<std::size_t>(s)] * in;
                    for (int n1 = 0; n1 <= s; ++n1) amps[idx + n1 * sp + (s - n1) * sq] = out(n1);
                }
            }
            for (int m = modes - 1; m >= 0; --m) {
                if (++occ[static_cast<std::size_t>(m)] <= cutoff) break;
                occ[static_cast<std::size_t>(m)] = 0;
            }
        }
    }

    std::vector<int> occ(static_cast<std::size_t>(modes), 0);
    for (std::size_t idx = 0; idx < amps.size(); ++idx) {
        Complex phase = 1.0;
        for (int m = 0; m < modes; ++m) {
            phase *= ipow(factors.phases[static_cast<std::size_t>(m)], occ[static_cast<std::size_t>(m)]);
        }
        amps[idx] *= phase;
        for (int m = modes - 1; m >= 0; --m) {
            if (++occ[static_cast<std::size_t>(m)] <= cutoff) break;
            occ[static_cast<std::size_t>(m)] = 0;
        }
    }
    return state;
}

FockHerald herald_fock(const FockTensor& state, const PhotonPattern& pattern, int undetected, int n_c,
                       double p_floor) {
    if (pattern.modes() != state.modes() || undetected < 0 || undetected >= state.modes()) {
        throw Error(ErrorCode::InvalidArguments, "herald pattern does not fit the state");
    }
    int detected = 0;
    for (int m = 0; m < pattern.modes(); ++m) {
        if (m != undetected) detected += pattern.counts[static_cast<std::size_t>(m)];
    }
    if (n_c < 0 || n_c + detected > state.cutoff()) {
        throw Error(ErrorCode::InvalidArguments, "cutoff too small for an exact herald slice");
    }

    FockHerald out;
    std::vector<int> occ = pattern.counts;
    for (int n = 0; n <= n_c; ++n) {
        occ[static_cast<std::size_t>(undetected)] = n;
        const Complex a = state.at(occ);
        out.coefficients.push_back(a);
        out.probability += std::norm(a);
    }
    if (!(out.probability > p_floor)) {
        throw Error(ErrorCode::HeraldImpossible, "oracle herald probability below the floor");
    }
    const double scale = 1.0 / std::sqrt(out.probability);
    for (auto& c : out.coefficients) c *= scale;
    return out;
}

OracleReport cross_check(int trials, std::uint64_t seed, double tolerance) {
    constexpr int kModes = 3;
    constexpr int kCutoff = 8;
    constexpr int kFockCut = 6;

    OracleReport report;
    report.trials = std::max(trials, 0);
    report.seed = seed;
    report.tolerance = tolerance;

    std::mt19937_64 rng(seed);
    auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

    const FrequencyLattice lattice{kModes, kModes, 1};
    const DetectionLayout layout{1, 3, 1};
    const HafnianTables tables(layout.n_s, layout.num_squeezed, kFockCut);
    const std::vector<int> bins = layout.squeezed_bins();

    for (int trial = 0; trial < report.trials; ++trial) {
        QfpCircuit circuit = QfpCircuit::identity(lattice, 3);
        for (auto& eom : circuit.eoms) {
            eom.modulation_index = 2.0 * unit();
            eom.temporal_phase = kTwoPi * unit();
        }
        for (auto& shaper : circuit.shapers) {
            for (auto& phase : shaper.phases) phase = kTwoPi * unit();
        }
        std::vector<double> r(kModes);
        for (auto& v : r) v = 0.05 + 0.45 * unit();
        const SqueezingVector squeezing(r);

        const UnitaryMatrix u = compose_unitary(circuit);
        const SigmaMatrix sigma =
            sigma_from_h_inverse(h_inverse(gamma_inverse_blocks(unitary_to_symplectic(u), squeezing)));
        const HeraldedState state = heralded_coefficients(sigma.block(bins), squeezing, layout, tables);

        const FockTensor out = apply_circuit_fock(squeezed_input(squeezing, kCutoff), reck_decompose(u.entries));
        const FockHerald ref = herald_fock(out, PhotonPattern{{1, 0, 1}}, 1, kFockCut);

        for (int n = 0; n <= kFockCut; ++n) {
            const double a = std::norm(state.coefficients[static_cast<std::size_t>(n)]);
            const double b = std::norm(ref.coefficients[static_cast<std::size_t>(n)]);
            report.max_coefficient_error = std::max(report.max_coefficient_error, std::abs(a - b));
        }
        report.max_probability_error =
            std::max(report.max_probability_error, std::abs(state.probability - ref.probability));
    }
    report.passed = report.max_coefficient_error <= tolerance && report.max_probability_error <= tolerance;
    return report;
}

}  // namespace qfp::oracle
