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

#include "qfp/herald.hpp"

#include <algorithm>
#include <cmath>

namespace qfp {

namespace {

// n! 2^n for the normalization denominators
double factorial_pow2(int n) {
    double v = 1.0;
    for (int i = 1; i <= n; ++i) v *= 2.0 * i;
    return v;
}

}  // namespace

double TargetState::truncation_error() const {
    double norm = 0.0;
    for (const auto& t : coefficients) norm += std::norm(t);
    return 1.0 - norm;
}

std::vector<int> DetectionLayout::squeezed_bins() const {
    std::vector<int> bins;
    const int first = center_index - num_squeezed / 2;
    for (int i = 0; i < num_squeezed; ++i) bins.push_back(first + i);
    return bins;
}

double pattern_probability(const CMatrix& sigma, const SqueezingVector& r, const PhotonPattern& pattern) {
    if (sigma.rows() != pattern.modes() || r.size() != pattern.modes()) {
        throw Error(ErrorCode::InvalidArguments, "pattern, sigma and squeezing must cover the same modes");
    }
    if (pattern.total() % 2 != 0) return 0.0;

    // modes without photons are inert in the moment; drop them before the sum
    std::vector<int> active;
    PhotonPattern reduced;
    double denom = r.cosh_product();
    for (int i = 0; i < pattern.modes(); ++i) {
        const int n = pattern.counts[static_cast<std::size_t>(i)];
        if (n > 0) {
            active.push_back(i);
            reduced.counts.push_back(n);
            denom *= factorial_pow2(n);
        }
    }
    CMatrix block(static_cast<Eigen::Index>(active.size()), static_cast<Eigen::Index>(active.size()));
    for (std::size_t i = 0; i < active.size(); ++i) {
        for (std::size_t j = 0; j < active.size(); ++j) {
            block(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = sigma(active[i], active[j]);
        }
    }
    return std::norm(moment_integral(block, reduced)) / denom;
}

double pattern_probability(const CMatrix& sigma_center, const SqueezingVector& r, int n_k,
                           const HafnianTables& tables) {
    const PhotonPattern pattern = tables.pattern(n_k);
    double denom = r.cosh_product();
    for (int n : pattern.counts) denom *= factorial_pow2(n);
    return std::norm(moment_integral(sigma_center, pattern, tables)) / denom;
}

HeraldedState heralded_coefficients(const CMatrix& sigma_center, const SqueezingVector& r,
                                    const DetectionLayout& layout, const HafnianTables& tables,
                                    double p_floor) {
    if (tables.num_squeezed() != layout.num_squeezed || tables.detected_photons() != layout.n_s) {
        throw Error(ErrorCode::InvalidArguments, "hafnian tables do not match the detection layout");
    }
    const int n_c = tables.cutoff();
    const double cosh_prod = r.cosh_product();

    // the detected bins contribute a fixed part of the denominator
    const double side = factorial_pow2(layout.n_s);
    double fixed = cosh_prod;
    for (int i = 0; i < layout.num_squeezed - 1; ++i) fixed *= side;

    HeraldedState state;
    state.layout = layout;
    state.sigma_center = sigma_center;
    state.cosh_product = cosh_prod;
    state.coefficients.resize(static_cast<std::size_t>(n_c + 1));

    double p = 0.0;
    for (int n_k = 0; n_k <= n_c; ++n_k) {
        const Complex moment = loop_hafnian(sigma_center, tables.for_n_k(n_k));
        const Complex amp = moment / std::sqrt(fixed * factorial_pow2(n_k));
        state.coefficients[static_cast<std::size_t>(n_k)] = amp;
        p += std::norm(amp);
    }
    if (!(p > p_floor)) {
        throw Error(ErrorCode::HeraldImpossible, "herald probability " + std::to_string(p) + " is below the floor");
    }
    const double scale = 1.0 / std::sqrt(p);
    for (auto& c : state.coefficients) c *= scale;
    state.probability = p;
    return state;
}

bool convergence_check(const HeraldedState& state, int n_c_probe, double tol) {
    if (n_c_probe <= state.cutoff()) {
        throw Error(ErrorCode::InvalidArguments, "convergence probe must exceed the current cutoff");
    }
    const HafnianTables probe(state.layout.n_s, state.layout.num_squeezed, n_c_probe);
    const double side = factorial_pow2(state.layout.n_s);
    double fixed = state.cosh_product;
    for (int i = 0; i < state.layout.num_squeezed - 1; ++i) fixed *= side;

    double p = 0.0;
    for (int n_k = 0; n_k <= n_c_probe; ++n_k) {
        const Complex moment = loop_hafnian(state.sigma_center, probe.for_n_k(n_k));
        p += std::norm(moment) / (fixed * factorial_pow2(n_k));
    }
    return std::abs(p - state.probability) < tol;
}

double fidelity(std::span<const Complex> c, std::span<const Complex> tau) {
    if (c.size() != tau.size()) {
        throw Error(ErrorCode::InvalidArguments, "fidelity needs equal-length coefficient vectors");
    }
    Complex overlap = 0.0;
    for (std::size_t n = 0; n < c.size(); ++n) overlap += std::conj(tau[n]) * c[n];
    return std::norm(overlap);
}

double cost(double probability, double fid) {
    const double miss = std::max(1.0 - fid, 1e-16);
    return probability * std::log10(miss);
}

TargetState cat_target(Complex alpha, int n_c) {
    if (n_c < 0) {
        throw Error(ErrorCode::InvalidArguments, "cutoff must be nonnegative");
    }
    const double a2 = std::norm(alpha);
    const double norm = std::exp(-0.5 * a2) / std::sqrt(2.0 * (1.0 + std::exp(-2.0 * a2)));

    TargetState t;
    t.label = "even_cat";
    t.alpha = alpha;
    t.coefficients.assign(static_cast<std::size_t>(n_c + 1), 0.0);
    Complex power = 1.0;  // alpha^n / sqrt(n!)
    for (int n = 0; n <= n_c; ++n) {
        if (n > 0) power *= alpha / std::sqrt(static_cast<double>(n));
        if (n % 2 == 0) t.coefficients[static_cast<std::size_t>(n)] = 2.0 * norm * power;
    }
    return t;
}

std::vector<Complex> quadrature_wavefunction(std::span<const Complex> c, std::span<const double> q) {
    std::vector<Complex> psi(q.size(), 0.0);
    const double pi_quarter = std::pow(kPi, -0.25);
    for (std::size_t k = 0; k < q.size(); ++k) {
        const double x = q[k];
        // normalized Hermite functions by the three-term recurrence
        double prev = 0.0;
        double cur = pi_quarter * std::exp(-0.5 * x * x);
        Complex acc = 0.0;
        for (std::size_t n = 0; n < c.size(); ++n) {
            acc += c[n] * cur;
            const double next = std::sqrt(2.0 / (n + 1.0)) * x * cur - std::sqrt(n / (n + 1.0)) * prev;
            prev = cur;
            cur = next;
        }
        psi[k] = acc;
    }
    return psi;
}

double phase_flatness(std::span<const Complex> c) {
    Complex mean = 0.0;
    std::size_t largest = 0;
    for (std::size_t n = 0; n < c.size(); ++n) {
        if (std::abs(c[n]) > 1e-6) mean += c[n];
        if (std::abs(c[n]) > std::abs(c[largest])) largest = n;
    }
    if (c.empty()) return 0.0;
    const double ref = std::abs(mean) > 1e-12 ? std::arg(mean) : std::arg(c[largest]);

    double worst = 0.0;
    for (const auto& v : c) {
        if (std::abs(v) <= 1e-6) continue;
        const double dev = std::abs(std::arg(v * std::polar(1.0, -ref)));
        worst = std::max(worst, dev);
    }
    return worst;
}

void normalize_global_phase(std::vector<Complex>& c) {
    if (c.empty()) return;
    const auto it = std::max_element(c.begin(), c.end(),
                                     [](const Complex& a, const Complex& b) { return std::abs(a) < std::abs(b); });
    if (std::abs(*it) == 0.0) return;
    const Complex rot = std::conj(*it) / std::abs(*it);
    for (auto& v : c) v *= rot;
    *it = std::abs(*it);
}

}  // namespace qfp
