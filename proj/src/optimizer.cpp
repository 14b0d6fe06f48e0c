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

#include "qfp/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <thread>

namespace qfp {

std::size_t DesignSpace::dimension() const {
    return static_cast<std::size_t>(2 * num_eoms() + num_shapers() * lattice.passband + num_squeezed);
}

std::vector<ParameterBound> DesignSpace::bounds() const {
    std::vector<ParameterBound> b;
    b.reserve(dimension());
    for (int e = 0; e < num_eoms(); ++e) {
        b.push_back({0.0, m_max, false});
        b.push_back({0.0, kTwoPi, true});
    }
    for (int s = 0; s < num_shapers() * lattice.passband; ++s) b.push_back({0.0, kTwoPi, true});
    for (int i = 0; i < num_squeezed; ++i) b.push_back({0.0, r_max, false});
    return b;
}

DetectionLayout DesignSpace::layout() const { return DetectionLayout{n_s, num_squeezed, lattice.center_index}; }

void DesignSpace::validate() const {
    auto fail = [](const std::string& msg) { throw Error(ErrorCode::Config, msg); };
    if (q < 1 || q % 2 == 0) fail("Q must be odd and positive");
    if (num_squeezed < 1 || num_squeezed % 2 == 0) fail("N_s must be odd and positive");
    if (n_s < 0) fail("n_s must be nonnegative");
    if (n_c < 0) fail("n_c must be nonnegative");
    if (!(m_max >= 0.0)) fail("m_max must be nonnegative");
    if (!(r_max >= 0.0)) fail("r_max must be nonnegative");
    try {
        lattice.validate();
    } catch (const Error& e) {
        fail(e.what());
    }
    const int first = lattice.center_index - num_squeezed / 2;
    if (first < lattice.passband_start() || first + num_squeezed > lattice.passband_end()) {
        fail("the squeezed bins must lie inside the passband");
    }
}

DecodedDesign decode_params(std::span<const double> params, const DesignSpace& space) {
    if (params.size() != space.dimension()) {
        throw Error(ErrorCode::InvalidArguments, "parameter vector has length " + std::to_string(params.size()) +
                                                     ", expected " + std::to_string(space.dimension()));
    }
    const auto bounds = space.bounds();
    DecodedDesign out;
    std::vector<double> v(params.begin(), params.end());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double c = std::clamp(v[i], bounds[i].lo, bounds[i].hi);
        if (c != v[i] || std::isnan(v[i])) {
            out.clamped = true;
            v[i] = std::isnan(v[i]) ? bounds[i].lo : c;
        }
    }

    out.circuit = QfpCircuit::identity(space.lattice, space.q);
    std::size_t k = 0;
    for (auto& eom : out.circuit.eoms) {
        eom.modulation_index = v[k++];
        eom.temporal_phase = v[k++];
    }
    for (auto& shaper : out.circuit.shapers) {
        for (auto& phase : shaper.phases) phase = v[k++];
    }
    out.squeezing = SqueezingVector::centered(space.lattice.n_modes, space.lattice.center_index,
                                              std::span<const double>(v).subspan(k), space.r_max);
    return out;
}

std::vector<double> encode_params(const QfpCircuit& circuit, const SqueezingVector& squeezing,
                                  const DesignSpace& space) {
    if (static_cast<int>(circuit.eoms.size()) != space.num_eoms() ||
        static_cast<int>(circuit.shapers.size()) != space.num_shapers() ||
        squeezing.size() != space.lattice.n_modes) {
        throw Error(ErrorCode::InvalidArguments, "circuit does not match the design space");
    }
    std::vector<double> v;
    v.reserve(space.dimension());
    for (const auto& eom : circuit.eoms) {
        v.push_back(eom.modulation_index);
        v.push_back(eom.temporal_phase);
    }
    for (const auto& shaper : circuit.shapers) {
        if (static_cast<int>(shaper.phases.size()) != space.lattice.passband) {
            throw Error(ErrorCode::InvalidArguments, "shaper length does not match the passband");
        }
        v.insert(v.end(), shaper.phases.begin(), shaper.phases.end());
    }
    for (int bin : space.layout().squeezed_bins()) v.push_back(squeezing[bin]);
    return v;
}

Evaluation evaluate_design(std::span<const double> params, const DesignSpace& space, const TargetState& target,
                           const HafnianTables& tables) {
    if (target.cutoff() != space.n_c) {
        throw Error(ErrorCode::InvalidArguments, "target cutoff does not match the design space");
    }
    const DecodedDesign design = decode_params(params, space);
    const DetectionLayout layout = space.layout();
    const std::vector<int> bins = layout.squeezed_bins();

    Evaluation ev;
    const UnitaryMatrix u = compose_unitary(design.circuit, bins);
    ev.leakage = u.leakage;
    if (!(u.leakage <= space.tol.unitarity)) {
        ev.invalid_reason = "leakage";
        return ev;
    }
    const SymplecticOrthogonal s = unitary_to_symplectic(u, space.tol.unitarity);
    const GammaBlocks blocks = gamma_inverse_blocks(s, design.squeezing);
    const SigmaMatrix sigma = sigma_from_h_inverse(h_inverse(blocks));

    try {
        HeraldedState state =
            heralded_coefficients(sigma.block(bins), design.squeezing, layout, tables, space.tol.p_floor);
        state.fidelity = fidelity(state.coefficients, target.coefficients);
        state.cost = cost(state.probability, state.fidelity);
        ev.valid = true;
        ev.probability = state.probability;
        ev.fidelity = state.fidelity;
        ev.cost = state.cost;
        ev.state = std::move(state);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::HeraldImpossible) throw;
        ev.invalid_reason = "herald-impossible";
    }
    return ev;
}

void PsoConfig::validate() const {
    if (swarm_size <= 0) throw Error(ErrorCode::Config, "swarm size must be positive");
    if (iterations <= 0) throw Error(ErrorCode::Config, "iteration count must be positive");
    if (threads <= 0) throw Error(ErrorCode::Config, "thread count must be positive");
    if (static_cast<int>(initial_positions.size()) > swarm_size) {
        throw Error(ErrorCode::Config, "more initial positions than particles");
    }
}

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// uniform in [0, 1); spelled out so streams are identical across standard libraries
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct Particle {
    std::vector<double> x;
    std::vector<double> v;
    std::vector<double> best_x;
    double best_cost = kInvalidCost;
    std::mt19937_64 rng;
    Evaluation last;
};

void evaluate_swarm(std::vector<Particle>& swarm, const DesignSpace& space, const TargetState& target,
                    const HafnianTables& tables, int threads) {
    const std::size_t n = swarm.size();
    auto work = [&](std::size_t first, std::size_t stride) {
        for (std::size_t i = first; i < n; i += stride) {
            swarm[i].last = evaluate_design(swarm[i].x, space, target, tables);
        }
    };
    const auto workers = static_cast<std::size_t>(std::min<int>(threads, static_cast<int>(n)));
    if (workers <= 1) {
        work(0, 1);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                work(w, workers);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

void keep_in_bounds(double& x, double& v, const ParameterBound& b) {
    const double width = b.hi - b.lo;
    if (width <= 0.0) {
        x = b.lo;
        v = 0.0;
        return;
    }
    if (b.periodic) {
        x = b.lo + std::fmod(std::fmod(x - b.lo, width) + width, width);
        return;
    }
    if (x < b.lo) {
        x = b.lo + (b.lo - x);
        v = -v;
    } else if (x > b.hi) {
        x = b.hi - (x - b.hi);
        v = -v;
    }
    x = std::clamp(x, b.lo, b.hi);
}

}  // namespace

DesignResult pso_run(const DesignSpace& space, const TargetState& target, const PsoConfig& config,
                     const HafnianTables* tables) {
    space.validate();
    config.validate();
    std::unique_ptr<HafnianTables> owned;
    if (tables == nullptr) {
        owned = std::make_unique<HafnianTables>(space.n_s, space.num_squeezed, space.n_c);
        tables = owned.get();
    }

    const auto bounds = space.bounds();
    const std::size_t dim = bounds.size();
    std::vector<Particle> swarm(static_cast<std::size_t>(config.swarm_size));

    std::uint64_t seeder = config.seed;
    for (std::size_t i = 0; i < swarm.size(); ++i) {
        Particle& p = swarm[i];
        p.rng.seed(splitmix64(seeder));
        p.x.resize(dim);
        p.v.resize(dim);
        const bool seeded = i < config.initial_positions.size();
        if (seeded && config.initial_positions[i].size() != dim) {
            throw Error(ErrorCode::Config, "initial position has the wrong dimension");
        }
        for (std::size_t d = 0; d < dim; ++d) {
            const double width = bounds[d].hi - bounds[d].lo;
            const double u = unit(p.rng);
            p.x[d] = seeded ? std::clamp(config.initial_positions[i][d], bounds[d].lo, bounds[d].hi)
                            : bounds[d].lo + u * width;
            p.v[d] = (unit(p.rng) - 0.5) * width * 0.5;
        }
    }

    DesignResult result;
    result.seed = config.seed;
    std::optional<std::size_t> best;  // particle index of the global best personal position
    std::vector<double> global_x;
    double global_cost = kInvalidCost;

    auto absorb = [&](bool first) {
        evaluate_swarm(swarm, space, target, *tables, config.threads);
        result.evaluations += swarm.size();
        for (std::size_t i = 0; i < swarm.size(); ++i) {
            Particle& p = swarm[i];
            const Evaluation& ev = p.last;
            if (first || ev.cost < p.best_cost) {
                p.best_cost = ev.cost;
                p.best_x = p.x;
            }
            if (!best || ev.cost < global_cost) {
                best = i;
                global_cost = ev.cost;
                global_x = p.x;
                result.best_by_cost = DesignRecord{p.x, ev};
            }
            if (ev.valid && ev.fidelity > kCorrectedFidelity &&
                (!result.best_by_fidelity || ev.cost < result.best_by_fidelity->evaluation.cost)) {
                result.best_by_fidelity = DesignRecord{p.x, ev};
            }
        }
        result.trace.push_back(global_cost);
    };

    absorb(true);
    for (int it = 0; it < config.iterations; ++it) {
        for (auto& p : swarm) {
            for (std::size_t d = 0; d < dim; ++d) {
                const double r1 = unit(p.rng);
                const double r2 = unit(p.rng);
                double v = config.inertia * p.v[d] + config.cognitive * r1 * (p.best_x[d] - p.x[d]) +
                           config.social * r2 * (global_x[d] - p.x[d]);
                const double vmax = bounds[d].hi - bounds[d].lo;
                v = std::clamp(v, -vmax, vmax);
                double x = p.x[d] + v;
                keep_in_bounds(x, v, bounds[d]);
                p.x[d] = x;
                p.v[d] = v;
            }
        }
        absorb(false);
    }
    return result;
}

}  // namespace qfp
