// SPDX-License-Identifier: Apache-2.0
//
// riscontrol - dynamic control of reconfigurable intelligent surfaces
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "risc/me_ga.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace risc {

namespace {

double uniform01(std::mt19937_64& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

int uniform_state(int num_states, std::mt19937_64& rng) {
    return std::uniform_int_distribution<int>(1, num_states)(rng);
}

RisConfiguration random_configuration(Eigen::Index num_patches, int num_states, std::mt19937_64& rng) {
    RisConfiguration s(num_patches);
    for (Eigen::Index p = 0; p < num_patches; ++p) s[p] = uniform_state(num_states, rng);
    return s;
}

// Index of the best (respectively worst) evaluated slot; ties keep the lowest
// index so the scan order is the tie-break everywhere.
Eigen::Index best_slot(const Population& pop) {
    Eigen::Index best = -1;
    for (Eigen::Index i = 0; i < pop.size(); ++i) {
        if (!pop.evaluated[static_cast<std::size_t>(i)]) continue;
        if (best < 0 || cost_less(pop.fitness[static_cast<std::size_t>(i)], pop.fitness[static_cast<std::size_t>(best)]))
            best = i;
    }
    return best;
}

Eigen::Index worst_slot(const Population& pop) {
    Eigen::Index worst = -1;
    for (Eigen::Index i = 0; i < pop.size(); ++i) {
        if (!pop.evaluated[static_cast<std::size_t>(i)]) continue;
        if (worst < 0 || cost_less(pop.fitness[static_cast<std::size_t>(worst)], pop.fitness[static_cast<std::size_t>(i)]))
            worst = i;
    }
    return worst;
}

// Tournament of size 2 over the evaluated slots listed in `candidates`.
Eigen::Index tournament(const Population& pop, const std::vector<Eigen::Index>& candidates, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
    const Eigen::Index a = candidates[pick(rng)];
    const Eigen::Index b = candidates[pick(rng)];
    return cost_less(pop.fitness[static_cast<std::size_t>(b)], pop.fitness[static_cast<std::size_t>(a)]) ? b : a;
}

// Refills every evaluated slot with tournament offspring; slots holding
// not-yet-evaluated individuals (fresh randoms, restored entries pending
// evaluation never occur here) pass through untouched so they reach the next
// evaluation pass. The best-so-far answer is tracked outside the population,
// so no slot is exempted from variation.
void next_generation(Population& pop, const AdaptiveRates& rates, std::mt19937_64& rng) {
    std::vector<Eigen::Index> slots;
    slots.reserve(static_cast<std::size_t>(pop.size()));
    for (Eigen::Index i = 0; i < pop.size(); ++i)
        if (pop.evaluated[static_cast<std::size_t>(i)]) slots.push_back(i);
    if (slots.size() < 2) return;

    std::vector<RisConfiguration> children(slots.size());
    for (std::size_t k = 0; k < slots.size(); k += 2) {
        const Eigen::Index pa = tournament(pop, slots, rng);
        const Eigen::Index pb = tournament(pop, slots, rng);
        auto pair = crossover(pop.individuals[static_cast<std::size_t>(pa)],
                              pop.individuals[static_cast<std::size_t>(pb)], rates.psi, rng);
        children[k] = mutate(pair.first, rates.rho, pop.num_states, rng);
        if (k + 1 < slots.size()) children[k + 1] = mutate(pair.second, rates.rho, pop.num_states, rng);
    }
    for (std::size_t k = 0; k < slots.size(); ++k) {
        pop.individuals[static_cast<std::size_t>(slots[k])] = std::move(children[k]);
        pop.evaluated[static_cast<std::size_t>(slots[k])] = false;
    }
}

bool stagnated(const std::vector<double>& phi_best, int window, double delta) {
    const int v = static_cast<int>(phi_best.size());
    if (v <= window) return false;
    double mean = 0.0;
    for (int w = 1; w <= window; ++w) {
        const double value = phi_best[static_cast<std::size_t>(v - 1 - w)];
        if (!std::isfinite(value)) return false;
        mean += value;
    }
    mean /= window;
    const double current = phi_best.back();
    return std::isfinite(current) && std::abs(current - mean) < delta;
}

} // namespace

void validate_params(const GaParams& p) {
    auto fail = [](const char* msg) { throw std::invalid_argument(std::string("ga params: ") + msg); };
    if (p.population < 2) fail("population must be at least 2");
    if (p.max_iterations < 1) fail("max iterations must be at least 1");
    if (!(0.0 <= p.rho_min && p.rho_min <= p.rho_max && p.rho_max <= 1.0)) fail("mutation bounds out of order");
    if (!(0.0 <= p.psi_min && p.psi_min <= p.psi_max && p.psi_max <= 1.0)) fail("crossover bounds out of order");
    if (!(p.sigma_max > 0.0)) fail("sigma_max must be positive");
    if (p.window < 1) fail("window must be at least 1");
    if (!(p.nu_max >= 0.0 && p.nu_max <= 1.0)) fail("nu_max outside [0, 1]");
    if (!(p.beta_max >= 0.0 && p.beta_max <= 1.0)) fail("beta_max outside [0, 1]");
    if (!(p.kappa_max >= 0.0 && p.kappa_max <= 1.0)) fail("kappa_max outside [0, 1]");
    if (!(p.delta > 0.0)) fail("delta must be positive");
    if (p.memory_capacity < 0) fail("memory capacity must be non-negative");
}

bool MemoryPool::contains(const RisConfiguration& s) const {
    for (const MemoryEntry& e : entries)
        if (e.config.size() == s.size() && (e.config.array() == s.array()).all()) return true;
    return false;
}

bool MemoryPool::insert(MemoryEntry entry) {
    if (capacity <= 0 || contains(entry.config)) return false;
    if (static_cast<int>(entries.size()) >= capacity) entries.erase(entries.begin());
    entries.push_back(std::move(entry));
    return true;
}

const char* to_string(MemoryEvent event) {
    switch (event) {
        case MemoryEvent::stored: return "stored";
        case MemoryEvent::restored: return "restored";
        default: return "none";
    }
}

Population init_population(Eigen::Index num_patches, int bits, int population, std::mt19937_64& rng) {
    if (bits < 1) throw std::invalid_argument("init: bits must be at least 1");
    if (population < 2) throw std::invalid_argument("init: population must be at least 2");
    Population pop;
    pop.num_states = 1 << bits;
    pop.iteration = 0;
    pop.individuals.reserve(static_cast<std::size_t>(population));
    for (int g = 0; g < population; ++g)
        pop.individuals.push_back(random_configuration(num_patches, pop.num_states, rng));
    pop.fitness.resize(static_cast<std::size_t>(population));
    pop.evaluated.assign(static_cast<std::size_t>(population), 0);
    return pop;
}

double population_variance(const Population& pop) {
    const Eigen::Index gamma = pop.size();
    if (gamma == 0) return 0.0;
    const Eigen::Index genes = pop.individuals.front().size();
    RVector mean = RVector::Zero(genes);
    for (const RisConfiguration& s : pop.individuals) mean += s.cast<double>();
    mean /= static_cast<double>(gamma);
    double var = 0.0;
    for (const RisConfiguration& s : pop.individuals) var += (s.cast<double>() - mean).squaredNorm();
    return var / static_cast<double>(gamma);
}

AdaptiveRates adaptive_rates(double sigma_v, const GaParams& params) {
    const double scale = std::min(sigma_v / params.sigma_max, 1.0);
    // exact endpoint values at the clamp boundaries
    if (scale >= 1.0) return {params.rho_min, params.psi_max};
    if (scale <= 0.0) return {params.rho_max, params.psi_min};
    return {params.rho_max - (params.rho_max - params.rho_min) * scale,
            params.psi_min + (params.psi_max - params.psi_min) * scale};
}

std::pair<RisConfiguration, RisConfiguration> crossover(const RisConfiguration& a, const RisConfiguration& b,
                                                        double psi, std::mt19937_64& rng) {
    if (a.size() != b.size()) throw std::invalid_argument("crossover: parent length mismatch");
    const Eigen::Index genes = a.size();
    std::pair<RisConfiguration, RisConfiguration> out{a, b};
    if (genes < 2) return out;
    if (uniform01(rng) < psi) {
        const Eigen::Index cut = std::uniform_int_distribution<Eigen::Index>(1, genes - 1)(rng);
        out.first.tail(genes - cut) = b.tail(genes - cut);
        out.second.tail(genes - cut) = a.tail(genes - cut);
    }
    return out;
}

RisConfiguration mutate(const RisConfiguration& individual, double rho, int num_states, std::mt19937_64& rng) {
    RisConfiguration out = individual;
    for (Eigen::Index p = 0; p < out.size(); ++p) {
        if (uniform01(rng) < rho) {
            // offset into the other num_states - 1 values: the gene always changes
            const int shift = std::uniform_int_distribution<int>(1, num_states - 1)(rng);
            out[p] = (out[p] - 1 + shift) % num_states + 1;
        }
    }
    return out;
}

int replace_worst(Population& pop, double sigma_v, const GaParams& params, std::mt19937_64& rng) {
    const double nu = params.nu_max * (1.0 - std::min(sigma_v / params.sigma_max, 1.0));
    const int count = static_cast<int>(std::floor(nu * static_cast<double>(pop.size())));
    if (count <= 0) return 0;
    for (Eigen::Index i = 0; i < pop.size(); ++i)
        if (!pop.evaluated[static_cast<std::size_t>(i)])
            throw std::logic_error("replace_worst: population not fully evaluated");

    std::vector<Eigen::Index> order(static_cast<std::size_t>(pop.size()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return cost_less(pop.fitness[static_cast<std::size_t>(b)], pop.fitness[static_cast<std::size_t>(a)]);
    });
    const Eigen::Index genes = pop.individuals.front().size();
    for (int k = 0; k < count; ++k) {
        const auto slot = static_cast<std::size_t>(order[static_cast<std::size_t>(k)]);
        pop.individuals[slot] = random_configuration(genes, pop.num_states, rng);
        pop.evaluated[slot] = 0;
    }
    return count;
}

double effectiveness(const std::vector<double>& history, int v, int window) {
    if (v < 1 || static_cast<std::size_t>(v) > history.size())
        throw std::invalid_argument("effectiveness: iteration outside the history");
    const double current = history[static_cast<std::size_t>(v - 1)];
    double theta = 0.0;
    const int terms = std::min(window, v - 1);
    for (int w = 1; w <= terms; ++w) {
        const double past = history[static_cast<std::size_t>(v - 1 - w)];
        if (!std::isfinite(current) || !std::isfinite(past)) continue;
        theta += (current - past) / std::pow(2.0, w);
    }
    return theta;
}

MemoryDecision memory_step(Population& pop, double theta_v, const std::vector<double>& theta_history,
                           MemoryPool& memory, const GaParams& params, const std::optional<BestSoFar>& best_so_far,
                           const Evaluator& eval, std::mt19937_64& rng, int step, int iteration) {
    double theta_max = 0.0;
    for (double t : theta_history)
        if (std::isfinite(t)) theta_max = std::max(theta_max, std::abs(t));

    const double scale = theta_max > 0.0 ? std::clamp(std::abs(theta_v) / theta_max, 0.0, 1.0) : 0.0;
    const bool learning = params.polarity == MemoryPolarity::paper ? theta_v >= 0.0 : theta_v < 0.0;

    MemoryDecision decision;
    const double u = uniform01(rng); // consumed unconditionally
    if (learning) {
        decision.beta = scale * params.beta_max;
        if (u < decision.beta && best_so_far.has_value()) {
            if (memory.insert({best_so_far->config, step, iteration, best_so_far->cost}))
                decision.event = MemoryEvent::stored;
        }
    } else {
        decision.kappa = scale * params.kappa_max;
        if (u < decision.kappa && !memory.entries.empty()) {
            // Recall by current merit: stale stored fitness is meaningless once
            // the users have moved, so every entry is re-scored under ctx.
            std::size_t pick = 0;
            ThroughputReport pick_report = eval(memory.entries.front().config);
            for (std::size_t e = 1; e < memory.entries.size(); ++e) {
                ThroughputReport rep = eval(memory.entries[e].config);
                if (cost_less(rep, pick_report)) {
                    pick = e;
                    pick_report = rep;
                }
            }
            const Eigen::Index slot = worst_slot(pop);
            if (slot >= 0) {
                pop.individuals[static_cast<std::size_t>(slot)] = memory.entries[pick].config;
                pop.fitness[static_cast<std::size_t>(slot)] = pick_report;
                pop.evaluated[static_cast<std::size_t>(slot)] = 1;
                decision.event = MemoryEvent::restored;
            }
        }
    }
    return decision;
}

StepResult optimize_step(const Evaluator& eval, Eigen::Index num_patches, int bits, const GaParams& params,
                         MemoryPool& memory, std::uint64_t seed, unsigned threads, int step_index) {
    validate_params(params);
    memory.capacity = params.memory_capacity;
    std::mt19937_64 rng(seed);
    Population pop = init_population(num_patches, bits, params.population, rng);

    // Recall at initialization: when the pool carries earlier solutions and
    // recall is enabled, the entry that is best under the current context
    // seeds the tail kappa_max fraction of the otherwise random population.
    // The seeded mass lets the loop hill-climb around the recalled solution
    // instead of stagnating on a lone copy. Consumes no randomness, so
    // disabling the memory operators leaves the stream (and the plain-GA
    // baseline) untouched.
    if (!memory.entries.empty() && params.kappa_max > 0.0 && params.memory_capacity > 0) {
        std::size_t pick = 0;
        ThroughputReport pick_report = eval(memory.entries.front().config);
        for (std::size_t e = 1; e < memory.entries.size(); ++e) {
            ThroughputReport rep = eval(memory.entries[e].config);
            if (cost_less(rep, pick_report)) {
                pick = e;
                pick_report = rep;
            }
        }
        const auto gamma = pop.individuals.size();
        const std::size_t seeded = std::clamp<std::size_t>(
            static_cast<std::size_t>(params.kappa_max * static_cast<double>(gamma)), 1, gamma - 1);
        for (std::size_t k = 0; k < seeded; ++k) {
            const std::size_t slot = gamma - 1 - k;
            pop.individuals[slot] = memory.entries[pick].config;
            pop.fitness[slot] = pick_report;
            pop.evaluated[slot] = 1;
        }
    }

    StepResult result;
    std::optional<BestSoFar> best;
    std::vector<double> phi_star;  // iteration-local best costs
    std::vector<double> phi_best;  // best-so-far costs
    std::vector<double> theta_history;
    result.trace.reserve(static_cast<std::size_t>(params.max_iterations));

    for (int v = 1; v <= params.max_iterations; ++v) {
        pop.iteration = v;

        std::vector<std::size_t> stale;
        for (std::size_t i = 0; i < pop.individuals.size(); ++i)
            if (!pop.evaluated[i]) stale.push_back(i);
        parallel_for_each(stale.size(), threads, [&](std::size_t k) {
            pop.fitness[stale[k]] = eval(pop.individuals[stale[k]]);
        });
        for (std::size_t i : stale) pop.evaluated[i] = 1;

        const Eigen::Index local = best_slot(pop);
        const ThroughputReport& local_report = pop.fitness[static_cast<std::size_t>(local)];
        phi_star.push_back(local_report.cost);
        if (v == 1) result.first_iteration_best = pop.individuals[static_cast<std::size_t>(local)];
        if (!best.has_value() || cost_less(local_report, result.report)) {
            best = BestSoFar{pop.individuals[static_cast<std::size_t>(local)], local_report.cost};
            result.best = pop.individuals[static_cast<std::size_t>(local)];
            result.report = local_report;
        }
        phi_best.push_back(result.report.cost);

        const double sigma_v = population_variance(pop);
        const AdaptiveRates rates = adaptive_rates(sigma_v, params);

        replace_worst(pop, sigma_v, params, rng);

        const double theta_v = effectiveness(phi_star, v, params.window);
        theta_history.push_back(theta_v);
        const MemoryDecision decision =
            memory_step(pop, theta_v, theta_history, memory, params, best, eval, rng, step_index, v);
        if (decision.event == MemoryEvent::stored) ++result.stored_events;
        if (decision.event == MemoryEvent::restored) ++result.restored_events;

        result.trace.push_back({step_index, v, result.report.cost, sigma_v, rates.rho, rates.psi, theta_v,
                                decision.beta, decision.kappa, decision.event});
        result.iterations = v;

        if (v == params.max_iterations || stagnated(phi_best, params.window, params.delta)) break;

        next_generation(pop, rates, rng);
    }
    return result;
}

StepResult optimize_step(const EvalContext& ctx, const GaParams& params, MemoryPool& memory, std::uint64_t seed,
                         unsigned threads, int step_index) {
    const Evaluator eval = [&ctx](const RisConfiguration& s) { return evaluate_cost(s, ctx); };
    return optimize_step(eval, ctx.num_ris, ctx.table->bits, params, memory, seed, threads, step_index);
}

} // namespace risc
