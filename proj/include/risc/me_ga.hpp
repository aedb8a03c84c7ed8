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
//
// Memory-enhanced genetic optimizer over discrete meta-atom configurations.
// One optimize_step() call solves a single time step: a fresh random
// population is evolved with variance-adaptive mutation/crossover rates,
// partial replacement of the worst individuals by random ones, and a
// store/restore memory of elite configurations driven by the effectiveness
// indicator Theta. The memory pool is the only state carried across time
// steps. With nu_max = beta_max = kappa_max = 0 the optimizer degenerates to
// a plain adaptive GA consuming the identical random stream, which serves as
// the memory-free baseline.

#ifndef RISC_ME_GA_HPP
#define RISC_ME_GA_HPP

#include "risc/qos.hpp"
#include "risc/types.hpp"

#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace risc {

enum class MemoryPolarity {
    paper,    // Theta >= 0 stores, Theta < 0 restores
    inverted, // the two branches swapped
};

struct GaParams {
    int population = 100;     // Gamma
    int max_iterations = 100; // V
    double rho_min = 0.02;    // mutation probability bounds
    double rho_max = 0.06;
    double psi_min = 0.60;    // crossover probability bounds
    double psi_max = 0.95;
    double sigma_max = 1.0;   // population variance normalizer
    int window = 3;           // W, observation window
    double nu_max = 0.2;      // max replaced fraction
    double beta_max = 0.2;    // max store probability
    double kappa_max = 0.2;   // max restore probability
    double delta = 1e-6;      // stagnation threshold
    int memory_capacity = 20;
    MemoryPolarity polarity = MemoryPolarity::paper;
};

// Throws std::invalid_argument when a bound is violated.
void validate_params(const GaParams& params);

struct Population {
    std::vector<RisConfiguration> individuals;
    std::vector<ThroughputReport> fitness; // index-aligned, valid where evaluated
    std::vector<char> evaluated;
    int iteration = 0;
    int num_states = 2;

    Eigen::Index size() const { return static_cast<Eigen::Index>(individuals.size()); }
};

struct MemoryEntry {
    RisConfiguration config;
    int stored_step = 0;
    int stored_iteration = 0;
    double cost_at_store = 0.0;
};

// Bounded archive of elite configurations, FIFO eviction, no exact
// duplicates.
struct MemoryPool {
    std::vector<MemoryEntry> entries;
    int capacity = 20;

    bool contains(const RisConfiguration& s) const;
    // True when inserted (false on duplicate). Evicts the oldest entry first
    // when full.
    bool insert(MemoryEntry entry);
    std::size_t size() const { return entries.size(); }
};

enum class MemoryEvent { none, stored, restored };

const char* to_string(MemoryEvent event);

using Evaluator = std::function<ThroughputReport(const RisConfiguration&)>;

Population init_population(Eigen::Index num_patches, int bits, int population, std::mt19937_64& rng);

// (1/Gamma) sum_g | s_g - s_avg |^2 over genes treated as real numbers.
double population_variance(const Population& pop);

struct AdaptiveRates {
    double rho = 0.0;
    double psi = 0.0;
};

// rho falls and psi rises with the normalized variance min(sigma/sigma_max, 1).
AdaptiveRates adaptive_rates(double sigma_v, const GaParams& params);

// Single-point crossover with probability psi, otherwise the parents pass
// through.
std::pair<RisConfiguration, RisConfiguration> crossover(const RisConfiguration& a, const RisConfiguration& b,
                                                        double psi, std::mt19937_64& rng);

// Each gene independently resampled, with probability rho, uniformly from the
// other num_states - 1 values (a mutated gene always changes).
RisConfiguration mutate(const RisConfiguration& individual, double rho, int num_states, std::mt19937_64& rng);

// Replaces the floor(nu_v * Gamma) worst-fitness individuals with fresh
// uniform-random ones (marked unevaluated); nu_v = nu_max (1 - min(sigma/
// sigma_max, 1)). Returns the number replaced.
int replace_worst(Population& pop, double sigma_v, const GaParams& params, std::mt19937_64& rng);

// Effectiveness indicator over the iteration-local best-cost history
// (history[k] is the best cost observed in iteration k+1):
//     Theta_v = sum_{w=1..min(W, v-1)} (F*(v) - F*(v-w)) / 2^w,
// Theta_1 = 0. Pairs with a non-finite operand contribute nothing.
double effectiveness(const std::vector<double>& history, int v, int window);

struct MemoryDecision {
    MemoryEvent event = MemoryEvent::none;
    double beta = 0.0;
    double kappa = 0.0;
};

struct BestSoFar {
    RisConfiguration config;
    double cost = 0.0;
};

// One store-or-restore decision. The probability scale is |Theta_v| /
// max_{w<=v} |Theta_w| clamped to [0, 1] (zero when the history maximum is
// zero); exactly one uniform draw is consumed regardless of the outcome so
// parameter changes never shift the random stream. A restore re-evaluates
// every pool entry with `eval` and substitutes the population's worst
// individual by the entry that is best under the current context.
MemoryDecision memory_step(Population& pop, double theta_v, const std::vector<double>& theta_history,
                           MemoryPool& memory, const GaParams& params, const std::optional<BestSoFar>& best_so_far,
                           const Evaluator& eval, std::mt19937_64& rng, int step, int iteration);

struct TraceRow {
    int step = 0;
    int iteration = 0;
    double phi_best = 0.0; // best-so-far cost
    double sigma = 0.0;
    double rho = 0.0;
    double psi = 0.0;
    double theta = 0.0;
    double beta = 0.0;
    double kappa = 0.0;
    MemoryEvent event = MemoryEvent::none;
};

struct StepResult {
    RisConfiguration best;                 // best-so-far configuration of the step
    ThroughputReport report;               // its report
    RisConfiguration first_iteration_best; // best individual after the first evaluation
    int iterations = 0;
    int stored_events = 0;
    int restored_events = 0;
    std::vector<TraceRow> trace;
};

// Runs one full optimization step against the evaluation context. The
// population starts random except that, when the pool is non-empty and
// recall is enabled (kappa_max > 0), the pool entry best under the current
// context seeds the tail kappa_max fraction of slots, so a repeated
// scenario resumes near its earlier optimum. Fitness evaluations of a
// population are distributed over `threads`; all random draws stay on the
// single sequential stream, so the trace is bit-identical for any thread
// count. The best-so-far answer is tracked outside the population and never
// lost.
StepResult optimize_step(const EvalContext& ctx, const GaParams& params, MemoryPool& memory, std::uint64_t seed,
                         unsigned threads = 1, int step_index = 1);

// Variant taking an arbitrary fitness functor (used by tests and tools).
StepResult optimize_step(const Evaluator& eval, Eigen::Index num_patches, int bits, const GaParams& params,
                         MemoryPool& memory, std::uint64_t seed, unsigned threads = 1, int step_index = 1);

} // namespace risc

#endif // RISC_ME_GA_HPP
