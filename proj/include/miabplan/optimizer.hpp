#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "miabplan/network.hpp"

namespace miab {

struct GaConfig {
    int population_size = 50;
    double mutation_rate = 0.20;   // per-gene
    double crossover_rate = 0.80;  // per offspring pair
    int generations = 200;
    int elite_count = 2;
    std::uint64_t seed = 0;
    // bit/s charged per unit of normalized violation; defaults to the
    // scenario's objective upper bound so no infeasible genome can outrank
    // a feasible one.
    std::optional<double> penalty_weight;
    int workers = 1;  // threads for fitness evaluation; does not affect results

    void validate() const;
};

// Mixed encoding: two continuous position genes per MIAB, one categorical
// cell gene per UE (0..M-1 are MIABs, M..M+F-1 are FIABs), one categorical
// donor gene per MIAB.
struct Genome {
    std::vector<double> pos;
    std::vector<int> ue_cell;
    std::vector<int> donor;
};

struct GenerationStat {
    double best_fitness;     // penalized; equals best_objective when feasible
    double best_objective;
    double feasible_fraction;
};

struct SolveResult {
    Assignment best;
    Evaluation evaluation;
    bool found_feasible = false;
    int generations_run = 0;
    long long evaluations = 0;
    std::vector<GenerationStat> trace;  // best_fitness is non-decreasing (elitism)
};

struct BudgetExceeded : std::runtime_error {
    explicit BudgetExceeded(double required_evals);
    double required;
};

// Genetic search over MIAB positions and association genes. Positions are
// repaired into the deployment area before evaluation; the remaining
// constraints act through the fitness penalty. Deterministic for a fixed
// (scenario, config) regardless of worker count: each offspring draws from
// its own (seed, generation, index) substream and results reduce in index
// order. Returns the best feasible assignment found, or the least-violating
// one with found_feasible = false.
SolveResult solve_ga(const Scenario& scenario, const GaConfig& config);

// Exhaustive certification oracle: enumerates every association matrix and
// every deployment-area grid position (grid anchored at the bounding-box
// minimum so refining the step only adds candidates). Ties break toward the
// lexicographically smallest (position index, association vector). Throws
// BudgetExceeded when the enumeration would exceed 1e7 evaluations.
SolveResult solve_oracle(const Scenario& scenario, double grid_step_m);

// Genome -> structurally valid Assignment; positions are projected into
// the deployment area. Idempotent.
Assignment decode_and_repair(const Genome& genome, const Scenario& scenario);

}  // namespace miab
