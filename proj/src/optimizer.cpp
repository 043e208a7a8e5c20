#include "miabplan/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <thread>

#include "miabplan/rng.hpp"

namespace miab {

namespace {

struct ScoredGenome {
    Genome genome;
    Assignment assignment;
    Evaluation evaluation;
    double fitness = 0.0;
};

// Fitness evaluation is pure, so any partition of the population across
// threads produces identical per-index results.
template <typename Fn>
void parallel_for(int count, int workers, Fn&& fn) {
    if (workers <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    const int n_threads = std::min(workers, count);
    std::vector<std::thread> threads;
    threads.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) {
        threads.emplace_back([&, t] {
            for (int i = t; i < count; i += n_threads) {
                fn(i);
            }
        });
    }
    for (auto& th : threads) {
        th.join();
    }
}

Genome random_genome(const Scenario& scenario, Rng& rng) {
    const int miabs = scenario.miab_count;
    const int cells = miabs + static_cast<int>(scenario.fiabs.size());
    Genome g;
    g.pos.resize(2 * miabs);
    for (int m = 0; m < miabs; ++m) {
        const auto [x, y] = scenario.deployment().sample(rng);
        g.pos[2 * m] = x;
        g.pos[2 * m + 1] = y;
    }
    g.ue_cell.resize(scenario.ues.size());
    for (int& cell : g.ue_cell) {
        cell = rng.uniform_int(cells);
    }
    g.donor.resize(miabs);
    for (int& d : g.donor) {
        d = rng.uniform_int(static_cast<int>(scenario.fiabs.size()));
    }
    return g;
}

Genome make_offspring(const std::vector<ScoredGenome>& population,
                      const std::vector<int>& ranking, const Scenario& scenario,
                      const GaConfig& config, double sigma, Rng& rng) {
    const int pop = static_cast<int>(population.size());
    auto tournament = [&]() -> const Genome& {
        const int a = rng.uniform_int(pop);
        const int b = rng.uniform_int(pop);
        // ranking holds each genome's position in the fitness order; lower is better.
        return population[ranking[a] <= ranking[b] ? a : b].genome;
    };

    const Genome& pa = tournament();
    const Genome& pb = tournament();
    Genome child = pa;
    if (rng.uniform() < config.crossover_rate) {
        for (std::size_t i = 0; i < child.pos.size(); ++i) {
            const double w = rng.uniform();
            child.pos[i] = w * pa.pos[i] + (1.0 - w) * pb.pos[i];
        }
        for (std::size_t i = 0; i < child.ue_cell.size(); ++i) {
            child.ue_cell[i] = rng.uniform() < 0.5 ? pa.ue_cell[i] : pb.ue_cell[i];
        }
        for (std::size_t i = 0; i < child.donor.size(); ++i) {
            child.donor[i] = rng.uniform() < 0.5 ? pa.donor[i] : pb.donor[i];
        }
    }

    const int cells = scenario.miab_count + static_cast<int>(scenario.fiabs.size());
    // Position mutation acts on the (x, y) pair: mostly local Gaussian
    // steps, with one in five drawing a fresh uniform position so the
    // search stays ergodic after the blend crossover has contracted the
    // population's spread.
    for (int m = 0; m < scenario.miab_count; ++m) {
        if (rng.uniform() < config.mutation_rate) {
            if (rng.uniform() < 0.2) {
                const auto [x, y] = scenario.deployment().sample(rng);
                child.pos[2 * m] = x;
                child.pos[2 * m + 1] = y;
            } else {
                child.pos[2 * m] += sigma * rng.gauss();
                child.pos[2 * m + 1] += sigma * rng.gauss();
            }
        }
    }
    for (int& cell : child.ue_cell) {
        if (rng.uniform() < config.mutation_rate) {
            cell = rng.uniform_int(cells);
        }
    }
    for (int& d : child.donor) {
        if (rng.uniform() < config.mutation_rate) {
            d = rng.uniform_int(static_cast<int>(scenario.fiabs.size()));
        }
    }
    return child;
}

}  // namespace

void GaConfig::validate() const {
    if (population_size < 2) {
        throw std::invalid_argument("GaConfig: population_size must be >= 2");
    }
    if (mutation_rate < 0.0 || mutation_rate > 1.0 || crossover_rate < 0.0 ||
        crossover_rate > 1.0) {
        throw std::invalid_argument("GaConfig: rates must lie in [0, 1]");
    }
    if (generations < 1) {
        throw std::invalid_argument("GaConfig: generations must be >= 1");
    }
    if (elite_count < 0 || elite_count >= population_size) {
        throw std::invalid_argument("GaConfig: elite_count must be in [0, population_size)");
    }
}

BudgetExceeded::BudgetExceeded(double required_evals)
    : std::runtime_error("oracle enumeration budget exceeded: needs " +
                         std::to_string(required_evals) + " evaluations (limit 1e7)"),
      required(required_evals) {}

Assignment decode_and_repair(const Genome& genome, const Scenario& scenario) {
    Assignment assignment;
    const int miabs = scenario.miab_count;
    assignment.miab_xy.resize(miabs);
    for (int m = 0; m < miabs; ++m) {
        const auto [x, y] = scenario.deployment().project(genome.pos[2 * m], genome.pos[2 * m + 1]);
        assignment.miab_xy[m] = {x, y};
    }
    assignment.ue_cell.resize(genome.ue_cell.size());
    for (std::size_t u = 0; u < genome.ue_cell.size(); ++u) {
        const int gene = genome.ue_cell[u];
        assignment.ue_cell[u] = gene < miabs ? CellRef{CellRef::Kind::miab, gene}
                                             : CellRef{CellRef::Kind::fiab, gene - miabs};
    }
    assignment.backhaul_donor = genome.donor;
    return assignment;
}

SolveResult solve_ga(const Scenario& scenario, const GaConfig& config) {
    scenario.validate();
    config.validate();

    const double penalty =
        config.penalty_weight.value_or(objective_upper_bound(scenario));
    const double sigma = 0.05 * scenario.deployment().bbox_diagonal();
    const int fiab_count = static_cast<int>(scenario.fiabs.size());

    SolveResult result;

    // No free genes: a single forced assignment, evaluated once.
    if (scenario.miab_count == 0 && fiab_count == 1) {
        result.best = all_fiab_assignment(scenario);
        result.evaluation = evaluate(scenario, result.best);
        result.found_feasible = result.evaluation.feasible;
        result.generations_run = 1;
        result.evaluations = 1;
        const double fitness = result.evaluation.objective_bps -
                               penalty * result.evaluation.normalized_violation;
        result.trace.push_back({fitness, result.evaluation.objective_bps,
                                result.evaluation.feasible ? 1.0 : 0.0});
        return result;
    }

    const int pop = config.population_size;
    std::vector<ScoredGenome> population(pop);

    bool have_feasible = false;
    double best_feasible_objective = -1.0;
    bool have_fallback = false;
    double fallback_violation = 0.0;
    double fallback_objective = -1.0;

    auto score = [&](ScoredGenome& sg) {
        sg.assignment = decode_and_repair(sg.genome, scenario);
        // Lamarckian write-back keeps mutation steps anchored to the
        // repaired position instead of an ever-drifting raw gene.
        for (int m = 0; m < scenario.miab_count; ++m) {
            sg.genome.pos[2 * m] = sg.assignment.miab_xy[m][0];
            sg.genome.pos[2 * m + 1] = sg.assignment.miab_xy[m][1];
        }
        sg.evaluation = evaluate(scenario, sg.assignment);
        sg.fitness = sg.evaluation.objective_bps - penalty * sg.evaluation.normalized_violation;
    };

    auto absorb_best = [&](const ScoredGenome& sg) {
        if (sg.evaluation.feasible) {
            if (!have_feasible || sg.evaluation.objective_bps > best_feasible_objective) {
                have_feasible = true;
                best_feasible_objective = sg.evaluation.objective_bps;
                result.best = sg.assignment;
                result.evaluation = sg.evaluation;
            }
        } else if (!have_feasible) {
            const double v = sg.evaluation.normalized_violation;
            if (!have_fallback || v < fallback_violation ||
                (v == fallback_violation && sg.evaluation.objective_bps > fallback_objective)) {
                have_fallback = true;
                fallback_violation = v;
                fallback_objective = sg.evaluation.objective_bps;
                result.best = sg.assignment;
                result.evaluation = sg.evaluation;
            }
        }
    };

    auto record_generation = [&](const std::vector<int>& order) {
        const ScoredGenome& best = population[order[0]];
        int feasible = 0;
        for (const ScoredGenome& sg : population) {
            feasible += sg.evaluation.feasible ? 1 : 0;
        }
        result.trace.push_back({best.fitness, best.evaluation.objective_bps,
                                static_cast<double>(feasible) / pop});
    };

    // Fitness order: indices sorted best-first, ties to the lower index.
    auto fitness_order = [&]() {
        std::vector<int> order(pop);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (population[a].fitness != population[b].fitness) {
                return population[a].fitness > population[b].fitness;
            }
            return a < b;
        });
        return order;
    };

    for (int i = 0; i < pop; ++i) {
        Rng rng = Rng::substream(config.seed, 0, 0, static_cast<std::uint64_t>(i));
        population[i].genome = random_genome(scenario, rng);
    }
    parallel_for(pop, config.workers, [&](int i) { score(population[i]); });
    result.evaluations += pop;
    for (const ScoredGenome& sg : population) {
        absorb_best(sg);
    }
    std::vector<int> order = fitness_order();
    record_generation(order);

    for (int gen = 1; gen <= config.generations; ++gen) {
        // ranking[i] = position of genome i in the fitness order.
        std::vector<int> ranking(pop);
        for (int r = 0; r < pop; ++r) {
            ranking[order[r]] = r;
        }

        std::vector<ScoredGenome> next(pop);
        for (int e = 0; e < config.elite_count; ++e) {
            next[e] = population[order[e]];
        }
        parallel_for(pop - config.elite_count, config.workers, [&](int j) {
            const int slot = config.elite_count + j;
            Rng rng = Rng::substream(config.seed, static_cast<std::uint64_t>(gen),
                                     static_cast<std::uint64_t>(slot), 1);
            next[slot].genome = make_offspring(population, ranking, scenario, config, sigma, rng);
            score(next[slot]);
        });
        result.evaluations += pop - config.elite_count;

        population = std::move(next);
        for (int i = config.elite_count; i < pop; ++i) {
            absorb_best(population[i]);
        }
        order = fitness_order();
        record_generation(order);
    }

    result.generations_run = config.generations;
    result.found_feasible = have_feasible;
    return result;
}

SolveResult solve_oracle(const Scenario& scenario, double grid_step_m) {
    scenario.validate();
    if (!(grid_step_m > 0.0)) {
        throw std::invalid_argument("solve_oracle: grid step must be positive");
    }

    const int miabs = scenario.miab_count;
    const int fiab_count = static_cast<int>(scenario.fiabs.size());
    const int cells = miabs + fiab_count;
    const int ue_count = static_cast<int>(scenario.ues.size());

    // Candidate positions: deployment-area grid anchored at the bounding
    // box minimum, scan order x-major.
    std::vector<std::array<double, 2>> points;
    if (miabs > 0) {
        const auto [xmin, ymin, xmax, ymax] = scenario.deployment().bounding_box();
        for (double x = xmin; x <= xmax + 1e-9; x += grid_step_m) {
            for (double y = ymin; y <= ymax + 1e-9; y += grid_step_m) {
                if (scenario.deployment().contains(x, y)) {
                    points.push_back({x, y});
                }
            }
        }
        if (points.empty()) {
            // Grid coarser than the region: fall back to its vertex mean.
            double cx = 0.0, cy = 0.0;
            const auto& verts = scenario.deployment().vertices();
            for (const auto& [vx, vy] : verts) {
                cx += vx / verts.size();
                cy += vy / verts.size();
            }
            points.push_back({cx, cy});
        }
    }

    const double position_combos = miabs > 0 ? std::pow(static_cast<double>(points.size()), miabs) : 1.0;
    const double required = position_combos * std::pow(static_cast<double>(cells), ue_count) *
                            std::pow(static_cast<double>(fiab_count), miabs);
    if (!(required <= 1e7)) {
        throw BudgetExceeded(required);
    }

    SolveResult result;
    bool have_any = false;
    bool have_feasible = false;
    double best_objective = 0.0;
    double best_violation = 0.0;

    Assignment assignment;
    assignment.miab_xy.assign(miabs, {0.0, 0.0});
    assignment.ue_cell.assign(ue_count, CellRef{CellRef::Kind::fiab, 0});
    assignment.backhaul_donor.assign(miabs, 0);

    std::vector<std::size_t> pos_idx(miabs, 0);
    std::vector<int> cell_idx(ue_count, 0);
    std::vector<int> donor_idx(miabs, 0);

    auto consider = [&]() {
        const Evaluation eval = evaluate(scenario, assignment);
        result.evaluations += 1;
        bool better = false;
        if (eval.feasible) {
            better = !have_feasible || eval.objective_bps > best_objective;
        } else if (!have_feasible) {
            better = !have_any || eval.normalized_violation < best_violation ||
                     (eval.normalized_violation == best_violation &&
                      eval.objective_bps > best_objective);
        }
        if (better) {
            have_any = true;
            have_feasible = have_feasible || eval.feasible;
            best_objective = eval.objective_bps;
            best_violation = eval.normalized_violation;
            result.best = assignment;
            result.evaluation = eval;
        }
    };

    // Odometer enumeration, last digit fastest, so candidates appear in
    // lexicographic (position index, association vector) order and strict
    // improvement keeps the smallest optimum.
    auto enumerate_associations = [&](auto&& self, int digit) -> void {
        if (digit == ue_count + miabs) {
            consider();
            return;
        }
        if (digit < ue_count) {
            for (int c = 0; c < cells; ++c) {
                cell_idx[digit] = c;
                assignment.ue_cell[digit] = c < miabs ? CellRef{CellRef::Kind::miab, c}
                                                      : CellRef{CellRef::Kind::fiab, c - miabs};
                self(self, digit + 1);
            }
        } else {
            const int m = digit - ue_count;
            for (int k = 0; k < fiab_count; ++k) {
                donor_idx[m] = k;
                assignment.backhaul_donor[m] = k;
                self(self, digit + 1);
            }
        }
    };

    auto enumerate_positions = [&](auto&& self, int m) -> void {
        if (m == miabs) {
            enumerate_associations(enumerate_associations, 0);
            return;
        }
        for (std::size_t p = 0; p < points.size(); ++p) {
            pos_idx[m] = p;
            assignment.miab_xy[m] = points[p];
            self(self, m + 1);
        }
    };

    enumerate_positions(enumerate_positions, 0);

    result.found_feasible = have_feasible;
    result.generations_run = 0;
    return result;
}

}  // namespace miab
