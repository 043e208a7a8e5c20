// miabplan: positions mobile IAB nodes inside polygonal deployment areas to
// maximise the downlink capacity offered to a special team of UEs, subject
// to backhaul and RSRP constraints. Subcommands: evaluate, solve, oracle,
// campaign, schema.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"

#include "miabplan/experiments.hpp"
#include "miabplan/network.hpp"
#include "miabplan/optimizer.hpp"
#include "miabplan/scenario_io.hpp"
#include "miabplan/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitSearchFailed = 4;
constexpr int kExitBudget = 5;

std::optional<std::uint64_t> env_seed() {
    const char* value = std::getenv("MIAB_PLAN_SEED");
    if (value == nullptr || *value == '\0') {
        return std::nullopt;
    }
    return std::strtoull(value, nullptr, 10);
}

void emit(const nlohmann::json& doc, const std::string& out_path) {
    const std::string text = doc.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream stream(out_path, std::ios::binary);
    if (!stream) {
        throw std::runtime_error("cannot open for writing: " + out_path);
    }
    stream << text;
}

struct SolveOptions {
    std::string scenario_path;
    std::string out_path;
    std::string trace_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> generations;
    std::optional<int> population;
    std::optional<double> mutation_rate;
    std::optional<double> crossover_rate;
    std::optional<int> elite_count;
    int workers = 0;
};

int run_solve(const SolveOptions& opt) {
    const miab::Scenario scenario = miab::load_scenario(opt.scenario_path);

    miab::GaConfig ga;
    ga.seed = opt.seed.value_or(env_seed().value_or(0));
    if (opt.generations) ga.generations = *opt.generations;
    if (opt.population) ga.population_size = *opt.population;
    if (opt.mutation_rate) ga.mutation_rate = *opt.mutation_rate;
    if (opt.crossover_rate) ga.crossover_rate = *opt.crossover_rate;
    if (opt.elite_count) ga.elite_count = *opt.elite_count;
    ga.workers = opt.workers > 0 ? opt.workers
                                 : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    ga.validate();

    const miab::SolveResult result = miab::solve_ga(scenario, ga);

    nlohmann::json config = {{"scenario", miab::scenario_to_json(scenario)},
                             {"ga", nlohmann::json{{"population_size", ga.population_size},
                                                   {"mutation_rate", ga.mutation_rate},
                                                   {"crossover_rate", ga.crossover_rate},
                                                   {"generations", ga.generations},
                                                   {"elite_count", ga.elite_count}}},
                             {"seed", ga.seed}};
    nlohmann::json doc = {{"manifest", miab::make_manifest("solve", config)},
                          {"assignment", miab::assignment_to_json(result.best)},
                          {"evaluation", miab::evaluation_to_json(scenario, result.best,
                                                                  result.evaluation)},
                          {"solver", miab::solve_result_to_json(result)}};
    emit(doc, opt.out_path);
    if (!opt.trace_path.empty()) {
        miab::write_trace_csv(result, opt.trace_path);
    }
    if (!result.found_feasible) {
        std::cerr << "no feasible assignment found; least-violating one reported "
                  << "(normalized violation "
                  << result.evaluation.normalized_violation << ")\n";
        return kExitSearchFailed;
    }
    return kExitOk;
}

int run_oracle(const std::string& scenario_path, double grid_step, const std::string& out_path) {
    const miab::Scenario scenario = miab::load_scenario(scenario_path);
    const miab::SolveResult result = miab::solve_oracle(scenario, grid_step);

    nlohmann::json config = {{"scenario", miab::scenario_to_json(scenario)},
                             {"grid_step_m", grid_step}};
    nlohmann::json doc = {{"manifest", miab::make_manifest("oracle", config)},
                          {"assignment", miab::assignment_to_json(result.best)},
                          {"evaluation", miab::evaluation_to_json(scenario, result.best,
                                                                  result.evaluation)},
                          {"solver", miab::solve_result_to_json(result)},
                          {"tie_break", "lexicographically smallest (position index, association vector)"}};
    emit(doc, out_path);
    return result.found_feasible ? kExitOk : kExitSearchFailed;
}

int run_evaluate(const std::string& scenario_path, const std::string& assignment_path,
                 const std::string& out_path) {
    const miab::Scenario scenario = miab::load_scenario(scenario_path);
    const miab::Assignment assignment = miab::load_assignment(assignment_path, scenario);
    const miab::Evaluation evaluation = miab::evaluate(scenario, assignment);

    nlohmann::json config = {{"scenario", miab::scenario_to_json(scenario)},
                             {"assignment", miab::assignment_to_json(assignment)}};
    nlohmann::json doc = {{"manifest", miab::make_manifest("evaluate", config)},
                          {"evaluation", miab::evaluation_to_json(scenario, assignment, evaluation)}};
    emit(doc, out_path);
    return evaluation.feasible ? kExitOk : kExitInfeasible;
}

int run_campaign(const std::string& config_path, const std::string& out_dir,
                 std::optional<std::uint64_t> seed, int workers,
                 std::optional<bool> v1_with_miab) {
    miab::CampaignConfig config = miab::load_campaign_config(config_path);
    if (const auto fallback = env_seed(); fallback && !seed) {
        seed = *fallback;
    }
    if (seed) {
        config.seed = *seed;
    }
    if (workers > 0) {
        config.workers = workers;
    }
    if (v1_with_miab) {
        config.v1_with_miab = *v1_with_miab;
    }
    config.validate();

    const miab::CampaignReport report = miab::run_campaign(config);
    miab::write_campaign_outputs(config, report, out_dir);

    int failed = 0;
    for (const auto& rec : report.records) {
        failed += rec.status == "ok" ? 0 : 1;
    }
    std::cerr << report.records.size() << " records written to " << out_dir << " (" << failed
              << " failed)\n";
    const bool all_failed = !report.records.empty() &&
                            failed == static_cast<int>(report.records.size());
    return all_failed ? kExitSearchFailed : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mobile IAB node placement planner"};
    app.set_version_flag("--version", miab::kToolVersion);
    app.require_subcommand(1);

    SolveOptions solve_opt;
    std::uint64_t seed_arg = 0;
    bool seed_set = false;

    auto* evaluate_cmd = app.add_subcommand("evaluate", "evaluate an assignment on a scenario");
    std::string eval_scenario, eval_assignment, eval_out;
    evaluate_cmd->add_option("scenario", eval_scenario, "scenario JSON file")->required();
    evaluate_cmd->add_option("assignment", eval_assignment, "assignment JSON file")->required();
    evaluate_cmd->add_option("--out", eval_out, "write the evaluation JSON here instead of stdout");

    auto* solve_cmd = app.add_subcommand("solve", "genetic-algorithm search for MIAB placement");
    solve_cmd->add_option("scenario", solve_opt.scenario_path, "scenario JSON file")->required();
    solve_cmd->add_option("--seed", seed_arg, "solver seed (also MIAB_PLAN_SEED)")
        ->each([&](const std::string&) { seed_set = true; });
    int gens = 0, pop = 0, elite = -1;
    double mut = -1.0, cx = -1.0;
    solve_cmd->add_option("--generations", gens, "GA generations");
    solve_cmd->add_option("--population", pop, "GA population size");
    solve_cmd->add_option("--mutation-rate", mut, "per-gene mutation probability");
    solve_cmd->add_option("--crossover-rate", cx, "crossover probability");
    solve_cmd->add_option("--elite", elite, "elite survivors per generation");
    solve_cmd->add_option("--workers", solve_opt.workers, "fitness evaluation threads");
    solve_cmd->add_option("--trace", solve_opt.trace_path, "write per-generation trace CSV here");
    solve_cmd->add_option("--out", solve_opt.out_path, "write the solution JSON here instead of stdout");

    auto* oracle_cmd = app.add_subcommand("oracle", "exhaustive grid-and-enumeration optimum");
    std::string oracle_scenario, oracle_out;
    double grid_step = 20.0;
    oracle_cmd->add_option("scenario", oracle_scenario, "scenario JSON file")->required();
    oracle_cmd->add_option("--grid-step", grid_step, "position grid step in meters");
    oracle_cmd->add_option("--out", oracle_out, "write the solution JSON here instead of stdout");

    auto* campaign_cmd = app.add_subcommand("campaign", "run the V0-V5 variant campaign");
    std::string campaign_config, campaign_out_dir = "campaign_out";
    std::uint64_t campaign_seed = 0;
    bool campaign_seed_set = false;
    int campaign_workers = 0;
    bool v1_miab_flag = false, v1_nomiab_flag = false;
    campaign_cmd->add_option("config", campaign_config, "campaign config JSON file")->required();
    campaign_cmd->add_option("--out-dir", campaign_out_dir, "output directory");
    campaign_cmd->add_option("--seed", campaign_seed, "master seed override")
        ->each([&](const std::string&) { campaign_seed_set = true; });
    campaign_cmd->add_option("--workers", campaign_workers, "concurrent runs");
    campaign_cmd->add_flag("--v1-with-miab", v1_miab_flag, "V1 deploys a MIAB (PF) instead of the MIAB-free obstacle baseline");
    campaign_cmd->add_flag("--v1-without-miab", v1_nomiab_flag, "force the MIAB-free V1 baseline");

    auto* schema_cmd = app.add_subcommand("schema", "print the JSON schema for input documents");

    CLI11_PARSE(app, argc, argv);

    try {
        if (evaluate_cmd->parsed()) {
            return run_evaluate(eval_scenario, eval_assignment, eval_out);
        }
        if (solve_cmd->parsed()) {
            if (seed_set) solve_opt.seed = seed_arg;
            if (gens > 0) solve_opt.generations = gens;
            if (pop > 0) solve_opt.population = pop;
            if (mut >= 0.0) solve_opt.mutation_rate = mut;
            if (cx >= 0.0) solve_opt.crossover_rate = cx;
            if (elite >= 0) solve_opt.elite_count = elite;
            return run_solve(solve_opt);
        }
        if (oracle_cmd->parsed()) {
            return run_oracle(oracle_scenario, grid_step, oracle_out);
        }
        if (campaign_cmd->parsed()) {
            std::optional<bool> v1_mode;
            if (v1_miab_flag) v1_mode = true;
            if (v1_nomiab_flag) v1_mode = false;
            return run_campaign(campaign_config, campaign_out_dir,
                                campaign_seed_set ? std::optional<std::uint64_t>(campaign_seed)
                                                  : std::nullopt,
                                campaign_workers, v1_mode);
        }
        if (schema_cmd->parsed()) {
            std::cout << miab::schema_text();
            return kExitOk;
        }
    } catch (const miab::SchemaError& ex) {
        std::cerr << "input error: " << ex.what() << "\n";
        return kExitInput;
    } catch (const miab::BudgetExceeded& ex) {
        std::cerr << ex.what() << "\n";
        return kExitBudget;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "input error: " << ex.what() << "\n";
        return kExitInput;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return kExitOk;
}
