#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"

#include "miabplan/experiments.hpp"
#include "miabplan/network.hpp"
#include "miabplan/optimizer.hpp"

namespace miab {

// Input rejected by the strict loaders; the message names the offending
// field (JSON-pointer style path) or the parse position.
struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Scenario documents. Loading is strict: unknown fields are rejected and
// every Scenario invariant is re-checked.
Scenario scenario_from_json(const nlohmann::json& doc);
nlohmann::json scenario_to_json(const Scenario& scenario);
Scenario load_scenario(const std::string& path);

// Assignment documents; the scenario fixes the expected shapes.
Assignment assignment_from_json(const nlohmann::json& doc, const Scenario& scenario);
nlohmann::json assignment_to_json(const Assignment& assignment);
Assignment load_assignment(const std::string& path, const Scenario& scenario);

// Campaign configuration; every section except `areas` is optional and
// defaults to the reference parameter set.
CampaignConfig campaign_config_from_json(const nlohmann::json& doc);
nlohmann::json campaign_config_to_json(const CampaignConfig& config);
CampaignConfig load_campaign_config(const std::string& path);

nlohmann::json evaluation_to_json(const Scenario& scenario, const Assignment& assignment,
                                  const Evaluation& evaluation);
nlohmann::json solve_result_to_json(const SolveResult& result);

// Reproducibility stamp embedded in every output document: tool version,
// command, seed, and the fully resolved configuration.
nlohmann::json make_manifest(const std::string& command, const nlohmann::json& resolved_config);

// Reads a JSON file; when the document is a previous output carrying a
// manifest, unwraps manifest.config (campaign) or manifest.config.scenario
// (solve/oracle/evaluate) so outputs can be re-run directly.
nlohmann::json load_json_file(const std::string& path);

// JSON Schema for the scenario, assignment, and campaign-config documents.
std::string schema_text();

// Doubles for CSV output: shortest of %.17g, locale-independent.
std::string g17(double value);

// Campaign outputs: records.csv, cdf_V1..V5.csv, campaign.json.
void write_campaign_outputs(const CampaignConfig& config, const CampaignReport& report,
                            const std::string& out_dir);

// Solver trace as CSV (generation, best_fitness, best_objective,
// feasible_fraction).
void write_trace_csv(const SolveResult& result, const std::string& path);

}  // namespace miab
