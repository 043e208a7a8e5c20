#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "miabplan/network.hpp"
#include "miabplan/optimizer.hpp"
#include "miabplan/rng.hpp"

namespace miab {

// Campaign variants. V0 is the baseline: every UE on the FIAB, no MIAB, no
// obstacles. V1 adds the obstacles to V0 (a MIAB-assisted V1 is available
// behind a flag). V2-V5 deploy a MIAB: PF scheduling without/with obstacles,
// then RR without/with obstacles.
enum class VariantId { v0, v1, v2, v3, v4, v5 };

inline constexpr std::array<VariantId, 6> kAllVariants = {VariantId::v0, VariantId::v1,
                                                          VariantId::v2, VariantId::v3,
                                                          VariantId::v4, VariantId::v5};

struct VariantTraits {
    bool has_miab = false;
    bool has_obstacles = false;
    std::optional<SchedulerKind> scheduler;  // empty when no MIAB (PF and RR coincide)
};

VariantTraits variant_traits(VariantId variant, bool v1_with_miab);
const char* variant_name(VariantId variant);

struct ObstacleSpec {
    double footprint_min_m = 10.0;
    double footprint_max_m = 40.0;
    double height_min_m = 6.0;
    double height_max_m = 15.0;
};

struct CampaignConfig {
    std::vector<NamedArea> areas;
    int scenarios_per_area = 5;
    int ues_total = 5;
    int special_team_size = 2;
    int obstacles_per_scenario = 1;
    std::uint64_t seed = 0;
    bool v1_with_miab = false;
    ObstacleSpec obstacle;
    GaConfig ga;
    RadioParams radio;
    int workers = 0;  // 0 = hardware concurrency

    void validate() const;
};

// Node and obstacle geometry shared by all six variants of one run.
struct ScenarioLayout {
    int area_index = 0;
    Point3 fiab;
    std::vector<Point3> ues;        // special team first
    std::vector<int> special_team;
    std::vector<Cuboid> obstacles;
};

// FIAB and special team uniform inside the area, remaining UEs uniform over
// the union of all areas, obstacles centred in the area with sides and
// height from the configured ranges. Redraws the whole layout (up to 100
// times) when a UE-FIAB 2D distance falls outside the path-loss range.
ScenarioLayout generate_layout(const CampaignConfig& config, int area_index, Rng& rng);

Scenario make_variant_scenario(const CampaignConfig& config, const ScenarioLayout& layout,
                               VariantId variant);

// (c_vx - c_v0) * 100 / c_v0. Throws std::domain_error when c_v0 <= 0.
double gain_percent(double c_vx, double c_v0);

// Mean 2D UE-FIAB distance over all UEs (first FIAB).
double avg_topology_distance(const Scenario& scenario);

// 2D distance between the two special-team members; requires |team| == 2.
double inter_distance(const Scenario& scenario);

// Right-continuous step CDF: sorted distinct values with cumulative
// fractions in (0, 1], the last exactly 1. Throws on empty input.
std::vector<std::pair<double, double>> empirical_cdf(std::vector<double> values);

// Quantile with linear interpolation between order statistics; p in [0, 100].
double percentile(std::vector<double> values, double p);

struct RunRecord {
    int area_index = 0;
    std::string area_id;
    int scenario_index = 0;
    VariantId variant = VariantId::v0;
    std::optional<SchedulerKind> scheduler;
    double objective_bps = 0.0;
    std::optional<double> gain_percent;  // undefined when the paired V0 objective is 0
    std::optional<std::array<double, 2>> miab_xy;
    std::string associations;  // per-UE serving cell, e.g. "F0;M0;F0;F0;F0"
    std::optional<double> backhaul_capacity_bps;
    double avg_topology_distance_m = 0.0;
    double inter_distance_m = 0.0;
    bool feasible = false;
    std::uint64_t solver_seed = 0;
    int solver_generations = 0;
    long long solver_evaluations = 0;
    std::string status = "ok";
};

struct VariantSummary {
    int gain_count = 0;
    double min_gain = 0.0;
    double median_gain = 0.0;
    double p90_gain = 0.0;
};

struct CampaignReport {
    std::vector<RunRecord> records;  // lexicographic (area, scenario, variant)
    std::map<std::string, VariantSummary> summaries;  // V1..V5
};

// areas x scenarios_per_area x 6 records. Runs execute concurrently on
// per-run seed substreams and reduce in lexicographic order, so the report
// does not depend on the worker count. Per-run failures are recorded in
// the status field rather than aborting the campaign.
CampaignReport run_campaign(const CampaignConfig& config);

}  // namespace miab
