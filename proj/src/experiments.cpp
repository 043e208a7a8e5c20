#include "miabplan/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace miab {

namespace {

constexpr double kMinD2d = 10.0;
constexpr double kMaxD2d = 5000.0;

// Uniform sample over the union of all areas: each attempt picks an area
// with probability proportional to its bounding-box measure and accepts
// bounding-box draws that land inside, which weights every area by its
// true measure.
std::pair<double, double> sample_area_union(const std::vector<NamedArea>& areas, Rng& rng) {
    std::vector<double> cumulative;
    double total = 0.0;
    for (const NamedArea& area : areas) {
        const auto [xmin, ymin, xmax, ymax] = area.polygon.bounding_box();
        total += std::max(0.0, (xmax - xmin)) * std::max(0.0, (ymax - ymin));
        cumulative.push_back(total);
    }
    if (total <= 0.0) {
        // All areas degenerate to points; pick one uniformly.
        const auto& verts = areas[rng.uniform_int(static_cast<int>(areas.size()))].polygon.vertices();
        return verts.front();
    }
    for (int attempt = 0; attempt < 1000000; ++attempt) {
        const double pick = rng.uniform(0.0, total);
        std::size_t idx = std::lower_bound(cumulative.begin(), cumulative.end(), pick) -
                          cumulative.begin();
        idx = std::min(idx, areas.size() - 1);
        const auto [xmin, ymin, xmax, ymax] = areas[idx].polygon.bounding_box();
        const double x = rng.uniform(xmin, xmax);
        const double y = rng.uniform(ymin, ymax);
        if (areas[idx].polygon.contains(x, y)) {
            return {x, y};
        }
    }
    throw std::runtime_error("sample_area_union: rejection budget exhausted");
}

RunRecord solved_record(const CampaignConfig& config, const ScenarioLayout& layout,
                        VariantId variant, const Scenario& scenario, const SolveResult& sol,
                        double c_v0) {
    RunRecord rec;
    rec.area_index = layout.area_index;
    rec.area_id = config.areas[layout.area_index].id;
    rec.variant = variant;
    rec.scheduler = variant_traits(variant, config.v1_with_miab).scheduler;
    rec.objective_bps = sol.evaluation.objective_bps;
    if (c_v0 > 0.0) {
        rec.gain_percent = gain_percent(rec.objective_bps, c_v0);
    }
    if (scenario.miab_count > 0) {
        rec.miab_xy = sol.best.miab_xy.at(0);
        rec.backhaul_capacity_bps = sol.evaluation.backhaul_links.at(0).capacity_bps;
    }
    std::string assoc;
    for (std::size_t u = 0; u < sol.best.ue_cell.size(); ++u) {
        if (u > 0) {
            assoc += ';';
        }
        assoc += cell_ref_name(sol.best.ue_cell[u]);
    }
    rec.associations = assoc;
    rec.feasible = sol.evaluation.feasible;
    rec.solver_generations = sol.generations_run;
    rec.solver_evaluations = sol.evaluations;
    return rec;
}

}  // namespace

VariantTraits variant_traits(VariantId variant, bool v1_with_miab) {
    switch (variant) {
        case VariantId::v0:
            return {false, false, std::nullopt};
        case VariantId::v1:
            if (v1_with_miab) {
                return {true, true, SchedulerKind::pf};
            }
            return {false, true, std::nullopt};
        case VariantId::v2:
            return {true, false, SchedulerKind::pf};
        case VariantId::v3:
            return {true, true, SchedulerKind::pf};
        case VariantId::v4:
            return {true, false, SchedulerKind::rr};
        case VariantId::v5:
            return {true, true, SchedulerKind::rr};
    }
    throw std::logic_error("variant_traits: unknown variant");
}

const char* variant_name(VariantId variant) {
    switch (variant) {
        case VariantId::v0: return "V0";
        case VariantId::v1: return "V1";
        case VariantId::v2: return "V2";
        case VariantId::v3: return "V3";
        case VariantId::v4: return "V4";
        case VariantId::v5: return "V5";
    }
    throw std::logic_error("variant_name: unknown variant");
}

void CampaignConfig::validate() const {
    radio.validate();
    ga.validate();
    if (areas.empty()) {
        throw std::invalid_argument("CampaignConfig: at least one area is required");
    }
    if (scenarios_per_area < 1 || ues_total < 1 || special_team_size < 1 ||
        obstacles_per_scenario < 0) {
        throw std::invalid_argument("CampaignConfig: counts must be positive");
    }
    if (special_team_size > ues_total) {
        throw std::invalid_argument("CampaignConfig: special_team_size exceeds ues_total");
    }
    if (obstacle.footprint_min_m <= 0 || obstacle.footprint_max_m < obstacle.footprint_min_m ||
        obstacle.height_min_m <= 0 || obstacle.height_max_m < obstacle.height_min_m) {
        throw std::invalid_argument("CampaignConfig: invalid obstacle size ranges");
    }
}

ScenarioLayout generate_layout(const CampaignConfig& config, int area_index, Rng& rng) {
    const AreaPolygon& area = config.areas.at(area_index).polygon;

    for (int attempt = 0; attempt < 100; ++attempt) {
        ScenarioLayout layout;
        layout.area_index = area_index;

        const auto [fx, fy] = area.sample(rng);
        layout.fiab = {fx, fy, config.radio.h_fiab_m};

        for (int u = 0; u < config.special_team_size; ++u) {
            const auto [x, y] = area.sample(rng);
            layout.ues.push_back({x, y, config.radio.h_ut_m});
            layout.special_team.push_back(u);
        }
        for (int u = config.special_team_size; u < config.ues_total; ++u) {
            const auto [x, y] = sample_area_union(config.areas, rng);
            layout.ues.push_back({x, y, config.radio.h_ut_m});
        }

        for (int o = 0; o < config.obstacles_per_scenario; ++o) {
            const auto [cx, cy] = area.sample(rng);
            const double sx = rng.uniform(config.obstacle.footprint_min_m,
                                          config.obstacle.footprint_max_m);
            const double sy = rng.uniform(config.obstacle.footprint_min_m,
                                          config.obstacle.footprint_max_m);
            const double h = rng.uniform(config.obstacle.height_min_m,
                                         config.obstacle.height_max_m);
            layout.obstacles.push_back(Cuboid::axis_aligned(
                {cx - sx / 2.0, cy - sy / 2.0, 0.0}, {cx + sx / 2.0, cy + sy / 2.0, h}));
        }

        const bool in_range = std::all_of(layout.ues.begin(), layout.ues.end(), [&](const Point3& ue) {
            const double d = dist2d(ue, layout.fiab);
            return d >= kMinD2d && d <= kMaxD2d;
        });
        if (in_range) {
            return layout;
        }
    }
    throw std::runtime_error("generate_layout: could not satisfy the UE-FIAB distance range in "
                             "100 attempts (area " +
                             config.areas.at(area_index).id + ")");
}

Scenario make_variant_scenario(const CampaignConfig& config, const ScenarioLayout& layout,
                               VariantId variant) {
    const VariantTraits traits = variant_traits(variant, config.v1_with_miab);
    Scenario scenario;
    scenario.areas = config.areas;
    scenario.fiabs = {layout.fiab};
    scenario.miab_count = traits.has_miab ? 1 : 0;
    scenario.ues = layout.ues;
    scenario.special_team = layout.special_team;
    if (traits.has_obstacles) {
        scenario.obstacles = layout.obstacles;
    }
    scenario.radio = config.radio;
    scenario.scheduler = traits.scheduler.value_or(SchedulerKind::pf);
    scenario.deployment_area = layout.area_index;
    return scenario;
}

double gain_percent(double c_vx, double c_v0) {
    if (!(c_v0 > 0.0)) {
        throw std::domain_error("gain_percent: baseline capacity must be positive");
    }
    return (c_vx - c_v0) * 100.0 / c_v0;
}

double avg_topology_distance(const Scenario& scenario) {
    if (scenario.ues.empty() || scenario.fiabs.empty()) {
        throw std::invalid_argument("avg_topology_distance: needs UEs and a FIAB");
    }
    double sum = 0.0;
    for (const Point3& ue : scenario.ues) {
        sum += dist2d(ue, scenario.fiabs.front());
    }
    return sum / static_cast<double>(scenario.ues.size());
}

double inter_distance(const Scenario& scenario) {
    if (scenario.special_team.size() != 2) {
        throw std::invalid_argument("inter_distance: defined for a special team of exactly 2");
    }
    return dist2d(scenario.ues.at(scenario.special_team[0]),
                  scenario.ues.at(scenario.special_team[1]));
}

std::vector<std::pair<double, double>> empirical_cdf(std::vector<double> values) {
    if (values.empty()) {
        throw std::invalid_argument("empirical_cdf: empty input");
    }
    std::sort(values.begin(), values.end());
    std::vector<std::pair<double, double>> cdf;
    const double n = static_cast<double>(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i + 1 < values.size() && values[i + 1] == values[i]) {
            continue;  // merge duplicates into one step
        }
        cdf.emplace_back(values[i], static_cast<double>(i + 1) / n);
    }
    return cdf;
}

double percentile(std::vector<double> values, double p) {
    if (values.empty()) {
        throw std::invalid_argument("percentile: empty input");
    }
    if (p < 0.0 || p > 100.0) {
        throw std::invalid_argument("percentile: p must be in [0, 100]");
    }
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * p / 100.0;
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = h - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

CampaignReport run_campaign(const CampaignConfig& config) {
    config.validate();

    const int n_areas = static_cast<int>(config.areas.size());
    const int n_tasks = n_areas * config.scenarios_per_area;
    std::vector<std::vector<RunRecord>> per_task(n_tasks);

    auto run_task = [&](int task) {
        const int a = task / config.scenarios_per_area;
        const int s = task % config.scenarios_per_area;
        std::vector<RunRecord>& records = per_task[task];
        try {
            Rng layout_rng = Rng::substream(config.seed, static_cast<std::uint64_t>(a),
                                            static_cast<std::uint64_t>(s), 0);
            const ScenarioLayout layout = generate_layout(config, a, layout_rng);

            const Scenario v0_scenario = make_variant_scenario(config, layout, VariantId::v0);
            const double avg_dist = avg_topology_distance(v0_scenario);
            const double inter = layout.special_team.size() == 2 ? inter_distance(v0_scenario)
                                                                 : 0.0;

            double c_v0 = 0.0;
            for (std::size_t vi = 0; vi < kAllVariants.size(); ++vi) {
                const VariantId variant = kAllVariants[vi];
                const VariantTraits traits = variant_traits(variant, config.v1_with_miab);
                const Scenario scenario = make_variant_scenario(config, layout, variant);

                RunRecord rec;
                if (traits.has_miab) {
                    GaConfig ga = config.ga;
                    ga.seed = Rng::substream(config.seed, static_cast<std::uint64_t>(a),
                                             static_cast<std::uint64_t>(s), 100 + vi)
                                  .next();
                    ga.workers = 1;  // campaign parallelism lives at the run level
                    const SolveResult sol = solve_ga(scenario, ga);
                    rec = solved_record(config, layout, variant, scenario, sol, c_v0);
                    rec.solver_seed = ga.seed;
                } else {
                    const Assignment assignment = all_fiab_assignment(scenario);
                    const Evaluation eval = evaluate(scenario, assignment);
                    SolveResult fixed;
                    fixed.best = assignment;
                    fixed.evaluation = eval;
                    fixed.generations_run = 0;
                    fixed.evaluations = 1;
                    rec = solved_record(config, layout, variant, scenario, fixed,
                                        variant == VariantId::v0 ? 0.0 : c_v0);
                    if (variant == VariantId::v0) {
                        c_v0 = eval.objective_bps;
                        if (c_v0 > 0.0) {
                            rec.gain_percent = 0.0;
                        }
                    }
                }
                rec.scenario_index = s;
                rec.avg_topology_distance_m = avg_dist;
                rec.inter_distance_m = inter;
                records.push_back(std::move(rec));
            }
        } catch (const std::exception& ex) {
            records.clear();
            for (VariantId variant : kAllVariants) {
                RunRecord rec;
                rec.area_index = a;
                rec.area_id = config.areas[a].id;
                rec.scenario_index = s;
                rec.variant = variant;
                rec.status = ex.what();
                records.push_back(std::move(rec));
            }
        }
    };

    int workers = config.workers;
    if (workers <= 0) {
        workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    }
    if (workers <= 1 || n_tasks <= 1) {
        for (int t = 0; t < n_tasks; ++t) {
            run_task(t);
        }
    } else {
        const int n_threads = std::min(workers, n_tasks);
        std::vector<std::thread> threads;
        threads.reserve(n_threads);
        for (int t = 0; t < n_threads; ++t) {
            threads.emplace_back([&, t] {
                for (int task = t; task < n_tasks; task += n_threads) {
                    run_task(task);
                }
            });
        }
        for (auto& th : threads) {
            th.join();
        }
    }

    CampaignReport report;
    for (auto& task_records : per_task) {
        for (auto& rec : task_records) {
            report.records.push_back(std::move(rec));
        }
    }

    for (std::size_t vi = 1; vi < kAllVariants.size(); ++vi) {
        const VariantId variant = kAllVariants[vi];
        std::vector<double> gains;
        for (const RunRecord& rec : report.records) {
            if (rec.variant == variant && rec.gain_percent.has_value() && rec.status == "ok") {
                gains.push_back(*rec.gain_percent);
            }
        }
        if (gains.empty()) {
            continue;
        }
        VariantSummary summary;
        summary.gain_count = static_cast<int>(gains.size());
        summary.min_gain = *std::min_element(gains.begin(), gains.end());
        summary.median_gain = percentile(gains, 50.0);
        summary.p90_gain = percentile(gains, 90.0);
        report.summaries[variant_name(variant)] = summary;
    }
    return report;
}

}  // namespace miab
