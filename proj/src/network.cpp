#include "miabplan/network.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace miab {

namespace {

constexpr double kMinD2d = 10.0;
constexpr double kMaxD2d = 5000.0;

struct LinkGeometry {
    double d2d;       // true 2D distance
    double d2d_eff;   // clamped into the path-loss validity range
    double d3d_eff;   // recomputed from the clamped 2D distance
    bool in_range;
};

// Links breaching the 2D validity range are still priced (the solver needs
// a finite fitness): the geometry is clamped to the nearest valid distance
// and the breach recorded as a constraint violation.
LinkGeometry link_geometry(const Point3& tx, const Point3& rx) {
    LinkGeometry g{};
    g.d2d = dist2d(tx, rx);
    g.d2d_eff = std::clamp(g.d2d, kMinD2d, kMaxD2d);
    g.in_range = g.d2d >= kMinD2d && g.d2d <= kMaxD2d;
    const double dz = tx.z - rx.z;
    g.d3d_eff = std::hypot(g.d2d_eff, dz);
    return g;
}

}  // namespace

void Scenario::validate() const {
    radio.validate();
    if (areas.empty()) {
        throw std::invalid_argument("Scenario: at least one area is required");
    }
    if (deployment_area < 0 || deployment_area >= static_cast<int>(areas.size())) {
        throw std::invalid_argument("Scenario: deployment_area index out of range");
    }
    if (fiabs.empty()) {
        throw std::invalid_argument("Scenario: at least one FIAB is required");
    }
    if (miab_count < 0) {
        throw std::invalid_argument("Scenario: miab_count must be non-negative");
    }
    if (ues.empty()) {
        throw std::invalid_argument("Scenario: at least one UE is required");
    }
    if (special_team.empty()) {
        throw std::invalid_argument("Scenario: special_team must not be empty");
    }
    std::set<int> seen;
    for (int u : special_team) {
        if (u < 0 || u >= static_cast<int>(ues.size())) {
            throw std::invalid_argument("Scenario: special_team index " + std::to_string(u) +
                                        " out of range");
        }
        if (!seen.insert(u).second) {
            throw std::invalid_argument("Scenario: duplicate special_team index " +
                                        std::to_string(u));
        }
        const Point3& p = ues[u];
        if (!deployment().contains(p.x, p.y)) {
            throw std::invalid_argument("Scenario: special-team UE " + std::to_string(u) +
                                        " lies outside the deployment area");
        }
    }
    for (std::size_t u = 0; u < ues.size(); ++u) {
        for (std::size_t k = 0; k < fiabs.size(); ++k) {
            const double d = dist2d(ues[u], fiabs[k]);
            if (d < kMinD2d || d > kMaxD2d) {
                throw std::invalid_argument("Scenario: UE " + std::to_string(u) + " to FIAB " +
                                            std::to_string(k) + " 2D distance " +
                                            std::to_string(d) + " m outside [10, 5000]");
            }
        }
    }
}

bool Violations::all_zero() const {
    if (range_violations != 0 || area_violation_m != 0.0) {
        return false;
    }
    for (double v : rsrp_deficit_db) {
        if (v != 0.0) {
            return false;
        }
    }
    for (double v : backhaul_deficit_bps) {
        if (v != 0.0) {
            return false;
        }
    }
    return true;
}

Evaluation evaluate(const Scenario& scenario, const Assignment& assignment) {
    const int miab_count = scenario.miab_count;
    const int fiab_count = static_cast<int>(scenario.fiabs.size());
    const int ue_count = static_cast<int>(scenario.ues.size());

    if (static_cast<int>(assignment.miab_xy.size()) != miab_count) {
        throw std::invalid_argument("evaluate: expected " + std::to_string(miab_count) +
                                    " MIAB positions, got " +
                                    std::to_string(assignment.miab_xy.size()));
    }
    if (static_cast<int>(assignment.ue_cell.size()) != ue_count) {
        throw std::invalid_argument("evaluate: expected one cell per UE (" +
                                    std::to_string(ue_count) + "), got " +
                                    std::to_string(assignment.ue_cell.size()));
    }
    if (static_cast<int>(assignment.backhaul_donor.size()) != miab_count) {
        throw std::invalid_argument("evaluate: expected one donor per MIAB");
    }
    for (int u = 0; u < ue_count; ++u) {
        const CellRef& cell = assignment.ue_cell[u];
        const int limit = cell.kind == CellRef::Kind::miab ? miab_count : fiab_count;
        if (cell.index < 0 || cell.index >= limit) {
            throw std::invalid_argument("evaluate: UE " + std::to_string(u) +
                                        " associated with nonexistent cell " +
                                        cell_ref_name(cell));
        }
    }
    for (int m = 0; m < miab_count; ++m) {
        const int k = assignment.backhaul_donor[m];
        if (k < 0 || k >= fiab_count) {
            throw std::invalid_argument("evaluate: MIAB " + std::to_string(m) +
                                        " backhauled to nonexistent FIAB " + std::to_string(k));
        }
    }

    const RadioParams& radio = scenario.radio;
    const double delta = delta_fr1(radio.mu, radio.scs_base_hz, radio.subcarriers_per_rb);
    const CellLoads loads = compute_loads(miab_count, fiab_count, assignment.ue_cell,
                                          assignment.backhaul_donor, scenario.scheduler);

    std::vector<Point3> miab_pos(miab_count);
    for (int m = 0; m < miab_count; ++m) {
        miab_pos[m] = {assignment.miab_xy[m][0], assignment.miab_xy[m][1], radio.h_miab_m};
    }

    Evaluation eval;
    eval.per_ue_capacity_bps.assign(ue_count, 0.0);
    eval.ue_links.resize(ue_count);
    eval.backhaul_links.resize(miab_count);
    eval.violations.rsrp_deficit_db.assign(ue_count + miab_count, 0.0);
    eval.violations.backhaul_deficit_bps.assign(miab_count, 0.0);

    auto price_link = [&](const Point3& tx, const Point3& rx, double f_ghz, int share,
                          LinkReport& report, double& deficit_slot) {
        const LinkGeometry geom = link_geometry(tx, rx);
        report.d2d_m = geom.d2d;
        report.range_ok = geom.in_range;
        if (!geom.in_range) {
            eval.violations.range_violations += 1;
        }
        const LosClass los = los_class(Segment{tx, rx}, scenario.obstacles);
        report.budget = link_budget_at(los, geom.d2d_eff, geom.d3d_eff, f_ghz, tx.z, rx.z, share,
                                       radio);
        if (!report.budget->above_rsrp_floor) {
            deficit_slot = radio.q_rxlevmin_dbm - report.budget->rsrp_dbm;
        }
    };

    // Access links.
    for (int u = 0; u < ue_count; ++u) {
        const CellRef& cell = assignment.ue_cell[u];
        LinkReport& report = eval.ue_links[u];
        if (cell.kind == CellRef::Kind::miab) {
            const int m = cell.index;
            price_link(miab_pos[m], scenario.ues[u], radio.f_miab_ghz, loads.miab_ues[m], report,
                       eval.violations.rsrp_deficit_db[u]);
            report.capacity_bps = access_capacity_bps(radio.rb_per_slot, delta,
                                                      report.budget->se, loads.miab_ues[m]);
        } else {
            const int k = cell.index;
            price_link(scenario.fiabs[k], scenario.ues[u], radio.f_fiab_ghz, loads.fiab_rnti[k],
                       report, eval.violations.rsrp_deficit_db[u]);
            report.capacity_bps = access_capacity_bps(radio.rb_per_slot, delta,
                                                      report.budget->se, loads.fiab_rnti[k]);
        }
        eval.per_ue_capacity_bps[u] = report.capacity_bps;
    }

    // Backhaul links. An idle MIAB under PF can leave its donor with zero
    // RNTIs; the power-share formula is then undefined and the link is
    // reported absent with zero capacity.
    for (int m = 0; m < miab_count; ++m) {
        const int k = assignment.backhaul_donor[m];
        LinkReport& report = eval.backhaul_links[m];
        if (loads.fiab_rnti[k] == 0) {
            report.d2d_m = dist2d(scenario.fiabs[k], miab_pos[m]);
            report.range_ok = report.d2d_m >= kMinD2d && report.d2d_m <= kMaxD2d;
            if (!report.range_ok) {
                eval.violations.range_violations += 1;
            }
            report.capacity_bps = 0.0;
            continue;
        }
        price_link(scenario.fiabs[k], miab_pos[m], radio.f_fiab_ghz, loads.fiab_rnti[k], report,
                   eval.violations.rsrp_deficit_db[ue_count + m]);
        report.capacity_bps = backhaul_capacity_bps(radio.rb_per_slot, delta, report.budget->se,
                                                    loads.miab_ues[m], loads.fiab_rnti[k],
                                                    scenario.scheduler);
    }

    // Backhaul must cover the aggregate capacity of the UEs the MIAB serves.
    for (int m = 0; m < miab_count; ++m) {
        double served = 0.0;
        for (int u = 0; u < ue_count; ++u) {
            const CellRef& cell = assignment.ue_cell[u];
            if (cell.kind == CellRef::Kind::miab && cell.index == m) {
                served += eval.per_ue_capacity_bps[u];
            }
        }
        eval.violations.backhaul_deficit_bps[m] =
            std::max(0.0, served - eval.backhaul_links[m].capacity_bps);
    }

    // MIAB positions must stay inside the deployment area.
    const AreaPolygon& area = scenario.deployment();
    for (int m = 0; m < miab_count; ++m) {
        eval.violations.area_violation_m += area.distance_to(miab_pos[m].x, miab_pos[m].y);
    }

    double objective = 0.0;
    for (int u : scenario.special_team) {
        objective += eval.per_ue_capacity_bps[u];
    }
    eval.objective_bps = objective;
    eval.feasible = eval.violations.all_zero();

    if (!eval.feasible) {
        const double cell_cap = radio.rb_per_slot * delta * radio.se_max;
        double v = 0.0;
        for (double d : eval.violations.rsrp_deficit_db) {
            v += d / 10.0;
        }
        for (double d : eval.violations.backhaul_deficit_bps) {
            v += d / cell_cap;
        }
        v += eval.violations.range_violations;
        v += eval.violations.area_violation_m / std::max(1.0, area.bbox_diagonal());
        eval.normalized_violation = 1.0 + v;
    }
    return eval;
}

double objective_upper_bound(const Scenario& scenario) {
    const RadioParams& radio = scenario.radio;
    const double delta = delta_fr1(radio.mu, radio.scs_base_hz, radio.subcarriers_per_rb);
    return static_cast<double>(scenario.special_team.size()) * radio.rb_per_slot * delta *
           radio.se_max;
}

bool assignment_feasible(const Evaluation& evaluation) {
    return evaluation.violations.all_zero();
}

Assignment all_fiab_assignment(const Scenario& scenario, int fiab_index) {
    Assignment assignment;
    assignment.miab_xy.assign(scenario.miab_count, {0.0, 0.0});
    assignment.ue_cell.assign(scenario.ues.size(), CellRef{CellRef::Kind::fiab, fiab_index});
    assignment.backhaul_donor.assign(scenario.miab_count, fiab_index);
    if (scenario.miab_count > 0) {
        const auto [cx, cy] = scenario.deployment().project(scenario.fiabs.at(fiab_index).x,
                                                            scenario.fiabs.at(fiab_index).y);
        for (auto& xy : assignment.miab_xy) {
            xy = {cx, cy};
        }
    }
    return assignment;
}

std::string cell_ref_name(const CellRef& cell) {
    return (cell.kind == CellRef::Kind::miab ? "M" : "F") + std::to_string(cell.index);
}

}  // namespace miab
