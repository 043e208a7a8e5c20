#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "miabplan/capacity.hpp"
#include "miabplan/geometry.hpp"
#include "miabplan/radio.hpp"

namespace miab {

struct NamedArea {
    std::string id;
    AreaPolygon polygon;
};

// Immutable world description: deployment areas, one or more FIAB donors,
// UEs with a designated special team, obstacles, radio parameters, and the
// scheduler in force.
struct Scenario {
    std::vector<NamedArea> areas;
    std::vector<Point3> fiabs;  // z = radio.h_fiab_m
    int miab_count = 0;
    std::vector<Point3> ues;    // z = radio.h_ut_m
    std::vector<int> special_team;
    std::vector<Cuboid> obstacles;
    RadioParams radio;
    SchedulerKind scheduler = SchedulerKind::pf;
    int deployment_area = 0;

    const AreaPolygon& deployment() const { return areas.at(deployment_area).polygon; }

    // Structural invariants: team indices valid and unique, team members
    // inside the deployment area, every UE-FIAB 2D distance within the
    // path-loss model range. Throws std::invalid_argument.
    void validate() const;
};

// Decision variables: MIAB positions (z is fixed at the MIAB mast height),
// one serving cell per UE, one donor FIAB per MIAB.
struct Assignment {
    std::vector<std::array<double, 2>> miab_xy;
    std::vector<CellRef> ue_cell;
    std::vector<int> backhaul_donor;
};

// One evaluated radio link. The budget is absent when the serving cell's
// share divisor is zero (idle MIAB whose donor carries no RNTIs under PF);
// such links contribute no capacity and are exempt from the RSRP floor.
struct LinkReport {
    double d2d_m = 0.0;
    bool range_ok = true;
    std::optional<LinkBudget> budget;
    double capacity_bps = 0.0;
};

struct Violations {
    std::vector<double> rsrp_deficit_db;      // per link: U access entries, then M backhaul
    std::vector<double> backhaul_deficit_bps; // per MIAB
    int range_violations = 0;                 // links with d2d outside [10 m, 5000 m]
    double area_violation_m = 0.0;            // MIAB distance outside the deployment area

    bool all_zero() const;
};

struct Evaluation {
    std::vector<double> per_ue_capacity_bps;
    std::vector<LinkReport> ue_links;        // one per UE
    std::vector<LinkReport> backhaul_links;  // one per MIAB
    double objective_bps = 0.0;
    Violations violations;
    bool feasible = false;
    // Dimensionless penalty magnitude consumed by the solver: zero when
    // feasible, otherwise 1 plus scaled per-class residuals so any
    // infeasible fitness sits strictly below any feasible one.
    double normalized_violation = 0.0;
};

// Full constrained evaluation: loads, per-link budgets with load-based
// power sharing, access/backhaul capacities, the special-team objective,
// and per-constraint violation magnitudes. Structural invalidity (bad cell
// index, size mismatch) throws std::invalid_argument; it is never folded
// into a penalty.
Evaluation evaluate(const Scenario& scenario, const Assignment& assignment);

// |S| * B * max(delta_miab, delta_fiab) * se_max; no assignment can beat it.
double objective_upper_bound(const Scenario& scenario);

bool assignment_feasible(const Evaluation& evaluation);

// All UEs on the given FIAB, no MIABs active (miab_xy for miab_count = 0).
Assignment all_fiab_assignment(const Scenario& scenario, int fiab_index = 0);

std::string cell_ref_name(const CellRef& cell);

}  // namespace miab
