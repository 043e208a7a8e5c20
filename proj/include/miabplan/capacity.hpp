#pragma once

#include <optional>
#include <span>
#include <vector>

namespace miab {

enum class SchedulerKind { pf, rr };

// A UE's serving cell, or a MIAB backhaul's donor.
struct CellRef {
    enum class Kind { miab, fiab };
    Kind kind = Kind::fiab;
    int index = 0;
    bool operator==(const CellRef&) const = default;
};

// Load counts for one FIAB donor and one attached MIAB:
//   u_m  UEs on the MIAB access
//   u_k  UEs directly on the FIAB
//   u_z  RNTIs sharing the FIAB's RBs; under PF every UE behind a backhaul
//        counts individually, under RR each backhaul counts as one.
struct LoadCounts {
    int u_m = 0;
    int u_k = 0;
    int u_z = 0;
};

// u_z for a donor with the given backhauled-MIAB UE counts.
int rnti_count(int u_k, std::span<const int> backhauled_miab_ues, SchedulerKind scheduler);

// Single-donor convenience used by the worked examples and the RB tests.
LoadCounts loads_for(int u_m, int u_k, SchedulerKind scheduler, int backhaul_count = 1);

// Per-cell load counts for a full assignment.
struct CellLoads {
    std::vector<int> miab_ues;         // U_m per MIAB
    std::vector<int> fiab_direct_ues;  // U_k per FIAB
    std::vector<int> fiab_rnti;        // U_z per FIAB
};

CellLoads compute_loads(int miab_count, int fiab_count, std::span<const CellRef> ue_cell,
                        std::span<const int> backhaul_donor, SchedulerKind scheduler);

// Fractional RB shares; quantities whose divisor is a zero count are absent.
struct RbAllocation {
    std::optional<double> rb_access_fiab;  // B / u_z
    std::optional<double> rb_access_miab;  // B / u_m
    std::optional<double> rb_backhaul;     // PF: B u_m / u_z, RR: B / u_z
};

RbAllocation rb_allocation(int rb_per_slot, const LoadCounts& loads, SchedulerKind scheduler);

double link_bandwidth_hz(double rb, double delta_hz);

// B * delta * eta / divisor; divisor is u_m for MIAB access, u_z for FIAB access.
double access_capacity_bps(int rb_per_slot, double delta_hz, double eta, int divisor);

// PF: B u_m delta eta / u_z (zero when the MIAB serves nobody); RR: B delta eta / u_z.
double backhaul_capacity_bps(int rb_per_slot, double delta_hz, double eta, int u_m, int u_z,
                             SchedulerKind scheduler);

}  // namespace miab
