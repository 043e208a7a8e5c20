#include "miabplan/capacity.hpp"

#include <stdexcept>

namespace miab {

int rnti_count(int u_k, std::span<const int> backhauled_miab_ues, SchedulerKind scheduler) {
    int u_z = u_k;
    if (scheduler == SchedulerKind::pf) {
        for (int u_m : backhauled_miab_ues) {
            u_z += u_m;
        }
    } else {
        u_z += static_cast<int>(backhauled_miab_ues.size());
    }
    return u_z;
}

LoadCounts loads_for(int u_m, int u_k, SchedulerKind scheduler, int backhaul_count) {
    if (u_m < 0 || u_k < 0 || backhaul_count < 0) {
        throw std::invalid_argument("loads_for: counts must be non-negative");
    }
    LoadCounts loads;
    loads.u_m = u_m;
    loads.u_k = u_k;
    loads.u_z = scheduler == SchedulerKind::pf ? u_k + u_m : u_k + backhaul_count;
    return loads;
}

CellLoads compute_loads(int miab_count, int fiab_count, std::span<const CellRef> ue_cell,
                        std::span<const int> backhaul_donor, SchedulerKind scheduler) {
    CellLoads loads;
    loads.miab_ues.assign(miab_count, 0);
    loads.fiab_direct_ues.assign(fiab_count, 0);
    loads.fiab_rnti.assign(fiab_count, 0);

    for (const CellRef& cell : ue_cell) {
        if (cell.kind == CellRef::Kind::miab) {
            loads.miab_ues.at(cell.index) += 1;
        } else {
            loads.fiab_direct_ues.at(cell.index) += 1;
        }
    }
    for (int k = 0; k < fiab_count; ++k) {
        loads.fiab_rnti[k] = loads.fiab_direct_ues[k];
    }
    for (int m = 0; m < miab_count; ++m) {
        const int donor = backhaul_donor[m];
        if (scheduler == SchedulerKind::pf) {
            loads.fiab_rnti.at(donor) += loads.miab_ues[m];
        } else {
            loads.fiab_rnti.at(donor) += 1;  // the backhaul is one RNTI
        }
    }
    return loads;
}

RbAllocation rb_allocation(int rb_per_slot, const LoadCounts& loads, SchedulerKind scheduler) {
    RbAllocation alloc;
    const double b = rb_per_slot;
    if (loads.u_z > 0) {
        alloc.rb_access_fiab = b / loads.u_z;
    }
    if (loads.u_m > 0) {
        alloc.rb_access_miab = b / loads.u_m;
    }
    if (scheduler == SchedulerKind::pf) {
        if (loads.u_m == 0) {
            alloc.rb_backhaul = 0.0;  // zero numerator wins over an unloaded donor
        } else if (loads.u_z > 0) {
            alloc.rb_backhaul = b * loads.u_m / loads.u_z;
        }
    } else if (loads.u_z > 0) {
        alloc.rb_backhaul = b / loads.u_z;
    }
    return alloc;
}

double link_bandwidth_hz(double rb, double delta_hz) {
    if (rb < 0.0) {
        throw std::invalid_argument("link_bandwidth_hz: rb must be non-negative");
    }
    return rb * delta_hz;
}

double access_capacity_bps(int rb_per_slot, double delta_hz, double eta, int divisor) {
    if (divisor < 1) {
        throw std::invalid_argument("access_capacity_bps: divisor must be >= 1");
    }
    return rb_per_slot * delta_hz * eta / divisor;
}

double backhaul_capacity_bps(int rb_per_slot, double delta_hz, double eta, int u_m, int u_z,
                             SchedulerKind scheduler) {
    if (scheduler == SchedulerKind::pf) {
        if (u_m == 0) {
            return 0.0;
        }
        return static_cast<double>(rb_per_slot) * u_m * delta_hz * eta / u_z;
    }
    return static_cast<double>(rb_per_slot) * delta_hz * eta / u_z;
}

}  // namespace miab
