#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "miabplan/capacity.hpp"
#include "miabplan/rng.hpp"

using namespace miab;

TEST_SUITE("capacity") {

TEST_CASE("load counting per scheduler") {
    // 2 UEs direct on the FIAB, 3 on the MIAB, one backhaul.
    std::vector<CellRef> cells = {{CellRef::Kind::fiab, 0},
                                  {CellRef::Kind::fiab, 0},
                                  {CellRef::Kind::miab, 0},
                                  {CellRef::Kind::miab, 0},
                                  {CellRef::Kind::miab, 0}};
    std::vector<int> donors = {0};

    const CellLoads pf = compute_loads(1, 1, cells, donors, SchedulerKind::pf);
    CHECK(pf.miab_ues == std::vector<int>{3});
    CHECK(pf.fiab_direct_ues == std::vector<int>{2});
    CHECK(pf.fiab_rnti == std::vector<int>{5});

    const CellLoads rr = compute_loads(1, 1, cells, donors, SchedulerKind::rr);
    CHECK(rr.fiab_rnti == std::vector<int>{3});  // 2 direct + 1 backhaul RNTI

    // All UEs direct, no MIAB: both schedulers coincide.
    std::vector<CellRef> all_fiab(5, CellRef{CellRef::Kind::fiab, 0});
    for (const auto kind : {SchedulerKind::pf, SchedulerKind::rr}) {
        const CellLoads loads = compute_loads(0, 1, all_fiab, {}, kind);
        CHECK(loads.fiab_direct_ues == std::vector<int>{5});
        CHECK(loads.fiab_rnti == std::vector<int>{5});
    }
}

TEST_CASE("loads_for single-donor convenience") {
    const LoadCounts pf = loads_for(3, 2, SchedulerKind::pf);
    CHECK(pf.u_z == 5);
    const LoadCounts rr = loads_for(3, 2, SchedulerKind::rr);
    CHECK(rr.u_z == 3);
    CHECK(loads_for(0, 5, SchedulerKind::rr, 0).u_z == 5);  // no backhaul at all
}

TEST_CASE("rb allocation worked example") {
    const LoadCounts pf = loads_for(3, 2, SchedulerKind::pf);
    const RbAllocation a = rb_allocation(133, pf, SchedulerKind::pf);
    CHECK(*a.rb_access_fiab == doctest::Approx(26.6).epsilon(1e-12));
    CHECK(*a.rb_backhaul == doctest::Approx(79.8).epsilon(1e-12));
    CHECK(*a.rb_access_miab == doctest::Approx(133.0 / 3.0).epsilon(1e-12));

    const LoadCounts rr = loads_for(3, 2, SchedulerKind::rr);
    const RbAllocation b = rb_allocation(133, rr, SchedulerKind::rr);
    CHECK(*b.rb_access_fiab == doctest::Approx(133.0 / 3.0).epsilon(1e-12));
    CHECK(*b.rb_backhaul == doctest::Approx(133.0 / 3.0).epsilon(1e-12));

    // Idle MIAB under PF: zero backhaul RBs, no MIAB access share.
    const RbAllocation c = rb_allocation(133, loads_for(0, 2, SchedulerKind::pf),
                                         SchedulerKind::pf);
    CHECK(*c.rb_backhaul == 0.0);
    CHECK_FALSE(c.rb_access_miab.has_value());

    // Fully unloaded cell: FIAB-side quantities are absent, not zero.
    const RbAllocation d = rb_allocation(133, LoadCounts{0, 0, 0}, SchedulerKind::pf);
    CHECK_FALSE(d.rb_access_fiab.has_value());
    CHECK(*d.rb_backhaul == 0.0);
}

TEST_CASE("link bandwidth") {
    CHECK(link_bandwidth_hz(26.6, 270000.0) == doctest::Approx(7.182e6).epsilon(1e-12));
    CHECK(link_bandwidth_hz(0.0, 270000.0) == 0.0);
    CHECK(link_bandwidth_hz(133.0, 270000.0) == doctest::Approx(35.91e6).epsilon(1e-12));
    CHECK_THROWS_AS(link_bandwidth_hz(-1.0, 270000.0), std::invalid_argument);
}

TEST_CASE("access capacity worked values") {
    CHECK(access_capacity_bps(133, 270000.0, 6.4, 1) ==
          doctest::Approx(229.824e6).epsilon(1e-12));
    CHECK(access_capacity_bps(133, 270000.0, 0.0, 3) == 0.0);
    CHECK(access_capacity_bps(133, 270000.0, 2.5173790583872058, 5) ==
          doctest::Approx(18079816.39733691).epsilon(1e-12));
}

TEST_CASE("backhaul capacity worked values") {
    CHECK(backhaul_capacity_bps(133, 270000.0, 6.4, 3, 5, SchedulerKind::pf) ==
          doctest::Approx(137.8944e6).epsilon(1e-12));
    CHECK(backhaul_capacity_bps(133, 270000.0, 6.4, 3, 3, SchedulerKind::rr) ==
          doctest::Approx(76.608e6).epsilon(1e-12));
    CHECK(backhaul_capacity_bps(133, 270000.0, 6.4, 0, 5, SchedulerKind::pf) == 0.0);
}

TEST_CASE("rb conservation identities on random loads") {
    Rng rng(101);
    for (int i = 0; i < 10000; ++i) {
        const int b = 1 + rng.uniform_int(400);
        const int n_miabs = 1 + rng.uniform_int(4);
        const int u_k = rng.uniform_int(10);
        std::vector<int> miab_ues(n_miabs);
        int sum_um = 0;
        for (int& u : miab_ues) {
            u = 1 + rng.uniform_int(9);  // every backhauled MIAB serves someone
            sum_um += u;
        }

        // PF: direct UEs plus every backhaul share add back to B.
        {
            const int u_z = rnti_count(u_k, miab_ues, SchedulerKind::pf);
            double total = u_k * (static_cast<double>(b) / u_z);
            for (int u_m : miab_ues) {
                total += rb_allocation(b, LoadCounts{u_m, u_k, u_z}, SchedulerKind::pf)
                             .rb_backhaul.value();
            }
            CHECK(total == doctest::Approx(b).epsilon(1e-9));
        }
        // RR: each backhaul counts once.
        {
            const int u_z = rnti_count(u_k, miab_ues, SchedulerKind::rr);
            const double per_rnti = static_cast<double>(b) / u_z;
            const double total = u_k * per_rnti + n_miabs * per_rnti;
            CHECK(total == doctest::Approx(b).epsilon(1e-9));

            // RR is at least as generous to direct FIAB UEs whenever the
            // backhauled population is no smaller than the backhaul count.
            if (sum_um >= n_miabs && u_k > 0) {
                const int u_z_pf = rnti_count(u_k, miab_ues, SchedulerKind::pf);
                CHECK(per_rnti >= static_cast<double>(b) / u_z_pf - 1e-12);
            }
        }
        // MIAB access: u_m shares of B/u_m.
        {
            const int u_m = miab_ues[0];
            const double rb =
                rb_allocation(b, LoadCounts{u_m, 0, u_m}, SchedulerKind::pf).rb_access_miab.value();
            CHECK(u_m * rb == doctest::Approx(b).epsilon(1e-9));
        }
    }
}

TEST_CASE("capacity equals bandwidth times efficiency") {
    Rng rng(73);
    for (int i = 0; i < 2000; ++i) {
        const int b = 1 + rng.uniform_int(300);
        const double delta = rng.uniform(1e4, 1e6);
        const double eta = rng.uniform(0.0, 6.4);
        const int u_m = 1 + rng.uniform_int(6);
        const int u_k = rng.uniform_int(6);

        const LoadCounts pf = loads_for(u_m, u_k, SchedulerKind::pf);
        const RbAllocation alloc = rb_allocation(b, pf, SchedulerKind::pf);

        // Access, MIAB side: B eta / u_m == bw(rb_access_miab) * eta.
        const double direct = access_capacity_bps(b, delta, eta, u_m);
        const double via_rb = link_bandwidth_hz(*alloc.rb_access_miab, delta) * eta;
        CHECK(direct == doctest::Approx(via_rb).epsilon(1e-9));

        // Access, FIAB side.
        const double direct_f = access_capacity_bps(b, delta, eta, pf.u_z);
        const double via_rb_f = link_bandwidth_hz(*alloc.rb_access_fiab, delta) * eta;
        CHECK(direct_f == doctest::Approx(via_rb_f).epsilon(1e-9));

        // Backhaul, both schedulers.
        for (const auto kind : {SchedulerKind::pf, SchedulerKind::rr}) {
            const LoadCounts loads = loads_for(u_m, u_k, kind);
            const double cap = backhaul_capacity_bps(b, delta, eta, u_m, loads.u_z, kind);
            const double rb = rb_allocation(b, loads, kind).rb_backhaul.value();
            CHECK(cap == doctest::Approx(link_bandwidth_hz(rb, delta) * eta).epsilon(1e-9));
        }
    }
}

}  // TEST_SUITE
