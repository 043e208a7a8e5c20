#include "miabplan/radio.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace miab {

void RadioParams::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) {
            throw std::invalid_argument(std::string("RadioParams: ") + what);
        }
    };
    require(mu >= 0 && mu <= 3, "mu must be in {0,1,2,3}");
    require(rb_per_slot > 0, "rb_per_slot must be positive");
    require(subcarriers_per_rb > 0, "subcarriers_per_rb must be positive");
    require(scs_base_hz > 0, "scs_base_hz must be positive");
    require(se_max > 0, "se_max must be positive");
    require(se_slope > 0, "se_slope must be positive");
    require(f_miab_ghz > 0 && f_fiab_ghz > 0, "carrier frequencies must be positive");
    require(h_miab_m > h_e_m && h_fiab_m > h_e_m && h_ut_m > h_e_m,
            "antenna heights must exceed hE");
    require(h_e_m > 0, "hE must be positive");
    require(pt_dbm > 0, "pt_dbm must be positive");
}

double delta_fr1(int mu, double scs_base_hz, int subcarriers_per_rb) {
    if (mu < 0 || mu > 3) {
        throw std::domain_error("delta_fr1: numerology must be in {0,1,2,3}");
    }
    return static_cast<double>(1 << mu) * scs_base_hz * subcarriers_per_rb;
}

double pathloss_los_db(double d2d_m, double d3d_m, double dbp_m, double f_ghz, double h_bs_m,
                       double h_ut_m) {
    if (d2d_m < 10.0 || d2d_m > 5000.0) {
        throw std::domain_error("pathloss_los_db: d2d outside the [10 m, 5000 m] model range");
    }
    if (d2d_m <= dbp_m) {
        return 32.4 + 21.0 * std::log10(d3d_m) + 20.0 * std::log10(f_ghz);
    }
    const double dh = h_bs_m - h_ut_m;
    return 32.4 + 40.0 * std::log10(d3d_m) + 20.0 * std::log10(f_ghz) -
           9.5 * std::log10(dbp_m * dbp_m + dh * dh);
}

double pathloss_nlos_db(double d3d_m, double f_ghz, double h_ut_m, double los_pl_db) {
    const double nlos = 22.4 + 35.3 * std::log10(d3d_m) + 21.3 * std::log10(f_ghz) -
                        0.3 * (h_ut_m - 1.5);
    return std::max(los_pl_db, nlos);
}

double noise_power_w(int rb_per_slot, double delta_hz, double noise_exponent) {
    return std::pow(10.0, noise_exponent) * rb_per_slot * delta_hz;
}

double rsrp_w(double pt_dbm, int share_count, double pl_db) {
    if (share_count < 1) {
        throw std::invalid_argument("rsrp_w: share_count must be >= 1 (unloaded cell)");
    }
    return std::pow(10.0, (pt_dbm - 30.0) / 10.0) / (share_count * std::pow(10.0, pl_db / 10.0));
}

double sinr_db(double rsrp_w, double noise_w) {
    return 10.0 * std::log10(rsrp_w / noise_w);
}

double spectral_efficiency(double sinr_db, double slope, double intercept, double se_max) {
    const double raw = slope * sinr_db - intercept;
    return std::clamp(raw, 0.0, se_max);
}

LinkBudget link_budget_at(LosClass los, double d2d_m, double d3d_m, double f_ghz, double h_bs_m,
                          double h_ut_m, int share_count, const RadioParams& params) {
    const double dbp = breakpoint_distance(h_bs_m, h_ut_m, params.h_e_m, f_ghz);
    double pl = pathloss_los_db(d2d_m, d3d_m, dbp, f_ghz, h_bs_m, h_ut_m);
    if (los == LosClass::nlos) {
        pl = pathloss_nlos_db(d3d_m, f_ghz, h_ut_m, pl);
    }

    LinkBudget budget;
    budget.los = los;
    budget.pl_db = pl;
    budget.rsrp_w = rsrp_w(params.pt_dbm, share_count, pl);
    budget.rsrp_dbm = 10.0 * std::log10(budget.rsrp_w) + 30.0;
    const double delta = delta_fr1(params.mu, params.scs_base_hz, params.subcarriers_per_rb);
    const double noise = noise_power_w(params.rb_per_slot, delta, params.noise_exponent);
    budget.sinr_db = sinr_db(budget.rsrp_w, noise);
    budget.se = spectral_efficiency(budget.sinr_db, params.se_slope, params.se_intercept,
                                    params.se_max);
    budget.above_rsrp_floor = budget.rsrp_dbm >= params.q_rxlevmin_dbm;
    return budget;
}

LinkBudget link_budget(const Point3& tx, const Point3& rx, double f_ghz, int share_count,
                       const RadioParams& params, std::span<const Cuboid> obstacles) {
    const LosClass los = los_class(Segment{tx, rx}, obstacles);
    return link_budget_at(los, dist2d(tx, rx), dist3d(tx, rx), f_ghz, tx.z, rx.z, share_count,
                          params);
}

}  // namespace miab
