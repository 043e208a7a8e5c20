#pragma once

#include <span>

#include "miabplan/geometry.hpp"

namespace miab {

// Radio-chain parameters. Defaults are the reference configuration used
// throughout: 5G NR FR1, numerology 1, 133 RBs of 9 subcarriers, 24 dBm
// transmit power, UMi heights of 10 m (FIAB), 5 m (MIAB), 1.5 m (UE).
struct RadioParams {
    double pt_dbm = 24.0;
    int mu = 1;
    int rb_per_slot = 133;
    int subcarriers_per_rb = 9;
    double scs_base_hz = 15000.0;
    double noise_exponent = -19.9;      // thermal noise PSD: 10^exponent W/Hz
    double q_rxlevmin_dbm = -122.0;     // minimum usable RSRP
    double se_slope = 0.23;
    double se_intercept = 0.21;
    double se_max = 6.4;
    double f_miab_ghz = 3.9;
    double f_fiab_ghz = 3.8;
    double h_miab_m = 5.0;
    double h_fiab_m = 10.0;
    double h_ut_m = 1.5;
    double h_e_m = 1.0;

    void validate() const;  // throws std::invalid_argument
};

// Per-RB bandwidth: 2^mu * scs_base * subcarriers. mu must be in {0,1,2,3}.
double delta_fr1(int mu, double scs_base_hz = 15000.0, int subcarriers_per_rb = 9);

// UMi LoS path loss (TR 38.901 Table 7.4.1-1): PL1 below the breakpoint,
// PL2 above. Valid for 10 m <= d2d <= 5000 m; outside that range throws
// std::domain_error.
double pathloss_los_db(double d2d_m, double d3d_m, double dbp_m, double f_ghz, double h_bs_m,
                       double h_ut_m);

// UMi NLoS path loss: max of the LoS value and the NLoS expression
// 22.4 + 35.3 log10(d3d) + 21.3 log10(f) - 0.3 (hUT - 1.5).
double pathloss_nlos_db(double d3d_m, double f_ghz, double h_ut_m, double los_pl_db);

// Thermal noise over rb_per_slot RBs of delta_hz each, in watts.
double noise_power_w(int rb_per_slot, double delta_hz, double noise_exponent = -19.9);

// Received power with the transmit power split across share_count RNTIs.
// share_count must be >= 1: callers never request RSRP for an unloaded cell.
double rsrp_w(double pt_dbm, int share_count, double pl_db);

double sinr_db(double rsrp_w, double noise_w);

// Linear SE regression of SINR (dB), clamped to [0, se_max].
double spectral_efficiency(double sinr_db, double slope = 0.23, double intercept = 0.21,
                           double se_max = 6.4);

struct LinkBudget {
    LosClass los = LosClass::los;
    double pl_db = 0.0;
    double rsrp_w = 0.0;
    double rsrp_dbm = 0.0;
    double sinr_db = 0.0;
    double se = 0.0;
    bool above_rsrp_floor = true;
};

// Distance-parameterised chain: path loss -> RSRP -> SINR -> SE for a link
// whose LoS class has already been decided. Antenna heights select the
// breakpoint; share_count is the serving cell's load divisor.
LinkBudget link_budget_at(LosClass los, double d2d_m, double d3d_m, double f_ghz, double h_bs_m,
                          double h_ut_m, int share_count, const RadioParams& params);

// Full chain from positions: LoS classification against the obstacles,
// then link_budget_at with heights taken from the endpoint z coordinates.
LinkBudget link_budget(const Point3& tx, const Point3& rx, double f_ghz, int share_count,
                       const RadioParams& params, std::span<const Cuboid> obstacles);

}  // namespace miab
