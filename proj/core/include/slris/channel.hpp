#pragma once

#include <cstddef>
#include <vector>

#include "slris/signal.hpp"

namespace slris {

/// Scene constants for one evaluation: geometry anchored at the first RIS,
/// transmit/noise powers, surface size and the propagation exponents.
/// Powers cross the API in dBm; all internal math is linear milliwatts.
struct ScenarioParams {
    double d_ris_ud = 60.0;        // RIS_1 to desired user, meters
    double d_ris_ui = 10.0;        // RIS_1 to interfering user, meters
    double d_ris_bs = 80.0;        // RIS_1 to base station, meters
    double angle_bs_ud_deg = 150.0;  // BS-to-U_D incidence angle at RIS_1
    double theta_deg = 90.0;         // U_D-to-U_I incidence angle at RIS_1
    std::size_t ris_count = 1;       // K surfaces, 5 m vertical spacing
    double ris_spacing = 5.0;
    std::size_t elements_per_ris = 256;
    double amp_coeff = 1.0;          // amplitude reflection coefficient
    double p_d_dbm = 23.0;           // desired user transmit power
    double p_i_dbm = 10.0;           // interferer transmit power
    double noise_dbm = -94.0;
    double carrier_hz = 2.4e9;
    double pl_exp_direct = 3.5;      // user-to-BS links (obstructed)
    double pl_exp_ris = 2.0;         // hops via a RIS (line of sight)

    double wavelength_m() const;
    void validate() const;  // throws std::invalid_argument
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

/// Node positions (RIS_1 at the origin, BS on the +x axis) and every
/// pairwise distance the SINR model needs.
struct Layout {
    Vec2 bs, u_d, u_i;
    std::vector<Vec2> ris;
    double d_ud_bs = 0.0;
    double d_ui_bs = 0.0;
    std::vector<double> d_ris_ud;  // per surface
    std::vector<double> d_ris_ui;
    std::vector<double> d_ris_bs;
};

Layout make_layout(const ScenarioParams& params);

/// ON/OFF state of each surface.
struct RisStateVector {
    std::vector<bool> on;

    static RisStateVector all_off(std::size_t count) { return {std::vector<bool>(count, false)}; }
    static RisStateVector all_on(std::size_t count) { return {std::vector<bool>(count, true)}; }
    std::size_t size() const { return on.size(); }
    std::size_t count_on() const;

    bool operator==(const RisStateVector&) const = default;
};

/// Which users are transmitting when the SINR is evaluated.
struct Occupancy {
    bool desired = true;
    bool interferer = true;
};
Occupancy occupancy_of(SignalClass cls);

/// Log-distance power gain (lambda / 4 pi d0)^2 * (d0 / d)^exponent with
/// d0 = 1 m; exponent 2 is the free-space Friis factor. Throws for d <= 0.
double path_gain(double distance_m, double exponent, double wavelength_m);

/// Two-hop reflection gain toward the user the phase profile is optimized
/// for: coherent n^2 array gain times both hop path gains.
double ris_gain_desired(double d1_m, double d2_m, std::size_t n_elements, double amp_coeff,
                        double pl_exp_ris, double wavelength_m);

/// Two-hop reflection gain for the interferer. The surface is focused on the
/// desired user, so the interferer sees the full array response scaled by the
/// angular separation factor g(theta) = theta_ref / theta (theta_ref = 30
/// degrees): inside the beam the overlap is total, away from it the response
/// falls off inversely with the angle. theta == 0 is rejected as degenerate.
double ris_gain_interferer(double d1_m, double d2_m, std::size_t n_elements, double amp_coeff,
                           double theta_deg, double pl_exp_ris, double wavelength_m);

inline constexpr double kThetaRefDeg = 30.0;

/// Received powers at the BS for one ON/OFF configuration. Desired paths
/// (direct plus every active surface) combine coherently in amplitude;
/// interference paths add in power. sinr_db is -inf when no desired signal
/// is present.
struct SinrBreakdown {
    double desired_mw = 0.0;
    double interference_mw = 0.0;
    double noise_mw = 0.0;
    double sinr_db = 0.0;

    double sinr_linear() const { return desired_mw / (interference_mw + noise_mw); }
};

SinrBreakdown sinr(const ScenarioParams& params, const Layout& layout,
                   const RisStateVector& states, Occupancy occupancy = {});

double dbm_to_mw(double dbm);
double mw_to_dbm(double mw);

}  // namespace slris
