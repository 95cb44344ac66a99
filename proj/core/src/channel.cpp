#include "slris/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace slris {

namespace {

constexpr double kSpeedOfLight = 299792458.0;

double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

double distance(const Vec2& a, const Vec2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

}  // namespace

double ScenarioParams::wavelength_m() const { return kSpeedOfLight / carrier_hz; }

void ScenarioParams::validate() const {
    if (!(d_ris_ud > 0.0 && d_ris_ui > 0.0 && d_ris_bs > 0.0))
        throw std::invalid_argument("scenario: distances must be > 0");
    if (!(theta_deg >= 0.0 && theta_deg <= angle_bs_ud_deg))
        throw std::invalid_argument("scenario: theta outside [0, angle_bs_ud]");
    if (ris_count < 1) throw std::invalid_argument("scenario: ris_count must be >= 1");
    if (elements_per_ris < 1)
        throw std::invalid_argument("scenario: elements_per_ris must be >= 1");
    if (!(amp_coeff > 0.0 && amp_coeff <= 1.0))
        throw std::invalid_argument("scenario: amp_coeff must be in (0, 1]");
    if (!(carrier_hz > 0.0)) throw std::invalid_argument("scenario: carrier must be > 0");
    if (!(ris_spacing > 0.0)) throw std::invalid_argument("scenario: ris_spacing must be > 0");
}

Layout make_layout(const ScenarioParams& params) {
    params.validate();

    Layout layout;
    layout.bs = {params.d_ris_bs, 0.0};
    const double a = deg_to_rad(params.angle_bs_ud_deg);
    layout.u_d = {params.d_ris_ud * std::cos(a), params.d_ris_ud * std::sin(a)};
    const double b = deg_to_rad(params.angle_bs_ud_deg - params.theta_deg);
    layout.u_i = {params.d_ris_ui * std::cos(b), params.d_ris_ui * std::sin(b)};

    layout.d_ud_bs = distance(layout.u_d, layout.bs);
    layout.d_ui_bs = distance(layout.u_i, layout.bs);

    layout.ris.reserve(params.ris_count);
    for (std::size_t k = 0; k < params.ris_count; ++k) {
        Vec2 pos{0.0, -params.ris_spacing * static_cast<double>(k)};
        layout.ris.push_back(pos);
        layout.d_ris_ud.push_back(distance(pos, layout.u_d));
        layout.d_ris_ui.push_back(distance(pos, layout.u_i));
        layout.d_ris_bs.push_back(distance(pos, layout.bs));
    }
    return layout;
}

std::size_t RisStateVector::count_on() const {
    std::size_t n = 0;
    for (bool b : on)
        if (b) ++n;
    return n;
}

Occupancy occupancy_of(SignalClass cls) {
    return {has_desired(cls), has_interferer(cls)};
}

double path_gain(double distance_m, double exponent, double wavelength_m) {
    if (!(distance_m > 0.0)) throw std::invalid_argument("path_gain: distance must be > 0");
    const double reference = wavelength_m / (4.0 * std::numbers::pi);
    return reference * reference * std::pow(distance_m, -exponent);
}

double ris_gain_desired(double d1_m, double d2_m, std::size_t n_elements, double amp_coeff,
                        double pl_exp_ris, double wavelength_m) {
    if (n_elements < 1) throw std::invalid_argument("ris_gain_desired: n_elements must be >= 1");
    const double n = static_cast<double>(n_elements);
    return amp_coeff * amp_coeff * n * n * path_gain(d1_m, pl_exp_ris, wavelength_m) *
           path_gain(d2_m, pl_exp_ris, wavelength_m);
}

double ris_gain_interferer(double d1_m, double d2_m, std::size_t n_elements, double amp_coeff,
                           double theta_deg, double pl_exp_ris, double wavelength_m) {
    if (!(theta_deg > 0.0))
        throw std::invalid_argument("ris_gain_interferer: theta must be > 0 degrees");
    const double angular = kThetaRefDeg / theta_deg;
    const double n = static_cast<double>(n_elements);
    return amp_coeff * amp_coeff * n * n * angular *
           path_gain(d1_m, pl_exp_ris, wavelength_m) * path_gain(d2_m, pl_exp_ris, wavelength_m);
}

SinrBreakdown sinr(const ScenarioParams& params, const Layout& layout,
                   const RisStateVector& states, Occupancy occupancy) {
    if (states.size() != params.ris_count)
        throw std::invalid_argument("sinr: state vector length does not match ris_count");
    if (layout.ris.size() != params.ris_count)
        throw std::invalid_argument("sinr: layout was built for a different ris_count");

    const double wavelength = params.wavelength_m();
    const double p_d = occupancy.desired ? dbm_to_mw(params.p_d_dbm) : 0.0;
    const double p_i = occupancy.interferer ? dbm_to_mw(params.p_i_dbm) : 0.0;

    SinrBreakdown out;
    out.noise_mw = dbm_to_mw(params.noise_dbm);

    double desired_amp =
        std::sqrt(p_d * path_gain(layout.d_ud_bs, params.pl_exp_direct, wavelength));
    out.interference_mw = p_i * path_gain(layout.d_ui_bs, params.pl_exp_direct, wavelength);

    for (std::size_t k = 0; k < params.ris_count; ++k) {
        if (!states.on[k]) continue;
        desired_amp += std::sqrt(
            p_d * ris_gain_desired(layout.d_ris_ud[k], layout.d_ris_bs[k],
                                   params.elements_per_ris, params.amp_coeff,
                                   params.pl_exp_ris, wavelength));
        if (p_i > 0.0)
            out.interference_mw +=
                p_i * ris_gain_interferer(layout.d_ris_ui[k], layout.d_ris_bs[k],
                                          params.elements_per_ris, params.amp_coeff,
                                          params.theta_deg, params.pl_exp_ris, wavelength);
    }

    out.desired_mw = desired_amp * desired_amp;
    out.sinr_db = 10.0 * std::log10(out.desired_mw / (out.interference_mw + out.noise_mw));
    return out;
}

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

}  // namespace slris
