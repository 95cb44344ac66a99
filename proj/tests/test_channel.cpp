#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "slris/channel.hpp"

using namespace slris;

namespace {

constexpr double kPi = std::numbers::pi;

double law_of_cosines(double a, double b, double gamma_rad) {
    return std::sqrt(a * a + b * b - 2.0 * a * b * std::cos(gamma_rad));
}

// Independent end-to-end SINR oracle: one self-contained function evaluating
// the closed-form expression from scratch (no calls into the channel module).
double oracle_sinr_db(double theta_deg, std::size_t ris_count,
                      const std::vector<bool>& states, double p_i_dbm) {
    const double lambda = 299792458.0 / 2.4e9;
    const double unit = std::pow(lambda / (4.0 * kPi), 2.0);
    const double p_d = std::pow(10.0, 23.0 / 10.0);
    const double p_i = std::pow(10.0, p_i_dbm / 10.0);
    const double noise = std::pow(10.0, -94.0 / 10.0);
    const double n_sq = 256.0 * 256.0;

    const double ud_x = 60.0 * std::cos(150.0 * kPi / 180.0);
    const double ud_y = 60.0 * std::sin(150.0 * kPi / 180.0);
    const double ui_x = 10.0 * std::cos((150.0 - theta_deg) * kPi / 180.0);
    const double ui_y = 10.0 * std::sin((150.0 - theta_deg) * kPi / 180.0);

    const double d_ud_bs = std::hypot(ud_x - 80.0, ud_y);
    const double d_ui_bs = std::hypot(ui_x - 80.0, ui_y);

    double amp = std::sqrt(p_d * unit * std::pow(d_ud_bs, -3.5));
    double interference = p_i * unit * std::pow(d_ui_bs, -3.5);
    for (std::size_t k = 0; k < ris_count; ++k) {
        if (!states[k]) continue;
        const double ry = -5.0 * static_cast<double>(k);
        const double d_r_ud = std::hypot(ud_x, ud_y - ry);
        const double d_r_ui = std::hypot(ui_x, ui_y - ry);
        const double d_r_bs = std::hypot(80.0, ry);
        amp += std::sqrt(p_d * n_sq * unit * std::pow(d_r_ud, -2.0) * unit *
                         std::pow(d_r_bs, -2.0));
        interference += p_i * n_sq * (30.0 / theta_deg) * unit * std::pow(d_r_ui, -2.0) * unit *
                        std::pow(d_r_bs, -2.0);
    }
    return 10.0 * std::log10(amp * amp / (interference + noise));
}

ScenarioParams params_with(double theta_deg, std::size_t ris_count, double p_i_dbm = 10.0) {
    ScenarioParams p;
    p.theta_deg = theta_deg;
    p.ris_count = ris_count;
    p.p_i_dbm = p_i_dbm;
    return p;
}

}  // namespace

TEST_CASE("layout places the interferer collinearly at theta = 150") {
    const Layout layout = make_layout(params_with(150.0, 1));
    CHECK(layout.u_i.x == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(std::abs(layout.u_i.y) < 1e-9);
    CHECK(layout.d_ui_bs == doctest::Approx(70.0).epsilon(1e-12));
}

TEST_CASE("layout at theta = 0 matches the law of cosines") {
    const Layout layout = make_layout(params_with(0.0, 1));
    const double expected = law_of_cosines(80.0, 10.0, 150.0 * kPi / 180.0);
    CHECK(layout.d_ui_bs == doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected == doctest::Approx(88.81).epsilon(1e-3));
}

TEST_CASE("ris surfaces stack downward at the configured spacing") {
    const Layout layout = make_layout(params_with(90.0, 3));
    CHECK(layout.ris[2].x == 0.0);
    CHECK(layout.ris[2].y == doctest::Approx(-10.0));
    CHECK(layout.d_ris_bs[2] == doctest::Approx(std::sqrt(80.0 * 80.0 + 100.0)).epsilon(1e-12));
    CHECK(layout.d_ris_bs[2] == doctest::Approx(80.62).epsilon(1e-3));
}

TEST_CASE("interferer-to-bs distance strictly decreases with theta") {
    double previous = 1e9;
    for (double theta = 10.0; theta <= 150.0; theta += 10.0) {
        const Layout layout = make_layout(params_with(theta, 1));
        CHECK(layout.d_ui_bs < previous);
        previous = layout.d_ui_bs;
    }
}

TEST_CASE("path gain follows the inverse-power law") {
    const double lambda = 0.125;
    CHECK(path_gain(1.0, 2.0, lambda) ==
          doctest::Approx(std::pow(0.125 / (4.0 * kPi), 2.0)).epsilon(1e-12));
    CHECK(path_gain(1.0, 2.0, lambda) == doctest::Approx(9.895e-5).epsilon(1e-3));

    // Doubling the distance at exponent 2 costs exactly 20 log10(2) dB.
    const double ratio_db =
        10.0 * std::log10(path_gain(10.0, 2.0, lambda) / path_gain(20.0, 2.0, lambda));
    CHECK(ratio_db == doctest::Approx(6.0206).epsilon(1e-4));

    CHECK(10.0 * std::log10(path_gain(80.0, 2.0, lambda)) == doctest::Approx(-78.1).epsilon(1e-3));

    CHECK_THROWS_AS(path_gain(0.0, 2.0, lambda), std::invalid_argument);
    CHECK_THROWS_AS(path_gain(-5.0, 2.0, lambda), std::invalid_argument);
}

TEST_CASE("desired reflection gain composes hop gains with the array factor") {
    const double lambda = 0.125;
    // Single element, unit amplitude: exactly the product of the hop gains.
    CHECK(ris_gain_desired(60.0, 80.0, 1, 1.0, 2.0, lambda) ==
          doctest::Approx(path_gain(60.0, 2.0, lambda) * path_gain(80.0, 2.0, lambda))
              .epsilon(1e-12));

    // Doubling the element count adds 20 log10(2) dB.
    const double g1 = ris_gain_desired(60.0, 80.0, 128, 1.0, 2.0, lambda);
    const double g2 = ris_gain_desired(60.0, 80.0, 256, 1.0, 2.0, lambda);
    CHECK(10.0 * std::log10(g2 / g1) == doctest::Approx(6.0206).epsilon(1e-4));

    // Composition oracle at the case-study geometry.
    const double expected_db = 10.0 * std::log10(path_gain(60.0, 2.0, lambda)) +
                               10.0 * std::log10(path_gain(80.0, 2.0, lambda)) +
                               20.0 * std::log10(256.0);
    CHECK(10.0 * std::log10(ris_gain_desired(60.0, 80.0, 256, 1.0, 2.0, lambda)) ==
          doctest::Approx(expected_db).epsilon(1e-9));
    CHECK(expected_db == doctest::Approx(-105.56).epsilon(1e-3));
}

TEST_CASE("interferer reflection scales inversely with the incidence angle") {
    const double lambda = 0.125;
    auto gain = [&](double theta) {
        return ris_gain_interferer(10.0, 80.0, 256, 1.0, theta, 2.0, lambda);
    };
    CHECK(gain(60.0) / gain(30.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(gain(150.0) / gain(30.0) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(gain(120.0) / gain(30.0) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK_THROWS_AS(gain(0.0), std::invalid_argument);
}

TEST_CASE("all-off SINR reduces to the direct-link SNR when no interferer") {
    ScenarioParams p = params_with(90.0, 3);
    const Layout layout = make_layout(p);
    const auto breakdown =
        sinr(p, layout, RisStateVector::all_off(3), Occupancy{true, false});
    CHECK(breakdown.interference_mw == 0.0);
    const double expected =
        dbm_to_mw(p.p_d_dbm) * path_gain(layout.d_ud_bs, p.pl_exp_direct, p.wavelength_m()) /
        dbm_to_mw(p.noise_dbm);
    CHECK(breakdown.sinr_linear() == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("all-off SINR is invariant to surface count and size") {
    double reference = 0.0;
    for (std::size_t k : {std::size_t{1}, std::size_t{4}, std::size_t{9}}) {
        for (std::size_t n : {std::size_t{16}, std::size_t{256}, std::size_t{1024}}) {
            ScenarioParams p = params_with(75.0, k);
            p.elements_per_ris = n;
            const double v = sinr(p, make_layout(p), RisStateVector::all_off(k)).sinr_db;
            if (reference == 0.0) reference = v;
            CHECK(v == doctest::Approx(reference).epsilon(1e-12));
        }
    }
}

TEST_CASE("sinr matches the independent closed-form oracle") {
    for (double theta : {10.0, 37.0, 90.0, 150.0}) {
        for (std::size_t k : {std::size_t{1}, std::size_t{3}}) {
            for (double p_i : {10.0, 15.0}) {
                ScenarioParams p = params_with(theta, k, p_i);
                const Layout layout = make_layout(p);
                std::vector<bool> mask(k, true);
                if (k == 3) mask[1] = false;
                const double expected = oracle_sinr_db(theta, k, mask, p_i);
                const double actual = sinr(p, layout, RisStateVector{mask}).sinr_db;
                CHECK(actual == doctest::Approx(expected).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("enabling a surface raises desired power and interference monotonically in n") {
    ScenarioParams p = params_with(60.0, 1);
    const Layout layout = make_layout(p);
    const auto off = sinr(p, layout, RisStateVector::all_off(1));

    double last_desired = off.desired_mw, last_interference = off.interference_mw;
    for (std::size_t n : {std::size_t{64}, std::size_t{256}, std::size_t{1024}}) {
        p.elements_per_ris = n;
        const auto on = sinr(p, layout, RisStateVector::all_on(1));
        CHECK(on.desired_mw > last_desired);
        CHECK(on.interference_mw >= last_interference);
        last_desired = on.desired_mw;
        last_interference = on.interference_mw;
    }
}

TEST_CASE("without interference, on beats off for any surface") {
    for (double theta : {20.0, 90.0, 140.0}) {
        ScenarioParams p = params_with(theta, 2);
        const Layout layout = make_layout(p);
        const Occupancy no_interferer{true, false};
        const double off = sinr(p, layout, RisStateVector::all_off(2), no_interferer).sinr_db;
        const double on = sinr(p, layout, RisStateVector::all_on(2), no_interferer).sinr_db;
        CHECK(on > off);
    }
}

TEST_CASE("gains and powers stay positive and finite") {
    ScenarioParams p = params_with(45.0, 4);
    const Layout layout = make_layout(p);
    RisStateVector states{std::vector<bool>{true, false, true, false}};
    const auto breakdown = sinr(p, layout, states);
    CHECK(breakdown.desired_mw > 0.0);
    CHECK(breakdown.interference_mw > 0.0);
    CHECK(breakdown.noise_mw > 0.0);
    CHECK(std::isfinite(breakdown.sinr_db));
}

TEST_CASE("scenario validation rejects nonsense") {
    ScenarioParams p;
    p.d_ris_ud = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = ScenarioParams{};
    p.amp_coeff = 1.5;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = ScenarioParams{};
    p.theta_deg = 170.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = ScenarioParams{};
    p.ris_count = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("dbm conversions are inverse") {
    CHECK(dbm_to_mw(0.0) == doctest::Approx(1.0));
    CHECK(dbm_to_mw(23.0) == doctest::Approx(199.526).epsilon(1e-5));
    CHECK(mw_to_dbm(dbm_to_mw(-94.0)) == doctest::Approx(-94.0).epsilon(1e-12));
}
