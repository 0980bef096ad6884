#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rqsl/homodyne_trap.hpp"

using namespace rqsl::bhd;

namespace {

constexpr double kPi = std::numbers::pi;

TrapConfig reference_trap() {
    TrapConfig t;
    t.epsilon = epsilon_from_trap(t.nu, t.mass);
    return t;
}

}  // namespace

TEST_CASE("balanced-detector moments and error propagation") {
    BhdConfig cfg;
    cfg.alpha_s = 2.0;
    cfg.alpha_lo_mag = 5.0;
    cfg.delta_psi = 1.1;
    CHECK(i_diff_mean(cfg) == doctest::Approx(20.0 * std::cos(1.1)));
    CHECK(i_diff_variance(cfg) == doctest::Approx(29.0));
    const double h = 1e-6;
    BhdConfig up = cfg, down = cfg;
    up.delta_psi += h;
    down.delta_psi -= h;
    const double slope = (i_diff_mean(up) - i_diff_mean(down)) / (2 * h);
    CHECK(phase_sensitivity(cfg, 0.0, 0.0) == doctest::Approx(std::sqrt(29.0) / std::abs(slope)).epsilon(1e-8));
    CHECK(phase_sensitivity(cfg, 3.0, 1e-3) ==
          doctest::Approx(phase_sensitivity(cfg, 0.0, 0.0) * (1 + phase_drift_coefficient(cfg) * 9e-6)));
    cfg.omega_lo = 0.25;
    CHECK(time_resolution(cfg, 0.0, 0.0) == doctest::Approx(phase_sensitivity(cfg, 0.0, 0.0) / 0.75));
}

TEST_CASE("drift coefficient") {
    BhdConfig cfg;
    cfg.alpha_s = 1.0;
    cfg.alpha_lo_mag = 1.0;
    CHECK(phase_drift_coefficient(cfg) == doctest::Approx(72.0 * 5.0 / 2.0));
}

TEST_CASE("validation") {
    BhdConfig cfg;
    cfg.delta_psi = kPi;
    CHECK_THROWS_AS(phase_sensitivity(cfg, 0.0, 0.0), std::invalid_argument);
    cfg.delta_psi = 1.0;
    cfg.alpha_s = 0.0;
    CHECK_THROWS_AS(i_diff_mean(cfg), std::invalid_argument);
    BhdConfig same;
    same.omega_lo = same.omega_s;
    CHECK_THROWS_AS(time_resolution(same, 0.0, 0.0), std::invalid_argument);
    TrapConfig t = reference_trap();
    t.p_lo = 0.0;
    CHECK_THROWS_AS(crossover_closed(t), std::invalid_argument);
    CHECK_THROWS_AS(allan_shot_noise(reference_trap(), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(epsilon_from_trap(-1.0, kElectronMass), std::invalid_argument);
}

TEST_CASE("trap epsilon") {
    const double eps = epsilon_from_trap(149e9, kElectronMass);
    const double expected = 6.62607015e-34 * 149e9 / (8 * 9.1093837015e-31 * 299792458.0 * 299792458.0);
    CHECK(eps == doctest::Approx(expected).epsilon(1e-15));
    CHECK(eps == doctest::Approx(1.5073770867e-10).epsilon(1e-10));
    CHECK(std::abs(eps / 1.5e-10 - 1) < 0.01);
    CHECK(epsilon_from_trap(149e9, kProtonMass) < eps / 1800);
}

TEST_CASE("Allan deviations and crossover") {
    const TrapConfig t = reference_trap();
    CHECK(allan_shot_noise(t, 1.0) == doctest::Approx(1.6781277400e-22).epsilon(1e-9));
    CHECK(allan_shot_noise(t, 4.0) == doctest::Approx(allan_shot_noise(t, 1.0) / 8.0));
    CHECK(allan_relativistic(t, 2.0) == doctest::Approx(t.kappa * t.epsilon * t.epsilon));

    const double closed = crossover_closed(t);
    CHECK(std::abs(closed / 870.0 - 1) < 0.02);
    // Root of sigma_sn = sigma_rel solved by hand.
    const double root = std::pow(t.planck_h * t.nu / (4 * t.p_lo), 0.2) *
                        std::pow(kPi * t.nu * t.kappa * t.epsilon * t.epsilon, -0.4);
    const double numeric = crossover_numeric(t);
    CHECK(numeric == doctest::Approx(root).epsilon(1e-9));
    CHECK(allan_shot_noise(t, numeric) == doctest::Approx(allan_relativistic(t, numeric)).epsilon(1e-9));
    CHECK(numeric / closed == doctest::Approx(std::pow(2 * t.nu, -0.4)).epsilon(1e-9));

    TrapConfig fixture = t;
    fixture.nu = 0.5;
    CHECK(crossover_numeric(fixture) == doctest::Approx(crossover_closed(fixture)).epsilon(1e-9));
}

TEST_CASE("photocount Monte Carlo") {
    BhdConfig cfg;
    cfg.alpha_s = 3.0;
    cfg.alpha_lo_mag = 3.0;
    cfg.delta_psi = 0.4;
    std::mt19937_64 a(7), b(7), c(8);
    const PhotocountStats s1 = sample_photocurrent(cfg, 200000, a);
    const PhotocountStats s2 = sample_photocurrent(cfg, 200000, b);
    const PhotocountStats s3 = sample_photocurrent(cfg, 200000, c);
    CHECK(s1.mean == s2.mean);
    CHECK(s1.variance == s2.variance);
    CHECK(s1.mean != s3.mean);
    CHECK(std::abs(s1.mean - i_diff_mean(cfg)) < 4 * s1.mean_stderr);
    CHECK(std::abs(s1.variance - i_diff_variance(cfg)) < 4 * s1.variance_stderr);

    // One port dark: the distribution must not be sampled with mean zero.
    cfg.delta_psi = 0.0;
    const PhotocountStats dark = sample_photocurrent(cfg, 100000, a);
    CHECK(std::abs(dark.mean - 18.0) < 4 * dark.mean_stderr);
    CHECK_THROWS_AS(sample_photocurrent(cfg, 1, a), std::invalid_argument);
}
