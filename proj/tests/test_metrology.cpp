#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

#include "rqsl/metrology.hpp"
#include "rqsl/states.hpp"

using namespace rqsl;
using namespace rqsl::metrology;

namespace {

double level(int n, double eps) { return n + 0.5 - eps * (6.0 * n * n + 6.0 * n + 3.0) / 32.0; }

struct Sums {
    double mean;
    double second;
};

Sums coherent_sums(double a, double eps) {
    const StateVector psi = states::coherent_amplitudes({a, 0.0}, 128);
    Sums s{0, 0};
    for (int n = 0; n < 128; ++n) {
        const double w = std::norm(psi[n]);
        s.mean += w * level(n, eps);
        s.second += w * level(n, eps) * level(n, eps);
    }
    return s;
}

Sums squeezed_sums(double r, double eps) {
    const StateVector psi = states::squeezed_amplitudes({r, 0.0}, 512);
    Sums s{0, 0};
    for (int n = 0; n < 512; n += 2) {
        const double w = std::norm(psi[n]);
        s.mean += w * level(n, eps);
        s.second += w * level(n, eps) * level(n, eps);
    }
    return s;
}

// Full-Hamiltonian expectation and variance on a state built in the exact eigenbasis.
std::pair<double, double> matrix_moments(const StateVector& c, double eps) {
    const TruncatedOperator h = build_hamiltonian(256, eps);
    const LevelBasis lb = align_levels(diagonalize(h), c.dim());
    const StateVector psi = StateVector::normalized(lb.vectors * c.amps());
    return {expectation(h, psi).real(), variance(h, psi)};
}

}  // namespace

TEST_CASE("means are exact level averages") {
    for (double a : {0.3, 1.0, 2.5}) {
        for (double eps : {0.0, 1e-3, 0.05}) CHECK(coherent_energy(a, eps).mean == doctest::Approx(coherent_sums(a, eps).mean).epsilon(1e-13));
    }
    for (double r : {0.2, 0.7}) {
        for (double eps : {0.0, 1e-3, 0.05}) CHECK(squeezed_energy(r, eps).mean == doctest::Approx(squeezed_sums(r, eps).mean).epsilon(1e-13));
    }
}

TEST_CASE("second moments and variances are the first-order parts of the level sums") {
    const double h = 1e-4;
    for (double a : {0.3, 1.0, 2.5}) {
        const Sums p = coherent_sums(a, h), m = coherent_sums(a, -h), z = coherent_sums(a, 0.0);
        const double d_second = (p.second - m.second) / (2 * h);
        const double d_var = ((p.second - p.mean * p.mean) - (m.second - m.mean * m.mean)) / (2 * h);
        CHECK(coherent_energy(a, 1.0).second - coherent_energy(a, 0.0).second == doctest::Approx(d_second).epsilon(1e-8));
        CHECK(coherent_energy(a, 1.0).variance - coherent_energy(a, 0.0).variance == doctest::Approx(d_var).epsilon(1e-8));
        CHECK(coherent_energy(a, 0.0).variance == doctest::Approx(z.second - z.mean * z.mean).epsilon(1e-12));
    }
    for (double r : {0.2, 0.7}) {
        const Sums p = squeezed_sums(r, h), m = squeezed_sums(r, -h), z = squeezed_sums(r, 0.0);
        const double d_second = (p.second - m.second) / (2 * h);
        const double d_var = ((p.second - p.mean * p.mean) - (m.second - m.mean * m.mean)) / (2 * h);
        CHECK(squeezed_energy(r, 1.0).second - squeezed_energy(r, 0.0).second == doctest::Approx(d_second).epsilon(1e-8));
        CHECK(squeezed_energy(r, 1.0).variance - squeezed_energy(r, 0.0).variance == doctest::Approx(d_var).epsilon(1e-8));
        CHECK(squeezed_energy(r, 0.0).variance == doctest::Approx(z.second - z.mean * z.mean).epsilon(1e-12));
    }
}

TEST_CASE("first-order truncation identity: second - mean^2 - variance = -(eps mean_1)^2") {
    for (double a : {0.5, 1.5}) {
        for (double eps : {1e-3, 0.02}) {
            const EnergyMoments m = coherent_energy(a, eps);
            const double m1 = m.mean - coherent_energy(a, 0.0).mean;
            CHECK(m.second - m.mean * m.mean - m.variance == doctest::Approx(-m1 * m1).epsilon(1e-9));
        }
    }
    const EnergyMoments s = squeezed_energy(0.5, 0.01);
    const double m1 = s.mean - squeezed_energy(0.5, 0.0).mean;
    CHECK(s.second - s.mean * s.mean - s.variance == doctest::Approx(-m1 * m1).epsilon(1e-9));
}

TEST_CASE("full-Hamiltonian matrix oracle at O(eps^2)") {
    const StateVector c = states::coherent_amplitudes({1.0, 0.0}, 40);
    const auto [e1, v1] = matrix_moments(c, 1e-4);
    const auto [e2, v2] = matrix_moments(c, 5e-5);
    const EnergyMoments m1 = coherent_energy(1.0, 1e-4), m2 = coherent_energy(1.0, 5e-5);
    CHECK(std::abs(e1 - m1.mean) < 1e-6);
    CHECK((e1 - m1.mean) / (e2 - m2.mean) == doctest::Approx(4.0).epsilon(0.2));
    CHECK((v1 - m1.variance) / (v2 - m2.variance) == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("squeezed variance example at r = 0.5") {
    const double r = 0.5;
    const double expected = 2 * std::pow(std::cosh(r) * std::sinh(r), 2);
    CHECK(squeezed_energy(r, 0.0).variance == doctest::Approx(expected));
    CHECK(squeezed_energy(r, 0.0).variance == doctest::Approx(0.690549).epsilon(1e-6));
}

TEST_CASE("Fisher information and Cramer-Rao bound") {
    CHECK(qfi_time(0.25) == 1.0);
    CHECK(qcrb(4.0) == 0.5);
    CHECK_THROWS_AS(qfi_time(-1.0), std::invalid_argument);
    try {
        qcrb(qfi_time(coherent_energy(0.0, 0.0).variance));
        FAIL("expected invalid_argument");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("stationary") != std::string::npos);
    }
}

TEST_CASE("squeeze factor") {
    CHECK(squeeze_ratio(0.0, 0.0, 0.0, 0.0).ratio == 1.0);
    CHECK(squeeze_ratio(0.0, 0.0, 0.0, 0.0).sf_db == 0.0);
    const double r = 0.9;
    CHECK(squeeze_ratio(r, 1.0, 0.3, 0.0).sf_db == doctest::Approx(20 * r / std::log(10.0)));
    const double a2 = 2.0, th = std::numbers::pi / 4, eps = 0.05;
    const double expected = std::exp(-2 * r) - 3.0 / 64 * eps *
        (5 + 3 * std::exp(-4 * r) - 4 * a2 * std::exp(-2 * r) * (std::cos(2 * th) - 4));
    CHECK(squeeze_ratio(r, std::sqrt(a2), th, eps).ratio == doctest::Approx(expected));
    CHECK_THROWS_AS(squeeze_ratio(3.0, 0.0, 0.0, 0.5), std::invalid_argument);
    CHECK(squeeze_ratio(1.8, 0.0, 0.0, 0.08).validity_warning);
}

TEST_CASE("displaced local-oscillator amplitude") {
    const double a = 1.0, t = 10.0, eps = 1e-3;
    const std::complex<double> d = displaced_amplitude(a, t, eps);
    const double re = 1 - 72 * 5 * 1e-4, im = -12 * 2 * 1e-2;
    CHECK(std::abs(d) == doctest::Approx(std::hypot(re, im)));
    CHECK(lo_amplitude_decay(a, t, eps) == doctest::Approx(re));
    CHECK(std::abs(displaced_amplitude(a, 1.0, 0.0) - std::polar(1.0, 1.0)) < 1e-15);
    CHECK_THROWS_AS(lo_amplitude_decay(1.0, 100.0, 1e-2), std::invalid_argument);
}
