#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rqsl/states.hpp"

using namespace rqsl;
using namespace rqsl::states;

TEST_CASE("coherent amplitudes") {
    const StateVector psi = coherent_amplitudes({1.5, 0.3}, 64);
    // Direct product form, small n.
    Complex direct = std::exp(-0.5 * 1.5 * 1.5);
    for (int n = 0; n < 10; ++n) {
        CHECK(std::abs(psi[n] - direct) < 1e-14);
        direct *= std::polar(1.5, 0.3) / std::sqrt(n + 1.0);
    }
    CHECK(psi.amps().norm() == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(psi.tail() < kTailTolerance);
    CHECK(expectation(build_number(64), psi).real() == doctest::Approx(2.25).epsilon(1e-12));
}

TEST_CASE("coherent cutoff handling") {
    CHECK(coherent_tail(0.0, 8) == 0.0);
    double head = 0.0, term = std::exp(-4.0);
    for (int n = 0; n < 8; ++n, term *= 4.0 / n) head += term;
    CHECK(coherent_tail(2.0, 8) == doctest::Approx(1.0 - head).epsilon(1e-12));
    const int need = coherent_required_dim(3.0);
    CHECK(coherent_tail(3.0, need) < kTailTolerance);
    CHECK(coherent_tail(3.0, need - 1) >= kTailTolerance);
    try {
        coherent_amplitudes({3.0, 0.0}, 16);
        FAIL("expected CutoffError");
    } catch (const CutoffError& e) {
        CHECK(e.required_dim() == need);
    }
    CHECK_THROWS_AS(coherent_amplitudes({31.0, 0.0}, 2048), std::invalid_argument);
    CHECK_THROWS_AS(coherent_amplitudes({-1.0, 0.0}, 64), std::invalid_argument);
    // Large amplitudes stay finite through the log-space evaluation.
    const StateVector big = coherent_amplitudes({25.0, 0.0}, 1200);
    CHECK(std::isfinite(big[625].real()));
}

TEST_CASE("coherent overlap at eps = 0 matches the generating function") {
    for (double a : {0.5, 1.0, 2.0}) {
        for (double t : {0.3, 1.7, 4.0}) {
            const Complex expected = std::polar(1.0, -t / 2.0) * std::exp(a * a * (std::polar(1.0, -t) - 1.0));
            CHECK(std::abs(coherent_overlap_numeric({a, 0.0}, t, 0.0, 128) - expected) < 1e-13);
        }
    }
}

TEST_CASE("squeezed recursion equals the factorial closed form") {
    for (double r : {0.1, 0.8, 2.0}) {
        const auto rec = squeezed_coeffs({r, 0.0}, 1000);
        const auto closed = squeezed_coeffs_closed(r, 1000);
        for (int n = 0; n < 1000; ++n) CHECK(std::abs(rec[n] - closed[n]) < 1e-14);
    }
    const auto rotated = squeezed_coeffs({0.5, 1.0}, 30);
    const auto closed = squeezed_coeffs_closed(0.5, 30);
    CHECK(std::abs(rotated[3] - closed[3] * std::polar(1.0, 3.0)) < 1e-14);
}

TEST_CASE("squeezed vacuum moments") {
    const double r = 0.6;
    const StateVector psi = squeezed_amplitudes({r, 0.0}, 128);
    CHECK(psi[1] == Complex(0.0));
    CHECK(psi[7] == Complex(0.0));
    CHECK(expectation(build_number(128), psi).real() == doctest::Approx(std::pow(std::sinh(r), 2)).epsilon(1e-12));
    const TruncatedOperator x = build_position(128);
    CHECK(expectation(x * x, psi).real() == doctest::Approx(0.5 * std::exp(-2 * r)).epsilon(1e-12));
}

TEST_CASE("squeezed cutoff handling") {
    CHECK_THROWS_AS(squeezed_amplitudes({5.0, 0.0}, 4096), CutoffError);
    try {
        squeezed_amplitudes({1.5, 0.0}, 16);
        FAIL("expected CutoffError");
    } catch (const CutoffError& e) {
        CHECK(e.required_dim() > 16);
        CHECK_NOTHROW(squeezed_amplitudes({1.5, 0.0}, e.required_dim()));
    }
}

TEST_CASE("squeezed overlaps at eps = 0 match their generating functions") {
    for (double r : {0.2, 0.9}) {
        const double sech = 1.0 / std::cosh(r);
        const double th2 = std::pow(std::tanh(r), 2);
        for (double t : {0.4, 2.5}) {
            const Complex photon = std::polar(1.0, -t / 2.0) * sech / std::sqrt(1.0 - th2 * std::polar(1.0, -2 * t));
            const Complex pair = std::polar(1.0, -t / 2.0) * sech / std::sqrt(1.0 - th2 * std::polar(1.0, -t));
            CHECK(std::abs(squeezed_overlap_numeric({r, 0.0}, t, 0.0, 256) - photon) < 1e-13);
            CHECK(std::abs(squeezed_overlap_pair_phase({r, 0.0}, t, 0.0, 256) - pair) < 1e-13);
        }
    }
    CHECK_THROWS_AS(squeezed_overlap_numeric({0.3, 0.5}, 1.0, 0.0, 64), std::invalid_argument);
}
