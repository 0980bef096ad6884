#include "rqsl/qsl_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rqsl::qsl {

namespace {

constexpr double kPi = std::numbers::pi;

double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }
double safe_acos(double x) { return std::acos(clamp_unit(x)); }

BoundReport make_report(double t, double epsilon, double zeroth, double coefficient, bool near_revival) {
    BoundReport r;
    r.t = t;
    r.epsilon = epsilon;
    r.zeroth = zeroth;
    r.near_revival = near_revival;
    r.coefficient = near_revival ? 0.0 : coefficient;
    r.correction = epsilon * r.coefficient;
    r.total = r.zeroth + r.correction;
    r.validity_warning = std::abs(r.correction) > 0.5 * r.zeroth && r.correction != 0.0;
    return r;
}

void require_positive(double v, const char* who, const char* what) {
    if (!(v > 0.0)) throw std::invalid_argument(std::string(who) + ": " + what);
}

// ── coherent pieces ──

struct CoherentTerms {
    double f0;         // e^{a^2 (cos t - 1)}
    double one_minus;  // 1 - f0^2
    double g;          // a^2 t (1 + a^2 cos t) sin t
    double w1;         // arccos f0
};

CoherentTerms coherent_terms(double alpha0, double t) {
    if (!(alpha0 >= 0.0)) throw std::invalid_argument("coherent: alpha0 must be >= 0");
    const double a2 = alpha0 * alpha0;
    const double expo = a2 * (std::cos(t) - 1.0);
    CoherentTerms c{};
    c.f0 = std::exp(expo);
    c.one_minus = -std::expm1(2.0 * expo);
    c.g = a2 * t * (1.0 + a2 * std::cos(t)) * std::sin(t);
    c.w1 = safe_acos(c.f0);
    return c;
}

// ── squeezed pieces ──

struct SqueezedTerms {
    double x2;         // 3 + cosh 4r - 2 cos t sinh^2 2r
    double f0;         // sqrt(2) / x2^{1/4}
    double x8_sq;      // sqrt(x2) - 2
    double one_minus;  // 1 - f0^2
    double x6;         // -4 sin t + sin 2t tanh^2 r + 2 sin t tanh^4 r
    double x7;         // 1 - 2 cos t tanh^2 r + tanh^4 r
    double k;          // t cosh^5 r sinh^2 r
    double x1;         // arccos f0
};

SqueezedTerms squeezed_terms(double r, double t) {
    if (!(r >= 0.0)) throw std::invalid_argument("squeezed: r must be >= 0");
    SqueezedTerms s{};
    const double sh2 = std::sinh(2.0 * r);
    const double half = std::sin(0.5 * t);
    // x2 - 4 = 4 sinh^2 2r sin^2(t/2); written this way it stays exact near revivals.
    const double excess = 4.0 * sh2 * sh2 * half * half;
    s.x2 = 4.0 + excess;
    const double root = std::sqrt(s.x2);
    s.x8_sq = excess / (root + 2.0);
    s.f0 = std::sqrt(2.0) / std::sqrt(root);
    s.one_minus = s.x8_sq / root;
    const double th2 = std::tanh(r) * std::tanh(r);
    s.x6 = -4.0 * std::sin(t) + std::sin(2.0 * t) * th2 + 2.0 * std::sin(t) * th2 * th2;
    const double sech2 = 1.0 - th2;
    s.x7 = sech2 * sech2 + 4.0 * th2 * half * half;
    s.k = t * std::pow(std::cosh(r), 5) * std::sinh(r) * std::sinh(r);
    s.x1 = safe_acos(s.f0);
    return s;
}

// k x6 / (x2^{7/4} x7^{1/4} x8): the common first-order factor of the squeezed angle.
double squeezed_angle_factor(const SqueezedTerms& s) {
    return s.k * s.x6 / (std::pow(s.x2, 1.75) * std::pow(s.x7, 0.25) * std::sqrt(s.x8_sq));
}

}  // namespace

// ── coherent ─────────────────────────────────────────────────────────────────

double coherent_fidelity_closed(double alpha0, double t, double epsilon) {
    const CoherentTerms c = coherent_terms(alpha0, t);
    return std::clamp(c.f0 * (1.0 + 0.375 * epsilon * c.g), 0.0, 1.0);
}

Angle coherent_angle(double alpha0, double t, double epsilon) {
    const CoherentTerms c = coherent_terms(alpha0, t);
    Angle a;
    a.zeroth = c.w1;
    a.near_revival = c.one_minus < kRevivalThreshold;
    a.correction = a.near_revival ? 0.0 : -0.375 * epsilon * c.g * c.f0 / std::sqrt(c.one_minus);
    a.value = a.zeroth + a.correction;
    return a;
}

BoundReport mt_coherent(double alpha0, double t, double epsilon) {
    require_positive(alpha0, "mt_coherent", "alpha0 must be > 0 (the vacuum does not evolve)");
    const CoherentTerms c = coherent_terms(alpha0, t);
    const bool near = c.one_minus < kRevivalThreshold;
    const double a2 = alpha0 * alpha0;
    const double zeroth = c.w1 / alpha0;
    double coeff = 0.0;
    if (!near) {
        const double v8 = std::sqrt(c.one_minus);
        coeff = 0.375 * ((1.0 + a2) * c.w1 / alpha0 - alpha0 * c.f0 * t * (1.0 + a2 * std::cos(t)) * std::sin(t) / v8);
    }
    return make_report(t, epsilon, zeroth, coeff, near);
}

BoundReport ml_coherent(double alpha0, double t, double epsilon) {
    require_positive(alpha0, "ml_coherent", "alpha0 must be > 0 (the vacuum does not evolve)");
    const CoherentTerms c = coherent_terms(alpha0, t);
    const bool near = c.one_minus < kRevivalThreshold;
    const double a2 = alpha0 * alpha0;
    const double w2 = 0.5 + a2;
    const double w3 = (1.0 + 2.0 * a2) * (1.0 + 2.0 * a2);
    const double w4 = 1.0 + 4.0 * a2 + 2.0 * a2 * a2;
    const double w5 = 4.0 * a2 * (1.0 + 2.0 * a2);
    const double zeroth = 2.0 * c.w1 * c.w1 / (w2 * kPi);
    double coeff = 0.0;
    if (!near) {
        const double w10 = std::sqrt(c.one_minus);
        const double tail = w5 * c.f0 * t * (1.0 + a2 * std::cos(t)) * std::sin(t) / w10;
        coeff = 3.0 * c.w1 / (4.0 * w3 * kPi) * (w4 * c.w1 - tail);
    }
    return make_report(t, epsilon, zeroth, coeff, near);
}

double ml_coherent_coefficient_unscaled(double alpha0, double t) {
    require_positive(alpha0, "ml_coherent_coefficient_unscaled", "alpha0 must be > 0");
    const CoherentTerms c = coherent_terms(alpha0, t);
    if (c.one_minus < kRevivalThreshold) return 0.0;
    const double a2 = alpha0 * alpha0;
    const double w3 = (1.0 + 2.0 * a2) * (1.0 + 2.0 * a2);
    const double w4 = 1.0 + 4.0 * a2 + 2.0 * a2 * a2;
    const double w5 = 4.0 * a2 * (1.0 + 2.0 * a2);
    const double tail = w5 * c.f0 * t * (1.0 + a2 * std::cos(t)) * std::sin(t) / std::sqrt(c.one_minus);
    return 3.0 / (4.0 * kPi * w3) * (w4 * c.w1 - tail);
}

// ── squeezed ─────────────────────────────────────────────────────────────────

double squeezed_fidelity_closed(double r, double t, double epsilon) {
    const SqueezedTerms s = squeezed_terms(r, t);
    const double first = 3.0 * s.k * s.x6 / (4.0 * s.x2 * s.x2 * std::pow(s.x7, 0.25));
    return std::clamp(s.f0 - epsilon * first, 0.0, 1.0);
}

double squeezed_fidelity_printed(double r, double t, double epsilon) {
    const SqueezedTerms s = squeezed_terms(r, t);
    const double first = 3.0 * s.k * s.x6 / (4.0 * s.x2 * s.x2 * std::pow(s.x7, 0.25));
    return s.f0 / std::cosh(r) - epsilon * first;
}

Angle squeezed_angle(double r, double t, double epsilon) {
    const SqueezedTerms s = squeezed_terms(r, t);
    Angle a;
    a.zeroth = s.x1;
    a.near_revival = s.one_minus < kRevivalThreshold;
    a.correction = a.near_revival ? 0.0 : epsilon * 0.75 * squeezed_angle_factor(s);
    a.value = a.zeroth + a.correction;
    return a;
}

BoundReport mt_squeezed(double r, double t, double epsilon) {
    require_positive(r, "mt_squeezed", "r must be > 0 (energy spread vanishes)");
    const SqueezedTerms s = squeezed_terms(r, t);
    const bool near = s.one_minus < kRevivalThreshold;
    const double csch = 1.0 / std::sinh(2.0 * r);
    const double zeroth = std::sqrt(2.0) * csch * s.x1;
    double coeff = 0.0;
    if (!near) {
        coeff = 3.0 * csch / (16.0 * std::sqrt(2.0)) *
                (6.0 * std::cosh(2.0 * r) * s.x1 + 8.0 * squeezed_angle_factor(s));
    }
    return make_report(t, epsilon, zeroth, coeff, near);
}

double mt_squeezed_coefficient_alt_prefactor(double r, double t) {
    require_positive(r, "mt_squeezed_coefficient_alt_prefactor", "r must be > 0");
    const SqueezedTerms s = squeezed_terms(r, t);
    if (s.one_minus < kRevivalThreshold) return 0.0;
    const double y3 = std::sqrt(2.0) / std::sinh(2.0 * r);
    return 3.0 * y3 / (16.0 * std::sqrt(2.0)) * (6.0 * std::cosh(2.0 * r) * s.x1 + 8.0 * squeezed_angle_factor(s));
}

BoundReport ml_squeezed(double r, double t, double epsilon) {
    require_positive(r, "ml_squeezed", "r must be > 0 (energy spread vanishes)");
    const SqueezedTerms s = squeezed_terms(r, t);
    const bool near = s.one_minus < kRevivalThreshold;
    const double x3 = 1.0 / std::cosh(2.0 * r);
    const double x4 = 1.0 + 3.0 * std::cosh(4.0 * r);
    const double zeroth = 4.0 * x3 * s.x1 * s.x1 / kPi;
    double coeff = 0.0;
    if (!near) {
        coeff = 3.0 * x3 / (16.0 * kPi) * s.x1 * (x4 * x3 * s.x1 + 32.0 * squeezed_angle_factor(s));
    }
    return make_report(t, epsilon, zeroth, coeff, near);
}

// ── unified ──────────────────────────────────────────────────────────────────

BoundReport t_qsl(const BoundReport& mt, const BoundReport& ml) { return ml.total > mt.total ? ml : mt; }

}  // namespace rqsl::qsl
