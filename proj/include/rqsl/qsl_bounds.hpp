#pragma once

// Closed-form Mandelstam-Tamm (S / dH) and Margolus-Levitin (2 S^2 / (pi <E>))
// speed limits for coherent and squeezed states, each to first order in eps.

namespace rqsl::qsl {

/// One bound evaluated at (t, eps). `coefficient` is the term multiplying
/// eps; `correction` = eps * coefficient, so total = zeroth + correction.
struct BoundReport {
    double t = 0.0;
    double epsilon = 0.0;
    double zeroth = 0.0;
    double coefficient = 0.0;
    double correction = 0.0;
    double total = 0.0;
    bool near_revival = false;
    bool validity_warning = false;  // |correction| > 0.5 * zeroth
};

/// Fubini-Study angle S = arccos|<psi(0)|psi(t)>| expanded to first order.
struct Angle {
    double value = 0.0;
    double zeroth = 0.0;
    double correction = 0.0;
    bool near_revival = false;
};

/// Below this value of 1 - F0^2 the first-order term (which carries
/// 1/sqrt(1 - F0^2)) is suppressed and the point is flagged.
constexpr double kRevivalThreshold = 1e-9;

// ── coherent ─────────────────────────────────────────────────────────────────

/// e^{a^2(cos t - 1)} [1 + (3 eps/8) a^2 t (1 + a^2 cos t) sin t], clamped to [0, 1].
double coherent_fidelity_closed(double alpha0, double t, double epsilon);
Angle coherent_angle(double alpha0, double t, double epsilon);
BoundReport mt_coherent(double alpha0, double t, double epsilon);
BoundReport ml_coherent(double alpha0, double t, double epsilon);

/// ML coefficient in the alternative stated form, which lacks the overall
/// arccos F0 factor. Report use only.
double ml_coherent_coefficient_unscaled(double alpha0, double t);

// ── squeezed vacuum (theta = 0) ──────────────────────────────────────────────

/// sqrt(2)/x2^{1/4} plus the printed first-order term, clamped to [0, 1].
/// x2 = 3 + cosh 4r - 2 cos t sinh^2 2r.
double squeezed_fidelity_closed(double r, double t, double epsilon);
/// Leading term with the printed extra sech r factor (equals sech r at t = 0).
double squeezed_fidelity_printed(double r, double t, double epsilon);
Angle squeezed_angle(double r, double t, double epsilon);
BoundReport mt_squeezed(double r, double t, double epsilon);
BoundReport ml_squeezed(double r, double t, double epsilon);

/// MT coefficient with the alternative prefactor 3 y3/(16 sqrt 2), y3 = sqrt(2) csch 2r.
/// It is sqrt(2) times the coefficient of S/dH. Report use only.
double mt_squeezed_coefficient_alt_prefactor(double r, double t);

// ── unified ──────────────────────────────────────────────────────────────────

/// The report with the larger total; ties go to MT.
BoundReport t_qsl(const BoundReport& mt, const BoundReport& ml);

}  // namespace rqsl::qsl
