#pragma once

// GMCS CV-QKD noise budget with a relativistic LO phase-drift term, reverse
// reconciliation, asymptotic key rate. All noise terms are input-referred, in SNU.

#include <vector>

#include <Eigen/Dense>

namespace rqsl::qkd {

enum class Detection { homodyne, heterodyne };
enum class Predictor { zoh, linear };

struct QkdLinkParams {
    double transmissivity = 0.5;
    double v_a = 4.0;
    double xi_base = 0.01;
    double chi_det = 0.0;
    double beta = 0.95;
    Detection detection = Detection::homodyne;
    /// Detection noise is excluded from Eve's purification when true.
    bool trusted_detection = true;
};

struct PhaseNoiseParams {
    double sigma_phi0_sq = 1e-4;
    double c_factor = 0.0;
    double gamma = 0.0;
    double epsilon = 0.0;
    double t_window = 0.0;
    double t_pilot = 0.0;
    double dt = 0.0;
    Predictor predictor = Predictor::zoh;
};

void validate(const QkdLinkParams& link);
void validate(const PhaseNoiseParams& p);

double chi_line(double transmissivity);
/// sigma_phi^2 (V_A + 1/T).
double delta_xi_phase(double sigma_phi_sq, double transmissivity, double v_a);
/// sigma_phi0^2 (1 + 2 C eps^2 t^2).
double sigma_phi_est_sq(const PhaseNoiseParams& p);
/// zoh: gamma (2 t_p dt + dt^2); linear: gamma dt^2.
double residual_drift(const PhaseNoiseParams& p);
/// [2 C eps^2 t^2 sigma_phi0^2 + residual_drift^2] (V_A + 1/T).
double delta_xi_rel(const PhaseNoiseParams& p, const QkdLinkParams& link);
/// (1 - T)/T + xi_base + extra + chi_det.
double chi_total(const QkdLinkParams& link, double extra_noise);

/// Homodyne: 1/2 log2((V + chi)/(1 + chi)); heterodyne drops the 1/2. V = V_A + 1.
double mutual_information(const QkdLinkParams& link, double chi_tot);

/// g(x) = (x + 1) log2(x + 1) - x log2 x, with g(0) = 0.
double entropy_g(double x);

/// Symplectic eigenvalues of a covariance matrix ordered (x1, p1, x2, p2, ...),
/// ascending. Requires a positive-definite input.
std::vector<double> symplectic_eigenvalues(const Eigen::MatrixXd& gamma);

struct HolevoDetail {
    double chi_be = 0.0;
    double chi_eve = 0.0;  // channel noise attributed to Eve
    double eta = 1.0;      // efficiency of the trusted-noise beam splitter
    std::vector<double> nu_before;
    std::vector<double> nu_after;
};

/// Reverse-reconciliation Holevo bound on Eve's information from the
/// entangling-cloner covariance matrices. Trusted detection noise is a beam
/// splitter with vacuum ancilla in front of an ideal detector.
HolevoDetail holevo_detail(const QkdLinkParams& link, double chi_tot);
double holevo_bound(const QkdLinkParams& link, double chi_tot);

struct KeyRate {
    double delta_xi_rel = 0.0;
    double chi_tot = 0.0;
    double i_ab = 0.0;
    double chi_be = 0.0;
    double k = 0.0;
    double k_clamped = 0.0;  // max(k, 0)
};

KeyRate key_rate_for_chi(const QkdLinkParams& link, double chi_tot);
KeyRate key_rate(const QkdLinkParams& link, const PhaseNoiseParams& p);

/// gamma = kappa eps^2.
double drift_curvature(double kappa, double epsilon);

}  // namespace rqsl::qkd
