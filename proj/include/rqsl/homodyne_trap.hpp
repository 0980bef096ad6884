#pragma once

// Balanced homodyne observables, relativistic phase and time resolution, and
// the Penning-trap Allan-deviation budget. This module owns the SI boundary:
// everything upstream is in natural oscillator units.

#include <cstdint>
#include <numbers>
#include <random>

namespace rqsl::bhd {

constexpr double kPlanck = 6.62607015e-34;      // J s, exact
constexpr double kSpeedOfLight = 299792458.0;   // m/s, exact
constexpr double kElectronMass = 9.1093837015e-31;
constexpr double kProtonMass = 1.67262192369e-27;
/// Shot-noise Allan deviation at tau = 1 s quoted for the reference trap.
constexpr double kQuotedShotNoiseAt1s = 5.3e-22;

struct BhdConfig {
    double alpha_s = 1.0;
    double alpha_lo_mag = 1.0;
    double delta_psi = std::numbers::pi / 2.0;
    double omega_s = 1.0;
    double omega_lo = 0.0;
};

struct TrapConfig {
    double nu = 149e9;       // Hz
    double p_lo = 1e-3;      // W
    double kappa = 2.0e2;
    double epsilon = 1.5e-10;
    double mass = kElectronMass;
    double planck_h = kPlanck;
};

void validate(const BhdConfig& cfg);
void validate(const TrapConfig& trap);

double i_diff_mean(const BhdConfig& cfg);
double i_diff_variance(const BhdConfig& cfg);

/// 72 alpha_s^2 (|a|^4 + 3|a|^2 + 1) / (|a|^2 + alpha_s^2): multiplies eps^2 t^2.
double phase_drift_coefficient(const BhdConfig& cfg);
/// 1 + C eps^2 t^2.
double sensitivity_bracket(const BhdConfig& cfg, double t, double epsilon);
double phase_sensitivity(const BhdConfig& cfg, double t, double epsilon);
double time_resolution(const BhdConfig& cfg, double t, double epsilon);

double allan_shot_noise(const TrapConfig& trap, double tau);
double allan_relativistic(const TrapConfig& trap, double tau);
/// [h nu / (pi^2 P)]^{1/5} (kappa eps^2)^{-2/5}.
double crossover_closed(const TrapConfig& trap);
/// Root of allan_shot_noise = allan_relativistic by bisection in log tau on [1e-6, 1e12] s.
double crossover_numeric(const TrapConfig& trap);
/// eps = h nu / (8 m c^2).
double epsilon_from_trap(double nu, double mass);

/// Sample moments of simulated photocurrent differences.
struct PhotocountStats {
    long long shots = 0;
    double mean = 0.0;
    double variance = 0.0;
    double mean_stderr = 0.0;
    double variance_stderr = 0.0;
};

/// Independent Poisson counts at the two 50:50 output ports with means
/// |alpha_s +- alpha_lo e^{i delta_psi}|^2 / 2; returns moments of n1 - n2.
PhotocountStats sample_photocurrent(const BhdConfig& cfg, long long shots, std::mt19937_64& rng);

}  // namespace rqsl::bhd
