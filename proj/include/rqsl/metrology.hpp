#pragma once

// Energy moments, time-estimation Fisher information, the relativistic squeeze
// factor and the displaced local-oscillator amplitude. Energies in units of
// hbar*omega, first order in eps throughout.

#include <complex>

namespace rqsl::metrology {

/// `second` and `variance` are each first-order expansions, so
/// second - mean^2 differs from variance by (eps * mean_1)^2.
struct EnergyMoments {
    double mean = 0.0;
    double second = 0.0;
    double variance = 0.0;
    bool validity_warning = false;
};

struct SqueezeFactorPoint {
    double ratio = 0.0;  // dX_s^2 / dX_c^2
    double sf_db = 0.0;  // -10 log10(ratio)
    bool validity_warning = false;
};

/// Quadrature variance of the coherent benchmark.
constexpr double kCoherentQuadratureVariance = 0.25;

EnergyMoments coherent_energy(double alpha0, double epsilon);
EnergyMoments squeezed_energy(double r, double epsilon);

/// F_t = 4 dH^2.
double qfi_time(double variance);
/// 1 / sqrt(F_t); rejects F_t <= 0.
double qcrb(double qfi);

/// ratio = e^{-2r} - (3/64) eps (5 + 3 e^{-4r} - 4 alpha0^2 e^{-2r}(cos 2 theta - 4)).
SqueezeFactorPoint squeeze_ratio(double r, double alpha0, double theta, double epsilon);

/// alpha e^{it} [1 - 12 i (|alpha|^2 + 1) eps t - 72 (|alpha|^4 + 3|alpha|^2 + 1) eps^2 t^2].
std::complex<double> displaced_amplitude(double alpha_mag, double t, double epsilon);
/// |alpha| [1 - 72 (|alpha|^4 + 3|alpha|^2 + 1) eps^2 t^2]; rejects a negative factor.
double lo_amplitude_decay(double alpha_mag, double t, double epsilon);

}  // namespace rqsl::metrology
