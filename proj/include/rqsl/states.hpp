#pragma once

// Relativistic coherent and squeezed states written in the perturbed number
// basis {|n>}. Their number statistics are the usual Poisson / even-photon
// distributions; relativity only enters through the phases exp(-i E_n t).

#include <complex>
#include <vector>

#include "rqsl/fock_core.hpp"

namespace rqsl::states {

/// Initial amplitude |alpha(0)| and phase of a coherent state.
struct CoherentSpec {
    double alpha0 = 0.0;
    double theta = 0.0;
};

/// Squeezing parameter zeta = r e^{i theta}.
struct SqueezeSpec {
    double r = 0.0;
    double theta = 0.0;
};

constexpr double kMaxFockAlpha = 30.0;
constexpr double kMaxSqueeze = 5.0;
constexpr double kTailTolerance = 1e-12;

/// Poisson tail beyond `dim` levels: e^{-a^2} sum_{n >= dim} a^{2n}/n!.
double coherent_tail(double alpha0, int dim);
/// Smallest cutoff whose Poisson tail is below kTailTolerance.
int coherent_required_dim(double alpha0);

/// amps[n] = e^{-a^2/2} (a e^{i theta})^n / sqrt(n!), log-space evaluation.
/// Throws CutoffError (naming the required cutoff) when the tail is too heavy.
StateVector coherent_amplitudes(const CoherentSpec& spec, int dim);

/// <alpha'(0)|alpha'(t)> = sum_n |amps[n]|^2 exp(-i E_n t), E_n first order.
Complex coherent_overlap_numeric(const CoherentSpec& spec, double t, double epsilon, int dim);

/// f(0), f(2), ..., f(2(n_pairs-1)) from the annihilation-condition recursion.
std::vector<Complex> squeezed_coeffs(const SqueezeSpec& spec, int n_pairs);
/// Same coefficients from the factorial closed form; theta = 0 only.
std::vector<double> squeezed_coeffs_closed(double r, int n_pairs);

/// Squeezed vacuum on `dim` levels (odd components exactly zero).
StateVector squeezed_amplitudes(const SqueezeSpec& spec, int dim);

/// <zeta|zeta(t)> = sum_n |f(2n)|^2 exp(-i E_{2n} t). theta must be 0.
Complex squeezed_overlap_numeric(const SqueezeSpec& spec, double t, double epsilon, int dim);

/// sum_n |f(2n)|^2 exp(-i E_n t): the pair index, not the photon number, sets
/// the phase. This is the sum the closed-form squeezed fidelity expands; it is
/// not the physical propagation above and is only used for diagnostics.
Complex squeezed_overlap_pair_phase(const SqueezeSpec& spec, double t, double epsilon, int dim);

}  // namespace rqsl::states
