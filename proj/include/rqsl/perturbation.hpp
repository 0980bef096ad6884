#pragma once

// First-order Rayleigh-Schroedinger theory for H = H0 - eps p^4/8.
//
// Energies are E_n = (n + 1/2) - eps (6n^2 + 6n + 3)/32. The mixing
// coefficients below enter the first-order eigenvector as
//
//   |n> = |n_0> - (eps/32) [B4 |n+4> + B2 |n+2> + B-2 |n-2> + B-4 |n-4>].
//
// Second-order corrections are not implemented.

#include "rqsl/fock_core.hpp"

namespace rqsl::perturbation {

struct PerturbedLevel {
    int n;
    double e0;  // n + 1/2
    double e1;  // coefficient of -eps
};

struct MixingCoefficients {
    int n;
    double b4;
    double b2;
    double b0;  // 6n^2 + 6n + 3, the diagonal element times 32
    double bm2;
    double bm4;
};

PerturbedLevel level(int n);
double energy(int n, double epsilon);
MixingCoefficients mixing_coefficients(int n);

/// First-order eigenvector expressed in the unperturbed basis, renormalized.
/// Requires n + 4 < dim.
StateVector perturbed_eigenstate(int n, double epsilon, int dim);

struct CorrectedOperators {
    TruncatedOperator a;
    TruncatedOperator adag;
    TruncatedOperator x;
    TruncatedOperator p;
};

/// a = a0 + (eps/32)(-2 a0^3 + 6 N0 a0^dagger - a0^dagger^3), its adjoint,
/// and x = (a + a^dagger)/sqrt(2), p = i(a^dagger - a)/sqrt(2).
///
/// Products are formed on a padded space and cropped, like build_hamiltonian.
CorrectedOperators corrected_operators(double epsilon, int dim);

/// Position and momentum exactly as the closed-form x/p expressions with the
/// 3 eps/(32 sqrt 2) terms are printed. These disagree with the quadratures of
/// corrected ladder operators at O(eps); kept for the discrepancy report.
std::pair<TruncatedOperator, TruncatedOperator> printed_position_momentum(double epsilon, int dim);

/// N + 1/2 - (eps/32)(6N^2 + 6N + 3) at real N.
double hamiltonian_in_number_operator(double n_value, double epsilon);

/// E_n - E_{n-1} = 1 - (3/8) n eps from the level formula above.
double level_spacing(int n, double epsilon);
/// 1 - 12 n eps, the spacing used by the displaced-amplitude (LO decay) chain.
double level_spacing_lo_chain(int n, double epsilon);

}  // namespace rqsl::perturbation
