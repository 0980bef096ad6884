#include "rqsl/perturbation.hpp"

#include <cmath>
#include <sstream>

namespace rqsl::perturbation {

namespace {

double sqrt_product(long long a, long long b, long long c, long long d) {
    if (a < 0 || b < 0 || c < 0 || d < 0) return 0.0;
    return std::sqrt(static_cast<double>(a) * static_cast<double>(b) * static_cast<double>(c) * static_cast<double>(d));
}

double sqrt_product(long long a, long long b) {
    if (a < 0 || b < 0) return 0.0;
    return std::sqrt(static_cast<double>(a) * static_cast<double>(b));
}

Eigen::MatrixXcd padded_lowering(int big) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(big, big);
    for (int n = 1; n < big; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

}  // namespace

PerturbedLevel level(int n) {
    if (n < 0) throw std::invalid_argument("level: n must be non-negative");
    const double nn = n;
    return {n, nn + 0.5, (6.0 * nn * nn + 6.0 * nn + 3.0) / 32.0};
}

double energy(int n, double epsilon) {
    const PerturbedLevel l = level(n);
    return l.e0 - epsilon * l.e1;
}

MixingCoefficients mixing_coefficients(int n) {
    if (n < 0) throw std::invalid_argument("mixing_coefficients: n must be non-negative");
    const long long m = n;
    MixingCoefficients c{};
    c.n = n;
    c.b4 = -sqrt_product(m + 1, m + 2, m + 3, m + 4) / 4.0;
    c.b2 = (2.0 * m + 3.0) * sqrt_product(m + 1, m + 2);
    c.b0 = 6.0 * m * m + 6.0 * m + 3.0;
    c.bm2 = (n >= 2) ? -(2.0 * m - 1.0) * sqrt_product(m, m - 1) : 0.0;
    c.bm4 = (n >= 4) ? sqrt_product(m - 3, m - 2, m - 1, m) / 4.0 : 0.0;
    return c;
}

StateVector perturbed_eigenstate(int n, double epsilon, int dim) {
    if (n < 0) throw std::invalid_argument("perturbed_eigenstate: n must be non-negative");
    if (n + 4 >= dim) {
        std::ostringstream os;
        os << "perturbed_eigenstate: level " << n << " couples to " << n + 4 << ", outside cutoff " << dim;
        throw CutoffError(os.str(), n + 5);
    }
    const MixingCoefficients c = mixing_coefficients(n);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    const double k = epsilon / 32.0;
    v(n) = 1.0;
    v(n + 4) -= k * c.b4;
    v(n + 2) -= k * c.b2;
    if (n >= 2) v(n - 2) -= k * c.bm2;
    if (n >= 4) v(n - 4) -= k * c.bm4;
    return StateVector::normalized(std::move(v));
}

CorrectedOperators corrected_operators(double epsilon, int dim) {
    if (dim < 16) throw CutoffError("corrected_operators: cutoff must be at least 16", 16);
    const int big = dim + 3;
    const Eigen::MatrixXcd a0 = padded_lowering(big);
    const Eigen::MatrixXcd ad0 = a0.adjoint();
    const Eigen::MatrixXcd n0 = ad0 * a0;
    const Eigen::MatrixXcd a3 = a0 * a0 * a0;
    const Eigen::MatrixXcd ad3 = ad0 * ad0 * ad0;
    const Eigen::MatrixXcd corr = -2.0 * a3 + 6.0 * n0 * ad0 - ad3;
    const Eigen::MatrixXcd a = (a0 + (epsilon / 32.0) * corr).topLeftCorner(dim, dim);
    const Eigen::MatrixXcd ad = a.adjoint();
    const Complex i(0.0, 1.0);
    const double s = 1.0 / std::sqrt(2.0);
    return {TruncatedOperator(a), TruncatedOperator(ad), TruncatedOperator(s * (a + ad)),
            TruncatedOperator(i * s * (ad - a))};
}

std::pair<TruncatedOperator, TruncatedOperator> printed_position_momentum(double epsilon, int dim) {
    if (dim < 16) throw CutoffError("printed_position_momentum: cutoff must be at least 16", 16);
    const int big = dim + 3;
    const Eigen::MatrixXcd a0 = padded_lowering(big);
    const Eigen::MatrixXcd ad0 = a0.adjoint();
    const Eigen::MatrixXcd n0 = ad0 * a0;
    const Eigen::MatrixXcd a3 = a0 * a0 * a0;
    const Eigen::MatrixXcd ad3 = ad0 * ad0 * ad0;
    const Complex i(0.0, 1.0);
    const double s = 1.0 / std::sqrt(2.0);
    const double k = 3.0 * epsilon / (32.0 * std::sqrt(2.0));
    const Eigen::MatrixXcd x = s * (ad0 + a0) + k * (a3 + ad3 - 2.0 * (a0 * n0 + n0 * ad0));
    const Eigen::MatrixXcd p = i * s * (ad0 - a0) - i * k * (a3 - ad3);
    return {TruncatedOperator(x.topLeftCorner(dim, dim)), TruncatedOperator(p.topLeftCorner(dim, dim))};
}

double hamiltonian_in_number_operator(double n_value, double epsilon) {
    return n_value + 0.5 - (epsilon / 32.0) * (6.0 * n_value * n_value + 6.0 * n_value + 3.0);
}

double level_spacing(int n, double epsilon) {
    if (n < 1) throw std::invalid_argument("level_spacing: n must be >= 1");
    return energy(n, epsilon) - energy(n - 1, epsilon);
}

double level_spacing_lo_chain(int n, double epsilon) {
    if (n < 1) throw std::invalid_argument("level_spacing_lo_chain: n must be >= 1");
    return 1.0 - 12.0 * n * epsilon;
}

}  // namespace rqsl::perturbation
