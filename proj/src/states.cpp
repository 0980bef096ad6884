#include "rqsl/states.hpp"

#include <cmath>
#include <sstream>

#include "rqsl/perturbation.hpp"

namespace rqsl::states {

namespace {

void check_alpha(double alpha0, const char* who) {
    if (!(alpha0 >= 0.0)) throw std::invalid_argument(std::string(who) + ": alpha0 must be >= 0");
    if (alpha0 > kMaxFockAlpha) {
        std::ostringstream os;
        os << who << ": alpha0 = " << alpha0 << " exceeds the Fock-construction cap of " << kMaxFockAlpha
           << "; use the closed-form routines for large amplitudes";
        throw std::invalid_argument(os.str());
    }
}

void check_squeeze(const SqueezeSpec& spec, const char* who) {
    if (!(spec.r >= 0.0)) throw std::invalid_argument(std::string(who) + ": r must be >= 0");
    if (spec.r >= kMaxSqueeze) {
        std::ostringstream os;
        os << who << ": r = " << spec.r << " is too large for a truncated Fock expansion (limit " << kMaxSqueeze << ")";
        throw CutoffError(os.str(), -1);
    }
}

double log_poisson(double alpha0, int n) {
    if (alpha0 == 0.0) return n == 0 ? 0.0 : -INFINITY;
    const double a2 = alpha0 * alpha0;
    return -a2 + 2.0 * n * std::log(alpha0) - std::lgamma(n + 1.0);
}

// Poisson weights far enough out that the remainder is below double precision.
std::vector<double> poisson_weights(double alpha0) {
    const double a2 = alpha0 * alpha0;
    const int n_max = static_cast<int>(std::ceil(a2 + 40.0 * alpha0 + 60.0));
    std::vector<double> w(n_max + 1);
    for (int n = 0; n <= n_max; ++n) w[n] = std::exp(log_poisson(alpha0, n));
    return w;
}

// |f(2n)|^2 = (2n)! tanh^{2n} r / (4^n (n!)^2 cosh r)
double log_pair_weight(double r, int n) {
    if (r == 0.0) return n == 0 ? 0.0 : -INFINITY;
    return std::lgamma(2.0 * n + 1.0) + 2.0 * n * std::log(std::tanh(r)) - 2.0 * n * std::log(2.0) -
           2.0 * std::lgamma(n + 1.0) - std::log(std::cosh(r));
}

double pair_tail(double r, int n_pairs) {
    if (r == 0.0) return 0.0;
    double tail = 0.0;
    for (int n = n_pairs;; ++n) {
        const double w = std::exp(log_pair_weight(r, n));
        tail += w;
        if (w < 1e-18 * std::max(tail, 1e-300) || w == 0.0) break;
        if (n > n_pairs + 2000000) break;
    }
    return tail;
}

void require_pair_tail(double r, int n_pairs, const char* who) {
    const double tail = pair_tail(r, n_pairs);
    if (tail > kTailTolerance) {
        int need = n_pairs;
        while (pair_tail(r, need) > kTailTolerance) need *= 2;
        std::ostringstream os;
        os << who << ": squeezed tail " << tail << " beyond " << n_pairs << " photon pairs exceeds "
           << kTailTolerance << "; at least " << 2 * need << " Fock levels are required";
        throw CutoffError(os.str(), 2 * need);
    }
}

}  // namespace

double coherent_tail(double alpha0, int dim) {
    check_alpha(alpha0, "coherent_tail");
    if (dim <= 0) return 1.0;
    const std::vector<double> w = poisson_weights(alpha0);
    double tail = 0.0;
    for (int n = static_cast<int>(w.size()) - 1; n >= dim; --n) tail += w[n];
    return tail;
}

int coherent_required_dim(double alpha0) {
    check_alpha(alpha0, "coherent_required_dim");
    const std::vector<double> w = poisson_weights(alpha0);
    double tail = 0.0;
    int n = static_cast<int>(w.size());
    while (n > 0 && tail + w[n - 1] < kTailTolerance) tail += w[--n];
    return std::max(n, kMinCutoff);
}

StateVector coherent_amplitudes(const CoherentSpec& spec, int dim) {
    check_alpha(spec.alpha0, "coherent_amplitudes");
    if (dim < kMinCutoff) throw CutoffError("coherent_amplitudes: cutoff below minimum", kMinCutoff);
    const double tail = coherent_tail(spec.alpha0, dim);
    if (tail >= kTailTolerance) {
        const int need = coherent_required_dim(spec.alpha0);
        std::ostringstream os;
        os << "coherent_amplitudes: Poisson tail " << tail << " beyond cutoff " << dim << " exceeds "
           << kTailTolerance << "; a cutoff of at least " << need << " is required";
        throw CutoffError(os.str(), need);
    }
    Eigen::VectorXcd amps(dim);
    for (int n = 0; n < dim; ++n) {
        const double mag = std::exp(0.5 * log_poisson(spec.alpha0, n));
        amps(n) = std::polar(mag, n * spec.theta);
    }
    return StateVector(std::move(amps), tail);
}

Complex coherent_overlap_numeric(const CoherentSpec& spec, double t, double epsilon, int dim) {
    const StateVector psi = coherent_amplitudes(spec, dim);
    Complex sum = 0.0;
    for (int n = 0; n < dim; ++n) sum += std::norm(psi[n]) * std::polar(1.0, -perturbation::energy(n, epsilon) * t);
    return sum;
}

std::vector<Complex> squeezed_coeffs(const SqueezeSpec& spec, int n_pairs) {
    check_squeeze(spec, "squeezed_coeffs");
    if (n_pairs < 1) throw std::invalid_argument("squeezed_coeffs: n_pairs must be positive");
    require_pair_tail(spec.r, n_pairs, "squeezed_coeffs");
    std::vector<Complex> f(n_pairs);
    f[0] = std::sqrt(1.0 / std::cosh(spec.r));
    const Complex step = -std::polar(std::tanh(spec.r), spec.theta);
    // f(m+1) = -e^{i theta} tanh r sqrt(m/(m+1)) f(m-1) with m = 2n - 1
    for (int n = 1; n < n_pairs; ++n) {
        const double m = 2.0 * n - 1.0;
        f[n] = step * std::sqrt(m / (m + 1.0)) * f[n - 1];
    }
    return f;
}

std::vector<double> squeezed_coeffs_closed(double r, int n_pairs) {
    check_squeeze({r, 0.0}, "squeezed_coeffs_closed");
    if (n_pairs < 1) throw std::invalid_argument("squeezed_coeffs_closed: n_pairs must be positive");
    std::vector<double> f(n_pairs);
    for (int n = 0; n < n_pairs; ++n) {
        // sqrt((2n)!) (-tanh r)^n / (2^n n! sqrt(cosh r))
        const double mag = std::exp(0.5 * log_pair_weight(r, n));
        f[n] = (n % 2 == 1) ? -mag : mag;
    }
    return f;
}

StateVector squeezed_amplitudes(const SqueezeSpec& spec, int dim) {
    if (dim < kMinCutoff) throw CutoffError("squeezed_amplitudes: cutoff below minimum", kMinCutoff);
    const int pairs = (dim + 1) / 2;
    const std::vector<Complex> f = squeezed_coeffs(spec, pairs);
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(dim);
    for (int n = 0; n < pairs; ++n) amps(2 * n) = f[n];
    return StateVector(std::move(amps), pair_tail(spec.r, pairs));
}

Complex squeezed_overlap_numeric(const SqueezeSpec& spec, double t, double epsilon, int dim) {
    if (spec.theta != 0.0) throw std::invalid_argument("squeezed_overlap_numeric: only theta = 0 is propagated");
    const int pairs = (dim + 1) / 2;
    const std::vector<Complex> f = squeezed_coeffs(spec, pairs);
    Complex sum = 0.0;
    for (int n = 0; n < pairs; ++n) sum += std::norm(f[n]) * std::polar(1.0, -perturbation::energy(2 * n, epsilon) * t);
    return sum;
}

Complex squeezed_overlap_pair_phase(const SqueezeSpec& spec, double t, double epsilon, int dim) {
    if (spec.theta != 0.0) throw std::invalid_argument("squeezed_overlap_pair_phase: only theta = 0 is propagated");
    const int pairs = (dim + 1) / 2;
    const std::vector<Complex> f = squeezed_coeffs(spec, pairs);
    Complex sum = 0.0;
    for (int n = 0; n < pairs; ++n) sum += std::norm(f[n]) * std::polar(1.0, -perturbation::energy(n, epsilon) * t);
    return sum;
}

}  // namespace rqsl::states
