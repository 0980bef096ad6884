#include "rqsl/fock_core.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <sstream>

namespace rqsl {

namespace {

std::atomic<bool> g_warn_large_eps{true};

constexpr double kNormTol = 1e-10;
constexpr double kVarianceClamp = 1e-12;
// Extra levels kept while forming powers of x and p; p^4 reaches n +- 4.
constexpr int kPad = 4;

void require_cutoff(int dim, const char* who) {
    if (dim < kMinCutoff) {
        std::ostringstream os;
        os << who << ": Fock cutoff " << dim << " is below the minimum of " << kMinCutoff;
        throw CutoffError(os.str(), kMinCutoff);
    }
}

void require_same_dim(int a, int b, const char* who) {
    if (a != b) {
        std::ostringstream os;
        os << who << ": dimension mismatch (" << a << " vs " << b << ")";
        throw std::invalid_argument(os.str());
    }
}

Eigen::MatrixXcd raw_lowering(int dim) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

// Real symmetric x and p^2 on the padded space; p^2 is real because
// p = i(a^dagger - a)/sqrt(2).
struct PaddedQuadratures {
    Eigen::MatrixXd x2;
    Eigen::MatrixXd p2;
};

PaddedQuadratures padded_quadratures(int dim) {
    const int big = dim + kPad;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(big, big);
    for (int n = 1; n < big; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    const Eigen::MatrixXd ad = a.transpose();
    const Eigen::MatrixXd x = (a + ad) / std::sqrt(2.0);
    // p = i (ad - a)/sqrt(2) => p^2 = -(ad - a)^2 / 2
    const Eigen::MatrixXd d = ad - a;
    return {x * x, -0.5 * (d * d)};
}

Eigen::MatrixXcd symmetrize(const Eigen::MatrixXd& m) {
    Eigen::MatrixXd s = 0.5 * (m + m.transpose());
    return s.cast<Complex>();
}

}  // namespace

// ── TruncatedOperator ────────────────────────────────────────────────────────

TruncatedOperator::TruncatedOperator(Eigen::MatrixXcd entries) : m_(std::move(entries)) {
    if (m_.rows() != m_.cols()) throw std::invalid_argument("TruncatedOperator: matrix must be square");
    if (m_.rows() < 1) throw std::invalid_argument("TruncatedOperator: empty matrix");
}

bool TruncatedOperator::is_hermitian(double tol) const {
    return (m_ - m_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

TruncatedOperator operator*(const TruncatedOperator& a, const TruncatedOperator& b) {
    require_same_dim(a.dim(), b.dim(), "operator*");
    return TruncatedOperator(a.m_ * b.m_);
}

TruncatedOperator operator+(const TruncatedOperator& a, const TruncatedOperator& b) {
    require_same_dim(a.dim(), b.dim(), "operator+");
    return TruncatedOperator(a.m_ + b.m_);
}

TruncatedOperator operator-(const TruncatedOperator& a, const TruncatedOperator& b) {
    require_same_dim(a.dim(), b.dim(), "operator-");
    return TruncatedOperator(a.m_ - b.m_);
}

TruncatedOperator operator*(Complex s, const TruncatedOperator& a) { return TruncatedOperator(s * a.m_); }

// ── StateVector ──────────────────────────────────────────────────────────────

StateVector::StateVector(Eigen::VectorXcd amps, double tail) : amps_(std::move(amps)), tail_(tail) {
    if (amps_.size() < 1) throw std::invalid_argument("StateVector: empty amplitude vector");
    const double norm = amps_.norm();
    if (std::abs(norm * norm - 1.0) > kNormTol) {
        std::ostringstream os;
        os << "StateVector: squared norm " << norm * norm << " differs from 1 by more than " << kNormTol;
        throw std::invalid_argument(os.str());
    }
}

StateVector StateVector::normalized(Eigen::VectorXcd amps, double tail) {
    const double norm = amps.norm();
    if (!(norm > 0.0)) throw std::invalid_argument("StateVector: cannot normalize a zero vector");
    amps /= norm;
    return StateVector(std::move(amps), tail);
}

StateVector StateVector::basis(int dim, int n) {
    if (n < 0 || n >= dim) throw CutoffError("StateVector::basis: level outside cutoff", n + 1);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    v(n) = 1.0;
    return StateVector(std::move(v));
}

// ── operators ────────────────────────────────────────────────────────────────

std::pair<TruncatedOperator, TruncatedOperator> build_ladder(int dim) {
    require_cutoff(dim, "build_ladder");
    Eigen::MatrixXcd a = raw_lowering(dim);
    Eigen::MatrixXcd ad = a.adjoint();
    return {TruncatedOperator(std::move(a)), TruncatedOperator(std::move(ad))};
}

TruncatedOperator build_number(int dim) {
    require_cutoff(dim, "build_number");
    Eigen::VectorXcd diag(dim);
    for (int n = 0; n < dim; ++n) diag(n) = static_cast<double>(n);
    return TruncatedOperator(diag.asDiagonal().toDenseMatrix());
}

TruncatedOperator build_identity(int dim) {
    require_cutoff(dim, "build_identity");
    return TruncatedOperator(Eigen::MatrixXcd::Identity(dim, dim));
}

TruncatedOperator build_position(int dim) {
    require_cutoff(dim, "build_position");
    const Eigen::MatrixXcd a = raw_lowering(dim);
    return TruncatedOperator((a + a.adjoint()) / std::sqrt(2.0));
}

TruncatedOperator build_momentum(int dim) {
    require_cutoff(dim, "build_momentum");
    const Eigen::MatrixXcd a = raw_lowering(dim);
    return TruncatedOperator(Complex(0.0, 1.0) * (a.adjoint() - a) / std::sqrt(2.0));
}

TruncatedOperator build_quartic_correction(int dim) {
    require_cutoff(dim, "build_quartic_correction");
    const PaddedQuadratures q = padded_quadratures(dim);
    const Eigen::MatrixXd p4 = q.p2 * q.p2;
    return TruncatedOperator(symmetrize(p4.topLeftCorner(dim, dim) / 8.0));
}

TruncatedOperator build_hamiltonian(int dim, double epsilon) {
    require_cutoff(dim, "build_hamiltonian");
    if (!(epsilon >= 0.0)) throw std::invalid_argument("build_hamiltonian: epsilon must be >= 0");
    if (epsilon > 0.1 && g_warn_large_eps.load(std::memory_order_relaxed)) {
        std::cerr << "warning: epsilon = " << epsilon
                  << " is outside the small-parameter regime of first-order perturbation theory\n";
    }
    const PaddedQuadratures q = padded_quadratures(dim);
    const Eigen::MatrixXd h = 0.5 * (q.p2 + q.x2) - (epsilon / 8.0) * (q.p2 * q.p2);
    return TruncatedOperator(symmetrize(h.topLeftCorner(dim, dim)));
}

// ── spectra and dynamics ────────────────────────────────────────────────────

SpectralDecomposition diagonalize(const TruncatedOperator& h) {
    const double scale = std::max(1.0, h.matrix().cwiseAbs().maxCoeff());
    if (!h.is_hermitian(1e-12 * scale)) throw std::invalid_argument("diagonalize: operator is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.matrix());
    if (solver.info() != Eigen::Success) throw std::runtime_error("diagonalize: eigensolver did not converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

LevelBasis align_levels(const SpectralDecomposition& spec, int levels) {
    const int dim = spec.dim();
    if (levels < 1 || levels > dim) throw CutoffError("align_levels: requested more levels than the cutoff holds", levels);
    LevelBasis out{Eigen::VectorXd(levels), Eigen::MatrixXcd(dim, levels)};
    std::vector<int> owner(dim, -1);
    for (int n = 0; n < levels; ++n) {
        int best = 0;
        spec.eigenvectors.row(n).cwiseAbs().maxCoeff(&best);
        if (owner[best] >= 0) {
            std::ostringstream os;
            os << "align_levels: levels " << owner[best] << " and " << n << " map to the same eigenvector";
            throw std::runtime_error(os.str());
        }
        owner[best] = n;
        const Complex overlap = spec.eigenvectors(n, best);
        const Complex phase = std::conj(overlap) / std::abs(overlap);
        out.energies(n) = spec.eigenvalues(best);
        out.vectors.col(n) = spec.eigenvectors.col(best) * phase;
    }
    return out;
}

StateVector evolve(const StateVector& state, const SpectralDecomposition& spec, double t) {
    require_same_dim(state.dim(), spec.dim(), "evolve");
    if (t == 0.0) return state;
    const Eigen::VectorXcd coeffs = spec.eigenvectors.adjoint() * state.amps();
    Eigen::VectorXcd phased(coeffs.size());
    for (Eigen::Index k = 0; k < coeffs.size(); ++k)
        phased(k) = coeffs(k) * std::polar(1.0, -spec.eigenvalues(k) * t);
    return StateVector::normalized(spec.eigenvectors * phased, state.tail());
}

Complex expectation(const TruncatedOperator& op, const StateVector& state) {
    require_same_dim(op.dim(), state.dim(), "expectation");
    return state.amps().dot(op.matrix() * state.amps());
}

double variance(const TruncatedOperator& op, const StateVector& state) {
    require_same_dim(op.dim(), state.dim(), "variance");
    const double scale = std::max(1.0, op.matrix().cwiseAbs().maxCoeff());
    if (!op.is_hermitian(1e-12 * scale)) throw std::invalid_argument("variance: operator is not Hermitian");
    const Eigen::VectorXcd applied = op.matrix() * state.amps();
    const double mean = state.amps().dot(applied).real();
    const double second = applied.squaredNorm();
    double var = second - mean * mean;
    if (var < 0.0 && var > -kVarianceClamp) var = 0.0;
    return var;
}

SpectralResidual spectral_residual(const TruncatedOperator& h, const SpectralDecomposition& spec) {
    require_same_dim(h.dim(), spec.dim(), "spectral_residual");
    const Eigen::MatrixXcd r = h.matrix() * spec.eigenvectors - spec.eigenvectors * spec.eigenvalues.asDiagonal();
    double worst = 0.0;
    for (Eigen::Index k = 0; k < r.cols(); ++k) worst = std::max(worst, r.col(k).norm());
    const Eigen::MatrixXcd g = spec.eigenvectors.adjoint() * spec.eigenvectors;
    const double ortho = (g - Eigen::MatrixXcd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
    return {worst, ortho};
}

int default_cutoff(double alpha0, double r) {
    const int poisson = static_cast<int>(std::ceil(8.0 * (alpha0 * alpha0 + 1.0)));
    const int squeezed = static_cast<int>(std::ceil(32.0 * std::exp(2.0 * r)));
    return std::max({256, poisson, squeezed});
}

void set_large_epsilon_warnings(bool enabled) { g_warn_large_eps.store(enabled, std::memory_order_relaxed); }

}  // namespace rqsl
