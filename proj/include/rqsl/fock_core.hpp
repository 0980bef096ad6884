#pragma once

// Truncated Fock-space linear algebra for the oscillator H = (p^2 + x^2)/2 - eps p^4/8.
//
// Everything here works in natural units (m = omega = hbar = 1) on a number
// basis cut off at `dim` levels. The matrices are dense; the cutoffs used in
// practice (a few hundred levels) keep a full Hermitian eigensolve cheap.

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace rqsl {

using Complex = std::complex<double>;

constexpr int kMinCutoff = 8;

/// Raised when a Fock cutoff is too small for the requested state or level.
class CutoffError : public std::invalid_argument {
public:
    CutoffError(const std::string& what, int required_dim)
        : std::invalid_argument(what), required_dim_(required_dim) {}
    int required_dim() const noexcept { return required_dim_; }

private:
    int required_dim_;
};

/// Dense complex matrix acting on the first `dim` number states.
class TruncatedOperator {
public:
    explicit TruncatedOperator(Eigen::MatrixXcd entries);

    int dim() const noexcept { return static_cast<int>(m_.rows()); }
    const Eigen::MatrixXcd& matrix() const noexcept { return m_; }
    Complex operator()(int row, int col) const { return m_(row, col); }

    bool is_hermitian(double tol = 1e-12) const;
    TruncatedOperator adjoint() const { return TruncatedOperator(m_.adjoint()); }

    friend TruncatedOperator operator*(const TruncatedOperator& a, const TruncatedOperator& b);
    friend TruncatedOperator operator+(const TruncatedOperator& a, const TruncatedOperator& b);
    friend TruncatedOperator operator-(const TruncatedOperator& a, const TruncatedOperator& b);
    friend TruncatedOperator operator*(Complex s, const TruncatedOperator& a);

private:
    Eigen::MatrixXcd m_;
};

/// Unit-norm amplitude vector. `tail` is the probability weight that fell
/// outside the cutoff when the state was built from an infinite expansion.
class StateVector {
public:
    /// Takes the amplitudes as given; throws if their norm is not 1 within 1e-10.
    explicit StateVector(Eigen::VectorXcd amps, double tail = 0.0);
    /// Rescales to unit norm first.
    static StateVector normalized(Eigen::VectorXcd amps, double tail = 0.0);
    static StateVector basis(int dim, int n);

    int dim() const noexcept { return static_cast<int>(amps_.size()); }
    const Eigen::VectorXcd& amps() const noexcept { return amps_; }
    Complex operator[](int n) const { return amps_(n); }
    double tail() const noexcept { return tail_; }

private:
    Eigen::VectorXcd amps_;
    double tail_;
};

/// Ascending eigenvalues with orthonormal eigenvector columns.
struct SpectralDecomposition {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXcd eigenvectors;

    int dim() const noexcept { return static_cast<int>(eigenvalues.size()); }
};

/// Exact eigenpairs relabelled by the unperturbed level they continue from:
/// column n is the eigenvector with the largest weight on |n_0>, rotated so
/// that <n_0|v_n> is real and positive.
struct LevelBasis {
    Eigen::VectorXd energies;
    Eigen::MatrixXcd vectors;

    int levels() const noexcept { return static_cast<int>(energies.size()); }
    int dim() const noexcept { return static_cast<int>(vectors.rows()); }
};

// ── operators ────────────────────────────────────────────────────────────────

/// (a0, a0^dagger) with a0(n-1, n) = sqrt(n).
std::pair<TruncatedOperator, TruncatedOperator> build_ladder(int dim);
TruncatedOperator build_number(int dim);
TruncatedOperator build_identity(int dim);
TruncatedOperator build_position(int dim);
TruncatedOperator build_momentum(int dim);

/// H = (p^2 + x^2)/2 - eps p^4/8 restricted to `dim` levels.
///
/// x and p are truncated four levels above `dim`, all powers are taken there
/// and the result is cropped, so every returned entry equals the untruncated
/// matrix element. p^4 is a plain fourth matrix power, no normal ordering.
/// Values of eps above 0.1 only produce a warning on stderr.
TruncatedOperator build_hamiltonian(int dim, double epsilon);
/// The quartic piece p^4/8 on its own (same construction).
TruncatedOperator build_quartic_correction(int dim);

// ── spectra and dynamics ────────────────────────────────────────────────────

SpectralDecomposition diagonalize(const TruncatedOperator& h);

/// Relabels the lowest `levels` unperturbed states onto exact eigenpairs.
/// Throws if two levels claim the same eigenvector.
LevelBasis align_levels(const SpectralDecomposition& spec, int levels);

/// V diag(exp(-i lambda t)) V^dagger |psi>.
StateVector evolve(const StateVector& state, const SpectralDecomposition& spec, double t);

Complex expectation(const TruncatedOperator& op, const StateVector& state);
/// <O^2> - <O>^2 for Hermitian O; values in (-1e-12, 0) are clamped to 0.
double variance(const TruncatedOperator& op, const StateVector& state);

/// Residual-and-orthonormality check used by tests and the self-check report.
struct SpectralResidual {
    double max_eigen_residual;   // max_k |H v_k - lambda_k v_k|
    double orthonormality_error; // max |V^dagger V - I|
};
SpectralResidual spectral_residual(const TruncatedOperator& h, const SpectralDecomposition& spec);

/// max(256, ceil(8 (alpha0^2 + 1)), ceil(32 e^{2r})).
int default_cutoff(double alpha0 = 0.0, double r = 0.0);

/// Silences the eps > 0.1 warning (used by sweeps that deliberately go there).
void set_large_epsilon_warnings(bool enabled);

}  // namespace rqsl
