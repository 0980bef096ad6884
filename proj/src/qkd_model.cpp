#include "rqsl/qkd_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rqsl::qkd {

namespace {

constexpr double kPhysicalTol = 1e-9;

void range_error(const char* name, double value, const char* range) {
    std::ostringstream os;
    os << name << " = " << value << " is outside " << range;
    throw std::invalid_argument(os.str());
}

Eigen::Matrix2d pauli_z() { return Eigen::Vector2d(1.0, -1.0).asDiagonal(); }

Eigen::MatrixXd symplectic_form(int modes) {
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
    for (int k = 0; k < modes; ++k) {
        omega(2 * k, 2 * k + 1) = 1.0;
        omega(2 * k + 1, 2 * k) = -1.0;
    }
    return omega;
}

double entropy_of(const std::vector<double>& nus) {
    double s = 0.0;
    for (double nu : nus) s += entropy_g(0.5 * (nu - 1.0));
    return s;
}

void require_physical(const std::vector<double>& nus, const char* stage) {
    for (double nu : nus) {
        if (nu < 1.0 - kPhysicalTol) {
            std::ostringstream os;
            os << "holevo_bound: unphysical covariance matrix " << stage << " (symplectic eigenvalue " << nu << " < 1)";
            throw std::invalid_argument(os.str());
        }
    }
}

}  // namespace

void validate(const QkdLinkParams& link) {
    if (!(link.transmissivity > 0.0 && link.transmissivity <= 1.0)) range_error("T", link.transmissivity, "(0, 1]");
    if (!(link.v_a > 0.0)) range_error("v_a", link.v_a, "(0, inf)");
    if (!(link.xi_base >= 0.0)) range_error("xi", link.xi_base, "[0, inf)");
    if (!(link.chi_det >= 0.0)) range_error("chi_det", link.chi_det, "[0, inf)");
    if (!(link.beta > 0.0 && link.beta <= 1.0)) range_error("beta", link.beta, "(0, 1]");
    if (link.detection == Detection::heterodyne && link.chi_det < 1.0 / link.transmissivity - 1e-12) {
        std::ostringstream os;
        os << "chi_det = " << link.chi_det << " is below the heterodyne vacuum penalty 1/T = "
           << 1.0 / link.transmissivity;
        throw std::invalid_argument(os.str());
    }
}

void validate(const PhaseNoiseParams& p) {
    if (!(p.sigma_phi0_sq >= 0.0)) range_error("sigma_phi0_sq", p.sigma_phi0_sq, "[0, inf)");
    if (!(p.c_factor >= 0.0)) range_error("c_factor", p.c_factor, "[0, inf)");
    if (!(p.gamma >= 0.0)) range_error("gamma", p.gamma, "[0, inf)");
    if (!(p.epsilon >= 0.0)) range_error("epsilon", p.epsilon, "[0, inf)");
    if (!(p.t_window >= 0.0)) range_error("t_window", p.t_window, "[0, inf)");
    if (!(p.t_pilot >= 0.0)) range_error("t_pilot", p.t_pilot, "[0, inf)");
    if (!(p.dt >= 0.0)) range_error("dt", p.dt, "[0, inf)");
}

double chi_line(double transmissivity) {
    if (!(transmissivity > 0.0 && transmissivity <= 1.0)) range_error("T", transmissivity, "(0, 1]");
    return (1.0 - transmissivity) / transmissivity;
}

double delta_xi_phase(double sigma_phi_sq, double transmissivity, double v_a) {
    if (!(sigma_phi_sq >= 0.0)) range_error("sigma_phi_sq", sigma_phi_sq, "[0, inf)");
    if (!(transmissivity > 0.0 && transmissivity <= 1.0)) range_error("T", transmissivity, "(0, 1]");
    return sigma_phi_sq * (v_a + 1.0 / transmissivity);
}

double sigma_phi_est_sq(const PhaseNoiseParams& p) {
    const double et = p.epsilon * p.t_window;
    return p.sigma_phi0_sq * (1.0 + 2.0 * p.c_factor * et * et);
}

double residual_drift(const PhaseNoiseParams& p) {
    const double dt2 = p.dt * p.dt;
    if (p.predictor == Predictor::linear) return p.gamma * dt2;
    return p.gamma * (2.0 * p.t_pilot * p.dt + dt2);
}

double delta_xi_rel(const PhaseNoiseParams& p, const QkdLinkParams& link) {
    const double et = p.epsilon * p.t_window;
    const double inflation = 2.0 * p.c_factor * et * et * p.sigma_phi0_sq;
    const double drift = residual_drift(p);
    return delta_xi_phase(inflation + drift * drift, link.transmissivity, link.v_a);
}

double chi_total(const QkdLinkParams& link, double extra_noise) {
    return chi_line(link.transmissivity) + link.xi_base + extra_noise + link.chi_det;
}

double mutual_information(const QkdLinkParams& link, double chi_tot) {
    if (!(chi_tot >= 0.0)) range_error("chi_tot", chi_tot, "[0, inf)");
    const double v = link.v_a + 1.0;
    const double bits = std::log2((v + chi_tot) / (1.0 + chi_tot));
    return link.detection == Detection::homodyne ? 0.5 * bits : bits;
}

double entropy_g(double x) {
    if (x <= 0.0) return 0.0;
    return (x + 1.0) * std::log2(x + 1.0) - x * std::log2(x);
}

std::vector<double> symplectic_eigenvalues(const Eigen::MatrixXd& gamma) {
    if (gamma.rows() != gamma.cols() || gamma.rows() % 2 != 0 || gamma.rows() == 0)
        throw std::invalid_argument("symplectic_eigenvalues: covariance matrix must be square with even size");
    const int modes = static_cast<int>(gamma.rows() / 2);
    const Eigen::MatrixXd sym = 0.5 * (gamma + gamma.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> root(sym);
    if (root.eigenvalues().minCoeff() <= 0.0)
        throw std::invalid_argument("symplectic_eigenvalues: covariance matrix is not positive definite");
    const Eigen::MatrixXd half = root.operatorSqrt();
    // sqrt(g) (i Omega) sqrt(g) is Hermitian with eigenvalues +-nu_k.
    const Eigen::MatrixXcd m = std::complex<double>(0.0, 1.0) * (half * symplectic_form(modes) * half).cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    std::vector<double> nus;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
        if (es.eigenvalues()(k) > 0.0) nus.push_back(es.eigenvalues()(k));
    nus.resize(static_cast<std::size_t>(modes), 1.0);
    std::sort(nus.begin(), nus.end());
    return nus;
}

HolevoDetail holevo_detail(const QkdLinkParams& link, double chi_tot) {
    validate(link);
    const double t = link.transmissivity;
    const double v = link.v_a + 1.0;
    const bool het = link.detection == Detection::heterodyne;

    HolevoDetail out;
    double detector_noise = 0.0;  // output-referred noise behind the trusted beam splitter
    if (link.trusted_detection) {
        out.chi_eve = chi_tot - link.chi_det;
        detector_noise = het ? t * link.chi_det - 1.0 : t * link.chi_det;
        out.eta = het ? 2.0 / (2.0 + detector_noise) : 1.0 / (1.0 + detector_noise);
    } else {
        // The heterodyne vacuum unit is a property of the measurement, never Eve's.
        out.chi_eve = het ? chi_tot - 1.0 / t : chi_tot;
        out.eta = 1.0;
    }

    const Eigen::Matrix2d id = Eigen::Matrix2d::Identity();
    const double corr = std::sqrt(t * (v * v - 1.0));
    Eigen::Matrix4d ab = Eigen::Matrix4d::Zero();
    ab.block<2, 2>(0, 0) = v * id;
    ab.block<2, 2>(0, 2) = corr * pauli_z();
    ab.block<2, 2>(2, 0) = corr * pauli_z();
    ab.block<2, 2>(2, 2) = t * (v + out.chi_eve) * id;

    out.nu_before = symplectic_eigenvalues(ab);
    require_physical(out.nu_before, "before measurement");

    // Modes A, B0, C (vacuum) -> A, B, F through the trusted beam splitter.
    Eigen::MatrixXd full = Eigen::MatrixXd::Identity(6, 6);
    full.topLeftCorner(4, 4) = ab;
    const double se = std::sqrt(out.eta);
    const double sl = std::sqrt(1.0 - out.eta);
    Eigen::MatrixXd bs = Eigen::MatrixXd::Identity(6, 6);
    bs.block<2, 2>(2, 2) = se * id;
    bs.block<2, 2>(2, 4) = sl * id;
    bs.block<2, 2>(4, 2) = -sl * id;
    bs.block<2, 2>(4, 4) = se * id;
    const Eigen::MatrixXd mixed = bs * full * bs.transpose();

    // Reorder to (A, F | B).
    const std::vector<int> keep{0, 1, 4, 5};
    const std::vector<int> meas{2, 3};
    Eigen::MatrixXd g_af(4, 4), sigma(4, 2);
    Eigen::Matrix2d g_b;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) g_af(i, j) = mixed(keep[i], keep[j]);
        for (int j = 0; j < 2; ++j) sigma(i, j) = mixed(keep[i], meas[j]);
    }
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) g_b(i, j) = mixed(meas[i], meas[j]);

    Eigen::Matrix2d inv;
    if (het) {
        inv = (g_b + id).inverse();
    } else {
        // Moore-Penrose inverse of diag(g_b(0,0), 0).
        inv.setZero();
        inv(0, 0) = 1.0 / g_b(0, 0);
    }
    Eigen::MatrixXd cond = g_af - sigma * inv * sigma.transpose();

    out.nu_after = symplectic_eigenvalues(cond);
    require_physical(out.nu_after, "after measurement");
    out.chi_be = entropy_of(out.nu_before) - entropy_of(out.nu_after);
    return out;
}

double holevo_bound(const QkdLinkParams& link, double chi_tot) { return holevo_detail(link, chi_tot).chi_be; }

KeyRate key_rate_for_chi(const QkdLinkParams& link, double chi_tot) {
    KeyRate k;
    k.chi_tot = chi_tot;
    k.i_ab = mutual_information(link, chi_tot);
    k.chi_be = holevo_bound(link, chi_tot);
    k.k = link.beta * k.i_ab - k.chi_be;
    k.k_clamped = std::max(k.k, 0.0);
    return k;
}

KeyRate key_rate(const QkdLinkParams& link, const PhaseNoiseParams& p) {
    validate(link);
    validate(p);
    const double extra = delta_xi_rel(p, link);
    KeyRate k = key_rate_for_chi(link, chi_total(link, extra));
    k.delta_xi_rel = extra;
    return k;
}

double drift_curvature(double kappa, double epsilon) {
    if (!(kappa >= 0.0)) range_error("kappa", kappa, "[0, inf)");
    return kappa * epsilon * epsilon;
}

}  // namespace rqsl::qkd
