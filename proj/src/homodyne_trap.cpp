#include "rqsl/homodyne_trap.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace rqsl::bhd {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        std::ostringstream os;
        os << name << " must be positive and finite (got " << v << ")";
        throw std::invalid_argument(os.str());
    }
}

}  // namespace

void validate(const BhdConfig& cfg) {
    require_positive(cfg.alpha_s, "alpha_s");
    require_positive(cfg.alpha_lo_mag, "alpha_lo");
}

void validate(const TrapConfig& trap) {
    require_positive(trap.nu, "nu");
    require_positive(trap.p_lo, "p_lo");
    require_positive(trap.kappa, "kappa");
    require_positive(trap.epsilon, "epsilon");
    require_positive(trap.mass, "mass");
    require_positive(trap.planck_h, "planck_h");
}

double i_diff_mean(const BhdConfig& cfg) {
    validate(cfg);
    return 2.0 * cfg.alpha_s * cfg.alpha_lo_mag * std::cos(cfg.delta_psi);
}

double i_diff_variance(const BhdConfig& cfg) {
    validate(cfg);
    return cfg.alpha_s * cfg.alpha_s + cfg.alpha_lo_mag * cfg.alpha_lo_mag;
}

double phase_drift_coefficient(const BhdConfig& cfg) {
    validate(cfg);
    const double a2 = cfg.alpha_lo_mag * cfg.alpha_lo_mag;
    const double s2 = cfg.alpha_s * cfg.alpha_s;
    return 72.0 * s2 * (a2 * a2 + 3.0 * a2 + 1.0) / (a2 + s2);
}

double sensitivity_bracket(const BhdConfig& cfg, double t, double epsilon) {
    const double et = epsilon * t;
    return 1.0 + phase_drift_coefficient(cfg) * et * et;
}

double phase_sensitivity(const BhdConfig& cfg, double t, double epsilon) {
    validate(cfg);
    const double s = std::abs(std::sin(cfg.delta_psi));
    if (s <= 1e-9) {
        std::ostringstream os;
        os << "phase_sensitivity: delta_psi = " << cfg.delta_psi
           << " is a zero-slope point (multiple of pi); the phase cannot be inferred there";
        throw std::invalid_argument(os.str());
    }
    const double base = std::sqrt(i_diff_variance(cfg)) / (2.0 * cfg.alpha_lo_mag * cfg.alpha_s * s);
    return base * sensitivity_bracket(cfg, t, epsilon);
}

double time_resolution(const BhdConfig& cfg, double t, double epsilon) {
    const double dw = std::abs(cfg.omega_s - cfg.omega_lo);
    if (!(dw > 0.0)) throw std::invalid_argument("time_resolution: signal and LO frequencies are degenerate");
    return phase_sensitivity(cfg, t, epsilon) / dw;
}

double allan_shot_noise(const TrapConfig& trap, double tau) {
    validate(trap);
    require_positive(tau, "tau");
    return std::sqrt(trap.planck_h * trap.nu / (4.0 * trap.p_lo)) / (2.0 * kPi * trap.nu) * std::pow(tau, -1.5);
}

double allan_relativistic(const TrapConfig& trap, double tau) {
    validate(trap);
    require_positive(tau, "tau");
    return 0.5 * trap.kappa * trap.epsilon * trap.epsilon * tau;
}

double crossover_closed(const TrapConfig& trap) {
    validate(trap);
    const double drift = trap.kappa * trap.epsilon * trap.epsilon;
    return std::pow(trap.planck_h * trap.nu / (kPi * kPi * trap.p_lo), 0.2) * std::pow(drift, -0.4);
}

double crossover_numeric(const TrapConfig& trap) {
    validate(trap);
    auto gap = [&](double log_tau) {
        const double tau = std::exp(log_tau);
        return std::log(allan_shot_noise(trap, tau)) - std::log(allan_relativistic(trap, tau));
    };
    double lo = std::log(1e-6);
    double hi = std::log(1e12);
    const double g_lo = gap(lo);
    const double g_hi = gap(hi);
    if (!(g_lo > 0.0 && g_hi < 0.0)) {
        std::ostringstream os;
        os << "crossover_numeric: no crossing in [1e-6, 1e12] s (log-ratio " << g_lo << " .. " << g_hi << ")";
        throw std::runtime_error(os.str());
    }
    // Width in log tau equals the relative tolerance in tau.
    while (hi - lo > 1e-11) {
        const double mid = 0.5 * (lo + hi);
        if (gap(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return std::exp(0.5 * (lo + hi));
}

double epsilon_from_trap(double nu, double mass) {
    if (!(nu >= 0.0)) throw std::invalid_argument("epsilon_from_trap: nu must be >= 0");
    require_positive(mass, "mass");
    return kPlanck * nu / (8.0 * mass * kSpeedOfLight * kSpeedOfLight);
}

PhotocountStats sample_photocurrent(const BhdConfig& cfg, long long shots, std::mt19937_64& rng) {
    validate(cfg);
    if (shots < 2) throw std::invalid_argument("sample_photocurrent: need at least two shots");
    const std::complex<double> lo = std::polar(cfg.alpha_lo_mag, cfg.delta_psi);
    const double mean1 = std::norm(cfg.alpha_s + lo) / 2.0;
    const double mean2 = std::norm(cfg.alpha_s - lo) / 2.0;
    // A port with zero mean never clicks; the distribution needs a positive mean.
    std::poisson_distribution<long long> port1(mean1 > 0.0 ? mean1 : 1.0);
    std::poisson_distribution<long long> port2(mean2 > 0.0 ? mean2 : 1.0);

    std::vector<double> diff(static_cast<std::size_t>(shots));
    for (auto& d : diff) {
        const long long n1 = mean1 > 0.0 ? port1(rng) : 0;
        const long long n2 = mean2 > 0.0 ? port2(rng) : 0;
        d = static_cast<double>(n1 - n2);
    }
    const double n = static_cast<double>(shots);
    double sum = 0.0;
    for (double d : diff) sum += d;
    const double mean = sum / n;
    double m2 = 0.0;
    double m4 = 0.0;
    for (double d : diff) {
        const double c = (d - mean) * (d - mean);
        m2 += c;
        m4 += c * c;
    }
    m2 /= n;
    m4 /= n;

    PhotocountStats st;
    st.shots = shots;
    st.mean = mean;
    st.variance = m2 * n / (n - 1.0);
    st.mean_stderr = std::sqrt(st.variance / n);
    st.variance_stderr = std::sqrt(std::max(m4 - m2 * m2, 0.0) / n);
    return st;
}

}  // namespace rqsl::bhd
