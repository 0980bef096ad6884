#include "rqsl/metrology.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rqsl::metrology {

namespace {

bool exceeds_half(double correction, double zeroth) { return std::abs(correction) > 0.5 * std::abs(zeroth); }

}  // namespace

EnergyMoments coherent_energy(double alpha0, double epsilon) {
    if (!(alpha0 >= 0.0)) throw std::invalid_argument("coherent_energy: alpha0 must be >= 0");
    const double a2 = alpha0 * alpha0;
    const double a4 = a2 * a2;
    const double k = 3.0 * epsilon / 32.0;
    EnergyMoments m;
    const double mean0 = 0.5 + a2;
    const double mean1 = -k * (1.0 + 4.0 * a2 + 2.0 * a4);
    m.mean = mean0 + mean1;
    m.second = (0.25 + 2.0 * a2 + a4) - k * (1.0 + 14.0 * a2 + 18.0 * a4 + 4.0 * a4 * a2);
    const double var1 = -0.75 * epsilon * (a2 + a4);
    m.variance = a2 + var1;
    if (m.variance < 0.0 && m.variance > -1e-12) m.variance = 0.0;
    m.validity_warning = exceeds_half(mean1, mean0) || (a2 > 0.0 && exceeds_half(var1, a2));
    return m;
}

EnergyMoments squeezed_energy(double r, double epsilon) {
    if (!(r >= 0.0)) throw std::invalid_argument("squeezed_energy: r must be >= 0");
    const double c2 = std::cosh(2.0 * r);
    const double c4 = std::cosh(4.0 * r);
    const double c6 = std::cosh(6.0 * r);
    const double ch = std::cosh(r);
    const double sh = std::sinh(r);
    EnergyMoments m;
    const double mean0 = 0.5 * c2;
    const double mean1 = -(3.0 * epsilon / 128.0) * (1.0 + 3.0 * c4);
    m.mean = mean0 + mean1;
    m.second = 0.125 * (-1.0 + 3.0 * c4) + (3.0 * epsilon / 256.0) * (7.0 * c2 - 15.0 * c6);
    const double var0 = 2.0 * ch * ch * sh * sh;
    const double var1 = -(9.0 * epsilon / 32.0) * std::sinh(2.0 * r) * std::sinh(4.0 * r);
    m.variance = var0 + var1;
    if (m.variance < 0.0 && m.variance > -1e-12) m.variance = 0.0;
    m.validity_warning = exceeds_half(mean1, mean0) || (var0 > 0.0 && exceeds_half(var1, var0));
    return m;
}

double qfi_time(double variance) {
    if (!(variance >= 0.0)) throw std::invalid_argument("qfi_time: energy variance must be >= 0");
    return 4.0 * variance;
}

double qcrb(double qfi) {
    if (!(qfi > 0.0)) {
        std::ostringstream os;
        os << "qcrb: Fisher information " << qfi
           << " is not positive; the state does not evolve (stationary state), so time cannot be estimated";
        throw std::invalid_argument(os.str());
    }
    return 1.0 / std::sqrt(qfi);
}

SqueezeFactorPoint squeeze_ratio(double r, double alpha0, double theta, double epsilon) {
    if (!(r >= 0.0)) throw std::invalid_argument("squeeze_ratio: r must be >= 0");
    const double e2 = std::exp(-2.0 * r);
    const double a2 = alpha0 * alpha0;
    const double corr =
        -(3.0 / 64.0) * epsilon * (5.0 + 3.0 * std::exp(-4.0 * r) - 4.0 * a2 * e2 * (std::cos(2.0 * theta) - 4.0));
    const double ratio = e2 + corr;
    if (!(ratio > 0.0)) {
        std::ostringstream os;
        os << "squeeze_ratio: variance ratio " << ratio
           << " is not positive; the eps correction is too large for first-order validity";
        throw std::invalid_argument(os.str());
    }
    SqueezeFactorPoint p;
    p.ratio = ratio;
    p.sf_db = -10.0 * std::log10(ratio);
    p.validity_warning = exceeds_half(corr, e2);
    return p;
}

std::complex<double> displaced_amplitude(double alpha_mag, double t, double epsilon) {
    if (!(alpha_mag >= 0.0)) throw std::invalid_argument("displaced_amplitude: |alpha| must be >= 0");
    if (!(t >= 0.0)) throw std::invalid_argument("displaced_amplitude: t must be >= 0");
    const double a2 = alpha_mag * alpha_mag;
    const double et = epsilon * t;
    const std::complex<double> bracket(1.0 - 72.0 * (a2 * a2 + 3.0 * a2 + 1.0) * et * et, -12.0 * (a2 + 1.0) * et);
    return alpha_mag * std::polar(1.0, t) * bracket;
}

double lo_amplitude_decay(double alpha_mag, double t, double epsilon) {
    if (!(alpha_mag >= 0.0)) throw std::invalid_argument("lo_amplitude_decay: |alpha| must be >= 0");
    if (!(t >= 0.0)) throw std::invalid_argument("lo_amplitude_decay: t must be >= 0");
    const double a2 = alpha_mag * alpha_mag;
    const double et = epsilon * t;
    const double factor = 1.0 - 72.0 * (a2 * a2 + 3.0 * a2 + 1.0) * et * et;
    if (factor < 0.0) {
        std::ostringstream os;
        os << "lo_amplitude_decay: decay factor " << factor << " is negative; eps*t = " << et
           << " is outside the second-order expansion";
        throw std::invalid_argument(os.str());
    }
    return alpha_mag * factor;
}

}  // namespace rqsl::metrology
