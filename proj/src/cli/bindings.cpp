#include "rqsl/cli/bindings.hpp"

namespace rqsl::cli {

bhd::BhdConfig bhd_from(const Settings& s) {
    bhd::BhdConfig c;
    c.alpha_s = s.real("bhd.alpha_s");
    c.alpha_lo_mag = s.real("bhd.alpha_lo");
    c.delta_psi = s.real("bhd.delta_psi");
    c.omega_s = s.real("bhd.omega_s");
    c.omega_lo = s.real("bhd.omega_lo");
    return c;
}

bhd::TrapConfig trap_from(const Settings& s) {
    bhd::TrapConfig t;
    t.nu = s.real("trap.nu");
    t.p_lo = s.real("trap.p_lo");
    t.kappa = s.real("trap.kappa");
    t.mass = s.real("trap.mass");
    const double eps = s.real("trap.epsilon");
    t.epsilon = eps > 0.0 ? eps : bhd::epsilon_from_trap(t.nu, t.mass);
    return t;
}

qkd::QkdLinkParams link_from(const Settings& s) {
    qkd::QkdLinkParams l;
    l.transmissivity = s.real("qkd.transmissivity");
    l.v_a = s.real("qkd.v_a");
    l.xi_base = s.real("qkd.xi");
    l.chi_det = s.real("qkd.chi_det");
    l.beta = s.real("qkd.beta");
    l.detection = s.text("qkd.detection") == "heterodyne" ? qkd::Detection::heterodyne : qkd::Detection::homodyne;
    l.trusted_detection = s.flag("qkd.trusted_detection");
    return l;
}

qkd::PhaseNoiseParams phase_from(const Settings& s) {
    qkd::PhaseNoiseParams p;
    p.sigma_phi0_sq = s.real("phase.sigma_phi0_sq");
    p.epsilon = s.real("phase.epsilon");
    p.t_window = s.real("phase.t_window");
    p.t_pilot = s.real("phase.t_pilot");
    p.dt = s.real("phase.dt");
    p.predictor = s.text("phase.predictor") == "linear" ? qkd::Predictor::linear : qkd::Predictor::zoh;
    if (s.flag("phase.derive")) {
        p.c_factor = bhd::phase_drift_coefficient(bhd_from(s));
        p.gamma = qkd::drift_curvature(s.real("trap.kappa"), p.epsilon);
    } else {
        p.c_factor = s.real("phase.c_factor");
        p.gamma = s.real("phase.gamma");
    }
    return p;
}

}  // namespace rqsl::cli
