#pragma once

// Settings -> model parameter structs.

#include "rqsl/cli/params.hpp"
#include "rqsl/homodyne_trap.hpp"
#include "rqsl/qkd_model.hpp"

namespace rqsl::cli {

bhd::BhdConfig bhd_from(const Settings& s);
/// trap.epsilon = 0 is replaced by epsilon_from_trap(nu, mass).
bhd::TrapConfig trap_from(const Settings& s);
qkd::QkdLinkParams link_from(const Settings& s);
/// With phase.derive, C comes from the [bhd] amplitudes and gamma = kappa eps^2.
qkd::PhaseNoiseParams phase_from(const Settings& s);

}  // namespace rqsl::cli
