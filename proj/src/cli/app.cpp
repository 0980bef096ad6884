#include "rqsl/cli/app.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <limits>
#include <optional>

#include "rqsl/cli/bindings.hpp"
#include "rqsl/cli/output.hpp"
#include "rqsl/cli/selfcheck.hpp"
#include "rqsl/cli/sweep.hpp"
#include "rqsl/fock_core.hpp"
#include "rqsl/metrology.hpp"
#include "rqsl/perturbation.hpp"
#include "rqsl/qsl_bounds.hpp"

namespace rqsl::cli {

namespace {

struct Invocation {
    std::string preset;
    std::string config;
    // (settings key, raw value) in the order the flags are applied
    std::vector<std::pair<std::string, std::string>> flags;
};

struct Command {
    std::string name;
    std::string section;  // keys of this section also get short --name flags
    std::string help;
};

const std::vector<Command>& commands() {
    static const std::vector<Command> list{
        {"spectrum", "spectrum", "exact vs perturbative energy levels"},
        {"qsl", "qsl", "quantum speed limits for one state and time"},
        {"metrology", "metrology", "energy moments, Fisher information and squeeze factor"},
        {"trap", "trap", "trap parameters, Allan deviations and crossover time"},
        {"qkd", "qkd", "CV-QKD key rate with relativistic phase noise"},
        {"sweep", "sweep", "parameter sweep over up to three axes"},
        {"selfcheck", "", "run the invariant suites and report"},
    };
    return list;
}

std::string section_of(const std::string& key) { return key.substr(0, key.find('.')); }
std::string name_of(const std::string& key) { return key.substr(key.find('.') + 1); }

bool is_global(const std::string& name) {
    return name == "out" || name == "format" || name == "seed" || name == "threads" || name == "config" ||
           name == "preset";
}

void add_flags(CLI::App* sub, const Command& cmd, Invocation& inv,
               std::vector<std::pair<std::string, std::optional<std::string>>>& slots) {
    // Reserve first so option callbacks can keep pointers into the vector.
    slots.reserve(slots.size() + 2 * vocabulary().size() + 4);
    auto bind = [&](const std::string& flag, const std::string& key, const std::string& help) {
        slots.emplace_back(key, std::nullopt);
        sub->add_option("--" + flag, slots.back().second, help);
    };
    sub->add_option("--preset", inv.preset, "preset name (presets/NAME.ini)");
    sub->add_option("--config", inv.config, "config file");
    bind("out", "run.out", "output path (stdout when omitted)");
    bind("format", "run.format", "csv | json");
    bind("seed", "run.seed", "Monte-Carlo seed");
    bind("threads", "run.threads", "sweep worker threads");
    for (const ParamSpec& p : vocabulary()) {
        if (!cmd.section.empty() && section_of(p.key) == cmd.section && !is_global(name_of(p.key)))
            bind(name_of(p.key), p.key, p.help);
    }
    for (const ParamSpec& p : vocabulary()) bind(p.key, p.key, p.help);
}

void emit(const Table& table, const Settings& s) {
    const std::string content = s.text("run.format") == "json" ? to_json(table).dump(2) + "\n" : to_csv(table);
    write_output(content, s.text("run.out"));
}

Table run_spectrum(const Settings& s) {
    const int dim = static_cast<int>(s.integer("spectrum.dim"));
    const int levels = static_cast<int>(s.integer("spectrum.levels"));
    const double eps = s.real("spectrum.epsilon");
    if (levels > dim / 2)
        throw std::invalid_argument("spectrum.levels = " + std::to_string(levels) +
                                    " exceeds half the cutoff; raise spectrum.dim");
    const LevelBasis lb = align_levels(diagonalize(build_hamiltonian(dim, eps)), levels);
    Table t{{"n", "e_exact", "e_first_order", "residual"}, {}};
    for (int n = 0; n < levels; ++n) {
        const double approx = perturbation::energy(n, eps);
        t.add_row({static_cast<long long>(n), lb.energies(n), approx, lb.energies(n) - approx});
    }
    return t;
}

Table run_qsl(const Settings& s) {
    const bool coherent = s.text("qsl.state") == "coherent";
    const double t = s.real("qsl.t");
    const double eps = s.real("qsl.epsilon");
    const double param = coherent ? s.real("qsl.alpha0") : s.real("qsl.r");
    const qsl::BoundReport mt = coherent ? qsl::mt_coherent(param, t, eps) : qsl::mt_squeezed(param, t, eps);
    const qsl::BoundReport ml = coherent ? qsl::ml_coherent(param, t, eps) : qsl::ml_squeezed(param, t, eps);
    const qsl::BoundReport best = qsl::t_qsl(mt, ml);
    Table out{{"state", coherent ? "alpha0" : "r", "t", "epsilon", "t_mt0", "t_mt", "t_ml0", "t_ml", "t_qsl",
               "bound", "near_revival", "validity_warning"},
              {}};
    out.add_row({s.text("qsl.state"), param, t, eps, mt.zeroth, mt.total, ml.zeroth, ml.total, best.total,
                 std::string(best.total == mt.total ? "mt" : "ml"), mt.near_revival || ml.near_revival,
                 mt.validity_warning || ml.validity_warning});
    return out;
}

Table run_metrology(const Settings& s) {
    const bool coherent = s.text("metrology.state") == "coherent";
    const double a0 = s.real("metrology.alpha0");
    const double r = s.real("metrology.r");
    const double theta = s.real("metrology.theta");
    const double eps = s.real("metrology.epsilon");
    const double t = s.real("metrology.t");
    const metrology::EnergyMoments m = coherent ? metrology::coherent_energy(a0, eps) : metrology::squeezed_energy(r, eps);
    const double fisher = metrology::qfi_time(m.variance);
    const metrology::SqueezeFactorPoint sf = metrology::squeeze_ratio(r, a0, theta, eps);
    const double decay_factor = 1.0 - 72.0 * (std::pow(a0, 4) + 3.0 * a0 * a0 + 1.0) * eps * eps * t * t;
    const double lo = decay_factor >= 0.0 ? metrology::lo_amplitude_decay(a0, t, eps)
                                          : std::numeric_limits<double>::quiet_NaN();
    Table out{{"state", "alpha0", "r", "theta", "epsilon", "t", "mean_energy", "second_moment", "variance", "qfi",
               "qcrb", "ratio", "sf_db", "lo_amplitude", "validity_warning"},
              {}};
    out.add_row({s.text("metrology.state"), a0, r, theta, eps, t, m.mean, m.second, m.variance, fisher,
                 metrology::qcrb(fisher), sf.ratio, sf.sf_db, lo, m.validity_warning || sf.validity_warning});
    return out;
}

Table run_trap(const Settings& s) {
    const bhd::TrapConfig trap = trap_from(s);
    const double tau = s.real("trap.tau");
    Table out{{"nu", "mass", "p_lo", "kappa", "epsilon_from_trap", "epsilon", "tau", "sigma_sn", "sigma_rel",
               "crossover_closed", "crossover_numeric"},
              {}};
    out.add_row({trap.nu, trap.mass, trap.p_lo, trap.kappa, bhd::epsilon_from_trap(trap.nu, trap.mass), trap.epsilon,
                 tau, bhd::allan_shot_noise(trap, tau), bhd::allan_relativistic(trap, tau), bhd::crossover_closed(trap),
                 bhd::crossover_numeric(trap)});
    return out;
}

int run_selfcheck(const Settings& s, std::ostream& err) {
    SelfcheckOptions opt;
    opt.seed = static_cast<std::uint64_t>(s.integer("run.seed"));
    const RunReport rep = selfcheck(s, opt);
    for (const CheckResult& c : rep.checks)
        err << (c.passed ? "PASS " : "FAIL ") << c.name << "  measured=" << format_real(c.measured)
            << " threshold=" << format_real(c.threshold) << "\n";
    write_output(rep.to_json().dump(2) + "\n", s.text("run.out"));
    return rep.all_passed() ? kExitOk : kExitFailure;
}

int dispatch(const std::string& cmd, const Settings& s, std::ostream& err) {
    if (cmd == "selfcheck") return run_selfcheck(s, err);
    if (cmd == "spectrum") emit(run_spectrum(s), s);
    else if (cmd == "qsl") emit(run_qsl(s), s);
    else if (cmd == "metrology") emit(run_metrology(s), s);
    else if (cmd == "trap") emit(run_trap(s), s);
    else if (cmd == "qkd") emit(run_sweep(SweepGrid{"qkd", {}}, s, 1), s);
    else if (cmd == "sweep") emit(run_sweep(grid_from(s), s, static_cast<int>(s.integer("run.threads"))), s);
    return kExitOk;
}

}  // namespace

int run_subcommand(const std::vector<std::string>& args, std::ostream& err) {
    CLI::App app{"Relativistic quantum speed limits, metrology and CV-QKD noise budgets", "rqsl"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    Invocation inv;
    // One slot list per subcommand; only the selected one is read.
    std::vector<std::vector<std::pair<std::string, std::optional<std::string>>>> slots(commands().size());
    std::vector<CLI::App*> subs;
    for (std::size_t i = 0; i < commands().size(); ++i) {
        const Command& c = commands()[i];
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        add_flags(sub, c, inv, slots[i]);
        subs.push_back(sub);
    }

    std::vector<const char*> argv{"rqsl"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, std::cout, err);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    std::size_t chosen = 0;
    while (chosen < subs.size() && !subs[chosen]->parsed()) ++chosen;
    const std::string& cmd = commands()[chosen].name;

    Settings settings;
    try {
        if (!inv.preset.empty()) apply_config_file(settings, find_preset(inv.preset));
        if (!inv.config.empty()) apply_config_file(settings, inv.config);
        for (const auto& [key, value] : slots[chosen])
            if (value) settings.set(key, *value, "command line");
    } catch (const ConfigError& e) {
        err << "rqsl: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        return dispatch(cmd, settings, err);
    } catch (const ConfigError& e) {
        err << "rqsl: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "rqsl " << cmd << ": " << e.what() << "\n";
        return kExitFailure;
    }
}

}  // namespace rqsl::cli
