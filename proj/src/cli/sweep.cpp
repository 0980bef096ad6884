#include "rqsl/cli/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "rqsl/cli/bindings.hpp"
#include "rqsl/metrology.hpp"
#include "rqsl/qsl_bounds.hpp"

namespace rqsl::cli {

namespace {

constexpr std::size_t kMaxPoints = 20'000'000;

using Overrides = std::map<std::string, double>;
using Evaluator = std::function<std::vector<Cell>(const Settings&, const Overrides&)>;

struct AxisBinding {
    std::string key;      // settings key receiving the value
    bool squared = false;  // axis holds the square of the setting
};

struct Model {
    std::map<std::string, AxisBinding> axes;
    std::vector<std::string> columns;
    Evaluator eval;
};

double pick(const Overrides& o, const std::string& name, double fallback) {
    const auto it = o.find(name);
    return it == o.end() ? fallback : it->second;
}

std::vector<Cell> eval_qsl_coherent(const Settings& s, const Overrides& o) {
    const double a0 = s.real("qsl.alpha0");
    const double t = s.real("qsl.t");
    const double eps = s.real("qsl.epsilon");
    const qsl::BoundReport mt = qsl::mt_coherent(a0, t, eps);
    const qsl::BoundReport ml = qsl::ml_coherent(a0, t, eps);
    const qsl::BoundReport best = qsl::t_qsl(mt, ml);
    return {t, pick(o, "alpha0_sq", a0 * a0), eps, mt.total, ml.total, best.total, mt.near_revival || ml.near_revival};
}

std::vector<Cell> eval_qsl_squeezed(const Settings& s, const Overrides&) {
    const double r = s.real("qsl.r");
    const double t = s.real("qsl.t");
    const double eps = s.real("qsl.epsilon");
    const qsl::BoundReport mt = qsl::mt_squeezed(r, t, eps);
    const qsl::BoundReport ml = qsl::ml_squeezed(r, t, eps);
    const qsl::BoundReport best = qsl::t_qsl(mt, ml);
    return {t, r, eps, mt.zeroth, mt.total, ml.zeroth, ml.total, best.total, mt.near_revival || ml.near_revival};
}

std::vector<Cell> eval_squeeze_factor(const Settings& s, const Overrides& o) {
    const double r = s.real("metrology.r");
    const double a0 = s.real("metrology.alpha0");
    const double theta = s.real("metrology.theta");
    const double eps = s.real("metrology.epsilon");
    const metrology::SqueezeFactorPoint p = metrology::squeeze_ratio(r, a0, theta, eps);
    const metrology::SqueezeFactorPoint p0 = metrology::squeeze_ratio(r, a0, theta, 0.0);
    return {r, pick(o, "alpha_sq", a0 * a0), theta, eps, p.ratio, p.sf_db, p0.sf_db};
}

std::vector<Cell> eval_qkd(const Settings& s, const Overrides&) {
    const qkd::QkdLinkParams link = link_from(s);
    const qkd::PhaseNoiseParams phase = phase_from(s);
    const qkd::KeyRate k = qkd::key_rate(link, phase);
    return {link.transmissivity, link.v_a,   link.xi_base,    link.chi_det, phase.epsilon, phase.t_window,
            phase.t_pilot,       phase.dt,   phase.gamma,     phase.c_factor, k.delta_xi_rel, k.chi_tot,
            k.i_ab,              k.chi_be,   k.k,             k.k_clamped};
}

std::vector<Cell> eval_allan(const Settings& s, const Overrides&) {
    const bhd::TrapConfig trap = trap_from(s);
    const double tau = s.real("trap.tau");
    return {tau, trap.nu, trap.p_lo, trap.kappa, trap.epsilon, bhd::allan_shot_noise(trap, tau),
            bhd::allan_relativistic(trap, tau)};
}

const std::map<std::string, Model>& models() {
    static const std::map<std::string, Model> m = {
        {"qsl_coherent",
         {{{"t", {"qsl.t"}}, {"alpha0", {"qsl.alpha0"}}, {"alpha0_sq", {"qsl.alpha0", true}}, {"epsilon", {"qsl.epsilon"}}},
          {"t", "alpha0_sq", "epsilon", "t_mt", "t_ml", "t_qsl", "near_revival"},
          eval_qsl_coherent}},
        {"qsl_squeezed",
         {{{"t", {"qsl.t"}}, {"r", {"qsl.r"}}, {"epsilon", {"qsl.epsilon"}}},
          {"t", "r", "epsilon", "t_mt0", "t_mt", "t_ml0", "t_ml", "t_qsl", "near_revival"},
          eval_qsl_squeezed}},
        {"squeeze_factor",
         {{{"r", {"metrology.r"}},
           {"alpha0", {"metrology.alpha0"}},
           {"alpha_sq", {"metrology.alpha0", true}},
           {"theta", {"metrology.theta"}},
           {"epsilon", {"metrology.epsilon"}}},
          {"r", "alpha_sq", "theta", "epsilon", "ratio", "sf_db", "sf_db_eps0"},
          eval_squeeze_factor}},
        {"qkd",
         {{{"transmissivity", {"qkd.transmissivity"}},
           {"v_a", {"qkd.v_a"}},
           {"xi", {"qkd.xi"}},
           {"chi_det", {"qkd.chi_det"}},
           {"beta", {"qkd.beta"}},
           {"epsilon", {"phase.epsilon"}},
           {"t_window", {"phase.t_window"}},
           {"t_pilot", {"phase.t_pilot"}},
           {"dt", {"phase.dt"}},
           {"gamma", {"phase.gamma"}},
           {"c_factor", {"phase.c_factor"}},
           {"sigma_phi0_sq", {"phase.sigma_phi0_sq"}}},
          {"transmissivity", "v_a", "xi", "chi_det", "epsilon", "t_window", "t_pilot", "dt", "gamma", "c_factor",
           "delta_xi_rel", "chi_tot", "i_ab", "chi_be", "k", "k_clamped"},
          eval_qkd}},
        {"allan",
         {{{"tau", {"trap.tau"}},
           {"nu", {"trap.nu"}},
           {"p_lo", {"trap.p_lo"}},
           {"kappa", {"trap.kappa"}},
           {"epsilon", {"trap.epsilon"}},
           {"mass", {"trap.mass"}}},
          {"tau", "nu", "p_lo", "kappa", "epsilon", "sigma_sn", "sigma_rel"},
          eval_allan}},
    };
    return m;
}

const Model& model_for(const std::string& name) {
    const auto it = models().find(name);
    if (it == models().end()) throw ConfigError("unknown sweep model '" + name + "'");
    return it->second;
}

double parse_number(const std::string& field, const std::string& spec) {
    double v = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || res.ec != std::errc() || res.ptr != field.data() + field.size() || !std::isfinite(v))
        throw ConfigError("axis '" + spec + "': '" + field + "' is not a number");
    return v;
}

}  // namespace

std::size_t Axis::count() const {
    return static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
}

double Axis::value(std::size_t i) const { return start + static_cast<double>(i) * step; }

std::size_t SweepGrid::size() const {
    std::size_t n = 1;
    for (const auto& a : axes) n *= a.count();
    return n;
}

Axis parse_axis(const std::string& spec) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : spec) {
        if (c == ':') {
            parts.push_back(cur);
            cur.clear();
        } else if (c != ' ' && c != '\t') {
            cur += c;
        }
    }
    parts.push_back(cur);
    if (parts.size() != 4 || parts[0].empty())
        throw ConfigError("axis '" + spec + "': expected name:start:stop:step");
    Axis a{parts[0], parse_number(parts[1], spec), parse_number(parts[2], spec), parse_number(parts[3], spec)};
    if (!(a.step > 0.0)) throw ConfigError("axis '" + spec + "': step must be > 0");
    if (!(a.start <= a.stop)) throw ConfigError("axis '" + spec + "': start must not exceed stop");
    return a;
}

std::vector<std::string> model_axes(const std::string& model) {
    std::vector<std::string> out;
    for (const auto& [name, binding] : model_for(model).axes) out.push_back(name);
    return out;
}

std::vector<std::string> model_columns(const std::string& model) { return model_for(model).columns; }

SweepGrid grid_from(const Settings& settings) {
    SweepGrid g;
    g.model = settings.text("sweep.model");
    const Model& m = model_for(g.model);
    for (const char* key : {"sweep.axis1", "sweep.axis2", "sweep.axis3"}) {
        const std::string& spec = settings.text(key);
        if (spec.empty()) continue;
        Axis a = parse_axis(spec);
        if (m.axes.count(a.name) == 0) {
            std::string allowed;
            for (const auto& [name, b] : m.axes) allowed += (allowed.empty() ? "" : ", ") + name;
            throw ConfigError(std::string(key) + ": axis '" + a.name + "' is not an input of model " + g.model +
                              " (allowed: " + allowed + ")");
        }
        for (const auto& prev : g.axes)
            if (prev.name == a.name) throw ConfigError(std::string(key) + ": axis '" + a.name + "' repeated");
        g.axes.push_back(a);
    }
    if (g.axes.empty()) throw ConfigError("sweep: at least one axis (sweep.axis1) is required");
    if (g.size() > kMaxPoints) throw ConfigError("sweep: grid has more than 2e7 points");
    return g;
}

Table run_sweep(const SweepGrid& grid, const Settings& settings, int threads) {
    const Model& m = model_for(grid.model);
    Table table;
    for (const auto& a : grid.axes)
        if (std::find(m.columns.begin(), m.columns.end(), a.name) == m.columns.end()) table.columns.push_back(a.name);
    table.columns.insert(table.columns.end(), m.columns.begin(), m.columns.end());

    // Range violations on an axis are config errors, not evaluation failures.
    for (const auto& a : grid.axes) {
        Settings probe = settings;
        const AxisBinding& b = m.axes.at(a.name);
        for (double v : {a.value(0), a.value(a.count() - 1)}) probe.set_real(b.key, b.squared ? std::sqrt(v) : v);
    }

    const std::size_t total = grid.size();
    std::vector<std::vector<Cell>> rows(total);
    std::vector<std::string> errors(total);

    auto evaluate = [&](std::size_t index) {
        Settings point = settings;
        Overrides o;
        std::vector<Cell> lead;
        std::size_t rest = index;
        std::vector<std::size_t> idx(grid.axes.size());
        for (std::size_t k = grid.axes.size(); k-- > 0;) {
            const std::size_t n = grid.axes[k].count();
            idx[k] = rest % n;
            rest /= n;
        }
        for (std::size_t k = 0; k < grid.axes.size(); ++k) {
            const Axis& a = grid.axes[k];
            const double v = a.value(idx[k]);
            const AxisBinding& b = m.axes.at(a.name);
            point.set_real(b.key, b.squared ? std::sqrt(v) : v);
            o[a.name] = v;
            if (std::find(m.columns.begin(), m.columns.end(), a.name) == m.columns.end()) lead.emplace_back(v);
        }
        std::vector<Cell> row = m.eval(point, o);
        lead.insert(lead.end(), row.begin(), row.end());
        rows[index] = std::move(lead);
    };

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < total; i = next++) {
            try {
                evaluate(i);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    const int n_threads = std::max(1, std::min<int>(threads, static_cast<int>(std::min<std::size_t>(total, 256))));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    }

    for (std::size_t i = 0; i < total; ++i) {
        if (!errors[i].empty()) {
            std::ostringstream os;
            os << "sweep point " << i << ": " << errors[i];
            throw std::invalid_argument(os.str());
        }
    }
    table.rows = std::move(rows);
    return table;
}

}  // namespace rqsl::cli
