#include "rqsl/cli/params.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#ifndef RQSL_PRESET_DIR
#define RQSL_PRESET_DIR "presets"
#endif

namespace rqsl::cli {

namespace {

constexpr double kInf = 1e308;

ParamSpec real(std::string key, std::string def, double lo, double hi, std::string help, bool lo_open = false,
               bool hi_open = false) {
    ParamSpec p{std::move(key), ParamType::real, std::move(def), lo, hi, lo_open, hi_open, {}, std::move(help)};
    return p;
}

ParamSpec integer(std::string key, std::string def, double lo, double hi, std::string help) {
    return ParamSpec{std::move(key), ParamType::integer, std::move(def), lo, hi, false, false, {}, std::move(help)};
}

ParamSpec boolean(std::string key, std::string def, std::string help) {
    return ParamSpec{std::move(key), ParamType::boolean, std::move(def), 0, 0, false, false, {}, std::move(help)};
}

ParamSpec choice(std::string key, std::string def, std::vector<std::string> options, std::string help) {
    return ParamSpec{std::move(key), ParamType::choice, std::move(def), 0, 0, false, false, std::move(options),
                     std::move(help)};
}

ParamSpec text(std::string key, std::string def, std::string help) {
    return ParamSpec{std::move(key), ParamType::text, std::move(def), 0, 0, false, false, {}, std::move(help)};
}

std::vector<ParamSpec> build_vocabulary() {
    return {
        // ── qsl ──
        choice("qsl.state", "coherent", {"coherent", "squeezed"}, "initial state family"),
        real("qsl.alpha0", "1", 0, kInf, "initial coherent amplitude |alpha(0)|"),
        real("qsl.r", "0.5", 0, kInf, "squeezing parameter"),
        real("qsl.t", "1", -kInf, kInf, "evolution time (natural units)"),
        real("qsl.epsilon", "0", 0, kInf, "relativistic parameter"),
        // ── metrology ──
        choice("metrology.state", "coherent", {"coherent", "squeezed"}, "state for energy moments"),
        real("metrology.alpha0", "1", 0, kInf, "coherent amplitude"),
        real("metrology.r", "0.5", 0, kInf, "squeezing parameter"),
        real("metrology.theta", "0", -kInf, kInf, "squeeze phase for the squeeze factor"),
        real("metrology.epsilon", "0", 0, kInf, "relativistic parameter"),
        real("metrology.t", "0", 0, kInf, "time for the displaced LO amplitude"),
        // ── spectrum ──
        integer("spectrum.dim", "256", 8, 4096, "Fock cutoff"),
        integer("spectrum.levels", "11", 1, 4096, "number of levels reported"),
        real("spectrum.epsilon", "0.001", 0, kInf, "relativistic parameter"),
        // ── bhd ──
        real("bhd.alpha_s", "1", 0, kInf, "signal amplitude", true),
        real("bhd.alpha_lo", "1", 0, kInf, "local-oscillator amplitude |alpha|", true),
        real("bhd.delta_psi", "1.5707963267948966", -kInf, kInf, "relative phase"),
        real("bhd.omega_s", "1", -kInf, kInf, "signal angular frequency (rad/s)"),
        real("bhd.omega_lo", "0", -kInf, kInf, "LO angular frequency (rad/s)"),
        real("bhd.t", "0", 0, kInf, "elapsed time"),
        real("bhd.epsilon", "0", 0, kInf, "relativistic parameter"),
        // ── trap ──
        real("trap.nu", "149e9", 0, kInf, "cyclotron frequency (Hz)", true),
        real("trap.p_lo", "1e-3", 0, kInf, "LO power (W)", true),
        real("trap.kappa", "200", 0, kInf, "drift constant", true),
        real("trap.mass", "9.1093837015e-31", 0, kInf, "particle mass (kg)", true),
        real("trap.epsilon", "0", 0, kInf, "relativistic parameter; 0 derives it from nu and mass"),
        real("trap.tau", "1", 0, kInf, "averaging time (s)", true),
        // ── qkd ──
        real("qkd.transmissivity", "0.5", 0, 1, "channel transmissivity T", true),
        real("qkd.v_a", "4", 0, kInf, "modulation variance (SNU)", true),
        real("qkd.xi", "0.01", 0, kInf, "excess noise without the relativistic term (SNU)"),
        real("qkd.chi_det", "0", 0, kInf, "detection noise referred to the input (SNU)"),
        real("qkd.beta", "0.95", 0, 1, "reconciliation efficiency", true),
        choice("qkd.detection", "homodyne", {"homodyne", "heterodyne"}, "detection scheme"),
        boolean("qkd.trusted_detection", "true", "exclude detection noise from Eve's share"),
        // ── phase ──
        real("phase.sigma_phi0_sq", "1e-4", 0, kInf, "pilot phase estimator variance (rad^2)"),
        real("phase.c_factor", "0", 0, kInf, "drift coefficient C"),
        real("phase.gamma", "0", 0, kInf, "drift curvature (rad/s^2)"),
        real("phase.epsilon", "0", 0, kInf, "relativistic parameter"),
        real("phase.t_window", "0", 0, kInf, "estimation window (s)"),
        real("phase.t_pilot", "0", 0, kInf, "pilot period (s)"),
        real("phase.dt", "0", 0, kInf, "pilot-to-data delay (s)"),
        choice("phase.predictor", "zoh", {"zoh", "linear"}, "phase predictor"),
        boolean("phase.derive", "false", "derive C from [bhd] amplitudes and gamma from [trap] kappa with phase.epsilon"),
        // ── sweep ──
        choice("sweep.model", "qsl_coherent", {"qsl_coherent", "qsl_squeezed", "squeeze_factor", "qkd", "allan"},
               "quantity evaluated on the grid"),
        text("sweep.axis1", "", "first axis as name:start:stop:step"),
        text("sweep.axis2", "", "second axis"),
        text("sweep.axis3", "", "third axis"),
        // ── run ──
        integer("run.seed", "20240601", 0, 9.2e18, "Monte-Carlo seed"),
        integer("run.threads", "1", 1, 256, "sweep worker threads"),
        choice("run.format", "csv", {"csv", "json"}, "output format"),
        text("run.out", "", "output path (stdout when empty)"),
    };
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::string where(const std::string& origin, int line) {
    std::ostringstream os;
    if (!origin.empty()) os << origin;
    if (line > 0) os << (origin.empty() ? "" : ", ") << "line " << line;
    if (!origin.empty() || line > 0) os << ": ";
    return os.str();
}

}  // namespace

const std::vector<ParamSpec>& vocabulary() {
    static const std::vector<ParamSpec> v = build_vocabulary();
    return v;
}

const ParamSpec* find_param(std::string_view key) {
    for (const auto& p : vocabulary())
        if (p.key == key) return &p;
    return nullptr;
}

std::string format_real(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

Settings::Settings() {
    for (const auto& p : vocabulary()) set(p.key, p.fallback, "defaults");
}

void Settings::set(const std::string& key, const std::string& raw, const std::string& origin, int line) {
    const ParamSpec* spec = find_param(key);
    if (spec == nullptr) throw ConfigError(where(origin, line) + "unknown key '" + key + "'", line);
    const std::string value = trim(raw);
    auto fail = [&](const std::string& why) {
        throw ConfigError(where(origin, line) + "key '" + key + "': " + why, line);
    };
    switch (spec->type) {
        case ParamType::real: {
            double v = 0.0;
            const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
            if (value.empty() || res.ec != std::errc() || res.ptr != value.data() + value.size())
                fail("expected a real number, got '" + value + "'");
            const bool below = spec->min_open ? !(v > spec->min) : !(v >= spec->min);
            const bool above = spec->max_open ? !(v < spec->max) : !(v <= spec->max);
            if (below || above) {
                std::ostringstream os;
                os << "value " << value << " is out of range " << (spec->min_open ? "(" : "[")
                   << (spec->min <= -kInf ? std::string("-inf") : format_real(spec->min)) << ", "
                   << (spec->max >= kInf ? std::string("inf") : format_real(spec->max)) << (spec->max_open ? ")" : "]");
                fail(os.str());
            }
            values_[key] = v;
            break;
        }
        case ParamType::integer: {
            long long v = 0;
            const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
            if (value.empty() || res.ec != std::errc() || res.ptr != value.data() + value.size())
                fail("expected an integer, got '" + value + "'");
            if (static_cast<double>(v) < spec->min || static_cast<double>(v) > spec->max) {
                std::ostringstream os;
                os << "value " << v << " is out of range [" << static_cast<long long>(spec->min) << ", "
                   << static_cast<long long>(spec->max) << "]";
                fail(os.str());
            }
            values_[key] = v;
            break;
        }
        case ParamType::boolean: {
            if (value == "true" || value == "1" || value == "yes")
                values_[key] = true;
            else if (value == "false" || value == "0" || value == "no")
                values_[key] = false;
            else
                fail("expected true or false, got '" + value + "'");
            break;
        }
        case ParamType::choice: {
            if (std::find(spec->choices.begin(), spec->choices.end(), value) == spec->choices.end()) {
                std::string opts;
                for (const auto& c : spec->choices) opts += (opts.empty() ? "" : "|") + c;
                fail("expected one of " + opts + ", got '" + value + "'");
            }
            values_[key] = value;
            break;
        }
        case ParamType::text:
            values_[key] = value;
            break;
    }
}

void Settings::set_real(const std::string& key, double value) {
    const ParamSpec* spec = find_param(key);
    if (spec == nullptr || spec->type != ParamType::real) throw ConfigError("unknown real-valued key '" + key + "'");
    const bool below = spec->min_open ? !(value > spec->min) : !(value >= spec->min);
    const bool above = spec->max_open ? !(value < spec->max) : !(value <= spec->max);
    if (below || above) throw ConfigError("key '" + key + "': value " + format_real(value) + " is out of range");
    values_[key] = value;
}

const Value& Settings::get(const std::string& key, ParamType type) const {
    const ParamSpec* spec = find_param(key);
    if (spec == nullptr) throw std::logic_error("Settings: unknown key " + key);
    const bool compatible = spec->type == type || (type == ParamType::text && spec->type == ParamType::choice);
    if (!compatible) throw std::logic_error("Settings: wrong type requested for " + key);
    return values_.at(key);
}

double Settings::real(const std::string& key) const { return std::get<double>(get(key, ParamType::real)); }
long long Settings::integer(const std::string& key) const { return std::get<long long>(get(key, ParamType::integer)); }
bool Settings::flag(const std::string& key) const { return std::get<bool>(get(key, ParamType::boolean)); }
const std::string& Settings::text(const std::string& key) const {
    return std::get<std::string>(get(key, ParamType::text));
}

std::vector<std::pair<std::string, std::string>> Settings::echo() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [key, value] : values_) {
        std::string s;
        if (const auto* d = std::get_if<double>(&value))
            s = format_real(*d);
        else if (const auto* i = std::get_if<long long>(&value))
            s = std::to_string(*i);
        else if (const auto* b = std::get_if<bool>(&value))
            s = *b ? "true" : "false";
        else
            s = std::get<std::string>(value);
        out.emplace_back(key, s);
    }
    return out;
}

void apply_config_text(Settings& settings, std::string_view text, const std::string& origin) {
    std::string section;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        std::string line = std::string(text.substr(pos, end - pos));
        pos = end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) {
            if (end == text.size()) break;
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where(origin, line_no) + "malformed section header", line_no);
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            bool known = false;
            for (const auto& p : vocabulary()) known = known || p.key.rfind(section + ".", 0) == 0;
            if (!known) throw ConfigError(where(origin, line_no) + "unknown section [" + section + "]", line_no);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(where(origin, line_no) + "expected 'key = value', got '" + line + "'", line_no);
        if (section.empty())
            throw ConfigError(where(origin, line_no) + "key outside of any [section]", line_no);
        const std::string key = trim(std::string_view(line).substr(0, eq));
        settings.set(section + "." + key, line.substr(eq + 1), origin, line_no);
        if (end == text.size()) break;
    }
}

void apply_config_file(Settings& settings, const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    apply_config_text(settings, buf.str(), path.string());
}

std::filesystem::path find_preset(const std::string& name) {
    if (name.empty() || name.find('/') != std::string::npos || name.find("..") != std::string::npos)
        throw ConfigError("invalid preset name '" + name + "'");
    std::vector<std::filesystem::path> dirs;
    if (const char* env = std::getenv("RQSL_PRESET_DIR")) dirs.emplace_back(env);
    dirs.emplace_back(RQSL_PRESET_DIR);
    dirs.emplace_back("presets");
    for (const auto& d : dirs) {
        const auto candidate = d / (name + ".ini");
        if (std::filesystem::is_regular_file(candidate)) return candidate;
    }
    throw ConfigError("unknown preset '" + name + "'");
}

}  // namespace rqsl::cli
