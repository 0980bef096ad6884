#pragma once

// Parameter vocabulary shared by config files and command-line flags.
// Every key is "section.name"; defaults live in one table.

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace rqsl::cli {

/// Bad config file, unknown key, type or range violation. Maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, int line = 0) : std::runtime_error(what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

enum class ParamType { real, integer, boolean, choice, text };

struct ParamSpec {
    std::string key;  // section.name
    ParamType type;
    std::string fallback;
    double min = -1e308;
    double max = 1e308;
    bool min_open = false;
    bool max_open = false;
    std::vector<std::string> choices;
    std::string help;
};

using Value = std::variant<double, long long, bool, std::string>;

const std::vector<ParamSpec>& vocabulary();
const ParamSpec* find_param(std::string_view key);

class Settings {
public:
    Settings();  // every key at its default

    /// Parses and range-checks `raw`; `origin` and `line` only feed error messages.
    void set(const std::string& key, const std::string& raw, const std::string& origin = "", int line = 0);
    /// Range-checked assignment of a real-valued key without a text round trip.
    void set_real(const std::string& key, double value);

    double real(const std::string& key) const;
    long long integer(const std::string& key) const;
    bool flag(const std::string& key) const;
    const std::string& text(const std::string& key) const;

    /// key -> value in canonical text form, sorted by key.
    std::vector<std::pair<std::string, std::string>> echo() const;

private:
    const Value& get(const std::string& key, ParamType type) const;
    std::map<std::string, Value> values_;
};

/// Applies `key = value` lines with [section] headers and # comments.
void apply_config_text(Settings& settings, std::string_view text, const std::string& origin);
void apply_config_file(Settings& settings, const std::filesystem::path& path);

/// Locates a preset file: RQSL_PRESET_DIR environment variable, then the
/// build-time preset directory, then ./presets.
std::filesystem::path find_preset(const std::string& name);

std::string format_real(double v);

}  // namespace rqsl::cli
