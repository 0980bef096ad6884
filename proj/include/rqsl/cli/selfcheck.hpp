#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rqsl/cli/params.hpp"

namespace rqsl::cli {

inline constexpr const char* kToolVersion = "1.0.0";

struct CheckResult {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double threshold = 0.0;
    std::string detail;
    bool monte_carlo = false;
};

/// A known inconsistency between two statements of the same quantity, with
/// the computed value of each side.
struct Discrepancy {
    std::string id;
    std::string topic;
    std::vector<std::pair<std::string, double>> values;
    std::string note;
};

struct RunReport {
    std::string version = kToolVersion;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> config;
    std::vector<CheckResult> checks;
    std::vector<Discrepancy> discrepancies;

    bool all_passed() const;
    const CheckResult* find(const std::string& name) const;
    const Discrepancy* find_discrepancy(const std::string& id) const;
    nlohmann::ordered_json to_json() const;
};

/// E_n(eps) used as the first-order model in the spectrum check.
using EnergyModel = std::function<double(int, double)>;

struct SelfcheckOptions {
    std::uint64_t seed = 20240601;
    EnergyModel energy_model;  // defaults to the perturbative level formula
    long long mc_shots = 1'000'000;
};

RunReport selfcheck(const Settings& settings, const SelfcheckOptions& options);

}  // namespace rqsl::cli
