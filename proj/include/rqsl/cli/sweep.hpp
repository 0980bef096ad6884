#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rqsl/cli/output.hpp"
#include "rqsl/cli/params.hpp"

namespace rqsl::cli {

/// Grid points are start + i*step for i = 0 .. count-1, never accumulated.
struct Axis {
    std::string name;
    double start = 0.0;
    double stop = 0.0;
    double step = 1.0;

    std::size_t count() const;
    double value(std::size_t i) const;
};

/// "name:start:stop:step".
Axis parse_axis(const std::string& spec);

struct SweepGrid {
    std::string model;
    std::vector<Axis> axes;  // axes[0] varies slowest
    std::size_t size() const;
};

/// Axis names a model accepts.
std::vector<std::string> model_axes(const std::string& model);
/// Output columns of a model; fixed regardless of which inputs are swept.
std::vector<std::string> model_columns(const std::string& model);

SweepGrid grid_from(const Settings& settings);

/// Evaluates every grid point (concurrently when threads > 1) and returns rows
/// in axis-major order. Non-swept inputs come from `settings`.
Table run_sweep(const SweepGrid& grid, const Settings& settings, int threads);

}  // namespace rqsl::cli
