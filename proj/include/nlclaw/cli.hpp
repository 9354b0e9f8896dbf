#pragma once

#include "nlclaw/mesh_field.hpp"
#include "nlclaw/model.hpp"

#include <json.hpp>

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace nlclaw::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitMonitor = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitValidation = 3;
inline constexpr int kExitRuntime = 4;

enum class Experiment { Solve, Stability, Refine, Regions };

Experiment parse_experiment(const std::string& verb);
std::string to_string(Experiment e);

struct OutputOptions {
    std::filesystem::path out_dir = "out";
    /// Write every stride-th outer snapshot.
    std::size_t snapshot_stride = 1;
    /// Also keep every n-th inner step in the trajectory (0 = outer nodes only).
    std::size_t inner_stride = 0;
    bool emit_regions = false;
    bool emit_diagnostics = true;
};

struct RunConfig {
    FluxModel flux;
    ConstraintFunction constraint;
    InitialData initial_data;
    double x_left = 0.0;
    double x_right = 1.0;
    std::size_t n_cells = 0;
    double horizon_T = 1.0;
    double delta = 0.1;
    double cfl_safety = 0.9;
    OutputOptions outputs;
    Experiment experiment = Experiment::Solve;
    /// stability: relative perturbation sizes
    std::vector<double> perturbations{1e-2};
    /// refine: number of levels compared against one finer reference
    std::size_t refine_levels = 4;
    /// regions
    std::optional<double> tol_J;
    std::vector<double> map_times;
};

/// Throws ConfigError (or ParameterError from model construction).
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

/// Runs the configured experiment, writes its artifacts and returns the
/// process exit code. Progress and tables go to `log` unless quiet.
int run(const RunConfig& config, std::ostream& log, bool quiet = false);

} // namespace nlclaw::cli
