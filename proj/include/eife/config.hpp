#pragma once

#include "eife/analysis.hpp"
#include "eife/fem_assembly.hpp"
#include "eife/mesh.hpp"
#include "eife/problems.hpp"
#include "eife/time_stepper.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace eife {

/// A parsed config value: number, string, boolean, or a flat array of numbers/strings.
struct ConfigValue {
    std::variant<double, std::string, bool, std::vector<double>, std::vector<std::string>> value;
    int line = 0;
};

/// Flat key-value document; keys are fully dotted ("mesh.n").
using ConfigDocument = std::map<std::string, ConfigValue>;

/// Parses the config grammar: `[section]` headers, `key = value` lines with
/// optional dotted keys, `#` comments, strings in double quotes, numbers,
/// true/false, and single-line arrays `[a, b, ...]`.
ConfigDocument parse_config_document(std::string_view text);

enum class RunMode { Run, Convergence, Timing };

std::string_view to_string(RunMode mode);

struct RunConfig {
    // problem
    std::string problem = "linear_rd";
    double eps = 0.0;  // 0: problem default
    double theta = 0.8;
    double theta_c = 1.6;
    std::uint64_t seed = 0;
    CustomProblemSpec custom;

    // mesh
    std::vector<double> lower;  // empty: problem default
    std::vector<double> upper;
    std::vector<std::size_t> n;
    std::optional<BoundaryKind> bc;  // empty: problem default

    // time stepping
    Scheme scheme = Scheme::Eife2;
    double c2 = 0.5;
    std::optional<double> final_time;
    std::optional<double> dt;
    std::optional<std::size_t> nt;

    // observation and output
    std::optional<std::size_t> cadence;
    std::vector<double> snapshot_times;
    std::string report_file = "report.csv";
    std::string series_file = "series.csv";
    std::string snapshot_prefix = "snapshot";

    // numerics
    InitialMode initial = InitialMode::Interpolate;
    LoadOptions load;
    NormOptions norms;

    // studies
    RunMode mode = RunMode::Run;
    std::vector<std::vector<std::size_t>> study_meshes;
    std::vector<std::size_t> study_nt;

    Problem make_problem() const;
    TensorMesh make_mesh(const Problem& problem) const;
    /// Uniform step count for the single-run mode.
    std::size_t steps(const Problem& problem) const;
    double terminal_time(const Problem& problem) const;
    std::size_t observer_cadence(std::size_t steps) const;
    StudySpec make_study(const Problem& problem) const;
};

/// Parses and validates a config; throws ConfigError naming the offending key.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// "64x32x32" -> {64, 32, 32}
std::vector<std::size_t> parse_resolution(std::string_view text);

} // namespace eife
