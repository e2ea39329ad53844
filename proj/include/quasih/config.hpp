// config.hpp — scenario configuration (single JSON document), curve records,
// and the deterministic CSV/JSON writers behind the CLI.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "quasih/dynamics.hpp"

namespace quasih {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class OutputFormat { Csv, Json };

struct InitialSpec {
    std::string mode;  // "amplitudes" | "alpha"
    double a_re = 0.0, a_im = 0.0, b_re = 0.0, b_im = 0.0;
    double alpha = 0.0, phase1 = 0.0, phase2 = 0.0;

    bool operator==(const InitialSpec&) const = default;
};

struct UnitarySpec {
    std::string mode;  // "matrix" | "real_cd" | "random"
    std::vector<std::pair<double, double>> entries;  // a, b, c, d as (re, im)
    double c = 0.0;
    std::optional<std::uint64_t> seed;

    bool operator==(const UnitarySpec&) const = default;
};

struct SweepSpec {
    std::string param;  // "alpha" | "c"
    std::vector<double> values;

    bool operator==(const SweepSpec&) const = default;
};

struct ScenarioConfig {
    double nu = 1.0, g = 1.0, kappa = 0.0;
    int n_bath = 1;
    double x = 1.0;
    InitialSpec initial;
    UnitarySpec unitary;
    double t_max = 0.0;  // 0 = two population periods (2 pi / omega)
    std::size_t samples = 1024;
    std::string out_path;  // empty = stdout
    OutputFormat format = OutputFormat::Csv;
    std::optional<SweepSpec> sweep;

    bool operator==(const ScenarioConfig&) const = default;
};

// Parse and eagerly validate (every ModelParams/StateH1/Unitary2 invariant is
// checked before any computation). ConfigError carries a field diagnostic.
ScenarioConfig parse_config(const std::string& text);
std::string serialize_config(const ScenarioConfig& cfg);

// Instantiate the validated scenario; `seed` feeds the random-unitary mode
// when the config does not pin its own.
Trajectory build_trajectory(const ScenarioConfig& cfg, std::uint64_t seed);
double effective_t_max(const ScenarioConfig& cfg);

struct CurveRecord {
    double t, p, q, entropy_h, entropy_hw;
};

std::vector<CurveRecord> compute_curve(const Trajectory& traj, double t_max,
                                       std::size_t samples);

// Round-trip-exact decimal text (17 significant digits).
std::string fmt17(double v);

std::string curve_to_csv(const std::vector<CurveRecord>& rows);
std::string curve_to_json(const ScenarioConfig& cfg, const std::vector<CurveRecord>& rows);

struct SweepBlock {
    std::string param;
    double value;
    std::vector<CurveRecord> rows;
};

std::string sweep_to_csv(const std::vector<SweepBlock>& blocks);
std::string sweep_to_json(const ScenarioConfig& cfg, const std::vector<SweepBlock>& blocks);

// Writes to the path, or to the given stream when the path is empty/"-".
void write_output(const std::string& path, const std::string& payload, std::ostream& fallback);

}  // namespace quasih
