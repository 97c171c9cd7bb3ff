#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "loopsim/gaussian.hpp"
#include "loopsim/program.hpp"
#include "loopsim/serialize.hpp"

namespace loopsim {

struct ProgramSpec {
    std::string name;
    std::vector<double> r;
    Quadrature quad = Quadrature::x;
};

struct TomoSettings {
    bool enabled = false;
    int n_per_phase = 3000;
    int folds = 5;
    std::vector<double> phases_deg;  // empty = default grid
    int max_iters = 2000;
};

struct OutputSettings {
    bool wigner_grid = false;
    double wigner_extent = 5.0;
    int wigner_points = 81;
    bool schedule = false;
    bool dataset = false;
};

struct CurveSettings {
    double r = 0.2;
    int max_steps = 20;
    std::vector<std::string> scenarios;
};

struct IterationSettings {
    std::vector<double> r_values;
    int cap = 50;
};

/// Parsed, validated experiment description. task selects the pipeline:
///   program          — run gate programs, report fidelities/variances/W(0,0)
///   negativity_curve — W(0,0) vs step count for a list of scenarios
///   iteration_count  — max steps keeping W(0,0) < 0 for each r value
struct ExperimentConfig {
    std::string task = "program";
    std::string input = "vacuum";  // "vacuum" | "cat"
    int cutoff = 25;
    std::uint64_t seed = 1;
    LossScenario scenario = scenario_current();
    std::vector<ProgramSpec> programs;
    TomoSettings tomography;
    OutputSettings outputs;
    CurveSettings curve;
    IterationSettings iterations;
};

/// Throws std::runtime_error with a descriptive message on schema violations.
ExperimentConfig config_from_json(const Json& j);
ExperimentConfig load_config(const std::string& path);

/// Largest n such that an n-fold repetition of target squeezing r leaves
/// W(0,0) of the output negative; exact trace evaluation of the composed
/// per-step Gaussian channel acting on the Fock-basis input.
int max_negative_steps(const FockState& input, double r, Quadrature quad,
                       const LossScenario& scenario, int cap = 50);

/// Runs the configured pipeline; writes report.json (plus optional CSVs)
/// under out_dir. Returns a process exit code.
int run_experiment(const ExperimentConfig& config, const std::string& out_dir);

/// Repeats the first configured program while substituting `values` at the
/// JSON pointer `param` in the raw config; writes sweep.csv under out_dir.
int run_sweep(const Json& raw_config, const std::string& param,
              const std::vector<double>& values, const std::string& out_dir);

}  // namespace loopsim
