#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "loopsim/runner.hpp"
#include "loopsim/schedule.hpp"
#include "loopsim/sources.hpp"
#include "loopsim/temporal.hpp"

namespace {

loopsim::Json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    loopsim::Json j;
    in >> j;
    return j;
}

void apply_overrides(loopsim::Json& j, std::int64_t seed, int cutoff) {
    if (seed >= 0) j["seed"] = static_cast<std::uint64_t>(seed);
    if (cutoff > 0) j["cutoff"] = cutoff;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"loopsim: loop-based measurement-induced squeezing simulator"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out";
    std::int64_t seed = -1;
    int cutoff = 0;

    auto add_common = [&](CLI::App* cmd, bool config_required) {
        auto* opt = cmd->add_option("--config", config_path, "experiment config JSON");
        if (config_required) opt->required();
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--seed", seed, "override the config seed");
        cmd->add_option("--cutoff", cutoff, "override the Fock cutoff");
    };

    auto* run_cmd = app.add_subcommand("run", "run a configured experiment");
    add_common(run_cmd, true);

    auto* sweep_cmd = app.add_subcommand("sweep", "repeat an experiment over one parameter");
    add_common(sweep_cmd, true);
    std::string param;
    std::vector<double> values;
    sweep_cmd->add_option("--param", param, "JSON pointer into the config, e.g. /scenario/loop_eta")
        ->required();
    sweep_cmd->add_option("--values", values, "parameter values");

    auto* sched_cmd = app.add_subcommand("schedule", "emit the control timeline for a program");
    add_common(sched_cmd, true);
    double tau_ns = 60.8;
    sched_cmd->add_option("--tau", tau_ns, "loop round-trip time in ns");

    auto* fit_cmd = app.add_subcommand("fit-mode", "closed-loop temporal-mode fit on synthetic data");
    std::string fit_out = "out";
    double gamma1_mhz = 29.8, gamma2_mhz = 95.6, embedded_v = 1.2;
    int n_windows = 50000;
    std::uint64_t fit_seed = 1;
    fit_cmd->add_option("--out", fit_out, "output directory");
    fit_cmd->add_option("--gamma1", gamma1_mhz, "true bandwidth 1 (MHz, HWHM)");
    fit_cmd->add_option("--gamma2", gamma2_mhz, "true bandwidth 2 (MHz, HWHM)");
    fit_cmd->add_option("--variance", embedded_v, "embedded quadrature variance");
    fit_cmd->add_option("--windows", n_windows, "number of synthetic heralded windows");
    fit_cmd->add_option("--seed", fit_seed, "RNG seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            loopsim::Json j = read_json(config_path);
            apply_overrides(j, seed, cutoff);
            return loopsim::run_experiment(loopsim::config_from_json(j), out_dir);
        }
        if (sweep_cmd->parsed()) {
            loopsim::Json j = read_json(config_path);
            apply_overrides(j, seed, cutoff);
            loopsim::config_from_json(j);  // validate before sweeping
            return loopsim::run_sweep(j, param, values, out_dir);
        }
        if (sched_cmd->parsed()) {
            loopsim::Json j = read_json(config_path);
            apply_overrides(j, seed, cutoff);
            loopsim::ExperimentConfig cfg = loopsim::config_from_json(j);
            if (cfg.programs.empty())
                throw std::runtime_error("schedule: config has no programs");
            const auto& spec = cfg.programs.front();
            loopsim::GateProgram prog =
                loopsim::make_program(spec.r, spec.quad, cfg.scenario);
            loopsim::ControlSchedule sched = loopsim::compile_schedule(prog, tau_ns);
            std::filesystem::create_directories(out_dir);
            loopsim::write_schedule_csv(out_dir + "/schedule.csv", sched);
            loopsim::write_text_file(out_dir + "/schedule.json",
                                     loopsim::schedule_to_json(sched).dump(2) + "\n");
            std::cout << "wrote " << out_dir << "/schedule.csv\n";
            return 0;
        }
        if (fit_cmd->parsed()) {
            const double two_pi = 2.0 * 3.14159265358979323846;
            double g1 = two_pi * gamma1_mhz * 1e-3;  // rad/ns
            double g2 = two_pi * gamma2_mhz * 1e-3;
            const double dt = 0.5, duration = 400.0;
            int n = static_cast<int>(duration / dt);
            loopsim::ModeFunction truth = loopsim::make_mode(g1, g2, 380.0);
            loopsim::WindowEnsemble ens = loopsim::synthesize_ensemble(
                truth, embedded_v, 0.0, dt, n, n_windows, fit_seed);
            loopsim::ModeFunction guess =
                loopsim::make_mode(g1 * 1.15, g2 * 0.85, 377.0);
            loopsim::ModeFitResult fit = loopsim::fit_mode(ens, guess);
            loopsim::Json rep;
            rep["true"] = {{"gamma1_mhz", gamma1_mhz},
                           {"gamma2_mhz", gamma2_mhz},
                           {"t0_ns", 380.0},
                           {"variance", embedded_v}};
            rep["fit"] = {{"gamma1_mhz", fit.mode.gamma1 / two_pi * 1e3},
                          {"gamma2_mhz", fit.mode.gamma2 / two_pi * 1e3},
                          {"t0_ns", fit.mode.t0},
                          {"variance", fit.variance},
                          {"evaluations", fit.evaluations},
                          {"converged", fit.converged},
                          {"identifiable", fit.identifiable}};
            std::filesystem::create_directories(fit_out);
            loopsim::write_text_file(fit_out + "/mode_fit.json", rep.dump(2) + "\n");
            std::cout << rep.dump(2) << "\n";
            return 0;
        }
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
