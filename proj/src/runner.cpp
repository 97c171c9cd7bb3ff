#include "loopsim/runner.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "loopsim/engine.hpp"
#include "loopsim/schedule.hpp"
#include "loopsim/sources.hpp"
#include "loopsim/tomography.hpp"

namespace loopsim {

namespace {

namespace fs = std::filesystem;

double round_to(double v, int decimals) {
    double s = std::pow(10.0, decimals);
    double r = std::round(v * s) / s;
    return r == 0.0 ? 0.0 : r;  // avoid -0
}

Quadrature quad_from_string(const std::string& s) {
    if (s == "x") return Quadrature::x;
    if (s == "p") return Quadrature::p;
    throw std::runtime_error("config: quadrature must be \"x\" or \"p\", got " + s);
}

void apply_ancilla_overrides(AncillaSpec& spec, const Json& j) {
    if (j.contains("pure_squeezing_db")) spec.pure_squeezing_db = j["pure_squeezing_db"];
    if (j.contains("preparation_loss")) spec.preparation_loss = j["preparation_loss"];
    if (spec.pure_squeezing_db > 0.0)
        throw std::runtime_error("config: ancilla pure_squeezing_db must be <= 0");
    if (spec.preparation_loss < 0.0 || spec.preparation_loss >= 1.0)
        throw std::runtime_error("config: ancilla preparation_loss out of range");
}

void apply_cat_overrides(CatSpec& cat, const Json& j) {
    if (j.contains("source_squeezing_r")) cat.source_squeezing_r = j["source_squeezing_r"];
    if (j.contains("tap_reflectivity")) cat.tap_reflectivity = j["tap_reflectivity"];
    if (j.contains("preparation_loss")) cat.preparation_loss = j["preparation_loss"];
    if (j.contains("tap_cutoff")) cat.tap_cutoff = j["tap_cutoff"];
    if (j.contains("herald")) {
        std::string h = j["herald"];
        if (h == "click")
            cat.herald = HeraldModel::click;
        else if (h == "single_photon")
            cat.herald = HeraldModel::single_photon;
        else
            throw std::runtime_error("config: herald must be click or single_photon");
    }
    if (cat.tap_reflectivity <= 0.0 || cat.tap_reflectivity > 0.5)
        throw std::runtime_error("config: cat tap_reflectivity out of range");
    if (cat.preparation_loss < 0.0 || cat.preparation_loss >= 1.0)
        throw std::runtime_error("config: cat preparation_loss out of range");
}

LossScenario named_scenario(const std::string& name) {
    try {
        return scenario_by_name(name);
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("config: ") + e.what());
    }
}

LossScenario scenario_from_json(const Json& j) {
    if (j.is_string()) return named_scenario(j.get<std::string>());
    if (!j.is_object()) throw std::runtime_error("config: scenario must be a name or object");
    LossScenario s = named_scenario(j.value("base", std::string("current")));
    if (j.contains("loop_eta")) s.loop_eta = j["loop_eta"];
    if (j.contains("first_pass_ancilla_loss"))
        s.first_pass_ancilla_loss = j["first_pass_ancilla_loss"];
    if (s.loop_eta < 0.0 || s.loop_eta > 1.0)
        throw std::runtime_error("config: loop_eta out of range");
    if (s.first_pass_ancilla_loss < 0.0 || s.first_pass_ancilla_loss >= 1.0)
        throw std::runtime_error("config: first_pass_ancilla_loss out of range");
    if (j.contains("ancilla_x")) apply_ancilla_overrides(s.ancilla_x, j["ancilla_x"]);
    if (j.contains("ancilla_p")) apply_ancilla_overrides(s.ancilla_p, j["ancilla_p"]);
    if (j.contains("cat")) apply_cat_overrides(s.cat, j["cat"]);
    if (j.contains("name")) s.name = j["name"];
    return s;
}

FockState build_input(const ExperimentConfig& cfg, double* herald_prob) {
    if (cfg.input == "vacuum") {
        if (herald_prob) *herald_prob = 1.0;
        return make_vacuum(1, cfg.cutoff);
    }
    auto [cat, p] = make_cat(cfg.scenario.cat, cfg.cutoff);
    if (herald_prob) *herald_prob = p;
    return cat;
}

struct Stats {
    double mean = 0.0;
    double stderr_ = 0.0;
};

Stats mean_stderr(const std::vector<double>& v) {
    Stats s;
    if (v.empty()) return s;
    s.mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - s.mean) * (x - s.mean);
        s.stderr_ = std::sqrt(ss / (v.size() - 1) / v.size());
    }
    return s;
}

Json run_one_program(const ExperimentConfig& cfg, const ProgramSpec& spec,
                     const FockState& input, const std::string& out_dir) {
    GateProgram prog = make_program(spec.r, spec.quad, cfg.scenario);
    std::vector<FockState> states = run_program(input, prog);
    bool vacuum_input = cfg.input == "vacuum";

    Json steps = Json::array();
    double rtot = 0.0;
    GaussianState gcur = gaussian_vacuum();
    for (std::size_t i = 0; i < states.size(); ++i) {
        rtot += std::abs(spec.r[i]);
        FockState ideal = ideal_squeeze(input, rtot, spec.quad);
        auto [dx, dp] = normalized_variances(states[i], input);
        Json step;
        step["r_total"] = round_to(rtot, 4);
        step["fidelity_vs_ideal"] = round_to(fidelity(states[i], ideal), 4);
        step["normalized_var_x"] = round_to(dx, 4);
        step["normalized_var_p"] = round_to(dp, 4);
        step["w00"] = round_to(negativity(states[i]), 4);
        step["cutoff_warning"] = states[i].cutoff_warning;
        if (vacuum_input) {
            gcur = mis_step_cov(gcur, prog.steps[i]);
            double rr = spec.quad == Quadrature::x ? rtot : -rtot;
            GaussianState gideal = gaussian_squeeze(gaussian_vacuum(), rr);
            step["gaussian_oracle_fidelity"] =
                round_to(gaussian_fidelity(gcur, gideal), 4);
            step["gaussian_oracle_var_x"] = round_to(gcur.cov(0, 0), 6);
            step["gaussian_oracle_var_p"] = round_to(gcur.cov(1, 1), 6);
        }
        steps.push_back(std::move(step));
    }

    const FockState& out = states.back();
    Json result;
    result["name"] = spec.name;
    result["quadrature"] = to_string(spec.quad);
    result["r"] = spec.r;
    result["steps"] = std::move(steps);
    EllipseFit ell = gaussian_ellipse_fit(out);
    result["ellipse"] = {{"squeezing_db", round_to(ell.squeezing_db, 4)},
                         {"antisqueezing_db", round_to(ell.antisqueezing_db, 4)},
                         {"angle_deg", round_to(ell.angle_deg, 2)}};

    if (cfg.tomography.enabled) {
        std::vector<double> phases;
        if (cfg.tomography.phases_deg.empty()) {
            phases = default_phase_grid();
        } else {
            for (double d : cfg.tomography.phases_deg)
                phases.push_back(d * M_PI / 180.0);
        }
        QuadratureDataset data =
            sample_quadratures(out, phases, cfg.tomography.n_per_phase, cfg.seed);
        if (cfg.outputs.dataset)
            write_dataset_csv(out_dir + "/" + spec.name + "_quadratures.csv", data);

        // five-fold protocol: contiguous split per phase group
        int folds = std::max(1, cfg.tomography.folds);
        FockState ideal = ideal_squeeze(input, rtot, spec.quad);
        std::vector<double> f_fid, f_w00, f_dx, f_dp;
        for (int k = 0; k < folds; ++k) {
            QuadratureDataset sub;
            sub.seed = data.seed;
            for (const auto& g : data.groups) {
                int n = static_cast<int>(g.samples.size());
                int lo = k * n / folds, hi = (k + 1) * n / folds;
                QuadratureDataset::Group sg;
                sg.phase = g.phase;
                sg.samples.assign(g.samples.begin() + lo, g.samples.begin() + hi);
                sub.groups.push_back(std::move(sg));
            }
            MleOptions opts;
            opts.max_iters = cfg.tomography.max_iters;
            MleResult rec = mle_reconstruct(sub, cfg.cutoff, opts);
            f_fid.push_back(fidelity(rec.state, ideal));
            f_w00.push_back(negativity(rec.state));
            auto [dx, dp] = normalized_variances(rec.state, input);
            f_dx.push_back(dx);
            f_dp.push_back(dp);
        }
        auto pack = [](const Stats& s) {
            return Json{{"mean", round_to(s.mean, 4)},
                        {"stderr", round_to(s.stderr_, 4)}};
        };
        result["tomography"] = {{"folds", folds},
                                {"n_per_phase", cfg.tomography.n_per_phase},
                                {"fidelity_vs_ideal", pack(mean_stderr(f_fid))},
                                {"w00", pack(mean_stderr(f_w00))},
                                {"normalized_var_x", pack(mean_stderr(f_dx))},
                                {"normalized_var_p", pack(mean_stderr(f_dp))}};
    }

    if (cfg.outputs.schedule) {
        ControlSchedule sched = compile_schedule(prog);
        write_schedule_csv(out_dir + "/" + spec.name + "_schedule.csv", sched);
    }
    if (cfg.outputs.wigner_grid) {
        std::ostringstream csv;
        csv << "x,p,w\n";
        int np = cfg.outputs.wigner_points;
        double ext = cfg.outputs.wigner_extent;
        for (int i = 0; i < np; ++i)
            for (int j = 0; j < np; ++j) {
                double x = -ext + 2.0 * ext * i / (np - 1);
                double p = -ext + 2.0 * ext * j / (np - 1);
                csv << format_fixed(x, 4) << ',' << format_fixed(p, 4) << ','
                    << format_fixed(wigner(out, x, p), 6) << '\n';
            }
        write_text_file(out_dir + "/" + spec.name + "_wigner.csv", csv.str());
    }
    return result;
}

}  // namespace

ExperimentConfig config_from_json(const Json& j) {
    if (!j.is_object()) throw std::runtime_error("config: top level must be an object");
    ExperimentConfig cfg;
    cfg.task = j.value("task", std::string("program"));
    if (cfg.task != "program" && cfg.task != "negativity_curve" &&
        cfg.task != "iteration_count")
        throw std::runtime_error("config: unknown task " + cfg.task);
    cfg.input = j.value("input", std::string("vacuum"));
    if (cfg.input != "vacuum" && cfg.input != "cat")
        throw std::runtime_error("config: input must be vacuum or cat");
    cfg.cutoff = j.value("cutoff", 25);
    if (cfg.cutoff < 2 || cfg.cutoff > 200)
        throw std::runtime_error("config: cutoff out of range");
    cfg.seed = j.value("seed", 1ULL);
    if (j.contains("scenario")) cfg.scenario = scenario_from_json(j["scenario"]);
    if (j.contains("cat")) apply_cat_overrides(cfg.scenario.cat, j["cat"]);

    if (j.contains("programs")) {
        for (const auto& pj : j["programs"]) {
            ProgramSpec ps;
            ps.r = pj.at("r").get<std::vector<double>>();
            if (ps.r.empty()) throw std::runtime_error("config: program r list empty");
            ps.quad = quad_from_string(pj.value("quadrature", std::string("x")));
            ps.name = pj.value("name", std::string());
            if (ps.name.empty()) {
                std::ostringstream nm;
                nm << to_string(ps.quad);
                for (double r : ps.r) nm << "_r" << r;
                ps.name = nm.str();
            }
            cfg.programs.push_back(std::move(ps));
        }
    }
    if (cfg.task == "program" && cfg.programs.empty())
        throw std::runtime_error("config: task=program requires a programs list");

    if (j.contains("tomography")) {
        const Json& t = j["tomography"];
        cfg.tomography.enabled = t.value("enabled", true);
        cfg.tomography.n_per_phase = t.value("n_per_phase", 3000);
        cfg.tomography.folds = t.value("folds", 5);
        cfg.tomography.max_iters = t.value("max_iters", 2000);
        if (t.contains("phases_deg"))
            cfg.tomography.phases_deg = t["phases_deg"].get<std::vector<double>>();
        if (cfg.tomography.n_per_phase < 1)
            throw std::runtime_error("config: n_per_phase must be positive");
    }
    if (j.contains("outputs")) {
        const Json& o = j["outputs"];
        cfg.outputs.wigner_grid = o.value("wigner_grid", false);
        cfg.outputs.wigner_extent = o.value("wigner_extent", 5.0);
        cfg.outputs.wigner_points = o.value("wigner_points", 81);
        cfg.outputs.schedule = o.value("schedule", false);
        cfg.outputs.dataset = o.value("dataset", false);
        if (cfg.outputs.wigner_points < 2)
            throw std::runtime_error("config: wigner_points must be >= 2");
    }
    if (j.contains("curve")) {
        const Json& c = j["curve"];
        cfg.curve.r = c.value("r", 0.2);
        cfg.curve.max_steps = c.value("max_steps", 20);
        if (c.contains("scenarios"))
            cfg.curve.scenarios = c["scenarios"].get<std::vector<std::string>>();
        if (cfg.curve.r <= 0.0 || cfg.curve.max_steps < 1)
            throw std::runtime_error("config: bad curve settings");
    }
    if (cfg.curve.scenarios.empty())
        cfg.curve.scenarios = {"current", "improved_half", "best_recorded"};
    if (j.contains("iterations")) {
        const Json& it = j["iterations"];
        if (it.contains("r_values"))
            cfg.iterations.r_values = it["r_values"].get<std::vector<double>>();
        cfg.iterations.cap = it.value("cap", 50);
    }
    if (cfg.iterations.r_values.empty())
        cfg.iterations.r_values = {0.1, 0.2, 0.3, 0.4};
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("config parse error: ") + e.what());
    }
    return config_from_json(j);
}

int max_negative_steps(const FockState& input, double r, Quadrature quad,
                       const LossScenario& scenario, int cap) {
    int best = 0;
    for (int n = 1; n <= cap; ++n) {
        ScaleNoise ch =
            compose_program_channel(std::vector<double>(n, r), quad, scenario);
        if (w00_through_channel(input, ch) < 0.0) best = n;
    }
    return best;
}

int run_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
    fs::create_directories(out_dir);
    Json report;
    report["task"] = cfg.task;
    report["scenario"] = cfg.scenario.name;
    report["cutoff"] = cfg.cutoff;
    report["seed"] = cfg.seed;

    if (cfg.task == "program") {
        double herald = 1.0;
        FockState input = build_input(cfg, &herald);
        report["input"] = {{"kind", cfg.input},
                           {"herald_probability", round_to(herald, 6)},
                           {"w00", round_to(negativity(input), 4)}};
        Json programs = Json::array();
        for (const auto& spec : cfg.programs)
            programs.push_back(run_one_program(cfg, spec, input, out_dir));
        report["programs"] = std::move(programs);
    } else if (cfg.task == "negativity_curve") {
        std::ostringstream csv;
        csv << "scenario,n_steps,w00\n";
        Json curves = Json::array();
        for (const auto& name : cfg.curve.scenarios) {
            LossScenario sc = scenario_by_name(name);
            auto [cat, p] = make_cat(sc.cat, cfg.cutoff);
            Json points = Json::array();
            for (int n = 1; n <= cfg.curve.max_steps; ++n) {
                ScaleNoise ch = compose_program_channel(
                    std::vector<double>(n, cfg.curve.r), Quadrature::x, sc);
                double w = w00_through_channel(cat, ch);
                csv << name << ',' << n << ',' << format_fixed(w, 6) << '\n';
                points.push_back({{"n", n}, {"w00", round_to(w, 6)}});
            }
            curves.push_back({{"scenario", name},
                              {"r", cfg.curve.r},
                              {"herald_probability", round_to(p, 6)},
                              {"points", std::move(points)}});
        }
        write_text_file(out_dir + "/negativity_curve.csv", csv.str());
        report["curves"] = std::move(curves);
    } else {  // iteration_count
        auto [cat, p] = make_cat(cfg.scenario.cat, cfg.cutoff);
        Json rows = Json::array();
        for (double r : cfg.iterations.r_values) {
            int n = max_negative_steps(cat, r, Quadrature::x, cfg.scenario,
                                       cfg.iterations.cap);
            rows.push_back({{"r", r}, {"max_steps", n}});
        }
        report["input_w00"] = round_to(negativity(cat), 4);
        report["herald_probability"] = round_to(p, 6);
        report["iteration_counts"] = std::move(rows);
    }

    write_text_file(out_dir + "/report.json", report.dump(2) + "\n");
    return 0;
}

int run_sweep(const Json& raw_config, const std::string& param,
              const std::vector<double>& values, const std::string& out_dir) {
    fs::create_directories(out_dir);
    std::ostringstream csv;
    csv << "value,fidelity_vs_ideal,normalized_var_x,normalized_var_p,w00\n";
    Json base_config = raw_config;
    // A scenario given as a bare name can't host nested overrides; promote it
    // to the object form so pointers like /scenario/loop_eta resolve.
    if (base_config.contains("scenario") && base_config["scenario"].is_string())
        base_config["scenario"] = Json{{"base", base_config["scenario"]}};
    for (double v : values) {
        Json patched = base_config;
        try {
            patched[Json::json_pointer(param)] = v;
        } catch (const Json::exception& e) {
            throw std::runtime_error("sweep: cannot set " + param + ": " + e.what());
        }
        ExperimentConfig cfg = config_from_json(patched);
        if (cfg.programs.empty())
            throw std::runtime_error("sweep: config has no programs");
        FockState input = build_input(cfg, nullptr);
        const ProgramSpec& spec = cfg.programs.front();
        FockState out =
            realistic_model_predict(input, spec.r, spec.quad, cfg.scenario);
        double rtot = 0.0;
        for (double r : spec.r) rtot += std::abs(r);
        FockState ideal = ideal_squeeze(input, rtot, spec.quad);
        auto [dx, dp] = normalized_variances(out, input);
        csv << format_fixed(v, 6) << ',' << format_fixed(fidelity(out, ideal), 4)
            << ',' << format_fixed(dx, 4) << ',' << format_fixed(dp, 4) << ','
            << format_fixed(negativity(out), 4) << '\n';
    }
    write_text_file(out_dir + "/sweep.csv", csv.str());
    return 0;
}

}  // namespace loopsim
