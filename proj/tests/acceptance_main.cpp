// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "loopsim/engine.hpp"
#include "loopsim/gaussian.hpp"
#include "loopsim/runner.hpp"
#include "loopsim/schedule.hpp"
#include "loopsim/sources.hpp"
#include "loopsim/temporal.hpp"
#include "loopsim/tomography.hpp"

using namespace loopsim;

namespace {

int g_failures = 0;

void report(int idx, const char* label, bool ok, const std::string& detail) {
    std::printf("criterion %d [%s]: %s  (%s)\n", idx, label, ok ? "PASS" : "FAIL",
                detail.c_str());
    if (!ok) ++g_failures;
}

struct SingleGate {
    double r;
    Quadrature quad;
    double expected;
};

// Fidelity of the lossy single-step gate output against the ideal squeeze.
double single_step_fidelity(double r, Quadrature quad, const FockState& input) {
    FockState out = realistic_model_predict(input, {r}, quad, scenario_current());
    return fidelity(out, ideal_squeeze(input, r, quad));
}

std::vector<double> chain_fidelities(const std::vector<double>& rs, Quadrature quad,
                                     const FockState& input) {
    GateProgram prog = make_program(rs, quad, scenario_current());
    auto states = run_program(input, prog);
    std::vector<double> f;
    double rtot = 0.0;
    for (std::size_t i = 0; i < states.size(); ++i) {
        rtot += rs[i];
        f.push_back(fidelity(states[i], ideal_squeeze(input, rtot, quad)));
    }
    return f;
}

std::string fmt(const std::vector<double>& v) {
    std::string s;
    char buf[32];
    for (double x : v) {
        std::snprintf(buf, sizeof buf, "%.4f ", x);
        s += buf;
    }
    if (!s.empty()) s.pop_back();
    return s;
}

void criterion1() {
    const std::vector<SingleGate> gates = {{0.26, Quadrature::x, 0.937},
                                           {0.46, Quadrature::x, 0.872},
                                           {0.26, Quadrature::p, 0.934},
                                           {0.46, Quadrature::p, 0.868}};
    FockState vac = make_vacuum(1, 25);
    bool ok = true;
    std::vector<double> got;
    for (const auto& g : gates) {
        double f = single_step_fidelity(g.r, g.quad, vac);
        got.push_back(f);
        ok = ok && std::abs(f - g.expected) <= 0.010;
    }
    report(1, "single-step gate fidelities, vacuum input", ok, fmt(got));
}

void criterion2() {
    FockState vac = make_vacuum(1, 30);
    const std::vector<double> rs = {0.33, 0.14, 0.37};
    const std::vector<double> want_x = {0.915, 0.870, 0.732};
    const std::vector<double> want_p = {0.912, 0.866, 0.725};
    auto fx = chain_fidelities(rs, Quadrature::x, vac);
    auto fp = chain_fidelities(rs, Quadrature::p, vac);
    bool ok = true;
    for (int i = 0; i < 3; ++i) {
        ok = ok && std::abs(fx[i] - want_x[i]) <= 0.015;
        ok = ok && std::abs(fp[i] - want_p[i]) <= 0.015;
    }
    report(2, "three-step chain fidelities, vacuum input", ok,
           "x: " + fmt(fx) + " | p: " + fmt(fp));
}

void criterion3() {
    auto [cat, p] = make_cat(scenario_current().cat, 30);
    const std::vector<SingleGate> gates = {{0.26, Quadrature::x, 0.961},
                                           {0.46, Quadrature::x, 0.907},
                                           {0.26, Quadrature::p, 0.961},
                                           {0.46, Quadrature::p, 0.911}};
    bool ok = true;
    std::vector<double> got;
    for (const auto& g : gates) {
        double f = single_step_fidelity(g.r, g.quad, cat);
        got.push_back(f);
        ok = ok && std::abs(f - g.expected) <= 0.04;
    }
    const std::vector<double> rs = {0.33, 0.14, 0.37};
    const std::vector<double> want_x = {0.944, 0.905, 0.793};
    const std::vector<double> want_p = {0.945, 0.910, 0.821};
    auto fx = chain_fidelities(rs, Quadrature::x, cat);
    auto fp = chain_fidelities(rs, Quadrature::p, cat);
    for (int i = 0; i < 3; ++i) {
        got.push_back(fx[i]);
        got.push_back(fp[i]);
        ok = ok && std::abs(fx[i] - want_x[i]) <= 0.04;
        ok = ok && std::abs(fp[i] - want_p[i]) <= 0.04;
    }
    report(3, "gate fidelities, modeled non-Gaussian input", ok, fmt(got));
}

void criterion4() {
    LossScenario sc = scenario_best_recorded();
    sc.cat.tap_cutoff = 10;
    auto [cat, p] = make_cat(sc.cat, 35);
    const std::vector<double> rvals = {0.1, 0.2, 0.3, 0.4};
    const std::vector<int> want = {18, 10, 7, 5};
    bool ok = true;
    std::string detail;
    for (std::size_t i = 0; i < rvals.size(); ++i) {
        int n = max_negative_steps(cat, rvals[i], Quadrature::x, sc, 25);
        detail += std::to_string(n) + " ";
        ok = ok && n == want[i];
    }
    if (!detail.empty()) detail.pop_back();
    report(4, "negativity-preserving iteration counts", ok, detail);
}

void criterion5() {
    FockState ax = make_ancilla(scenario_current().ancilla_x, 25);
    FockState ap = make_ancilla(scenario_current().ancilla_p, 25);
    double db_x = 10.0 * std::log10(2.0 * var_quadrature(ax, 0.0));
    double db_p = 10.0 * std::log10(2.0 * var_quadrature(ap, std::numbers::pi / 2));
    bool ok = std::abs(db_x - (-4.2)) <= 0.3 && std::abs(db_p - (-4.0)) <= 0.3;
    char buf[64];
    std::snprintf(buf, sizeof buf, "x: %.2f dB, p: %.2f dB", db_x, db_p);
    report(5, "modeled ancilla squeezing levels", ok, buf);
}

bool check_cptp(std::string& detail) {
    auto valid = [](const FockState& s) {
        if (std::abs(s.trace() - 1.0) > 1e-9) return false;
        Eigen::SelfAdjointEigenSolver<Matrix> es(s.rho, Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff() >= -1e-9;
    };
    auto [cat, p] = make_cat(CatSpec{}, 20);
    bool ok = valid(apply_loss(cat, 0, 0.7));
    FockState two = tensor(cat, make_vacuum(1, 20));
    ok = ok && valid(apply_beamsplitter(two, 0.3));
    GateProgram prog = make_program({0.26}, Quadrature::x, scenario_current());
    ok = ok && valid(run_step_deterministic(cat, prog.steps[0]));
    detail += ok ? "cptp ok; " : "cptp FAIL; ";
    return ok;
}

bool check_montecarlo(std::string& detail) {
    GateProgram prog = make_program({0.26}, Quadrature::x, scenario_current());
    FockState vac = make_vacuum(1, 12);
    FockState det = run_step_deterministic(vac, prog.steps[0]);
    int n = 10000;
    FockState mc = run_step_montecarlo(vac, prog.steps[0], n, 11);
    double d = trace_distance(mc, det);
    bool ok = d <= 3.0 / std::sqrt(double(n));
    char buf[48];
    std::snprintf(buf, sizeof buf, "mc dist %.4f%s; ", d, ok ? "" : " FAIL");
    detail += buf;
    return ok;
}

bool check_moment_agreement(std::string& detail) {
    FockState state = make_vacuum(1, 30);
    GaussianState g = gaussian_vacuum();
    GateProgram prog = make_program({0.33, 0.14, 0.37}, Quadrature::x,
                                    scenario_current());
    double worst = 0.0;
    for (const auto& step : prog.steps) {
        state = run_step_deterministic(state, step);
        g = mis_step_cov(g, step);
        worst = std::max(worst, std::abs(var_quadrature(state, 0.0) - g.cov(0, 0)));
        worst = std::max(worst, std::abs(var_quadrature(state, std::numbers::pi / 2) -
                                         g.cov(1, 1)));
    }
    bool ok = worst <= 1e-3;
    char buf[64];
    std::snprintf(buf, sizeof buf, "moments %.2e%s; ", worst, ok ? "" : " FAIL");
    detail += buf;
    return ok;
}

bool check_w00_invariance(std::string& detail) {
    auto [cat, p] = make_cat(CatSpec{}, 30);
    double before = wigner(cat, 0, 0);
    double after = wigner(ideal_squeeze(cat, 0.3, Quadrature::x), 0, 0);
    bool ok = std::abs(after - before) <= 1e-6;
    detail += ok ? "w00 invariant; " : "w00 invariance FAIL; ";
    return ok;
}

bool check_tomography(std::string& detail) {
    auto [cat, p] = make_cat(CatSpec{}, 18);
    auto data = sample_quadratures(cat, default_phase_grid(), 3000, 5);
    MleResult res = mle_reconstruct(data, 18);
    double f = fidelity(res.state, cat);
    bool ok = f >= 0.98;
    char buf[48];
    std::snprintf(buf, sizeof buf, "tomo F %.4f%s; ", f, ok ? "" : " FAIL");
    detail += buf;
    return ok;
}

bool check_temporal(std::string& detail) {
    const double g1 = 2 * std::numbers::pi * 0.0298;
    const double g2 = 2 * std::numbers::pi * 0.0956;
    ModeFunction truth = make_mode(g1, g2, 380.0);
    WindowEnsemble ens = synthesize_ensemble(truth, 1.2, 0.0, 0.5, 800, 50000, 2);
    ModeFitResult fit = fit_mode(ens, make_mode(g1 * 1.15, g2 * 0.85, 377.0));
    bool ok = fit.identifiable && std::abs(fit.mode.gamma1 - g1) / g1 <= 0.05 &&
              std::abs(fit.mode.gamma2 - g2) / g2 <= 0.05 &&
              std::abs(fit.mode.t0 - 380.0) <= 1.0;
    detail += ok ? "mode fit ok; " : "mode fit FAIL; ";
    return ok;
}

bool check_ideal_limit(std::string& detail) {
    // The cleanest representable ancillae still carry finite variance, so the
    // ideal limit is certified by extrapolating the (linear) infidelity to
    // zero ancilla variance: the intercept must vanish within 1e-3,
    // equivalent to F >= 0.999 at the limit.
    FockState vac = make_vacuum(1, 35);
    double r = 0.2;
    FockState target = ideal_squeeze(vac, r, Quadrature::x);
    auto infidelity_at = [&](double db) {
        GateStep step;
        step.variant = StepVariant::loop_step;
        step.phi = std::numbers::pi / 2;
        step.loop_eta = 1.0;
        step.ancilla = {db, 0.0, Quadrature::x};
        step.reflectivity = std::exp(-2 * r);
        step.gain = std::sqrt((1 - step.reflectivity) / step.reflectivity);
        return 1.0 - fidelity(run_step_deterministic(vac, step), target);
    };
    double v10 = ancilla_variance({-10.0, 0.0, Quadrature::x});
    double v7 = ancilla_variance({-7.0, 0.0, Quadrature::x});
    double i10 = infidelity_at(-10.0);
    double i7 = infidelity_at(-7.0);
    double intercept = i10 - v10 * (i7 - i10) / (v7 - v10);
    bool ok = std::abs(intercept) <= 1e-3;
    char buf[64];
    std::snprintf(buf, sizeof buf, "ideal limit %.2e%s; ", intercept,
                  ok ? "" : " FAIL");
    detail += buf;
    return ok;
}

bool check_cutoff_convergence(std::string& detail) {
    auto fid_at = [](int d) {
        FockState vac = make_vacuum(1, d);
        FockState out = realistic_model_predict(vac, {0.26}, Quadrature::x,
                                                scenario_current());
        return fidelity(out, ideal_squeeze(vac, 0.26, Quadrature::x));
    };
    double delta = std::abs(fid_at(25) - fid_at(30));
    bool ok = delta < 1e-3;
    char buf[48];
    std::snprintf(buf, sizeof buf, "cutoff delta %.2e%s", delta, ok ? "" : " FAIL");
    detail += buf;
    return ok;
}

void criterion6() {
    std::string detail;
    bool ok = check_cptp(detail);
    ok = check_montecarlo(detail) && ok;
    ok = check_moment_agreement(detail) && ok;
    ok = check_w00_invariance(detail) && ok;
    ok = check_tomography(detail) && ok;
    ok = check_temporal(detail) && ok;
    ok = check_ideal_limit(detail) && ok;
    ok = check_cutoff_convergence(detail) && ok;
    report(6, "property suite", ok, detail);
}

void criterion7() {
    TimingReport current = check_timing(TimingBudget{});
    TimingReport fast = check_timing({0.05, 0.04, 0.1});
    bool ok = current.feasible && std::abs(current.clock_hz - 1e9 / 60.8) < 1.0 &&
              std::lround(current.clock_hz / 1e6) == 16 && fast.feasible &&
              std::abs(fast.clock_hz - 1e10) < 1.0;
    char buf[80];
    std::snprintf(buf, sizeof buf, "current %.3f MHz, projected %.1f GHz",
                  current.clock_hz / 1e6, fast.clock_hz / 1e9);
    report(7, "control timing", ok, buf);
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
