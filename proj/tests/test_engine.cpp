#include <doctest.h>

#include <cmath>
#include <numbers>

#include "loopsim/engine.hpp"
#include "loopsim/gaussian.hpp"
#include "loopsim/sources.hpp"

using namespace loopsim;

namespace {
constexpr double kHalfPi = std::numbers::pi / 2.0;

GateStep vacuum_noise_free_step(double r, StepVariant variant) {
    GateStep step;
    step.variant = variant;
    step.phi = kHalfPi;
    step.loop_eta = 1.0;
    step.ancilla = {-10.0, 0.0, Quadrature::x};
    if (variant == StepVariant::first_step) {
        double T = std::exp(-2 * r);
        step.reflectivity = 1 - T;
        step.gain = -std::sqrt(step.reflectivity / T);
    } else {
        step.reflectivity = std::exp(-2 * r);
        step.gain = std::sqrt((1 - step.reflectivity) / step.reflectivity);
    }
    return step;
}
}  // namespace

TEST_CASE("working conditions from target squeezing") {
    auto wc = r_to_working_condition({0.33, 0.14, 0.37}, Quadrature::x);
    REQUIRE(wc.size() == 3);
    CHECK(wc[0].variant == StepVariant::first_step);
    CHECK(wc[0].reflectivity == doctest::Approx(1 - std::exp(-0.66)).epsilon(1e-12));
    CHECK(wc[0].gain == doctest::Approx(-std::sqrt((1 - std::exp(-0.66)) / std::exp(-0.66))));
    CHECK(wc[1].variant == StepVariant::loop_step);
    CHECK(wc[1].reflectivity == doctest::Approx(std::exp(-0.28)));
    CHECK(wc[1].gain ==
          doctest::Approx(std::sqrt((1 - std::exp(-0.28)) / std::exp(-0.28))));
    for (const auto& c : wc) CHECK(c.phi == doctest::Approx(kHalfPi));

    auto wp = r_to_working_condition({0.26}, Quadrature::p);
    CHECK(wp[0].phi == doctest::Approx(0.0));
    CHECK_THROWS_AS(r_to_working_condition({0.0}, Quadrature::x), std::invalid_argument);
}

TEST_CASE("deterministic step matches the covariance oracle on vacuum") {
    LossScenario sc = scenario_current();
    for (auto quad : {Quadrature::x, Quadrature::p}) {
        GateProgram prog = make_program({0.26}, quad, sc);
        FockState out = run_step_deterministic(make_vacuum(1, 25), prog.steps[0]);
        GaussianState gout = mis_step_cov(gaussian_vacuum(), prog.steps[0]);
        CHECK(var_quadrature(out, 0.0) == doctest::Approx(gout.cov(0, 0)).epsilon(2e-3));
        CHECK(var_quadrature(out, kHalfPi) == doctest::Approx(gout.cov(1, 1)).epsilon(2e-3));
        CHECK(std::abs(mean_quadrature(out, 0.0)) < 1e-6);
        CHECK(std::abs(mean_quadrature(out, kHalfPi)) < 1e-6);
    }
}

TEST_CASE("near-ideal loop step approaches the exact squeeze") {
    // -10 dB pure ancilla, no loss: residual infidelity is linear in the
    // ancilla variance, so extrapolating two levels to zero must land at 1.
    FockState vac = make_vacuum(1, 35);
    double r = 0.2;
    FockState target = ideal_squeeze(vac, r, Quadrature::x);
    GateStep s10 = vacuum_noise_free_step(r, StepVariant::loop_step);
    GateStep s7 = s10;
    s7.ancilla.pure_squeezing_db = -7.0;
    double inf10 = 1.0 - fidelity(run_step_deterministic(vac, s10), target);
    double inf7 = 1.0 - fidelity(run_step_deterministic(vac, s7), target);
    double v10 = ancilla_variance(s10.ancilla);
    double v7 = ancilla_variance(s7.ancilla);
    CHECK(inf10 < inf7);
    double intercept = inf10 - v10 * (inf7 - inf10) / (v7 - v10);
    CHECK(std::abs(intercept) < 1e-3);
}

TEST_CASE("feedforward removes the measured-arm correlation") {
    LossScenario sc = scenario_current();
    GateProgram prog = make_program({0.26}, Quadrature::x, sc);
    GateStep no_ff = prog.steps[0];
    no_ff.gain = 0.0;
    FockState vac = make_vacuum(1, 25);
    FockState with_ff = run_step_deterministic(vac, prog.steps[0]);
    FockState without = run_step_deterministic(vac, no_ff);
    CHECK(var_quadrature(without, kHalfPi) > var_quadrature(with_ff, kHalfPi));
}

TEST_CASE("monte carlo converges to the deterministic gate") {
    LossScenario sc = scenario_current();
    GateProgram prog = make_program({0.26}, Quadrature::x, sc);
    FockState vac = make_vacuum(1, 12);
    FockState det = run_step_deterministic(vac, prog.steps[0]);
    int n = 4000;
    FockState mc = run_step_montecarlo(vac, prog.steps[0], n, 77);
    CHECK(trace_distance(mc, det) <= 3.0 / std::sqrt(double(n)));

    FockState mc2 = run_step_montecarlo(vac, prog.steps[0], 500, 123);
    FockState mc3 = run_step_montecarlo(vac, prog.steps[0], 500, 123);
    CHECK((mc2.rho - mc3.rho).norm() == 0.0);  // bit-identical per seed
}

TEST_CASE("ideal squeeze group law and invariants") {
    auto [cat, p] = make_cat(CatSpec{}, 30);
    FockState a = ideal_squeeze(ideal_squeeze(cat, 0.2, Quadrature::x), 0.15, Quadrature::x);
    FockState b = ideal_squeeze(cat, 0.35, Quadrature::x);
    CHECK(fidelity(a, b) >= 1.0 - 1e-6);
    // W(0,0) is invariant under the ideal gate
    CHECK(wigner(ideal_squeeze(cat, 0.3, Quadrature::x), 0, 0) ==
          doctest::Approx(wigner(cat, 0, 0)).epsilon(1e-6));
    FockState same = ideal_squeeze(cat, 0.0, Quadrature::p);
    CHECK(fidelity(same, cat) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("program execution composes steps") {
    LossScenario sc = scenario_current();
    GateProgram prog = make_program({0.26}, Quadrature::x, sc);
    FockState vac = make_vacuum(1, 20);
    auto states = run_program(vac, prog);
    REQUIRE(states.size() == 1);
    FockState direct = run_step_deterministic(vac, prog.steps[0]);
    CHECK(fidelity(states[0], direct) == doctest::Approx(1.0).epsilon(1e-10));

    GateProgram empty;
    CHECK_THROWS_AS(run_program(vac, empty), std::invalid_argument);
}

TEST_CASE("three-step program tracks the covariance oracle") {
    LossScenario sc = scenario_current();
    std::vector<double> rs{0.33, 0.14, 0.37};
    GateProgram prog = make_program(rs, Quadrature::x, sc);
    FockState state = make_vacuum(1, 30);
    GaussianState g = gaussian_vacuum();
    for (const auto& step : prog.steps) {
        state = run_step_deterministic(state, step);
        g = mis_step_cov(g, step);
        CHECK(var_quadrature(state, 0.0) == doctest::Approx(g.cov(0, 0)).epsilon(2e-3));
        CHECK(var_quadrature(state, kHalfPi) == doctest::Approx(g.cov(1, 1)).epsilon(2e-3));
    }
}

TEST_CASE("cutoff convergence of a reported fidelity") {
    LossScenario sc = scenario_current();
    auto run_at = [&](int d) {
        FockState vac = make_vacuum(1, d);
        FockState out = realistic_model_predict(vac, {0.26}, Quadrature::x, sc);
        return fidelity(out, ideal_squeeze(vac, 0.26, Quadrature::x));
    };
    CHECK(std::abs(run_at(25) - run_at(30)) < 1e-3);
}
