#include "loopsim/program.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace loopsim {

namespace {
constexpr double kHalfPi = std::numbers::pi / 2.0;
}

LossScenario scenario_current() {
    return LossScenario{};
}

LossScenario scenario_improved_half() {
    LossScenario s;
    s.name = "improved_half";
    s.loop_eta = 0.98;
    s.first_pass_ancilla_loss = 0.02;
    s.ancilla_x = {-7.0, 0.0, Quadrature::x};
    s.ancilla_p = {-7.0, 0.0, Quadrature::p};
    return s;
}

LossScenario scenario_best_recorded() {
    LossScenario s;
    s.name = "best_recorded";
    s.loop_eta = 0.99;
    s.first_pass_ancilla_loss = 0.01;
    s.ancilla_x = {-15.0, 0.0, Quadrature::x};
    s.ancilla_p = {-15.0, 0.0, Quadrature::p};
    // Input from a lower-loss generation setup: smaller tap, 13% loss.
    s.cat.tap_reflectivity = 0.03;
    s.cat.preparation_loss = 0.13;
    return s;
}

LossScenario scenario_by_name(const std::string& name) {
    if (name == "current") return scenario_current();
    if (name == "improved_half") return scenario_improved_half();
    if (name == "best_recorded") return scenario_best_recorded();
    throw std::invalid_argument("unknown scenario: " + name);
}

std::vector<WorkingCondition> r_to_working_condition(
    const std::vector<double>& r_list, Quadrature quad) {
    std::vector<WorkingCondition> out;
    out.reserve(r_list.size());
    double phi = quad == Quadrature::x ? kHalfPi : 0.0;
    for (std::size_t i = 0; i < r_list.size(); ++i) {
        double r = r_list[i];
        if (r == 0.0) throw std::invalid_argument("r_to_working_condition: r = 0");
        r = std::abs(r);
        WorkingCondition wc;
        wc.phi = phi;
        if (i == 0) {
            double T = std::exp(-2.0 * r);
            wc.reflectivity = 1.0 - T;
            wc.gain = -std::sqrt(wc.reflectivity / T);
            wc.variant = StepVariant::first_step;
        } else {
            double R = std::exp(-2.0 * r);
            wc.reflectivity = R;
            wc.gain = std::sqrt((1.0 - R) / R);
            wc.variant = StepVariant::loop_step;
        }
        out.push_back(wc);
    }
    return out;
}

GateProgram make_program(const std::vector<double>& r_list, Quadrature quad,
                         const LossScenario& scenario) {
    GateProgram prog;
    auto conditions = r_to_working_condition(r_list, quad);
    for (std::size_t i = 0; i < conditions.size(); ++i) {
        GateStep step;
        step.reflectivity = conditions[i].reflectivity;
        step.phi = conditions[i].phi;
        step.gain = conditions[i].gain;
        step.variant = conditions[i].variant;
        step.ancilla = quad == Quadrature::x ? scenario.ancilla_x : scenario.ancilla_p;
        step.loop_eta = scenario.loop_eta;
        step.extra_ancilla_loss = i == 0 ? scenario.first_pass_ancilla_loss : 0.0;
        prog.steps.push_back(step);
    }
    return prog;
}

}  // namespace loopsim
