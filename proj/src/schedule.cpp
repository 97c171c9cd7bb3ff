#include "loopsim/schedule.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace loopsim {

ControlSchedule compile_schedule(const GateProgram& program, double tau_ns) {
    if (program.steps.empty())
        throw std::invalid_argument("compile_schedule: empty program");
    if (tau_ns <= 0.0)
        throw std::invalid_argument("compile_schedule: tau must be positive");
    int n = static_cast<int>(program.steps.size());
    ControlSchedule sched;
    sched.tau_ns = tau_ns;
    sched.timeline.reserve(n + 2);
    for (int bin = 0; bin < n + 2; ++bin) {
        ScheduleEntry e;
        e.bin = bin;
        e.time_ns = bin * tau_ns;
        if (bin == 0) {
            // ancilla enters ahead of the input; VBS transparent
            e.vbs_reflectivity = 0.0;
            e.input_switch = SwitchState::to_loop;
            e.hd_phase_deg = program.steps.front().phi * 180.0 / std::numbers::pi;
        } else if (bin <= n) {
            const GateStep& step = program.steps[bin - 1];
            e.vbs_reflectivity = step.reflectivity;
            e.input_switch = SwitchState::to_loop;
            e.hd_phase_deg = step.phi * 180.0 / std::numbers::pi;
            e.feedforward_gain = step.gain;
        } else {
            // output exits; nothing new enters
            e.vbs_reflectivity = 0.0;
            e.input_switch = SwitchState::to_dump;
            e.hd_phase_deg = 0.0;
        }
        sched.timeline.push_back(e);
    }
    return sched;
}

GateProgram program_from_schedule(const ControlSchedule& schedule,
                                  const LossScenario& scenario, Quadrature quad) {
    if (schedule.timeline.size() < 3)
        throw std::invalid_argument("program_from_schedule: timeline too short");
    if (schedule.timeline.front().vbs_reflectivity != 0.0 ||
        schedule.timeline.back().vbs_reflectivity != 0.0)
        throw std::invalid_argument("program_from_schedule: VBS must open and close at 0");
    GateProgram prog;
    int n = static_cast<int>(schedule.timeline.size()) - 2;
    for (int i = 0; i < n; ++i) {
        const ScheduleEntry& e = schedule.timeline[i + 1];
        GateStep step;
        step.reflectivity = e.vbs_reflectivity;
        step.phi = e.hd_phase_deg * std::numbers::pi / 180.0;
        step.gain = e.feedforward_gain;
        step.variant = i == 0 ? StepVariant::first_step : StepVariant::loop_step;
        step.ancilla = quad == Quadrature::x ? scenario.ancilla_x : scenario.ancilla_p;
        step.loop_eta = scenario.loop_eta;
        step.extra_ancilla_loss = i == 0 ? scenario.first_pass_ancilla_loss : 0.0;
        prog.steps.push_back(step);
    }
    return prog;
}

TimingReport check_timing(const TimingBudget& budget) {
    if (budget.pulse_length_ns <= 0.0 || budget.component_response_ns <= 0.0 ||
        budget.tau_ns <= 0.0)
        throw std::invalid_argument("check_timing: budget fields must be positive");
    TimingReport rep;
    double needed = budget.pulse_length_ns + budget.component_response_ns;
    rep.slack_ns = budget.tau_ns - needed;
    rep.feasible = rep.slack_ns >= 0.0;
    rep.clock_hz = 1e9 / budget.tau_ns;
    rep.max_clock_hz = 1e9 / needed;
    return rep;
}

}  // namespace loopsim
