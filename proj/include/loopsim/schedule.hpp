#pragma once

#include <string>
#include <vector>

#include "loopsim/program.hpp"

namespace loopsim {

enum class SwitchState { to_loop, to_dump };

struct ScheduleEntry {
    int bin = 0;
    double time_ns = 0.0;
    double vbs_reflectivity = 0.0;
    SwitchState input_switch = SwitchState::to_dump;
    double hd_phase_deg = 0.0;
    double feedforward_gain = 0.0;
};

/// Control timeline for an n-step program: n + 2 bins spaced by tau with
/// VBS sequence (0, R1, ..., Rn, 0). The ancilla enters one bin ahead of
/// the input, so bins 0..n route to the loop and the last bin dumps while
/// the output exits.
struct ControlSchedule {
    std::vector<ScheduleEntry> timeline;
    double tau_ns = 60.8;
};

ControlSchedule compile_schedule(const GateProgram& program, double tau_ns = 60.8);

/// Rebuild an executable program from a schedule (ancilla specs and loss
/// parameters come from the scenario); used to check the schedule is a
/// faithful serialization.
GateProgram program_from_schedule(const ControlSchedule& schedule,
                                  const LossScenario& scenario, Quadrature quad);

struct TimingBudget {
    double pulse_length_ns = 20.0;
    double component_response_ns = 30.0;
    double tau_ns = 60.8;
};

struct TimingReport {
    bool feasible = false;
    double clock_hz = 0.0;       // 1 / tau
    double max_clock_hz = 0.0;   // 1 / (pulse + response)
    double slack_ns = 0.0;       // tau - (pulse + response)
};

TimingReport check_timing(const TimingBudget& budget);

inline const char* to_string(SwitchState s) {
    return s == SwitchState::to_loop ? "to_loop" : "to_dump";
}

}  // namespace loopsim
