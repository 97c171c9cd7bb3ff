#pragma once

#include <string>
#include <vector>

namespace loopsim {

enum class Quadrature { x, p };

enum class StepVariant { first_step, loop_step };

/// Lossy squeezed-vacuum ancilla: pure squeezing (dB, negative = squeezed)
/// followed by preparation loss, oriented along x or p.
struct AncillaSpec {
    double pure_squeezing_db = -6.8;
    double preparation_loss = 0.22;
    Quadrature quadrature = Quadrature::x;
};

enum class HeraldModel { click, single_photon };

/// Photon-subtracted squeezed vacuum: source squeezed vacuum, tap beam
/// splitter to an on/off detector, conditional state on a click, then
/// preparation loss.
struct CatSpec {
    double source_squeezing_r = 0.60;
    double tap_reflectivity = 0.32;
    double preparation_loss = 0.30;
    HeraldModel herald = HeraldModel::click;
    /// Fock cutoff of the tap mode in the two-mode heralding model.
    int tap_cutoff = 8;
};

/// One measurement-induced squeezing step. For a target squeezing r:
///   loop_step:  R = e^{-2r}, g = +sqrt(T/R)   (state stays in the loop)
///   first_step: T = e^{-2r}, g = -sqrt(R/T)   (ancilla occupies the loop)
/// phi is the homodyne angle of the measured arm; the feedforward displaces
/// the same rotated quadrature of the kept arm by g*m.
struct GateStep {
    double reflectivity = 0.5;
    double phi = 0.0;
    double gain = 1.0;
    StepVariant variant = StepVariant::loop_step;
    AncillaSpec ancilla;
    double loop_eta = 0.96;
    /// Extra loss the ancilla suffers on its first loop pass (first_step only).
    double extra_ancilla_loss = 0.0;
};

struct GateProgram {
    std::vector<GateStep> steps;
};

/// Named loss budget used to build programs and source states.
struct LossScenario {
    std::string name = "current";
    double loop_eta = 0.96;
    double first_pass_ancilla_loss = 0.04;
    AncillaSpec ancilla_x{-6.8, 0.22, Quadrature::x};
    AncillaSpec ancilla_p{-7.0, 0.27, Quadrature::p};
    CatSpec cat{};
};

LossScenario scenario_current();
LossScenario scenario_improved_half();
LossScenario scenario_best_recorded();
/// Lookup by name; throws on unknown scenario.
LossScenario scenario_by_name(const std::string& name);

struct WorkingCondition {
    double reflectivity;
    double phi;
    double gain;
    StepVariant variant;
};

/// Translate a list of target squeezing parameters (all r > 0) into the
/// per-step working conditions. phi = 90 deg squeezes x, phi = 0 squeezes p.
std::vector<WorkingCondition> r_to_working_condition(
    const std::vector<double>& r_list, Quadrature quad);

/// Assemble a full program from target r values under a loss scenario.
GateProgram make_program(const std::vector<double>& r_list, Quadrature quad,
                         const LossScenario& scenario);

inline const char* to_string(Quadrature q) { return q == Quadrature::x ? "x" : "p"; }

}  // namespace loopsim
