#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "loopsim/engine.hpp"
#include "loopsim/gaussian.hpp"
#include "loopsim/program.hpp"
#include "loopsim/runner.hpp"
#include "loopsim/schedule.hpp"
#include "loopsim/serialize.hpp"
#include "loopsim/sources.hpp"
#include "loopsim/temporal.hpp"
#include "loopsim/tomography.hpp"

namespace py = pybind11;
using namespace loopsim;

PYBIND11_MODULE(_loopsim, m) {
    m.doc() = "Fock-basis simulator of a loop-based optical processor running "
              "sequential measurement-induced squeezing gates";

    py::enum_<Quadrature>(m, "Quadrature")
        .value("x", Quadrature::x)
        .value("p", Quadrature::p);
    py::enum_<StepVariant>(m, "StepVariant")
        .value("first_step", StepVariant::first_step)
        .value("loop_step", StepVariant::loop_step);
    py::enum_<HeraldModel>(m, "HeraldModel")
        .value("click", HeraldModel::click)
        .value("single_photon", HeraldModel::single_photon);

    py::class_<FockState>(m, "FockState")
        .def_readonly("dims", &FockState::dims)
        .def_readonly("rho", &FockState::rho)
        .def_readonly("cutoff_warning", &FockState::cutoff_warning)
        .def_property_readonly("n_modes", &FockState::n_modes)
        .def("trace", &FockState::trace);

    py::class_<AncillaSpec>(m, "AncillaSpec")
        .def(py::init<>())
        .def(py::init([](double db, double loss, Quadrature q) {
                 return AncillaSpec{db, loss, q};
             }),
             py::arg("pure_squeezing_db"), py::arg("preparation_loss"),
             py::arg("quadrature") = Quadrature::x)
        .def_readwrite("pure_squeezing_db", &AncillaSpec::pure_squeezing_db)
        .def_readwrite("preparation_loss", &AncillaSpec::preparation_loss)
        .def_readwrite("quadrature", &AncillaSpec::quadrature);

    py::class_<CatSpec>(m, "CatSpec")
        .def(py::init<>())
        .def_readwrite("source_squeezing_r", &CatSpec::source_squeezing_r)
        .def_readwrite("tap_reflectivity", &CatSpec::tap_reflectivity)
        .def_readwrite("preparation_loss", &CatSpec::preparation_loss)
        .def_readwrite("herald", &CatSpec::herald)
        .def_readwrite("tap_cutoff", &CatSpec::tap_cutoff);

    py::class_<GateStep>(m, "GateStep")
        .def(py::init<>())
        .def_readwrite("reflectivity", &GateStep::reflectivity)
        .def_readwrite("phi", &GateStep::phi)
        .def_readwrite("gain", &GateStep::gain)
        .def_readwrite("variant", &GateStep::variant)
        .def_readwrite("ancilla", &GateStep::ancilla)
        .def_readwrite("loop_eta", &GateStep::loop_eta)
        .def_readwrite("extra_ancilla_loss", &GateStep::extra_ancilla_loss);

    py::class_<GateProgram>(m, "GateProgram")
        .def(py::init<>())
        .def_readwrite("steps", &GateProgram::steps);

    py::class_<LossScenario>(m, "LossScenario")
        .def(py::init<>())
        .def_readwrite("name", &LossScenario::name)
        .def_readwrite("loop_eta", &LossScenario::loop_eta)
        .def_readwrite("first_pass_ancilla_loss", &LossScenario::first_pass_ancilla_loss)
        .def_readwrite("ancilla_x", &LossScenario::ancilla_x)
        .def_readwrite("ancilla_p", &LossScenario::ancilla_p)
        .def_readwrite("cat", &LossScenario::cat);

    m.def("scenario_current", &scenario_current);
    m.def("scenario_improved_half", &scenario_improved_half);
    m.def("scenario_best_recorded", &scenario_best_recorded);
    m.def("scenario_by_name", &scenario_by_name, py::arg("name"));
    m.def("make_program", &make_program, py::arg("r_list"), py::arg("quadrature"),
          py::arg("scenario"));

    // states and channels
    m.def("make_vacuum", &make_vacuum, py::arg("n_modes"), py::arg("cutoff"));
    m.def("make_fock", &make_fock, py::arg("n"), py::arg("cutoff"));
    m.def("make_squeezed_vacuum", &make_squeezed_vacuum, py::arg("r"),
          py::arg("cutoff"));
    m.def("make_ancilla", &make_ancilla, py::arg("spec"), py::arg("cutoff"));
    m.def("make_cat", &make_cat, py::arg("spec"), py::arg("cutoff"),
          "Returns (state, herald_probability).");
    m.def("apply_loss", &apply_loss, py::arg("state"), py::arg("mode"),
          py::arg("eta"));
    m.def("apply_beamsplitter", &apply_beamsplitter, py::arg("state"),
          py::arg("reflectivity"));
    m.def("displace", &displace, py::arg("state"), py::arg("mode"), py::arg("dx"),
          py::arg("dp"));
    m.def("rotate", &rotate, py::arg("state"), py::arg("mode"), py::arg("theta"));
    m.def("tensor", &tensor);
    m.def("partial_trace", &partial_trace, py::arg("state"), py::arg("keep_mode"));

    // metrics
    m.def("wigner", &wigner, py::arg("state"), py::arg("x"), py::arg("p"));
    m.def("fidelity", &fidelity);
    m.def("negativity", &negativity);
    m.def("mean_quadrature", &mean_quadrature);
    m.def("var_quadrature", &var_quadrature);
    m.def("quadrature_pdf", &quadrature_pdf);
    m.def("normalized_variances", &normalized_variances, py::arg("out"),
          py::arg("in_"));
    m.def("trace_distance", &trace_distance);

    // gate engine
    m.def("run_step_deterministic", &run_step_deterministic, py::arg("state"),
          py::arg("step"));
    m.def("run_step_montecarlo", &run_step_montecarlo, py::arg("state"),
          py::arg("step"), py::arg("n_traj"), py::arg("seed"));
    m.def("run_program", &run_program, py::arg("state"), py::arg("program"),
          "Returns the state after every step.");
    m.def("ideal_squeeze", &ideal_squeeze, py::arg("state"), py::arg("r"),
          py::arg("quadrature"));
    m.def("realistic_model_predict", &realistic_model_predict, py::arg("state"),
          py::arg("r_list"), py::arg("quadrature"), py::arg("scenario"));

    // tomography
    py::class_<QuadratureDataset::Group>(m, "QuadratureGroup")
        .def_readwrite("phase", &QuadratureDataset::Group::phase)
        .def_readwrite("samples", &QuadratureDataset::Group::samples);
    py::class_<QuadratureDataset>(m, "QuadratureDataset")
        .def(py::init<>())
        .def_readwrite("groups", &QuadratureDataset::groups)
        .def_readwrite("seed", &QuadratureDataset::seed)
        .def("total_samples", &QuadratureDataset::total_samples);
    py::class_<MleResult>(m, "MleResult")
        .def_readonly("state", &MleResult::state)
        .def_readonly("iterations", &MleResult::iterations)
        .def_readonly("converged", &MleResult::converged)
        .def_readonly("log_likelihood", &MleResult::log_likelihood);
    m.def("default_phase_grid", &default_phase_grid);
    m.def("sample_quadratures", &sample_quadratures, py::arg("state"),
          py::arg("phases"), py::arg("n_per_phase"), py::arg("seed"));
    m.def(
        "mle_reconstruct",
        [](const QuadratureDataset& data, int cutoff, int max_iters) {
            MleOptions opts;
            opts.max_iters = max_iters;
            return mle_reconstruct(data, cutoff, opts);
        },
        py::arg("data"), py::arg("cutoff"), py::arg("max_iters") = 2000);

    // scheduling
    py::class_<ScheduleEntry>(m, "ScheduleEntry")
        .def_readonly("bin", &ScheduleEntry::bin)
        .def_readonly("time_ns", &ScheduleEntry::time_ns)
        .def_readonly("vbs_reflectivity", &ScheduleEntry::vbs_reflectivity)
        .def_property_readonly("input_switch",
                               [](const ScheduleEntry& e) {
                                   return std::string(to_string(e.input_switch));
                               })
        .def_readonly("hd_phase_deg", &ScheduleEntry::hd_phase_deg)
        .def_readonly("feedforward_gain", &ScheduleEntry::feedforward_gain);
    py::class_<ControlSchedule>(m, "ControlSchedule")
        .def_readonly("timeline", &ControlSchedule::timeline)
        .def_readonly("tau_ns", &ControlSchedule::tau_ns);
    py::class_<TimingReport>(m, "TimingReport")
        .def_readonly("feasible", &TimingReport::feasible)
        .def_readonly("clock_hz", &TimingReport::clock_hz)
        .def_readonly("max_clock_hz", &TimingReport::max_clock_hz)
        .def_readonly("slack_ns", &TimingReport::slack_ns);
    m.def("compile_schedule", &compile_schedule, py::arg("program"),
          py::arg("tau_ns") = 60.8);
    m.def(
        "check_timing",
        [](double pulse_ns, double response_ns, double tau_ns) {
            return check_timing({pulse_ns, response_ns, tau_ns});
        },
        py::arg("pulse_length_ns") = 20.0, py::arg("component_response_ns") = 30.0,
        py::arg("tau_ns") = 60.8);

    // temporal mode
    py::class_<ModeFunction>(m, "ModeFunction")
        .def_readonly("gamma1", &ModeFunction::gamma1)
        .def_readonly("gamma2", &ModeFunction::gamma2)
        .def_readonly("t0", &ModeFunction::t0);
    py::class_<WindowEnsemble>(m, "WindowEnsemble")
        .def_readonly("n_windows", &WindowEnsemble::n_windows);
    py::class_<ModeFitResult>(m, "ModeFitResult")
        .def_readonly("mode", &ModeFitResult::mode)
        .def_readonly("variance", &ModeFitResult::variance)
        .def_readonly("converged", &ModeFitResult::converged)
        .def_readonly("identifiable", &ModeFitResult::identifiable);
    m.def("make_mode", &make_mode, py::arg("gamma1"), py::arg("gamma2"),
          py::arg("t0"));
    m.def("eval_mode", &eval_mode);
    m.def("synthesize_ensemble", &synthesize_ensemble, py::arg("true_mode"),
          py::arg("v"), py::arg("t_start"), py::arg("dt"), py::arg("n_samples"),
          py::arg("n_windows"), py::arg("seed"));
    m.def("projected_variance", &projected_variance);
    m.def("fit_mode", &fit_mode, py::arg("ensemble"), py::arg("guess"));

    // serialization helpers
    m.def("save_state", &save_state, py::arg("path"), py::arg("state"));
    m.def("load_state", &load_state, py::arg("path"));
}
