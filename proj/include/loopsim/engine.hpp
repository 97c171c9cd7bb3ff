#pragma once

#include <cstdint>
#include <vector>

#include "loopsim/fock.hpp"
#include "loopsim/program.hpp"

namespace loopsim {

/// One squeezing step with the measurement outcome integrated out:
///   rho_out = integral dm  D(g m) rho_cond(m) D†(g m), then loop loss.
/// Gauss-Legendre over m in [-L, L], L = 6 sigma of the measured marginal,
/// node count doubled until the trace-norm change drops below 1e-6.
/// Throws on non-convergence.
FockState run_step_deterministic(const FockState& in, const GateStep& step);

/// Same step as an average over n_traj sampled trajectories; m is drawn from
/// the exact marginal via inverse CDF. Bit-reproducible for a fixed seed
/// (counter-based per-trajectory substreams).
FockState run_step_montecarlo(const FockState& in, const GateStep& step,
                              int n_traj, std::uint64_t seed);

/// Sequential deterministic steps; returns the state after every step.
std::vector<FockState> run_program(const FockState& in, const GateProgram& program);

/// Exact unitary squeeze of the requested quadrature by e^{-r}.
FockState ideal_squeeze(const FockState& in, double r, Quadrature quad);

/// Convenience: build the program for r_list under the scenario and run it.
FockState realistic_model_predict(const FockState& in,
                                  const std::vector<double>& r_list,
                                  Quadrature quad, const LossScenario& scenario);

/// 0.5 * sum |eig(rho - sigma)|; used by the Monte Carlo convergence checks.
double trace_distance(const FockState& a, const FockState& b);

/// Squeeze unitary S(r) = exp(r/2 (a^2 - a†^2)) on the truncated space.
Matrix squeeze_matrix(int dim, double r);

}  // namespace loopsim
