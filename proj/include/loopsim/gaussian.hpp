#pragma once

#include <Eigen/Dense>

#include "loopsim/fock.hpp"
#include "loopsim/program.hpp"

namespace loopsim {

/// Single-mode Gaussian state: mean (<x>, <p>) and 2x2 covariance.
/// Vacuum is mean 0, cov = I/2.
struct GaussianState {
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    Eigen::Matrix2d cov = 0.5 * Eigen::Matrix2d::Identity();
};

/// Squeezed-quadrature variance of an ancilla after preparation loss and an
/// optional extra first-pass loss.
double ancilla_variance(const AncillaSpec& spec, double extra_loss = 0.0);
/// Antisqueezed-quadrature variance of the same ancilla.
double ancilla_antivariance(const AncillaSpec& spec, double extra_loss = 0.0);

GaussianState gaussian_vacuum();
GaussianState gaussian_loss(const GaussianState& in, double eta);
GaussianState gaussian_squeeze(const GaussianState& in, double r);

/// Covariance-level model of one measurement-induced squeezing step,
/// using the step's actual feedforward gain. Includes the loop loss.
GaussianState mis_step_cov(const GaussianState& in, const GateStep& step);

/// Same map with explicit parameters (x-squeezing orientation, phi = 90 deg).
GaussianState mis_step_cov(const GaussianState& in, double reflectivity,
                           StepVariant variant, double v_anc_sq,
                           double v_anc_antisq, double eta_loop);

GaussianState propagate_program_cov(const GaussianState& in,
                                    const GateProgram& program);

/// Fidelity between two zero-mean single-mode Gaussian states.
double gaussian_fidelity(const GaussianState& a, const GaussianState& b);

/// A program compiled down to a diagonal Gaussian channel
///   x -> sx * x + noise(nx),  p -> sp * p + noise(np).
struct ScaleNoise {
    double sx = 1.0, sp = 1.0;
    double nx = 0.0, np = 0.0;
};

/// Compose the per-step channels of an n-fold repetition of target squeezing
/// r (quadrature quad) under a scenario into a single ScaleNoise.
ScaleNoise compose_program_channel(const std::vector<double>& r_list,
                                   Quadrature quad, const LossScenario& scenario);

/// Exact W(0,0) of a (possibly non-Gaussian) input pushed through a diagonal
/// Gaussian channel, evaluated by a trace formula instead of a phase-space
/// grid: W_out(0,0) = Tr[rho_in G] / (2 pi sx sp) where G is the Gaussian
/// operator whose Wigner function matches the pulled-back kernel.
double w00_through_channel(const FockState& in, const ScaleNoise& ch);

}  // namespace loopsim
