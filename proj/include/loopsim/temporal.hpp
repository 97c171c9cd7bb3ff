#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace loopsim {

/// Falling two-exponential wave packet
///   f(t) ~ (e^{gamma1 (t - t0)} - e^{gamma2 (t - t0)}) Theta(t0 - t),
/// normalized to unit L2 norm. Times in ns, bandwidths in rad/ns.
struct ModeFunction {
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double t0 = 0.0;
};

/// Validates and normalizes; throws if gamma1 == gamma2.
ModeFunction make_mode(double gamma1, double gamma2, double t0);

/// Normalized amplitude at time t.
double eval_mode(const ModeFunction& f, double t);

/// Mode of loop slot i (1-based): t0 shifted by (i-1) * tau.
ModeFunction shifted_mode(const ModeFunction& f, int i, double tau_ns);

/// <f, g> on a discrete grid [t_start, t_start + n*dt).
double mode_overlap(const ModeFunction& f, const ModeFunction& g,
                    double t_start, double dt, int n);

/// One synthetic homodyne window on the grid t_k = t_start + k*dt:
/// white vacuum noise (variance 1/2 per orthonormal discrete mode) with the
/// component along true_mode rescaled to variance v.
Eigen::VectorXd synthesize_timeseries(const ModeFunction& true_mode, double v,
                                      double t_start, double dt, int n,
                                      std::uint64_t seed);

/// Second-moment matrix of an ensemble of windows, accumulated so the fit
/// never has to hold the raw ensemble.
struct WindowEnsemble {
    double t_start = 0.0;
    double dt = 0.5;
    int n_windows = 0;
    Eigen::MatrixXd second_moment;  // (1/n) sum_w xi_w xi_w^T
};

WindowEnsemble synthesize_ensemble(const ModeFunction& true_mode, double v,
                                   double t_start, double dt, int n_samples,
                                   int n_windows, std::uint64_t seed);

/// Empirical variance of the ensemble projected onto a candidate mode.
double projected_variance(const WindowEnsemble& ens, const ModeFunction& g);

struct ModeFitResult {
    ModeFunction mode;
    double variance = 0.0;  // achieved projected variance
    int evaluations = 0;
    bool converged = false;
    bool identifiable = false;  // variance significantly above vacuum 1/2
};

/// Maximize the projected variance over (gamma1, gamma2, t0) by Nelder-Mead
/// with box constraints gamma in 2*pi*[0.005, 0.300] rad/ns.
ModeFitResult fit_mode(const WindowEnsemble& ens, const ModeFunction& guess);

}  // namespace loopsim
