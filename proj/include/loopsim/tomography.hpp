#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "loopsim/fock.hpp"

namespace loopsim {

struct QuadratureDataset {
    struct Group {
        double phase = 0.0;  // radians
        std::vector<double> samples;
    };
    std::vector<Group> groups;
    std::uint64_t seed = 0;
    std::string source;

    int total_samples() const;
};

/// Default measurement bases: 90 deg down to -75 deg in 15 deg steps.
std::vector<double> default_phase_grid();

/// i.i.d. quadrature samples per phase via inverse CDF on an adaptive grid.
QuadratureDataset sample_quadratures(const FockState& state,
                                     const std::vector<double>& phases,
                                     int n_per_phase, std::uint64_t seed);

struct MleOptions {
    int max_iters = 2000;
    double tol = 1e-9;       // log-likelihood gain per iteration
    int n_bins = 120;        // over +-6 pooled standard deviations
    bool diluted = false;    // mix the iteration operator with identity
};

struct MleResult {
    FockState state;
    int iterations = 0;
    bool converged = false;
    double log_likelihood = 0.0;
};

/// Iterative maximum-likelihood reconstruction (R rho R fixed point over
/// binned quadrature projectors).
MleResult mle_reconstruct(const QuadratureDataset& data, int cutoff,
                          const MleOptions& opts = {});

/// W(0,0) of the state.
double negativity(const FockState& state);

/// (Var x_out / Var x_in, Var p_out / Var p_in), central moments.
std::pair<double, double> normalized_variances(const FockState& out,
                                               const FockState& in);

struct EllipseFit {
    double squeezing_db = 0.0;
    double antisqueezing_db = 0.0;
    double angle_deg = 0.0;  // direction of the squeezed axis, (-90, 90]
    Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
};

/// Least-squares fit of Var(phi) = Cxx cos^2 + Cpp sin^2 + 2 Cxp sin cos,
/// levels in dB relative to the vacuum variance 1/2.
EllipseFit gaussian_ellipse_fit(const QuadratureDataset& data);
/// Same fit from exact moments of a state on the default phase grid.
EllipseFit gaussian_ellipse_fit(const FockState& state);

}  // namespace loopsim
