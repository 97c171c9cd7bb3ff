#include "loopsim/temporal.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

namespace loopsim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kGammaLo = kTwoPi * 0.005;  // rad/ns
constexpr double kGammaHi = kTwoPi * 0.300;

// Closed-form L2 norm of the unnormalized two-exponential tail on (-inf, t0].
double analytic_norm(double g1, double g2) {
    return std::sqrt(1.0 / (2.0 * g1) + 1.0 / (2.0 * g2) - 2.0 / (g1 + g2));
}

Eigen::VectorXd discretize(const ModeFunction& f, double t_start, double dt, int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) {
        double t = t_start + i * dt;
        v(i) = t <= f.t0 ? std::exp(f.gamma1 * (t - f.t0)) - std::exp(f.gamma2 * (t - f.t0))
                         : 0.0;
    }
    double nrm = v.norm();
    if (nrm <= 0.0)
        throw std::invalid_argument("temporal mode vanishes on the sample grid");
    return v / nrm;
}

}  // namespace

ModeFunction make_mode(double gamma1, double gamma2, double t0) {
    if (gamma1 <= 0.0 || gamma2 <= 0.0)
        throw std::invalid_argument("make_mode: bandwidths must be positive");
    if (gamma1 == gamma2)
        throw std::invalid_argument("make_mode: gamma1 must differ from gamma2");
    return ModeFunction{gamma1, gamma2, t0};
}

double eval_mode(const ModeFunction& f, double t) {
    if (t > f.t0) return 0.0;
    double raw = std::exp(f.gamma1 * (t - f.t0)) - std::exp(f.gamma2 * (t - f.t0));
    return raw / analytic_norm(f.gamma1, f.gamma2);
}

ModeFunction shifted_mode(const ModeFunction& f, int i, double tau_ns) {
    if (i < 1) throw std::invalid_argument("shifted_mode: slot index is 1-based");
    ModeFunction out = f;
    out.t0 = f.t0 + (i - 1) * tau_ns;
    return out;
}

double mode_overlap(const ModeFunction& f, const ModeFunction& g,
                    double t_start, double dt, int n) {
    return discretize(f, t_start, dt, n).dot(discretize(g, t_start, dt, n));
}

Eigen::VectorXd synthesize_timeseries(const ModeFunction& true_mode, double v,
                                      double t_start, double dt, int n,
                                      std::uint64_t seed) {
    if (v <= 0.0) throw std::invalid_argument("synthesize_timeseries: v must be > 0");
    // Nyquist: resolve the fastest bandwidth.
    if (dt > 1.0 / std::max(true_mode.gamma1, true_mode.gamma2))
        throw std::invalid_argument("synthesize_timeseries: dt too coarse for gamma");
    Eigen::VectorXd f = discretize(true_mode, t_start, dt, n);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    Eigen::VectorXd z(n);
    for (int i = 0; i < n; ++i) z(i) = gauss(rng);
    double q = f.dot(z);
    return z + (std::sqrt(2.0 * v) - 1.0) * q * f;
}

WindowEnsemble synthesize_ensemble(const ModeFunction& true_mode, double v,
                                   double t_start, double dt, int n_samples,
                                   int n_windows, std::uint64_t seed) {
    WindowEnsemble ens;
    ens.t_start = t_start;
    ens.dt = dt;
    ens.n_windows = n_windows;
    ens.second_moment = Eigen::MatrixXd::Zero(n_samples, n_samples);
    Eigen::VectorXd f = discretize(true_mode, t_start, dt, n_samples);
    if (dt > 1.0 / std::max(true_mode.gamma1, true_mode.gamma2))
        throw std::invalid_argument("synthesize_ensemble: dt too coarse for gamma");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    double scale = std::sqrt(2.0 * v) - 1.0;
    // Accumulate in batches so the rank-1 updates vectorize.
    const int kBatch = 256;
    Eigen::MatrixXd batch(n_samples, kBatch);
    int filled = 0;
    for (int w = 0; w < n_windows; ++w) {
        Eigen::VectorXd z(n_samples);
        for (int i = 0; i < n_samples; ++i) z(i) = gauss(rng);
        batch.col(filled++) = z + scale * f.dot(z) * f;
        if (filled == kBatch || w + 1 == n_windows) {
            auto cols = batch.leftCols(filled);
            ens.second_moment.selfadjointView<Eigen::Lower>().rankUpdate(cols, 1.0);
            filled = 0;
        }
    }
    ens.second_moment = ens.second_moment.selfadjointView<Eigen::Lower>();
    ens.second_moment /= static_cast<double>(n_windows);
    return ens;
}

double projected_variance(const WindowEnsemble& ens, const ModeFunction& g) {
    int n = static_cast<int>(ens.second_moment.rows());
    Eigen::VectorXd gv = discretize(g, ens.t_start, ens.dt, n);
    return gv.dot(ens.second_moment * gv);
}

ModeFitResult fit_mode(const WindowEnsemble& ens, const ModeFunction& guess) {
    int n = static_cast<int>(ens.second_moment.rows());
    double t_end = ens.t_start + n * ens.dt;

    auto objective = [&](const Eigen::Vector3d& p) -> double {
        double g1 = p(0), g2 = p(1), t0 = p(2);
        if (g1 < kGammaLo || g1 > kGammaHi || g2 < kGammaLo || g2 > kGammaHi)
            return -1e9;
        if (g1 == g2 || t0 <= ens.t_start || t0 > t_end + 50.0) return -1e9;
        return projected_variance(ens, ModeFunction{g1, g2, t0});
    };

    // Nelder-Mead on (gamma1, gamma2, t0), two rounds from the incumbent.
    Eigen::Vector3d best(guess.gamma1, guess.gamma2, guess.t0);
    double best_val = objective(best);
    int evals = 1;
    bool converged = false;
    for (int round = 0; round < 2; ++round) {
        std::vector<Eigen::Vector3d> simplex{best};
        Eigen::Vector3d scale(0.15 * best(0), 0.15 * best(1), 2.0);
        for (int i = 0; i < 3; ++i) {
            Eigen::Vector3d v = best;
            v(i) += scale(i);
            simplex.push_back(v);
        }
        std::vector<double> vals;
        for (const auto& v : simplex) {
            vals.push_back(objective(v));
            ++evals;
        }
        for (int iter = 0; iter < 2000; ++iter) {
            // order: index 0 worst after sorting ascending by value
            std::vector<int> idx{0, 1, 2, 3};
            std::sort(idx.begin(), idx.end(),
                      [&](int a, int b) { return vals[a] < vals[b]; });
            int worst = idx[0], second = idx[1], top = idx[3];
            if (vals[top] - vals[worst] < 1e-13 &&
                (simplex[top] - simplex[worst]).norm() < 1e-8) {
                converged = true;
                break;
            }
            Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
            for (int i : {idx[1], idx[2], idx[3]}) centroid += simplex[i];
            centroid /= 3.0;
            Eigen::Vector3d refl = centroid + (centroid - simplex[worst]);
            double fr = objective(refl);
            ++evals;
            if (fr > vals[top]) {
                Eigen::Vector3d exp_pt = centroid + 2.0 * (centroid - simplex[worst]);
                double fe = objective(exp_pt);
                ++evals;
                if (fe > fr) {
                    simplex[worst] = exp_pt;
                    vals[worst] = fe;
                } else {
                    simplex[worst] = refl;
                    vals[worst] = fr;
                }
            } else if (fr > vals[second]) {
                simplex[worst] = refl;
                vals[worst] = fr;
            } else {
                Eigen::Vector3d contr = centroid + 0.5 * (simplex[worst] - centroid);
                double fc = objective(contr);
                ++evals;
                if (fc > vals[worst]) {
                    simplex[worst] = contr;
                    vals[worst] = fc;
                } else {
                    for (int i : {idx[0], idx[1], idx[2]}) {
                        simplex[i] = simplex[top] + 0.5 * (simplex[i] - simplex[top]);
                        vals[i] = objective(simplex[i]);
                        ++evals;
                    }
                }
            }
        }
        int arg = 0;
        for (int i = 1; i < 4; ++i)
            if (vals[i] > vals[arg]) arg = i;
        if (vals[arg] > best_val) {
            best = simplex[arg];
            best_val = vals[arg];
        }
    }

    ModeFitResult res;
    res.mode = ModeFunction{best(0), best(1), best(2)};
    res.variance = best_val;
    res.evaluations = evals;
    res.converged = converged;
    // Identifiable only if the excess over vacuum clears the statistical
    // resolution of the variance estimate (~ sqrt(2/N) relative).
    double excess = best_val - 0.5;
    res.identifiable = excess > 3.0 * 0.5 * std::sqrt(2.0 / ens.n_windows);
    return res;
}

}  // namespace loopsim
