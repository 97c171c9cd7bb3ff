#include "loopsim/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace loopsim {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// c_k(x, phi) = psi_k(x) e^{i k phi}: <x_phi| in the Fock basis.
Vector quadrature_vector(int d, double phi, double x) {
    Eigen::VectorXd psi = hermite_functions(d, x);
    Vector c(d);
    for (int n = 0; n < d; ++n) c(n) = psi(n) * std::exp(Complex(0, n * phi));
    return c;
}

Eigen::Matrix2d solve_ellipse(const std::vector<double>& phases,
                              const std::vector<double>& vars) {
    int n = static_cast<int>(phases.size());
    Eigen::MatrixXd A(n, 3);
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) {
        double c = std::cos(phases[i]), s = std::sin(phases[i]);
        A(i, 0) = c * c;
        A(i, 1) = s * s;
        A(i, 2) = 2.0 * s * c;
        b(i) = vars[i];
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.rank() < 3)
        throw std::invalid_argument("gaussian_ellipse_fit: angle set is rank-deficient");
    Eigen::Vector3d p = svd.solve(b);
    Eigen::Matrix2d cov;
    cov << p(0), p(2), p(2), p(1);
    return cov;
}

EllipseFit fit_from_cov(const Eigen::Matrix2d& cov) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(cov);
    double vmin = es.eigenvalues()(0), vmax = es.eigenvalues()(1);
    if (vmin <= 0.0)
        throw std::invalid_argument("gaussian_ellipse_fit: non-positive variance");
    EllipseFit fit;
    fit.cov = cov;
    fit.squeezing_db = 10.0 * std::log10(vmin / 0.5);
    fit.antisqueezing_db = 10.0 * std::log10(vmax / 0.5);
    if (vmax - vmin < 1e-12) {
        fit.angle_deg = 0.0;
    } else {
        Eigen::Vector2d v = es.eigenvectors().col(0);  // squeezed axis
        double ang = std::atan2(v(1), v(0)) * 180.0 / kPi;
        if (ang <= -90.0) ang += 180.0;
        if (ang > 90.0) ang -= 180.0;
        fit.angle_deg = ang;
    }
    return fit;
}

}  // namespace

int QuadratureDataset::total_samples() const {
    int n = 0;
    for (const auto& g : groups) n += static_cast<int>(g.samples.size());
    return n;
}

std::vector<double> default_phase_grid() {
    std::vector<double> phases;
    for (int deg = 90; deg >= -75; deg -= 15)
        phases.push_back(deg * kPi / 180.0);
    return phases;
}

QuadratureDataset sample_quadratures(const FockState& state,
                                     const std::vector<double>& phases,
                                     int n_per_phase, std::uint64_t seed) {
    if (state.n_modes() != 1)
        throw std::invalid_argument("sample_quadratures: single-mode state required");
    QuadratureDataset data;
    data.seed = seed;
    const int kGrid = 4001;
    for (std::size_t g = 0; g < phases.size(); ++g) {
        double phi = phases[g];
        double mu = mean_quadrature(state, phi);
        double sig = std::sqrt(var_quadrature(state, phi));
        double lo = mu - 8.0 * sig, dx = 16.0 * sig / (kGrid - 1);
        std::vector<double> xs(kGrid), cdf(kGrid);
        double acc = 0.0, prev = 0.0;
        for (int i = 0; i < kGrid; ++i) {
            xs[i] = lo + i * dx;
            double p = quadrature_pdf(state, phi, xs[i]);
            if (i > 0) acc += 0.5 * (p + prev) * dx;
            cdf[i] = acc;
            prev = p;
        }
        for (auto& c : cdf) c /= acc;
        std::mt19937_64 rng(splitmix64(seed + 0x1000 * g));
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        QuadratureDataset::Group group;
        group.phase = phi;
        group.samples.reserve(n_per_phase);
        for (int i = 0; i < n_per_phase; ++i) {
            double u = uni(rng);
            auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
            int hi = static_cast<int>(it - cdf.begin());
            double x;
            if (hi == 0) {
                x = xs.front();
            } else if (hi >= kGrid) {
                x = xs.back();
            } else {
                double c0 = cdf[hi - 1], c1 = cdf[hi];
                double t = c1 > c0 ? (u - c0) / (c1 - c0) : 0.0;
                x = xs[hi - 1] + t * dx;
            }
            group.samples.push_back(x);
        }
        data.groups.push_back(std::move(group));
    }
    return data;
}

MleResult mle_reconstruct(const QuadratureDataset& data, int cutoff,
                          const MleOptions& opts) {
    if (data.total_samples() < 100)
        throw std::invalid_argument("mle_reconstruct: need at least 100 samples");
    int n_groups = static_cast<int>(data.groups.size());
    bool ill_posed = n_groups < 3;

    // Bin edges over +-6 pooled standard deviations.
    double m2 = 0.0;
    int total = data.total_samples();
    for (const auto& g : data.groups)
        for (double s : g.samples) m2 += s * s;
    double sig = std::sqrt(m2 / total);
    double lo = -6.0 * sig, width = 12.0 * sig / opts.n_bins;

    // Per group: projector columns (scaled by sqrt(width)) and bin counts.
    std::vector<Matrix> proj(n_groups);
    std::vector<Eigen::VectorXd> counts(n_groups);
    Matrix G = Matrix::Zero(cutoff, cutoff);
    for (int g = 0; g < n_groups; ++g) {
        const auto& grp = data.groups[g];
        Matrix C(cutoff, opts.n_bins);
        for (int j = 0; j < opts.n_bins; ++j) {
            double x = lo + (j + 0.5) * width;
            C.col(j) = quadrature_vector(cutoff, grp.phase, x) * std::sqrt(width);
        }
        Eigen::VectorXd cnt = Eigen::VectorXd::Zero(opts.n_bins);
        for (double s : grp.samples) {
            int j = static_cast<int>((s - lo) / width);
            j = std::clamp(j, 0, opts.n_bins - 1);
            cnt(j) += 1.0;
        }
        G += C * C.adjoint();
        proj[g] = std::move(C);
        counts[g] = std::move(cnt);
    }

    // Binned projectors only approximate a resolution of identity; correct
    // the fixed point with G^{-1/2} R rho R G^{-1/2}.
    Eigen::SelfAdjointEigenSolver<Matrix> ges(G);
    Eigen::VectorXd gev = ges.eigenvalues().cwiseMax(1e-12);
    Matrix g_isqrt = ges.eigenvectors() * gev.cwiseSqrt().cwiseInverse().asDiagonal() *
                     ges.eigenvectors().adjoint();

    MleResult res;
    res.state.dims = {cutoff};
    res.state.rho = Matrix::Identity(cutoff, cutoff) / cutoff;
    double prev_ll = -1e300;
    for (int it = 0; it < opts.max_iters; ++it) {
        Matrix R = Matrix::Zero(cutoff, cutoff);
        double ll = 0.0;
        for (int g = 0; g < n_groups; ++g) {
            Eigen::VectorXd p(opts.n_bins);
            for (int j = 0; j < opts.n_bins; ++j) {
                Complex v = proj[g].col(j).adjoint() * res.state.rho * proj[g].col(j);
                p(j) = std::max(v.real(), 1e-14);
            }
            Eigen::VectorXd ratio(opts.n_bins);
            for (int j = 0; j < opts.n_bins; ++j) {
                double f = counts[g](j) / total;
                ratio(j) = f / p(j);
                if (counts[g](j) > 0.0) ll += counts[g](j) * std::log(p(j));
            }
            R += proj[g] * ratio.asDiagonal() * proj[g].adjoint();
        }
        if (opts.diluted)
            R = 0.5 * (R + Matrix::Identity(cutoff, cutoff));
        Matrix op = g_isqrt * R;
        res.state.rho = op * res.state.rho * op.adjoint();
        res.state.rho = 0.5 * (res.state.rho + res.state.rho.adjoint().eval());
        res.state.rho /= res.state.rho.trace().real();
        res.iterations = it + 1;
        res.log_likelihood = ll;
        if (it > 0 && ll - prev_ll < opts.tol && ll >= prev_ll - 1e-9) {
            res.converged = !ill_posed;
            break;
        }
        prev_ll = ll;
    }
    if (ill_posed) res.converged = false;
    return res;
}

double negativity(const FockState& state) { return wigner(state, 0.0, 0.0); }

std::pair<double, double> normalized_variances(const FockState& out,
                                               const FockState& in) {
    double vx_in = var_quadrature(in, 0.0);
    double vp_in = var_quadrature(in, kPi / 2.0);
    if (vx_in <= 0.0 || vp_in <= 0.0)
        throw std::invalid_argument("normalized_variances: degenerate input variance");
    return {var_quadrature(out, 0.0) / vx_in,
            var_quadrature(out, kPi / 2.0) / vp_in};
}

EllipseFit gaussian_ellipse_fit(const QuadratureDataset& data) {
    std::vector<double> phases, vars;
    for (const auto& g : data.groups) {
        if (g.samples.empty()) continue;
        double mean = 0.0;
        for (double s : g.samples) mean += s;
        mean /= g.samples.size();
        double v = 0.0;
        for (double s : g.samples) v += (s - mean) * (s - mean);
        v /= g.samples.size();
        phases.push_back(g.phase);
        vars.push_back(v);
    }
    if (phases.size() < 3)
        throw std::invalid_argument("gaussian_ellipse_fit: need at least 3 angles");
    return fit_from_cov(solve_ellipse(phases, vars));
}

EllipseFit gaussian_ellipse_fit(const FockState& state) {
    std::vector<double> phases = default_phase_grid();
    std::vector<double> vars;
    for (double phi : phases) vars.push_back(var_quadrature(state, phi));
    return fit_from_cov(solve_ellipse(phases, vars));
}

}  // namespace loopsim
