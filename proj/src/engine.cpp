#include "loopsim/engine.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "loopsim/sources.hpp"

namespace loopsim {

namespace {

struct PreparedStep {
    FockState two;    // after the beam splitter; mode 0 kept, mode 1 measured
    double sigma;     // std of the measured marginal at the homodyne angle
    int dim;          // kept-mode cutoff
};

PreparedStep prepare_step(const FockState& in, const GateStep& step) {
    if (in.n_modes() != 1)
        throw std::invalid_argument("run_step: single-mode input required");
    if (step.reflectivity <= 0.0 || step.reflectivity >= 1.0)
        throw std::invalid_argument("run_step: reflectivity must be in (0, 1)");
    int d = in.dims[0];
    FockState anc = make_ancilla(step.ancilla, d);
    if (step.extra_ancilla_loss > 0.0)
        anc = apply_loss(anc, 0, 1.0 - step.extra_ancilla_loss);
    // first_step: the ancilla already sits in the loop (kept side).
    FockState two = step.variant == StepVariant::first_step ? tensor(anc, in)
                                                            : tensor(in, anc);
    two = apply_beamsplitter(two, step.reflectivity);
    FockState marg = partial_trace(two, 1);
    double sigma = std::sqrt(var_quadrature(marg, step.phi));
    return {std::move(two), sigma, d};
}

// Unnormalized sum over outcomes: sum_i w_i D(g m_i) rho_cond(m_i) D†(g m_i).
Matrix integrate_outcomes(const PreparedStep& prep, const GateStep& step,
                          const std::vector<double>& nodes,
                          const std::vector<double>& weights) {
    int d = prep.dim;
    Matrix acc = Matrix::Zero(d, d);
    double cphi = std::cos(step.phi), sphi = std::sin(step.phi);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        double m = nodes[i];
        FockState cond = condition_on_quadrature(prep.two, 1, step.phi, m);
        Matrix D = displacement_matrix(d, step.gain * m * cphi, step.gain * m * sphi);
        acc += weights[i] * (D * cond.rho * D.adjoint());
    }
    return acc;
}

double hermitian_trace_norm(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
}

FockState finish_step(Matrix rho, int d, const GateStep& step, bool warn) {
    FockState out;
    out.dims = {d};
    out.rho = std::move(rho);
    out.rho /= out.rho.trace().real();
    out = apply_loss(out, 0, step.loop_eta);
    out.rho /= out.rho.trace().real();
    out.cutoff_warning = out.cutoff_warning || warn;
    return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

Matrix squeeze_matrix(int dim, double r) {
    Matrix a = annihilation(dim);
    Matrix k = 0.5 * r * (a * a - a.adjoint() * a.adjoint());
    Matrix h = Complex(0, 1) * k;  // Hermitian since k is real antisymmetric
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    Vector ph(dim);
    for (int i = 0; i < dim; ++i)
        ph(i) = std::exp(Complex(0, -es.eigenvalues()(i)));
    return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

FockState ideal_squeeze(const FockState& in, double r, Quadrature quad) {
    if (in.n_modes() != 1)
        throw std::invalid_argument("ideal_squeeze: single-mode input required");
    int d = in.dims[0];
    Matrix S = squeeze_matrix(d, quad == Quadrature::x ? r : -r);
    FockState out = in;
    out.rho = S * in.rho * S.adjoint();
    out.rho /= out.rho.trace().real();
    if (tail_population(out, 0) > kTailThreshold) out.cutoff_warning = true;
    return out;
}

FockState run_step_deterministic(const FockState& in, const GateStep& step) {
    PreparedStep prep = prepare_step(in, step);
    double L = 6.0 * prep.sigma;
    std::vector<double> nodes, weights;
    Matrix prev;
    double prev_tr = 0.0;
    for (int n = 50; n <= 1600; n *= 2) {
        gauss_legendre(n, nodes, weights);
        for (auto& x : nodes) x *= L;
        for (auto& w : weights) w *= L;
        Matrix cur = integrate_outcomes(prep, step, nodes, weights);
        double tr = cur.trace().real();
        if (prev_tr > 0.0) {
            double delta = hermitian_trace_norm(cur / tr - prev / prev_tr);
            if (delta < 1e-6)
                return finish_step(std::move(cur), prep.dim, step, prep.two.cutoff_warning);
        }
        prev = std::move(cur);
        prev_tr = tr;
    }
    throw std::runtime_error("run_step_deterministic: outcome quadrature did not converge");
}

FockState run_step_montecarlo(const FockState& in, const GateStep& step,
                              int n_traj, std::uint64_t seed) {
    if (n_traj < 1)
        throw std::invalid_argument("run_step_montecarlo: n_traj must be >= 1");
    PreparedStep prep = prepare_step(in, step);
    FockState marg = partial_trace(prep.two, 1);

    // Inverse CDF of the measured marginal on a dense grid.
    const int kGrid = 4001;
    double L = 8.0 * prep.sigma;
    std::vector<double> xs(kGrid), cdf(kGrid);
    double dx = 2.0 * L / (kGrid - 1);
    double prev_pdf = 0.0, acc = 0.0;
    for (int i = 0; i < kGrid; ++i) {
        xs[i] = -L + i * dx;
        double p = quadrature_pdf(marg, step.phi, xs[i]);
        if (i > 0) acc += 0.5 * (p + prev_pdf) * dx;
        cdf[i] = acc;
        prev_pdf = p;
    }
    for (auto& c : cdf) c /= acc;

    auto sample_m = [&](double u) {
        auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
        int hi = static_cast<int>(it - cdf.begin());
        if (hi == 0) return xs.front();
        if (hi >= kGrid) return xs.back();
        double c0 = cdf[hi - 1], c1 = cdf[hi];
        double t = c1 > c0 ? (u - c0) / (c1 - c0) : 0.0;
        return xs[hi - 1] + t * dx;
    };

    int d = prep.dim;
    double cphi = std::cos(step.phi), sphi = std::sin(step.phi);
    Matrix acc_rho = Matrix::Zero(d, d);
    for (int t = 0; t < n_traj; ++t) {
        // counter-based substream: trajectory index fully determines the draw
        std::uint64_t bits = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(t)));
        double u = (bits >> 11) * 0x1.0p-53;
        double m = sample_m(u);
        FockState cond = condition_on_quadrature(prep.two, 1, step.phi, m);
        cond.rho /= cond.rho.trace().real();
        Matrix D = displacement_matrix(d, step.gain * m * cphi, step.gain * m * sphi);
        acc_rho += D * cond.rho * D.adjoint();
    }
    acc_rho /= static_cast<double>(n_traj);
    return finish_step(std::move(acc_rho), d, step, prep.two.cutoff_warning);
}

std::vector<FockState> run_program(const FockState& in, const GateProgram& program) {
    if (program.steps.empty())
        throw std::invalid_argument("run_program: empty program");
    std::vector<FockState> out;
    out.reserve(program.steps.size());
    FockState state = in;
    for (const auto& step : program.steps) {
        state = run_step_deterministic(state, step);
        out.push_back(state);
    }
    return out;
}

FockState realistic_model_predict(const FockState& in,
                                  const std::vector<double>& r_list,
                                  Quadrature quad, const LossScenario& scenario) {
    GateProgram prog = make_program(r_list, quad, scenario);
    return run_program(in, prog).back();
}

double trace_distance(const FockState& a, const FockState& b) {
    if (a.dims != b.dims)
        throw std::invalid_argument("trace_distance: dimension mismatch");
    Eigen::SelfAdjointEigenSolver<Matrix> es(a.rho - b.rho, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace loopsim
