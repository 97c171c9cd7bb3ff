#include "loopsim/gaussian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "loopsim/engine.hpp"

namespace loopsim {

namespace {

constexpr double kPi = std::numbers::pi;

double loss_transmission(const AncillaSpec& spec, double extra_loss) {
    return (1.0 - spec.preparation_loss) * (1.0 - extra_loss);
}

// Swap the roles of x and p (reflection through the x=p axis).
GaussianState swap_xp(const GaussianState& in) {
    GaussianState out;
    out.mean << in.mean(1), in.mean(0);
    out.cov << in.cov(1, 1), in.cov(0, 1), in.cov(1, 0), in.cov(0, 0);
    return out;
}

// One step in the x-squeezing orientation (measure/displace p at phi=90deg).
GaussianState step_x_oriented(const GaussianState& in, double R, double gain,
                              StepVariant variant, double v_anc_sq,
                              double v_anc_antisq, double eta) {
    if (R <= 0.0 || R >= 1.0)
        throw std::invalid_argument("mis_step_cov: reflectivity must be in (0, 1)");
    double T = 1.0 - R;
    double ck_in, ck_anc, cm_in, cm_anc;
    if (variant == StepVariant::loop_step) {
        ck_in = std::sqrt(R);
        ck_anc = std::sqrt(T);
        cm_in = std::sqrt(T);
        cm_anc = -std::sqrt(R);
    } else {
        ck_in = std::sqrt(T);
        ck_anc = std::sqrt(R);
        cm_in = -std::sqrt(R);
        cm_anc = std::sqrt(T);
    }
    double fx_in = ck_in;                  // x sees no feedforward
    double fp_in = ck_in + gain * cm_in;   // p of the kept arm after g*m
    double fp_anc = ck_anc + gain * cm_anc;

    GaussianState out;
    out.mean << fx_in * in.mean(0), fp_in * in.mean(1);
    out.cov(0, 0) = fx_in * fx_in * in.cov(0, 0) + ck_anc * ck_anc * v_anc_sq;
    out.cov(1, 1) = fp_in * fp_in * in.cov(1, 1) + fp_anc * fp_anc * v_anc_antisq;
    out.cov(0, 1) = out.cov(1, 0) = fx_in * fp_in * in.cov(0, 1);
    return gaussian_loss(out, eta);
}

}  // namespace

double ancilla_variance(const AncillaSpec& spec, double extra_loss) {
    double t = loss_transmission(spec, extra_loss);
    return t * 0.5 * std::pow(10.0, spec.pure_squeezing_db / 10.0) + (1.0 - t) * 0.5;
}

double ancilla_antivariance(const AncillaSpec& spec, double extra_loss) {
    double t = loss_transmission(spec, extra_loss);
    return t * 0.5 * std::pow(10.0, -spec.pure_squeezing_db / 10.0) + (1.0 - t) * 0.5;
}

GaussianState gaussian_vacuum() { return GaussianState{}; }

GaussianState gaussian_loss(const GaussianState& in, double eta) {
    if (eta < 0.0 || eta > 1.0)
        throw std::invalid_argument("gaussian_loss: eta must lie in [0, 1]");
    GaussianState out;
    out.mean = std::sqrt(eta) * in.mean;
    out.cov = eta * in.cov + (1.0 - eta) * 0.5 * Eigen::Matrix2d::Identity();
    return out;
}

GaussianState gaussian_squeeze(const GaussianState& in, double r) {
    Eigen::Matrix2d S;
    S << std::exp(-r), 0.0, 0.0, std::exp(r);
    GaussianState out;
    out.mean = S * in.mean;
    out.cov = S * in.cov * S;
    return out;
}

GaussianState mis_step_cov(const GaussianState& in, double reflectivity,
                           StepVariant variant, double v_anc_sq,
                           double v_anc_antisq, double eta_loop) {
    double T = 1.0 - reflectivity;
    double gain = variant == StepVariant::loop_step
                      ? std::sqrt(T / reflectivity)
                      : -std::sqrt(reflectivity / T);
    return step_x_oriented(in, reflectivity, gain, variant, v_anc_sq,
                           v_anc_antisq, eta_loop);
}

GaussianState mis_step_cov(const GaussianState& in, const GateStep& step) {
    double v_sq = ancilla_variance(step.ancilla, step.extra_ancilla_loss);
    double v_anti = ancilla_antivariance(step.ancilla, step.extra_ancilla_loss);
    bool x_oriented = std::abs(std::sin(step.phi)) > std::abs(std::cos(step.phi));
    if (x_oriented)
        return step_x_oriented(in, step.reflectivity, step.gain, step.variant,
                               v_sq, v_anti, step.loop_eta);
    return swap_xp(step_x_oriented(swap_xp(in), step.reflectivity, step.gain,
                                   step.variant, v_sq, v_anti, step.loop_eta));
}

GaussianState propagate_program_cov(const GaussianState& in,
                                    const GateProgram& program) {
    GaussianState s = in;
    for (const auto& step : program.steps) s = mis_step_cov(s, step);
    return s;
}

double gaussian_fidelity(const GaussianState& a, const GaussianState& b) {
    double da = a.cov.determinant();
    double db = b.cov.determinant();
    double delta = std::max(da - 0.25, 0.0) * std::max(db - 0.25, 0.0);
    return 1.0 / (std::sqrt((a.cov + b.cov).determinant() + delta) - std::sqrt(delta));
}

ScaleNoise compose_program_channel(const std::vector<double>& r_list,
                                   Quadrature quad, const LossScenario& scenario) {
    const AncillaSpec& anc =
        quad == Quadrature::x ? scenario.ancilla_x : scenario.ancilla_p;
    double eta = scenario.loop_eta;
    // Accumulate along the squeezed axis (s_sq) and its conjugate (s_anti).
    double s_sq = 1.0, s_anti = 1.0, n_sq = 0.0, n_anti = 0.0;
    for (std::size_t i = 0; i < r_list.size(); ++i) {
        double r = std::abs(r_list[i]);
        double extra = i == 0 ? scenario.first_pass_ancilla_loss : 0.0;
        double va = ancilla_variance(anc, extra);
        double keep;  // |scale| of the squeezed quadrature this step
        double anc_weight;
        if (i == 0) {
            double T = std::exp(-2.0 * r);
            keep = std::sqrt(T);
            anc_weight = 1.0 - T;
        } else {
            double R = std::exp(-2.0 * r);
            keep = std::sqrt(R);
            anc_weight = 1.0 - R;
        }
        double c_sq = std::sqrt(eta) * keep;
        double c_anti = std::sqrt(eta) / keep;
        n_sq = c_sq * c_sq * n_sq + eta * anc_weight * va + (1.0 - eta) * 0.5;
        n_anti = c_anti * c_anti * n_anti + (1.0 - eta) * 0.5;
        s_sq *= c_sq;
        s_anti *= c_anti;
    }
    ScaleNoise ch;
    if (quad == Quadrature::x) {
        ch.sx = s_sq;
        ch.sp = s_anti;
        ch.nx = n_sq;
        ch.np = n_anti;
    } else {
        ch.sx = s_anti;
        ch.sp = s_sq;
        ch.nx = n_anti;
        ch.np = n_sq;
    }
    return ch;
}

double w00_through_channel(const FockState& in, const ScaleNoise& ch) {
    if (in.n_modes() != 1)
        throw std::invalid_argument("w00_through_channel: single-mode input required");
    int d = in.dims[0];
    // Pull the origin back through x -> sx x + noise: the required kernel is
    // a (generally squeezed) thermal Gaussian operator G with
    // Var(x) = nx/sx^2, Var(p) = np/sp^2.
    double s2x = ch.nx / (ch.sx * ch.sx);
    double s2p = ch.np / (ch.sp * ch.sp);
    double nu = std::sqrt(s2x * s2p);
    if (nu <= 0.0)
        throw std::invalid_argument("w00_through_channel: noiseless channel");
    double rt = 0.25 * std::log(s2p / s2x);
    double q = (nu - 0.5) / (nu + 0.5);
    // Build G on an enlarged space: the squeeze unitary mixes levels well
    // above the input cutoff, and truncating it at d corrupts the top-left
    // block that the trace actually uses.
    int dg = std::max(2 * d, d + 30);
    Vector diag(dg);
    double w = 1.0 - q;
    for (int n = 0; n < dg; ++n) {
        diag(n) = w;
        w *= q;
    }
    Matrix S = squeeze_matrix(dg, rt);
    Matrix G = S * diag.asDiagonal() * S.adjoint();
    double tr = (in.rho * G.topLeftCorner(d, d)).trace().real();
    return tr / (2.0 * kPi * ch.sx * ch.sp);
}

}  // namespace loopsim
