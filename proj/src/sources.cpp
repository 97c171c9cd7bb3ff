#include "loopsim/sources.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace loopsim {

FockState make_ancilla(const AncillaSpec& spec, int cutoff) {
    if (spec.pure_squeezing_db > 0.0)
        throw std::invalid_argument("make_ancilla: pure_squeezing_db must be <= 0");
    if (spec.preparation_loss < 0.0 || spec.preparation_loss >= 1.0)
        throw std::invalid_argument("make_ancilla: preparation_loss must be in [0, 1)");
    // dB level of the pure state: 10 log10(2 Var) with Var = e^{-2r}/2.
    double r = -spec.pure_squeezing_db * std::numbers::ln10 / 20.0;
    FockState s = make_squeezed_vacuum(r, cutoff);
    s = apply_loss(s, 0, 1.0 - spec.preparation_loss);
    if (spec.quadrature == Quadrature::p)
        s = rotate(s, 0, std::numbers::pi / 2.0);
    return s;
}

std::pair<FockState, double> make_cat(const CatSpec& spec, int cutoff) {
    if (spec.tap_reflectivity <= 0.0 || spec.tap_reflectivity > 0.5)
        throw std::invalid_argument("make_cat: tap_reflectivity must be in (0, 0.5]");
    if (spec.source_squeezing_r <= 0.0)
        throw std::invalid_argument("make_cat: source_squeezing_r must be > 0");
    int dt = spec.tap_cutoff;
    FockState src = make_squeezed_vacuum(spec.source_squeezing_r, cutoff);
    FockState two = tensor(src, make_vacuum(1, dt));
    // Kept mode keeps sqrt(1 - tap) of the field.
    two = apply_beamsplitter(two, 1.0 - spec.tap_reflectivity);

    // Conditional (unnormalized) state on the signal mode given the herald.
    Matrix cond = Matrix::Zero(cutoff, cutoff);
    if (spec.herald == HeraldModel::click) {
        // click = 1 - |0><0| on the tap mode
        for (int i = 0; i < cutoff; ++i)
            for (int j = 0; j < cutoff; ++j) {
                Complex v = 0;
                for (int k = 1; k < dt; ++k) v += two.rho(i * dt + k, j * dt + k);
                cond(i, j) = v;
            }
    } else {
        for (int i = 0; i < cutoff; ++i)
            for (int j = 0; j < cutoff; ++j)
                cond(i, j) = two.rho(i * dt + 1, j * dt + 1);
    }
    double p = cond.trace().real();
    if (p < 1e-12)
        throw std::runtime_error("make_cat: herald probability is numerically empty");
    FockState cat;
    cat.dims = {cutoff};
    cat.rho = cond / p;
    if (spec.preparation_loss > 0.0)
        cat = apply_loss(cat, 0, 1.0 - spec.preparation_loss);
    return {cat, p};
}

}  // namespace loopsim
