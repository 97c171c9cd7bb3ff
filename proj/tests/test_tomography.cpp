#include <doctest.h>

#include <cmath>
#include <numbers>

#include "loopsim/engine.hpp"
#include "loopsim/sources.hpp"
#include "loopsim/tomography.hpp"

using namespace loopsim;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("default phase grid") {
    auto grid = default_phase_grid();
    REQUIRE(grid.size() == 12);
    CHECK(grid.front() == doctest::Approx(kPi / 2));
    CHECK(grid.back() == doctest::Approx(-75.0 * kPi / 180.0));
}

TEST_CASE("sampling statistics") {
    FockState vac = make_vacuum(1, 15);
    auto data = sample_quadratures(vac, {0.0, 1.0}, 3000, 7);
    for (const auto& g : data.groups) {
        double mean = 0.0, var = 0.0;
        for (double s : g.samples) mean += s;
        mean /= g.samples.size();
        for (double s : g.samples) var += (s - mean) * (s - mean);
        var /= g.samples.size();
        // 3 sigma bound on the variance of N(0, 1/2) at n = 3000
        CHECK(std::abs(var - 0.5) < 3.0 * 0.5 * std::sqrt(2.0 / 3000.0));
    }

    double r = 0.4;
    FockState sq = make_squeezed_vacuum(r, 30);
    auto d2 = sample_quadratures(sq, {0.0, kPi / 2}, 5000, 11);
    auto var_of = [](const QuadratureDataset::Group& g) {
        double m = 0.0, v = 0.0;
        for (double s : g.samples) m += s;
        m /= g.samples.size();
        for (double s : g.samples) v += (s - m) * (s - m);
        return v / g.samples.size();
    };
    double ratio = var_of(d2.groups[0]) / var_of(d2.groups[1]);
    CHECK(ratio == doctest::Approx(std::exp(-4 * r)).epsilon(0.15));

    // reproducible per seed
    auto d3 = sample_quadratures(vac, {0.0}, 100, 42);
    auto d4 = sample_quadratures(vac, {0.0}, 100, 42);
    CHECK(d3.groups[0].samples == d4.groups[0].samples);
}

TEST_CASE("mle roundtrip on vacuum") {
    FockState vac = make_vacuum(1, 10);
    auto data = sample_quadratures(vac, default_phase_grid(), 3000, 3);
    MleResult res = mle_reconstruct(data, 10);
    CHECK(fidelity(res.state, vac) >= 0.99);
    CHECK(res.state.trace() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("mle roundtrip on a modeled cat") {
    auto [cat, p] = make_cat(CatSpec{}, 18);
    auto data = sample_quadratures(cat, default_phase_grid(), 3000, 5);
    MleResult res = mle_reconstruct(data, 18);
    CHECK(fidelity(res.state, cat) >= 0.98);
    CHECK(std::abs(negativity(res.state) - negativity(cat)) < 0.02 / kPi);
}

TEST_CASE("mle log-likelihood is monotone") {
    FockState sq = make_squeezed_vacuum(0.3, 12);
    auto data = sample_quadratures(sq, default_phase_grid(), 1000, 9);
    MleOptions opts;
    opts.max_iters = 50;
    double prev = -1e300;
    // re-run with increasing caps; the likelihood of the iterate never drops
    for (int iters : {5, 10, 20, 50}) {
        opts.max_iters = iters;
        MleResult res = mle_reconstruct(data, 12, opts);
        CHECK(res.log_likelihood >= prev - 1e-9);
        prev = res.log_likelihood;
    }
}

TEST_CASE("mle flags a single-angle dataset as ill-posed") {
    FockState vac = make_vacuum(1, 8);
    auto data = sample_quadratures(vac, {0.3}, 1000, 2);
    MleResult res = mle_reconstruct(data, 8);
    CHECK_FALSE(res.converged);
}

TEST_CASE("negativity shortcuts") {
    CHECK(negativity(make_fock(1, 10)) == doctest::Approx(-1.0 / kPi).epsilon(1e-10));
    CHECK(negativity(make_vacuum(1, 10)) == doctest::Approx(1.0 / kPi).epsilon(1e-10));
}

TEST_CASE("normalized variances") {
    FockState vac = make_vacuum(1, 25);
    auto [ux, up] = normalized_variances(vac, vac);
    CHECK(ux == doctest::Approx(1.0));
    CHECK(up == doctest::Approx(1.0));
    double r = 0.3;
    FockState sq = ideal_squeeze(vac, r, Quadrature::x);
    auto [dx, dp] = normalized_variances(sq, vac);
    CHECK(dx == doctest::Approx(std::exp(-2 * r)).epsilon(1e-6));
    CHECK(dp == doctest::Approx(std::exp(2 * r)).epsilon(1e-6));
}

TEST_CASE("ellipse fit from exact moments") {
    FockState vac = make_vacuum(1, 15);
    EllipseFit f = gaussian_ellipse_fit(vac);
    CHECK(f.squeezing_db == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(f.antisqueezing_db == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(f.angle_deg == doctest::Approx(0.0));

    double r = 0.33;
    FockState sq = make_squeezed_vacuum(r, 30);
    EllipseFit g = gaussian_ellipse_fit(sq);
    double level = -2 * r * 10.0 / std::numbers::ln10;
    CHECK(g.squeezing_db == doctest::Approx(level).epsilon(1e-4));
    CHECK(g.antisqueezing_db == doctest::Approx(-level).epsilon(1e-4));
    CHECK(std::abs(g.angle_deg) < 1e-6);

    // fit residual is tiny for a Gaussian state: rebuild Var(phi) from cov
    for (double phi : default_phase_grid()) {
        double c = std::cos(phi), s = std::sin(phi);
        double pred = g.cov(0, 0) * c * c + g.cov(1, 1) * s * s + 2 * g.cov(0, 1) * s * c;
        CHECK(pred == doctest::Approx(var_quadrature(sq, phi)).epsilon(1e-10));
    }
}

TEST_CASE("ellipse fit from samples finds the tilt") {
    FockState sq = make_squeezed_vacuum(0.4, 30);
    FockState tilted = rotate(sq, 0, kPi / 6);
    auto data = sample_quadratures(tilted, default_phase_grid(), 4000, 21);
    EllipseFit f = gaussian_ellipse_fit(data);
    CHECK(f.squeezing_db < -2.0);
    CHECK(std::abs(std::abs(f.angle_deg) - 30.0) < 5.0);
}
