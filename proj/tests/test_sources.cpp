#include <doctest.h>

#include <cmath>
#include <numbers>

#include "loopsim/gaussian.hpp"
#include "loopsim/sources.hpp"

using namespace loopsim;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("ancilla builder hits the covariance model") {
    FockState a = make_ancilla({-6.8, 0.22, Quadrature::x}, 25);
    CHECK(var_quadrature(a, 0.0) ==
          doctest::Approx(ancilla_variance({-6.8, 0.22, Quadrature::x})).epsilon(2e-3));
    FockState p = make_ancilla({-7.0, 0.27, Quadrature::p}, 25);
    CHECK(var_quadrature(p, kPi / 2) ==
          doctest::Approx(ancilla_variance({-7.0, 0.27, Quadrature::p})).epsilon(2e-3));
    // p-oriented ancilla is antisqueezed in x
    CHECK(var_quadrature(p, 0.0) > 0.5);
    FockState vac = make_ancilla({0.0, 0.0, Quadrature::x}, 15);
    CHECK(fidelity(vac, make_vacuum(1, 15)) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("ideal photon subtraction has odd parity") {
    CatSpec spec;
    spec.tap_reflectivity = 0.05;
    spec.preparation_loss = 0.0;
    spec.herald = HeraldModel::single_photon;
    auto [cat, prob] = make_cat(spec, 25);
    CHECK(prob > 0.0);
    CHECK(wigner(cat, 0, 0) == doctest::Approx(-1.0 / kPi).epsilon(1e-6));
    // photon-number support is exactly odd
    for (int n = 0; n < 25; n += 2) CHECK(cat.rho(n, n).real() < 1e-12);
}

TEST_CASE("preparation loss attenuates the negativity") {
    CatSpec clean;
    clean.preparation_loss = 0.0;
    CatSpec deep = clean;
    deep.preparation_loss = 0.13;
    CatSpec shallow = clean;
    shallow.preparation_loss = 0.30;
    double w_clean = wigner(make_cat(clean, 25).first, 0, 0);
    double w_deep = wigner(make_cat(deep, 25).first, 0, 0);
    double w_shallow = wigner(make_cat(shallow, 25).first, 0, 0);
    CHECK(w_clean < w_deep);
    CHECK(w_deep < w_shallow);
    CHECK(w_shallow < 0.0);  // still negative at 30% loss
}

TEST_CASE("herald probability is monotone in tap and source squeezing") {
    CatSpec spec;
    double prev = 0.0;
    for (double tap : {0.02, 0.05, 0.10, 0.20}) {
        spec.tap_reflectivity = tap;
        double p = make_cat(spec, 25).second;
        CHECK(p > prev);
        prev = p;
    }
    spec.tap_reflectivity = 0.05;
    prev = 0.0;
    for (double r : {0.2, 0.4, 0.6}) {
        spec.source_squeezing_r = r;
        double p = make_cat(spec, 25).second;
        CHECK(p > prev);
        prev = p;
    }
}

TEST_CASE("cat builder is deterministic and validated") {
    CatSpec spec;
    auto a = make_cat(spec, 20);
    auto b = make_cat(spec, 20);
    CHECK((a.first.rho - b.first.rho).norm() == doctest::Approx(0.0));
    CHECK(a.second == doctest::Approx(b.second));

    CatSpec bad = spec;
    bad.tap_reflectivity = 0.9;
    CHECK_THROWS_AS(make_cat(bad, 20), std::invalid_argument);
    bad = spec;
    bad.source_squeezing_r = -0.1;
    CHECK_THROWS_AS(make_cat(bad, 20), std::invalid_argument);
}

TEST_CASE("click herald keeps a normalized valid state") {
    auto [cat, prob] = make_cat(CatSpec{}, 25);
    CHECK(cat.trace() == doctest::Approx(1.0).epsilon(1e-9));
    Eigen::SelfAdjointEigenSolver<Matrix> es(cat.rho, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() >= -1e-9);
    CHECK(prob > 0.0);
    CHECK(prob < 1.0);
}
