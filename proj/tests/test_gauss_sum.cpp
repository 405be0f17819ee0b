#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "newphase/gauss_sum.hpp"

using namespace newphase;

namespace {
double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = static_cast<int>(x.size());
    for (int i = 0; i < n; ++i) {
        double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}
}  // namespace

TEST_CASE("window plateau properties") {
    auto v = WindowV::plateau(0.5, 2.0);
    CHECK(v.at_radius(1.0) == doctest::Approx(1.0));
    CHECK(v.at_radius(0.49) == 0.0);
    CHECK(v.at_radius(2.01) == 0.0);
    CHECK(v({-1.0, 0.0}) == doctest::Approx(1.0));  // radial
    auto v1 = v.weighted(real_field(), 0.5);
    CHECK(v1.at_radius(1.5) == doctest::Approx(v.at_radius(1.5) * std::sqrt(1.5)));
    auto v2 = v.weighted(complex_field(), 0.5);
    CHECK(v2.at_radius(1.5) == doctest::Approx(v.at_radius(1.5) * 1.5));
}

TEST_CASE("phase constant") {
    // R, T = 100 integer: psi(-T) = 1, c = e^{-i pi/4} chi(T)
    UnitaryCharacter chi(real_field(), 0, kTwoPi * 100.0);
    cplx c = phase_constant(chi);
    CHECK(std::abs(std::abs(c) - 1.0) < 1e-12);
    cplx expect = std::polar(1.0, -kPi / 4.0) * chi.eval({100.0, 0.0});
    CHECK(std::abs(c - expect) < 1e-12);

    // C with real T: c = chi(T) psi_C(-T), unit modulus
    UnitaryCharacter chic(complex_field(), 0, kTwoPi * 50.0);
    cplx cc = phase_constant(chic);
    CHECK(std::abs(std::abs(cc) - 1.0) < 1e-12);
    cplx t50{50.0, 0.0};
    CHECK(std::abs(cc - chic.eval(t50) * complex_field().psi(-t50)) < 1e-12);

    // C with m != 0: T complex; literal evaluation still lands on the circle
    UnitaryCharacter chim(complex_field(), 3, kTwoPi * 20.0);
    CHECK(std::abs(std::abs(phase_constant(chim)) - 1.0) < 1e-12);

    CHECK_THROWS_AS(phase_constant(UnitaryCharacter(real_field(), 0, 0.0)),
                    std::domain_error);
}

TEST_CASE("flat-phase limit over R") {
    auto v = WindowV::plateau(1.0, 2.0);
    UnitaryCharacter triv(real_field(), 0, 0.0);
    double t = 1e-3;
    auto g = gauss_sum_oracle(triv, {t, 0.0}, v, QuadOptions{1e-11});
    // independent value of int V d^x (both signs)
    auto vol = integrate_mult_shell([&](cplx y) { return cplx{v(y), 0.0}; }, real_field(),
                                    1.0, 2.0, QuadOptions{1e-12});
    double bound = kTwoPi * v.B0 * t * std::abs(vol.value);
    CHECK(std::abs(g.value - vol.value) <= bound + 1e-9);
}

TEST_CASE("flat-phase limit over C") {
    auto v = WindowV::plateau(1.0, 2.0);
    UnitaryCharacter triv(complex_field(), 0, 0.0);
    double t = 1e-3;
    auto g = gauss_sum_oracle(triv, {t, 0.0}, v, QuadOptions{1e-9});
    auto vol = integrate_mult_shell([&](cplx y) { return cplx{v(y), 0.0}; },
                                    complex_field(), 1.0, 2.0, QuadOptions{1e-10});
    double bound = 2.0 * kTwoPi * v.B0 * t * std::abs(vol.value);
    CHECK(std::abs(g.value - vol.value) <= bound + 1e-7);
}

TEST_CASE("asymptotic main term basics") {
    auto v = WindowV::plateau(0.5, 2.0);
    UnitaryCharacter chi(real_field(), 0, kTwoPi * 100.0);  // T = 100, C = 101
    // T/t outside the support window
    CHECK(std::abs(gauss_sum_asymptotic(chi, {100.0 / 3.0, 0.0}, v)) == 0.0);
    // T/t = 1: c_chi / sqrt(101)
    cplx expect = phase_constant(chi) / std::sqrt(101.0);
    CHECK(std::abs(gauss_sum_asymptotic(chi, {100.0, 0.0}, v) - expect) < 1e-12);
}

TEST_CASE("regime classification") {
    auto v = WindowV::plateau(0.5, 2.0);
    auto th = GaussThresholds::defaults(v);
    CHECK(th.A1 == doctest::Approx(0.25));
    CHECK(th.B1 == doctest::Approx(4.0));
    UnitaryCharacter chi(real_field(), 0, kTwoPi * 100.0);
    CHECK(classify_regime(chi, {100.0, 0.0}, th) == GaussRegime::Bulk);
    CHECK(classify_regime(chi, {100.0 / (10.0 * th.B1), 0.0}, th) == GaussRegime::RapidDecay);
    CHECK(classify_regime(chi, {100.0 / th.A1, 0.0}, th) == GaussRegime::Bulk);  // closed
}

TEST_CASE("oracle rapid decay outside the bulk window") {
    auto v = WindowV::plateau(0.5, 2.0);
    auto th = GaussThresholds::defaults(v);
    UnitaryCharacter chi(real_field(), 0, kTwoPi * 100.0);
    QuadOptions opt;
    opt.tol = 1e-12;
    auto bulk = gauss_sum_oracle(chi, {100.0, 0.0}, v, opt);
    auto rapid = gauss_sum_oracle(chi, {100.0 / (3.0 * th.B1), 0.0}, v, opt);
    CHECK(std::abs(rapid.value) < 1e-8 * std::abs(bulk.value));
}

TEST_CASE("oracle vs asymptotic: R sweep at T/t = 1") {
    auto v = WindowV::plateau(0.5, 2.0);
    std::vector<double> conds, errs;
    for (double T : {64.0, 128.0, 256.0}) {
        UnitaryCharacter chi(real_field(), 0, kTwoPi * T);
        QuadOptions opt;
        opt.tol = 1e-10;
        auto g = gauss_sum_oracle(chi, {T, 0.0}, v, opt);
        cplx main = gauss_sum_asymptotic(chi, {T, 0.0}, v);
        conds.push_back(conductor(chi));
        errs.push_back(std::abs(g.value - main));
    }
    double slope = fit_slope(conds, errs);
    CHECK(slope <= -1.25);
    CHECK(slope >= -1.85);
}

TEST_CASE("oracle vs asymptotic: one C instance") {
    auto v = WindowV::plateau(0.5, 2.0);
    UnitaryCharacter chi(complex_field(), 0, kTwoPi * 32.0);  // C = 33^2
    QuadOptions opt;
    opt.tol = 1e-8;
    opt.max_evals = 100'000'000;
    auto g = gauss_sum_oracle(chi, {32.0, 0.0}, v, opt);
    cplx main = gauss_sum_asymptotic(chi, {32.0, 0.0}, v);
    CHECK(std::abs(g.value - main) < 0.15 * std::abs(main));
}

TEST_CASE("conjugation symmetry via the oracle") {
    auto v = WindowV::plateau(0.5, 2.0);
    QuadOptions opt;
    opt.tol = 1e-10;
    {
        UnitaryCharacter chi(real_field(), 1, kTwoPi * 30.0);
        auto a = gauss_sum_oracle(chi.inverse(), {30.0, 0.0}, v, opt);
        auto b = gauss_sum_oracle(chi, {30.0, 0.0}, v, opt);
        double chim1 = chi.eval({-1.0, 0.0}).real();
        CHECK(std::abs(a.value - chim1 * std::conj(b.value)) < 1e-8);
    }
    {
        QuadOptions optc;
        optc.tol = 1e-7;
        optc.max_evals = 100'000'000;
        UnitaryCharacter chi(complex_field(), 2, kTwoPi * 12.0);
        auto a = gauss_sum_oracle(chi.inverse(), {12.0, 0.0}, v, optc);
        auto b = gauss_sum_oracle(chi, {12.0, 0.0}, v, optc);
        double chim1 = chi.eval({-1.0, 0.0}).real();
        CHECK(std::abs(a.value - chim1 * std::conj(b.value)) < 1e-5);
    }
}

TEST_CASE("derivative spot-check in the bulk (finite differences in t)") {
    // |d/dt G| <~ fitted * |t|^{-1} C^{-1/2} in the bulk regime
    auto v = WindowV::plateau(0.5, 2.0);
    QuadOptions opt;
    opt.tol = 1e-11;
    UnitaryCharacter chi(real_field(), 0, kTwoPi * 64.0);
    double t = 64.0, h = 1e-3;
    auto gp = gauss_sum_oracle(chi, {t + h, 0.0}, v, opt);
    auto gm = gauss_sum_oracle(chi, {t - h, 0.0}, v, opt);
    double deriv = std::abs(gp.value - gm.value) / (2.0 * h);
    double scale = std::pow(conductor(chi), -0.5) / t;
    CHECK(deriv <= 20.0 * scale);
}
