#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "newphase/newvector.hpp"

using namespace newphase;

namespace {
const BumpProfile& bump_r() {
    static BumpProfile h = BumpProfile::standard(real_field());
    return h;
}
const BumpProfile& bump_c() {
    static BumpProfile h = BumpProfile::standard(complex_field());
    return h;
}
}  // namespace

TEST_CASE("bump profile symmetry, support, normalization") {
    for (const auto* h : {&bump_r(), &bump_c()}) {
        // h(t) = h(1/t) exactly by construction
        for (double r : {0.85, 0.95, 1.0, 1.1, 1.2}) {
            CHECK(h->radial(r) == doctest::Approx(h->radial(1.0 / r)).epsilon(1e-14));
        }
        CHECK(h->radial(1.0 / (1.0 + h->a) - 1e-9) == 0.0);
        CHECK(h->radial(1.0 + h->a + 1e-9) == 0.0);
        auto norm = integrate_mult_shell(
            [&](cplx t) {
                double v = (*h)(t);
                return cplx{v * v, 0.0};
            },
            h->field, h->support_lo(), h->support_hi(), QuadOptions{1e-10});
        CHECK(std::abs(norm.value.real() - 1.0) < 1e-8);
    }
}

TEST_CASE("f on the big cell") {
    UnitaryCharacter chi(real_field(), 0, kTwoPi * 40.0);  // T = 40
    auto nv = AnalyticNewvector::make(chi, bump_r());
    CHECK(std::abs(f_on_big_cell(nv, {40.0 * (1.0 + 2 * nv.h.a), 0.0})) == 0.0);
    cplx at_T = f_on_big_cell(nv, {40.0, 0.0});
    cplx expect = nv.C_const * nv.h.radial(1.0) / std::sqrt(40.0);
    CHECK(std::abs(at_T - expect) < 1e-12);

    // unit L^2 norm over the big cell, both fields
    {
        auto r = integrate_1d(
            [&](double t) {
                cplx v = f_on_big_cell(nv, {t, 0.0});
                return cplx{std::norm(v), 0.0};
            },
            -40.0 * 1.3, 40.0 * 1.3, QuadOptions{1e-10});
        CHECK(std::abs(r.value.real() - 1.0) < 1e-8);
    }
    {
        UnitaryCharacter chic(complex_field(), 1, kTwoPi * 6.0);
        auto nvc = AnalyticNewvector::make(chic, bump_c());
        double lim = std::abs(nvc.T) * 1.3;
        auto r = integrate_c(
            [&](cplx t) { return cplx{std::norm(f_on_big_cell(nvc, t)), 0.0}; },
            DomainC{{0.0, 0.0}, lim, lim}, QuadOptions{1e-8});
        CHECK(std::abs(r.value.real() - 1.0) < 1e-6);
    }
}

TEST_CASE("f on lower unipotent elements") {
    UnitaryCharacter chi(real_field(), 1, kTwoPi * 25.0);
    auto nv = AnalyticNewvector::make(chi, bump_r());
    double T = 25.0;
    CHECK(std::abs(f_on_lower_unipotent(nv, {1.0 / (2.0 * T * (1.0 + nv.h.a)), 0.0})) == 0.0);

    cplx direct = f_on_lower_unipotent(nv, {1.0 / T, 0.0});
    cplx expect = chi.eval({-T * T, 0.0}) * nv.C_const * nv.h.radial(1.0) * std::sqrt(T);
    CHECK(std::abs(direct - expect) < 1e-10);

    // two evaluation paths: the closed formula vs Bruhat factorization of n'(x)
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> xr(0.8 / T, 1.25 / T);
    for (int i = 0; i < 20; ++i) {
        double x = xr(rng) * (i % 2 ? 1.0 : -1.0);
        cplx a = f_on_lower_unipotent(nv, {x, 0.0});
        cplx b = f_general(nv, Mat2{{1.0, 0.0}, {0.0, 0.0}, {x, 0.0}, {1.0, 0.0}});
        CHECK(std::abs(a - b) < 1e-12);
    }
}

TEST_CASE("Atkin-Lehner equivariance") {
    {
        UnitaryCharacter chi(real_field(), 0, kTwoPi * 64.0);
        auto nv = AnalyticNewvector::make(chi, bump_r());
        std::vector<cplx> grid;
        for (double s : {0.82, 0.9, 1.0, 1.1, 1.2})
            for (double sign : {1.0, -1.0}) grid.push_back({sign * s * 64.0, 0.0});
        CHECK(check_atkin_lehner(nv, grid) < 1e-10);
    }
    {
        UnitaryCharacter chi(complex_field(), 3, kTwoPi * 11.0);
        auto nv = AnalyticNewvector::make(chi, bump_c());
        std::mt19937 rng(7);
        std::uniform_real_distribution<double> rr(0.82, 1.2);
        std::uniform_real_distribution<double> aa(0.0, kTwoPi);
        std::vector<cplx> grid;
        for (int i = 0; i < 40; ++i) grid.push_back(std::polar(rr(rng), aa(rng)) * nv.T);
        CHECK(check_atkin_lehner(nv, grid) < 1e-9);
    }
}

TEST_CASE("solve_t0") {
    CHECK(std::abs(solve_t0({0.0, 0.0}, {2.0, 0.0}) - cplx{-0.5, 0.0}) < 1e-14);
    cplx t0 = solve_t0({0.1, 0.0}, {1.0, 0.0});
    CHECK(t0.real() == doctest::Approx(-0.99020).epsilon(1e-4));
    CHECK(std::abs(1.0 - cplx{0.01, 0.0} * t0 * t0 + t0) < 1e-12);
    CHECK(std::abs(solve_t0({-0.1, 0.0}, {1.0, 0.0}) - t0) < 1e-13);  // even in z
    // complex pair
    cplx z{0.1, 0.05}, y{0.9, 0.3};
    cplx t = solve_t0(z, y);
    CHECK(std::abs(1.0 - z * z * t * t + t * y) < 1e-12);
    CHECK(std::abs(z * t) < 1.0);
}

TEST_CASE("asymptotic branches") {
    UnitaryCharacter chi(real_field(), 0, kTwoPi * 128.0);
    auto nv = AnalyticNewvector::make(chi, bump_r());
    auto th = whittaker_thresholds(nv.h, nv.b);
    CHECK(th.Y1 == doctest::Approx((1.0 - 0.0625) / 1.5));
    CHECK(th.Y2 == doctest::Approx(1.0625 * 1.5));

    // z = 0 in the bulk: exactly h(y) (phase is 1, t0 = -1/y, h(1/y) = h(y))
    for (double y : {0.8, 1.0, -1.2}) {
        auto w = whittaker_asymptotic(nv, {0.0, 0.0}, {y, 0.0});
        CHECK(std::abs(w.value - cplx{nv.h.radial(std::abs(y)), 0.0}) < 1e-13);
    }
    CHECK(std::abs(whittaker_asymptotic(nv, {0.0, 0.0}, {2.0 * th.Y2, 0.0}).value) == 0.0);
    CHECK(std::abs(whittaker_asymptotic(nv, {0.1, 0.0}, {0.5 * th.Y1, 0.0}).value) == 0.0);
}

TEST_CASE("Whittaker quadrature approximates h at z = 0 (R)") {
    for (double T : {64.0, 256.0}) {
        UnitaryCharacter chi(real_field(), 0, kTwoPi * T);
        auto nv = AnalyticNewvector::make(chi, bump_r());
        QuadOptions opt;
        opt.tol = 1e-9;
        auto w = whittaker_quadrature(nv, {0.0, 0.0}, {1.0, 0.0}, opt);
        double err = std::abs(w.value - cplx{nv.h.radial(1.0), 0.0});
        CHECK(err < 10.0 / conductor(chi));
    }
}

TEST_CASE("Whittaker quadrature approximates h at z = 0 (C)") {
    UnitaryCharacter chi(complex_field(), 0, kTwoPi * 7.0);  // C = 64
    auto nv = AnalyticNewvector::make(chi, bump_c());
    QuadOptions opt;
    opt.tol = 1e-7;
    opt.max_evals = 60'000'000;
    auto w = whittaker_quadrature(nv, {0.0, 0.0}, {1.0, 0.0}, opt);
    double err = std::abs(w.value - cplx{nv.h.radial(1.0), 0.0});
    CHECK(err < 10.0 / std::sqrt(conductor(chi)));
}

TEST_CASE("rapid decay beyond Y2") {
    UnitaryCharacter chi(real_field(), 0, kTwoPi * 128.0);
    auto nv = AnalyticNewvector::make(chi, bump_r());
    auto th = whittaker_thresholds(nv.h, nv.b);
    QuadOptions opt;
    opt.tol = 1e-10;
    auto w = whittaker_quadrature(nv, {0.0, 0.0}, {2.0 * th.Y2, 0.0}, opt);
    CHECK(std::abs(w.value) < 1e-5);
}

TEST_CASE("explicit formula error shrinks with the conductor (R)") {
    auto th = whittaker_thresholds(bump_r(), 0.2);
    double ylo = th.Y1 * 1.08, yhi = th.Y2 * 0.92;
    auto max_err = [&](double T) {
        UnitaryCharacter chi(real_field(), 0, kTwoPi * T);
        auto nv = AnalyticNewvector::make(chi, bump_r());
        QuadOptions opt;
        opt.tol = 1e-10;
        double worst = 0.0;
        for (int i = 0; i < 5; ++i) {
            double y = ylo + (yhi - ylo) * i / 4.0;
            cplx z{nv.b / 2.0, 0.0};
            auto q = whittaker_quadrature(nv, z, {y, 0.0}, opt);
            auto a = whittaker_asymptotic(nv, z, {y, 0.0});
            worst = std::max(worst, std::abs(q.value - a.value));
        }
        return worst;
    };
    double e128 = max_err(128.0), e512 = max_err(512.0);
    CHECK(e512 < 0.6 * e128);  // target rate C^{-1}
}

TEST_CASE("unit twist invariance") {
    {  // R: the only nontrivial unit is -1
        UnitaryCharacter chi(real_field(), 1, kTwoPi * 48.0);
        auto nv = AnalyticNewvector::make(chi, bump_r());
        QuadOptions opt;
        opt.tol = 1e-9;
        auto lhs = whittaker_quadrature(nv, {-0.1, 0.0}, {1.05, 0.0}, opt);
        auto rhs = whittaker_quadrature(nv, {0.1, 0.0}, {-1.05, 0.0}, opt);
        CHECK(std::abs(lhs.value - rhs.value) < 1e-6);
    }
    {  // C
        UnitaryCharacter chi(complex_field(), 2, kTwoPi * 5.0);
        auto nv = AnalyticNewvector::make(chi, bump_c());
        QuadOptions opt;
        opt.tol = 1e-7;
        opt.max_evals = 60'000'000;
        cplx u = std::polar(1.0, 0.77), z{0.08, 0.05}, y{1.02, 0.0};
        auto lhs = whittaker_quadrature(nv, z * u, y, opt);
        auto rhs = whittaker_quadrature(nv, z, y / u, opt);
        CHECK(std::abs(lhs.value - rhs.value) < 1e-5);
    }
}

TEST_CASE("Jacquet intertwiner is an isometry: compact branch") {
    UnitaryCharacter chi(real_field(), 0, kTwoPi * 64.0);
    auto nv = AnalyticNewvector::make(chi, bump_r());
    auto th = whittaker_thresholds(nv.h, nv.b);
    QuadOptions opt;
    opt.tol = 1e-9;
    double mass = 0.0;
    // dyadic shells; W decays superpolynomially outside [Y1, Y2]
    for (double lo = th.Y1 / 16.0; lo < 4.0 * th.Y2; lo *= 2.0) {
        auto r = integrate_mult_shell(
            [&](cplx y) {
                auto w = whittaker_quadrature(nv, {0.0, 0.0}, y, opt);
                return cplx{std::norm(w.value), 0.0};
            },
            real_field(), lo, 2.0 * lo, QuadOptions{1e-7});
        mass += r.value.real();
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(5e-2));
    CHECK(std::abs(mass - 1.0) < 1e-2);
}

TEST_CASE("extended branch: isometry persists at z = 0.5 and z = 1 (R)") {
    UnitaryCharacter chi(real_field(), 0, kTwoPi * 64.0);
    auto nv = AnalyticNewvector::make(chi, bump_r());
    auto th = whittaker_thresholds(nv.h, nv.b);
    QuadOptions opt;
    opt.tol = 1e-8;
    for (double zv : {0.5, 1.0}) {
        double mass = 0.0;
        for (double lo = th.Y1 / 1024.0; lo < 8.0 * th.Y2; lo *= 2.0) {
            auto r = integrate_mult_shell(
                [&](cplx y) {
                    auto w = whittaker_extended(nv, {zv, 0.0}, y, opt);
                    return cplx{std::norm(w.value), 0.0};
                },
                real_field(), lo, 2.0 * lo, QuadOptions{1e-6});
            mass += r.value.real();
        }
        INFO("z = ", zv, " mass = ", mass);
        CHECK(std::abs(mass - 1.0) < 5e-2);
    }
}

TEST_CASE("extended branch: symmetric relation at z = 1 (R)") {
    UnitaryCharacter chi(real_field(), 0, kTwoPi * 64.0);
    auto nv = AnalyticNewvector::make(chi, bump_r());
    QuadOptions opt;
    opt.tol = 1e-9;
    double y = 0.9;
    auto lhs = whittaker_extended(nv, {1.0, 0.0}, {y, 0.0}, opt);
    auto rhs = whittaker_extended(nv, {-1.0, 0.0}, {y, 0.0}, opt);
    cplx factor = chi.eval({-1.0, 0.0}) * real_field().psi({y * nv.T.real(), 0.0});
    double tol = 10.0 * (lhs.abs_error_estimate + rhs.abs_error_estimate) + 1e-7;
    CHECK(std::abs(lhs.value - factor * rhs.value) < tol);
}

TEST_CASE("extended branch: L2 mass beyond 2 Y2 is negligible") {
    UnitaryCharacter chi(real_field(), 0, kTwoPi * 32.0);
    auto nv = AnalyticNewvector::make(chi, bump_r());
    auto th = whittaker_thresholds(nv.h, nv.b);
    QuadOptions opt;
    opt.tol = 1e-9;
    double tail = 0.0;
    for (double lo = 2.0 * th.Y2; lo < 32.0 * th.Y2; lo *= 2.0) {
        auto r = integrate_mult_shell(
            [&](cplx y) {
                auto w = whittaker_extended(nv, {0.9, 0.0}, y, opt);
                return cplx{std::norm(w.value), 0.0};
            },
            real_field(), lo, 2.0 * lo, QuadOptions{1e-8});
        tail += r.value.real();
    }
    CHECK(tail < 1e-6);
}

TEST_CASE("whittaker_value dispatch and contracts") {
    UnitaryCharacter chi(real_field(), 0, kTwoPi * 32.0);
    auto nv = AnalyticNewvector::make(chi, bump_r());
    CHECK_THROWS_AS(whittaker_quadrature(nv, {0.5, 0.0}, {1.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(whittaker_extended(nv, {0.05, 0.0}, {1.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(whittaker_value(nv, {1.5, 0.0}, {1.0, 0.0}), std::invalid_argument);
    auto a = whittaker_value(nv, {0.1, 0.0}, {1.0, 0.0});
    CHECK(a.method == WhittakerMethod::Quadrature);
}
