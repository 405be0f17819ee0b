#pragma once

// Analytic newvectors for tempered principal series of PGL2(R) and PGL2(C):
// the fixed bump profile h, the vector f_chi on the big Bruhat cell, translated
// Whittaker functions W^{(z)} via the Jacquet integral, the explicit asymptotic
// main term, and the symmetry identities.

#include <vector>

#include "newphase/field.hpp"
#include "newphase/quadrature.hpp"

namespace newphase {

// h(t) = n_c * exp(-1/(1-u^2)), u = log|t| / log(1+a); radial, h(t) = h(1/t),
// supported on 1/(1+a) <= |t| <= 1+a, normalized to int h^2 d^x = 1.
struct BumpProfile {
    LocalField field;
    double a = 0.25;
    double norm_constant = 1.0;

    double radial(double r) const;
    double operator()(cplx t) const { return radial(std::abs(t)); }
    double support_lo() const { return 1.0 / (1.0 + a); }
    double support_hi() const { return 1.0 + a; }

    static BumpProfile standard(LocalField F, double a = 0.25);
};

struct AnalyticNewvector {
    UnitaryCharacter chi;
    BumpProfile h;
    double b = 0.2;   // 0 < b < 1/(1+a); default b(1+a) = a
    cplx T;           // spectral parameter, cached
    cplx C_const;     // C_{F,chi}: chi(-1) e^{-i pi/4} psi(-T) over R, chi(-1) psi(-T) over C

    static AnalyticNewvector make(const UnitaryCharacter& chi, const BumpProfile& h,
                                  double b = -1.0);
};

// f(w n(t)) = C_{F,chi} h(t/T) chi^{-1}(t/T) |t|_F^{-1/2}
cplx f_on_big_cell(const AnalyticNewvector& nv, cplx t);

// f(n'(x)) = chi(-T^2) C_{F,chi} h(Tx) chi^{-1}(Tx) |x|_F^{-1/2}
cplx f_on_lower_unipotent(const AnalyticNewvector& nv, cplx x);

struct Mat2 {
    cplx a{1.0, 0.0}, b{0.0, 0.0}, c{0.0, 0.0}, d{1.0, 0.0};
    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
};

// f at any g in the big cell (lower-left entry nonzero), by Bruhat factorization
cplx f_general(const AnalyticNewvector& nv, const Mat2& g);

// max over the grid of |pi(w_T) f - chi(-1) f| evaluated at w n(t)
double check_atkin_lehner(const AnalyticNewvector& nv, const std::vector<cplx>& grid);

// ---- translated Whittaker functions ----

enum class WhittakerMethod { Quadrature, Asymptotic };

struct WhittakerValue {
    cplx y, z;
    cplx value{0.0, 0.0};
    double abs_error_estimate = 0.0;
    WhittakerMethod method = WhittakerMethod::Quadrature;
    long long evaluations = 0;
};

// unique solution of 1 - z^2 t^2 + t y = 0 with |z t0| < 1
cplx solve_t0(cplx z, cplx y);

// Y1 = (1 - b^2 (1+a)^2)/(1+a'), Y2 = (1 + b^2 (1+a)^2)(1+a'), a' = 2a
struct WhittakerThresholds {
    double Y1, Y2;
};
WhittakerThresholds whittaker_thresholds(const BumpProfile& h, double b);

// Jacquet integral, absolutely convergent branch (needs |z| < 1/(1+a);
// the theorem range |z| <= b is strictly inside)
WhittakerValue whittaker_quadrature(const AnalyticNewvector& nv, cplx z, cplx y,
                                    const QuadOptions& opt = {});

// main term e^{i Phi} h(t0) |(1-z^2 t0^2)/(1+z^2 t0^2)|^{1/2}, zero branches
// outside [Y1, Y2]; error budget O(C^{-1/deg F}) recorded in the estimate
WhittakerValue whittaker_asymptotic(const AnalyticNewvector& nv, cplx z, cplx y);

// b <= |z| <= 1: the Jacquet integrand in the t'-variable has a stationary
// singularity at t' = 1/z once |z| >= 1/(1+a); handled by an inversion
// v = 1/(t' - 1/z) plus tail integration by parts (R) / truncated log-polar
// shells with reported tail error (C)
WhittakerValue whittaker_extended(const AnalyticNewvector& nv, cplx z, cplx y,
                                  const QuadOptions& opt = {});

// dispatch on |z|
WhittakerValue whittaker_value(const AnalyticNewvector& nv, cplx z, cplx y,
                               const QuadOptions& opt = {});

}  // namespace newphase
