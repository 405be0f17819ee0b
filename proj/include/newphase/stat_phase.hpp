#pragma once

// Stationary-phase engine: leading terms and expansion corrections for
// oscillatory integrals int w(t) e^{i Phi(t)} dt, the non-stationary upper
// bounds from the (X, U, Y, Q, R, Area) parameter ledger, and the adapted
// main term for C with harmonic phases. Implicit constants are never asserted
// here; scaling tests fit them.

#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include "newphase/field.hpp"

namespace newphase {

// derivative ledger of Thm (no stationary point):
//   sup |D^a w| <= X U^{-|a|},  sup |D^b Phi| <= Y Q^{-|b|},  ||grad Phi|| >> Y R
struct LedgerParams {
    double X = 1.0, U = 1.0, Y = 1.0, Q = 1.0, R = 1.0;
    double area_S = 1.0;
    int m = 0;
};

// Area(S) * X * Y^{-m} * (U^{-m} R^{-m} + Q^{-m} R^{-m} + Q^{-2m} R^{-2m})
double nonstationary_bound(const LedgerParams& p);

// ||X||_{L^1(F^x)} / Y^m
double noncompact_bound_rapid(double x_l1, double y, int m);

// sup X / (1 + |Y/t0|_F)^{1/2} + ||X||_{L^1} / (1 + |Y/t0|_F)^m
double noncompact_bound_stationary(double x_sup_near_t0, double x_l1,
                                   double y_over_t0_module, int m);

// eigenvalues of a small symmetric matrix (cyclic Jacobi), row-major
std::vector<double> symmetric_eigenvalues(std::vector<double> a, int n);

// det(H/2pi i)^{-1/2} = |det(H/2pi)|^{-1/2} e^{i pi sgn(H)/4};
// throws on |det H| < 1e-12 (degenerate Hessian)
cplx hessian_factor(const std::vector<double>& hessian_rowmajor, int n);

struct StationaryPointData {
    std::vector<double> t0;
    cplx phase_at_t0;      // e^{i Phi(t0)}, unit modulus
    cplx hessian_factor;   // det(H/2pi i)^{-1/2}
    cplx amplitude_at_t0;  // w(t0)
};

StationaryPointData make_stationary_point(std::vector<double> t0, double phi_at_t0,
                                          const std::vector<double>& hessian_rowmajor,
                                          cplx w_at_t0);

// e^{i Phi(t0)} det(H/2pi i)^{-1/2} w(t0)
cplx leading_term(const StationaryPointData& sp);

// C-adapted main term: e^{i Phi(t0)} w(t0) / |d2Phi(t0)/2pi|
// (the d_C = 2 Lebesgue convention is absorbed in the |.| here)
cplx leading_term_complex(cplx d2phi_at_t0, double phi_at_t0, cplx w_at_t0);

// (j,k) with j - k = l and 2j >= 3k (so k <= 2l)
std::vector<std::pair<int, int>> expansion_index_set(int l);

// P_l, l = 0..m, for n = 1:
//   P_l(t0) = sum_{j-k=l, 2j>=3k} (i/(2 Phi''(t0)))^j (w (i g)^k)^{(2j)}(t0) / (j! k!)
// with g = Phi - Phi(t0) - Phi''(t0)(t-t0)^2/2.
// w_derivs[r] = w^{(r)}(t0) for r = 0..(at least 2m);
// phi_derivs[r] = Phi^{(r)}(t0) for r = 0..(at least 2m+3).
std::vector<cplx> expansion_terms_1d(const std::vector<cplx>& w_derivs,
                                     const std::vector<double>& phi_derivs, int m);

// ---- phase specs with self-checks (test support) ----
struct PhaseSpec {
    int dimension = 1;
    std::function<double(const std::vector<double>&)> value;
    std::function<std::vector<double>(const std::vector<double>&)> gradient;
    std::function<std::vector<double>(const std::vector<double>&)> hessian;  // row-major
};

struct PhaseSpecC {  // real-valued harmonic phase on a region of C
    std::function<double(cplx)> value;
    std::function<cplx(cplx)> dz;
    std::function<cplx(cplx)> dzz;
};

// max relative deviation of the supplied gradient from central differences
double check_gradient(const PhaseSpec& spec, const std::vector<std::vector<double>>& points);
// max relative deviation of the harmonic identities ||grad|| = 2|dz|,
// det H = -4 |dzz|^2, both sides from finite differences of value
double check_harmonic(const PhaseSpecC& spec, const std::vector<cplx>& points);

}  // namespace newphase
