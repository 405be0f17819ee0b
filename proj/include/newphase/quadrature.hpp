#pragma once

// The brute-force oracle: adaptive Gauss-Kronrod quadrature over intervals of
// R, rectangles of C ~= R^2 (measure d_C = twice Lebesgue), and F^x against
// d^x by smooth dyadic shells. Deliberately naive; every asymptotic claim in
// the repo is checked against this module.

#include <atomic>
#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "newphase/field.hpp"

namespace newphase {

struct QuadResult {
    cplx value{0.0, 0.0};
    double abs_error_estimate = 0.0;
    long long evaluations = 0;
    std::optional<double> truncation_radius;
};

struct BudgetError : std::runtime_error {
    QuadResult partial;
    explicit BudgetError(QuadResult p)
        : std::runtime_error("quadrature: evaluation budget exhausted"), partial(p) {}
};

struct DivergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Process-wide evaluation tally, capped externally by NEWPHASE_BUDGET.
std::atomic<long long>& global_eval_count();

struct QuadOptions {
    double tol = 1e-9;              // absolute
    long long max_evals = 40'000'000;
    double max_radius = 1e6;        // truncation cap for infinite domains
    int max_panels = 4'000'000;
    // Oscillation hint: sup of the local frequency |phase'| over [x1,x2]
    // (for shell/mult integrals the coordinate is u = log |t|). Initial panels
    // are pre-split to at most ~2 wavelengths.
    std::function<double(double, double)> freq_hint;
};

using Integrand1D = std::function<cplx(double)>;
using Integrand2D = std::function<cplx(double, double)>;
using IntegrandF  = std::function<cplx(cplx)>;

// ---- intervals of R ----
QuadResult integrate_1d(const Integrand1D& f, double lo, double hi,
                        const QuadOptions& opt = {});
// whole line / half line with automatic radius doubling
QuadResult integrate_line(const Integrand1D& f, const QuadOptions& opt = {});
QuadResult integrate_halfline(const Integrand1D& f, double lo, const QuadOptions& opt = {});

// Variant carrying a per-point error channel (for nested quadratures whose
// integrand values are themselves approximate): the second component of the
// integrand is a nonnegative pointwise error; it is accumulated with |weights|
// and added to the returned error estimate.
using Integrand1DErr = std::function<std::pair<cplx, double>(double)>;
QuadResult integrate_1d_werr(const Integrand1DErr& f, double lo, double hi,
                             const QuadOptions& opt = {});

// ---- rectangles of C ----
struct DomainC {
    cplx center{0.0, 0.0};
    double half_width_re = 1.0;
    double half_height_im = 1.0;
};
// plain 2-D Lebesgue integral over a box
QuadResult integrate_box(const Integrand2D& f, double x0, double x1, double y0,
                         double y1, const QuadOptions& opt = {});
// against d_C = 2 dx dy
QuadResult integrate_c(const IntegrandF& f, const DomainC& dom, const QuadOptions& opt = {});

// ---- F^x against d^x ----
// compact radial shell r_lo <= |t| <= r_hi (Euclidean radius); both signs over R
QuadResult integrate_mult_shell(const IntegrandF& f, LocalField F, double r_lo,
                                double r_hi, const QuadOptions& opt = {});
// all of F^x, summing dyadic shells of base Z until they stop contributing
QuadResult integrate_mult(const IntegrandF& f, LocalField F, const QuadOptions& opt = {},
                          double shell_base = 2.0);

// ---- smooth C^inf glue (exp(-1/x) based) ----
double smooth_step(double x);             // 0 for x<=0, 1 for x>=1
double smooth_bump(double u);             // exp(-1/(1-u^2)) on |u|<1, else 0
double smooth_bump_deriv(double u, int k);  // k-th derivative, k <= 4
double smooth_plateau(double x);          // 1 on |x|<=1/2, supported |x|<1

// ---- smooth dyadic partition of unity ----
// rho supported on [1/Z, Z] with sum_k rho(t / Z^k) = 1 on F^x.
struct DyadicPartition {
    double Z = 2.0;

    explicit DyadicPartition(double base = 2.0) : Z(base) {
        if (!(base > 1.0)) throw std::invalid_argument("DyadicPartition: Z must be > 1");
    }
    double rho(cplx t) const;
    // the finitely many (k, rho(t/Z^k)) with nonzero weight; weights sum to 1
    std::vector<std::pair<int, double>> weights(cplx t) const;
};

}  // namespace newphase
