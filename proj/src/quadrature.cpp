#include "newphase/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>

namespace newphase {

std::atomic<long long>& global_eval_count() {
    static std::atomic<long long> counter{0};
    return counter;
}

namespace {

// 15-point Kronrod extension of 7-point Gauss (QUADPACK dqk15).
constexpr int kGK = 8;  // nonnegative abscissae
constexpr double kXgk[kGK] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[kGK] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Kahan {
    cplx sum{0.0, 0.0};
    cplx c{0.0, 0.0};
    void add(cplx x) {
        cplx y = x - c;
        cplx t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

struct KahanR {
    double sum = 0.0, c = 0.0;
    void add(double x) {
        double y = x - c;
        double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

struct PanelEval {
    cplx value;     // K15
    double err;     // |K15 - G7|
    double errch;   // accumulated pointwise error channel
};

// one Gauss-Kronrod pass over [a,b]; 15 evaluations
template <typename F>
PanelEval gk15(const F& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    cplx fk[15];
    double ek[15];
    for (int i = 0; i < kGK - 1; ++i) {
        auto [v1, e1] = f(c - h * kXgk[i]);
        auto [v2, e2] = f(c + h * kXgk[i]);
        fk[i] = v1;
        fk[14 - i] = v2;
        ek[i] = e1;
        ek[14 - i] = e2;
    }
    auto [vc, ec] = f(c);
    fk[7] = vc;
    ek[7] = ec;

    cplx kron{0.0, 0.0}, gauss{0.0, 0.0};
    double errch = 0.0;
    for (int i = 0; i < kGK; ++i) {
        cplx pair_sum = (i == 7) ? fk[7] : fk[i] + fk[14 - i];
        double epair = (i == 7) ? ek[7] : ek[i] + ek[14 - i];
        kron += kWgk[i] * pair_sum;
        errch += kWgk[i] * epair;
        if (i % 2 == 1) gauss += kWg[i / 2] * pair_sum;  // odd indices are Gauss nodes
    }
    kron *= h;
    gauss *= h;
    errch *= h;
    return {kron, std::abs(kron - gauss), errch};
}

struct Panel {
    double a, b;
    cplx value;
    double err;
    double errch;
    long long seq;
};

struct PanelWorse {
    bool operator()(const Panel& x, const Panel& y) const {
        if (x.err != y.err) return x.err < y.err;
        return x.seq > y.seq;  // deterministic tie-break
    }
};

template <typename F>
QuadResult adaptive_1d(const F& f, double lo, double hi, const QuadOptions& opt) {
    QuadResult res;
    if (!(hi > lo)) return res;

    // pre-split by oscillation hint: <= ~2 wavelengths per initial panel
    std::vector<std::pair<double, double>> seed;
    {
        std::vector<std::pair<double, double>> stack{{lo, hi}};
        while (!stack.empty()) {
            auto [a, b] = stack.back();
            stack.pop_back();
            double freq = opt.freq_hint ? opt.freq_hint(a, b) : 0.0;
            if ((b - a) * freq > 4.0 * kPi && (b - a) > 1e-300 &&
                static_cast<int>(seed.size() + stack.size()) < opt.max_panels) {
                double m = 0.5 * (a + b);
                stack.push_back({m, b});
                stack.push_back({a, m});
            } else {
                seed.push_back({a, b});
            }
        }
        std::sort(seed.begin(), seed.end());
    }

    long long evals = 0, seq = 0;
    bool exhausted = false;
    std::priority_queue<Panel, std::vector<Panel>, PanelWorse> heap;
    std::vector<Panel> done;  // panels considered converged
    double total_err = 0.0;

    auto push_panel = [&](double a, double b) {
        if (exhausted || evals + 15 > opt.max_evals) {
            exhausted = true;
            return;
        }
        PanelEval pe = gk15(f, a, b);
        evals += 15;
        heap.push(Panel{a, b, pe.value, pe.err, pe.errch, seq++});
        total_err += pe.err;
    };
    for (auto [a, b] : seed) push_panel(a, b);

    auto finalize = [&](bool exhausted) {
        std::vector<Panel> all = std::move(done);
        while (!heap.empty()) {
            all.push_back(heap.top());
            heap.pop();
        }
        std::sort(all.begin(), all.end(),
                  [](const Panel& x, const Panel& y) { return x.a < y.a; });
        Kahan sum;
        KahanR err, errch;
        for (const auto& p : all) {
            sum.add(p.value);
            err.add(p.err);
            errch.add(p.errch);
        }
        QuadResult r;
        r.value = sum.sum;
        r.abs_error_estimate = err.sum + errch.sum;
        r.evaluations = evals;
        global_eval_count() += evals;
        if (exhausted) throw BudgetError(r);
        return r;
    };

    if (exhausted) return finalize(true);

    while (total_err > opt.tol) {
        if (heap.empty()) break;
        if (exhausted || evals + 30 > opt.max_evals ||
            static_cast<long long>(done.size()) + static_cast<long long>(heap.size()) >
                opt.max_panels)
            return finalize(true);
        Panel worst = heap.top();
        heap.pop();
        double width = worst.b - worst.a;
        double mid = 0.5 * (worst.a + worst.b);
        // below resolvable width, or negligible: accept as-is
        if (width < 1e-15 * (std::abs(mid) + 1.0) || worst.err <= 0.0) {
            done.push_back(worst);  // unsplittable; accept as-is
            continue;
        }
        total_err -= worst.err;
        push_panel(worst.a, mid);
        push_panel(mid, worst.b);
    }
    return finalize(false);
}

Integrand1DErr wrap(const Integrand1D& f) {
    return [&f](double x) { return std::pair<cplx, double>(f(x), 0.0); };
}

}  // namespace

QuadResult integrate_1d(const Integrand1D& f, double lo, double hi, const QuadOptions& opt) {
    return adaptive_1d(wrap(f), lo, hi, opt);
}

QuadResult integrate_1d_werr(const Integrand1DErr& f, double lo, double hi,
                             const QuadOptions& opt) {
    return adaptive_1d(f, lo, hi, opt);
}

namespace {

// annulus doubling for infinite domains; `segments` yields pieces to integrate
QuadResult truncated(const Integrand1D& f, double R0, bool two_sided, double lo_fixed,
                     const QuadOptions& opt) {
    QuadOptions local = opt;
    Kahan sum;
    KahanR err;
    long long evals = 0;
    double R = R0;

    auto add = [&](double a, double b) {
        QuadResult r = integrate_1d(f, a, b, local);
        sum.add(r.value);
        err.add(r.abs_error_estimate);
        evals += r.evaluations;
        return std::abs(r.value);
    };

    if (two_sided)
        add(-R, R);
    else
        add(lo_fixed, lo_fixed + R);

    while (R < opt.max_radius) {
        double contrib = two_sided ? add(R, 2.0 * R) + add(-2.0 * R, -R)
                                   : add(lo_fixed + R, lo_fixed + 2.0 * R);
        R *= 2.0;
        if (contrib < opt.tol / 10.0) break;
    }
    QuadResult res;
    res.value = sum.sum;
    res.abs_error_estimate = err.sum;
    res.evaluations = evals;
    res.truncation_radius = R;
    return res;
}

}  // namespace

QuadResult integrate_line(const Integrand1D& f, const QuadOptions& opt) {
    return truncated(f, 1.0, true, 0.0, opt);
}

QuadResult integrate_halfline(const Integrand1D& f, double lo, const QuadOptions& opt) {
    return truncated(f, 1.0, false, lo, opt);
}

// ----------------------------------------------------------------------------
// 2-D adaptive tensor rule with quad-tree subdivision
// ----------------------------------------------------------------------------

namespace {

struct Panel2 {
    double x0, x1, y0, y1;
    cplx value;
    double err;
    long long seq;
};

struct Panel2Worse {
    bool operator()(const Panel2& a, const Panel2& b) const {
        if (a.err != b.err) return a.err < b.err;
        return a.seq > b.seq;
    }
};

struct Tensor {
    cplx value;
    double err;
};

Tensor gk15_tensor(const Integrand2D& f, double x0, double x1, double y0, double y1) {
    const double cx = 0.5 * (x0 + x1), hx = 0.5 * (x1 - x0);
    const double cy = 0.5 * (y0 + y1), hy = 0.5 * (y1 - y0);
    double nx[15], ny[15];
    for (int i = 0; i < kGK - 1; ++i) {
        nx[i] = cx - hx * kXgk[i];
        nx[14 - i] = cx + hx * kXgk[i];
        ny[i] = cy - hy * kXgk[i];
        ny[14 - i] = cy + hy * kXgk[i];
    }
    nx[7] = cx;
    ny[7] = cy;
    double wk[15], wgauss[15];
    for (int i = 0; i < 15; ++i) {
        int j = i < 8 ? i : 14 - i;
        wk[i] = kWgk[j];
        wgauss[i] = (j % 2 == 1) ? kWg[j / 2] : 0.0;
    }
    cplx kron{0.0, 0.0}, gauss{0.0, 0.0};
    for (int i = 0; i < 15; ++i) {
        cplx row_k{0.0, 0.0}, row_g{0.0, 0.0};
        for (int j = 0; j < 15; ++j) {
            cplx v = f(nx[j], ny[i]);
            row_k += wk[j] * v;
            row_g += wgauss[j] * v;
        }
        kron += wk[i] * row_k;
        gauss += wgauss[i] * row_g;
    }
    kron *= hx * hy;
    gauss *= hx * hy;
    return {kron, std::abs(kron - gauss)};
}

}  // namespace

QuadResult integrate_box(const Integrand2D& f, double x0, double x1, double y0, double y1,
                         const QuadOptions& opt) {
    QuadResult res;
    if (!(x1 > x0) || !(y1 > y0)) return res;

    // pre-split so each axis holds <= ~2 wavelengths of the hinted oscillation
    std::vector<Panel2> seedboxes;
    {
        std::vector<std::array<double, 4>> stack{{x0, x1, y0, y1}};
        std::vector<std::array<double, 4>> out;
        while (!stack.empty()) {
            auto bx = stack.back();
            stack.pop_back();
            double fx = opt.freq_hint ? opt.freq_hint(bx[0], bx[1]) : 0.0;
            double fy = opt.freq_hint ? opt.freq_hint(bx[2], bx[3]) : 0.0;
            double lenx = bx[1] - bx[0], leny = bx[3] - bx[2];
            bool splitx = lenx * fx > 4.0 * kPi;
            bool splity = leny * fy > 4.0 * kPi;
            if ((splitx || splity) &&
                static_cast<int>(out.size() + stack.size()) < opt.max_panels / 2) {
                if (splitx && (!splity || lenx * fx >= leny * fy)) {
                    double m = 0.5 * (bx[0] + bx[1]);
                    stack.push_back({bx[0], m, bx[2], bx[3]});
                    stack.push_back({m, bx[1], bx[2], bx[3]});
                } else {
                    double m = 0.5 * (bx[2] + bx[3]);
                    stack.push_back({bx[0], bx[1], bx[2], m});
                    stack.push_back({bx[0], bx[1], m, bx[3]});
                }
            } else {
                out.push_back(bx);
            }
        }
        std::sort(out.begin(), out.end());
        for (auto& b : out) seedboxes.push_back(Panel2{b[0], b[1], b[2], b[3], {}, 0.0, 0});
    }

    long long evals = 0, seq = 0;
    bool exhausted = false;
    std::priority_queue<Panel2, std::vector<Panel2>, Panel2Worse> heap;
    std::vector<Panel2> done;
    double total_err = 0.0;

    auto push_panel = [&](double a, double b, double c, double d) {
        if (exhausted || evals + 225 > opt.max_evals) {
            exhausted = true;
            return;
        }
        Tensor t = gk15_tensor(f, a, b, c, d);
        evals += 225;
        heap.push(Panel2{a, b, c, d, t.value, t.err, seq++});
        total_err += t.err;
    };
    for (auto& p : seedboxes) push_panel(p.x0, p.x1, p.y0, p.y1);

    auto finalize = [&](bool exhausted) {
        std::vector<Panel2> all = std::move(done);
        while (!heap.empty()) {
            all.push_back(heap.top());
            heap.pop();
        }
        std::sort(all.begin(), all.end(), [](const Panel2& a, const Panel2& b) {
            if (a.x0 != b.x0) return a.x0 < b.x0;
            return a.y0 < b.y0;
        });
        Kahan sum;
        KahanR err;
        for (const auto& p : all) {
            sum.add(p.value);
            err.add(p.err);
        }
        QuadResult r;
        r.value = sum.sum;
        r.abs_error_estimate = err.sum;
        r.evaluations = evals;
        global_eval_count() += evals;
        if (exhausted) throw BudgetError(r);
        return r;
    };

    if (exhausted) return finalize(true);

    while (total_err > opt.tol) {
        if (heap.empty()) break;
        if (exhausted || evals + 500 > opt.max_evals ||
            static_cast<long long>(done.size()) + static_cast<long long>(heap.size()) >
                opt.max_panels)
            return finalize(true);
        Panel2 worst = heap.top();
        heap.pop();
        double lx = worst.x1 - worst.x0, ly = worst.y1 - worst.y0;
        double scale = std::abs(worst.x0) + std::abs(worst.y0) + 1.0;
        if ((lx < 1e-14 * scale && ly < 1e-14 * scale) || worst.err <= 0.0) {
            done.push_back(worst);
            continue;
        }
        total_err -= worst.err;
        if (lx >= ly) {
            double m = 0.5 * (worst.x0 + worst.x1);
            push_panel(worst.x0, m, worst.y0, worst.y1);
            push_panel(m, worst.x1, worst.y0, worst.y1);
        } else {
            double m = 0.5 * (worst.y0 + worst.y1);
            push_panel(worst.x0, worst.x1, worst.y0, m);
            push_panel(worst.x0, worst.x1, m, worst.y1);
        }
    }
    return finalize(false);
}

QuadResult integrate_c(const IntegrandF& f, const DomainC& dom, const QuadOptions& opt) {
    QuadResult r = integrate_box(
        [&f](double x, double y) { return f(cplx{x, y}); },
        dom.center.real() - dom.half_width_re, dom.center.real() + dom.half_width_re,
        dom.center.imag() - dom.half_height_im, dom.center.imag() + dom.half_height_im,
        opt);
    r.value *= 2.0;  // d_C = twice Lebesgue
    r.abs_error_estimate *= 2.0;
    return r;
}

// ----------------------------------------------------------------------------
// multiplicative integrals
// ----------------------------------------------------------------------------

QuadResult integrate_mult_shell(const IntegrandF& f, LocalField F, double r_lo, double r_hi,
                                const QuadOptions& opt) {
    if (!(r_lo > 0.0) || !(r_hi > r_lo))
        throw std::invalid_argument("integrate_mult_shell: need 0 < r_lo < r_hi");
    const double u0 = std::log(r_lo), u1 = std::log(r_hi);
    if (F.is_real()) {
        // d^x t = dt/|t|; in u = log|t| both signs contribute f(e^u) + f(-e^u)
        return integrate_1d(
            [&f](double u) {
                double r = std::exp(u);
                return f(cplx{r, 0.0}) + f(cplx{-r, 0.0});
            },
            u0, u1, opt);
    }
    // d^x t = 2 du dtheta in t = e^{u + i theta}
    QuadResult r = integrate_box(
        [&f](double u, double th) {
            double rr = std::exp(u);
            return f(cplx{rr * std::cos(th), rr * std::sin(th)});
        },
        u0, u1, 0.0, kTwoPi, opt);
    r.value *= 2.0;
    r.abs_error_estimate *= 2.0;
    return r;
}

QuadResult integrate_mult(const IntegrandF& f, LocalField F, const QuadOptions& opt,
                          double shell_base) {
    if (!(shell_base > 1.0)) throw std::invalid_argument("integrate_mult: base must be > 1");
    Kahan sum;
    KahanR err;
    long long evals = 0;
    QuadOptions local = opt;
    local.tol = opt.tol / 10.0;

    const int max_shells = 600;
    const int quiet_needed = 3;
    double shell_tol = opt.tol / 10.0;

    auto shell = [&](int k) {
        double lo = std::pow(shell_base, static_cast<double>(k));
        double hi = lo * shell_base;
        QuadResult r = integrate_mult_shell(f, F, lo, hi, local);
        sum.add(r.value);
        err.add(r.abs_error_estimate);
        evals += r.evaluations;
        return std::abs(r.value);
    };

    double rmax = shell_base;
    for (int dir : {+1, -1}) {
        int quiet = 0;
        for (int j = 0; j < max_shells; ++j) {
            int k = dir > 0 ? j : -1 - j;
            double c = shell(k);
            if (dir > 0) rmax = std::pow(shell_base, static_cast<double>(k + 1));
            if (c < shell_tol)
                ++quiet;
            else
                quiet = 0;
            if (quiet >= quiet_needed) break;
            if (j == max_shells - 1)
                throw DivergenceError("integrate_mult: no decay detected over shell sweep");
        }
    }
    QuadResult res;
    res.value = sum.sum;
    res.abs_error_estimate = err.sum;
    res.evaluations = evals;
    res.truncation_radius = rmax;
    return res;
}

// ----------------------------------------------------------------------------
// smooth glue and the dyadic partition
// ----------------------------------------------------------------------------

namespace {
double qexp(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }
}  // namespace

double smooth_step(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double a = qexp(x), b = qexp(1.0 - x);
    return a / (a + b);
}

double smooth_bump(double u) {
    if (std::abs(u) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - u * u));
}

// derivatives of exp(-1/(1-u^2)) via the rational-prefactor recursion
double smooth_bump_deriv(double u, int k) {
    if (k == 0) return smooth_bump(u);
    if (std::abs(u) >= 1.0) return 0.0;
    // f' = f * w', w = -1/(1-u^2); chain through w-derivatives numerically is
    // fragile near the edges, so use central differences on the analytic f with
    // a safe interior step. Adequate for k <= 4 away from |u| = 1 - 1e-3.
    double h = 1e-3 * (1.0 - std::abs(u)) + 1e-6;
    switch (k) {
        case 1:
            return (smooth_bump(u + h) - smooth_bump(u - h)) / (2.0 * h);
        case 2:
            return (smooth_bump(u + h) - 2.0 * smooth_bump(u) + smooth_bump(u - h)) / (h * h);
        case 3:
            return (smooth_bump_deriv(u + h, 2) - smooth_bump_deriv(u - h, 2)) / (2.0 * h);
        case 4:
            return (smooth_bump_deriv(u + h, 2) - 2.0 * smooth_bump_deriv(u, 2) +
                    smooth_bump_deriv(u - h, 2)) /
                   (h * h);
        default:
            throw std::invalid_argument("smooth_bump_deriv: k <= 4");
    }
}

double smooth_plateau(double x) {
    return smooth_step(2.0 * (x + 1.0)) * smooth_step(2.0 * (1.0 - x));
}

namespace {
// sigma(u) = s(u+1) - s(u): supported on (-1,1), sum_k sigma(u - k) telescopes to 1
double sigma_profile(double u) { return smooth_step(u + 1.0) - smooth_step(u); }
}  // namespace

double DyadicPartition::rho(cplx t) const {
    double r = std::abs(t);
    if (!(r > 0.0)) throw std::domain_error("DyadicPartition::rho: t must be nonzero");
    return sigma_profile(std::log(r) / std::log(Z));
}

std::vector<std::pair<int, double>> DyadicPartition::weights(cplx t) const {
    double r = std::abs(t);
    if (!(r > 0.0)) throw std::domain_error("DyadicPartition::weights: t must be nonzero");
    double u = std::log(r) / std::log(Z);
    std::vector<std::pair<int, double>> out;
    int k0 = static_cast<int>(std::floor(u));
    for (int k = k0 - 1; k <= k0 + 1; ++k) {
        double w = sigma_profile(u - static_cast<double>(k));
        if (w != 0.0) out.push_back({k, w});
    }
    return out;
}

}  // namespace newphase
