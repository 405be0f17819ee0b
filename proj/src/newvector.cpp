#include "newphase/newvector.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace newphase {

// ---------------------------------------------------------------------------
// bump profile
// ---------------------------------------------------------------------------

double BumpProfile::radial(double r) const {
    if (!(r > 0.0)) return 0.0;
    double u = std::log(r) / std::log(1.0 + a);
    return norm_constant * smooth_bump(u);
}

BumpProfile BumpProfile::standard(LocalField F, double a) {
    if (!(a > 0.0)) throw std::invalid_argument("BumpProfile: a > 0 required");
    BumpProfile h;
    h.field = F;
    h.a = a;
    h.norm_constant = 1.0;
    // int h^2 d^x = D log(1+a) int_{-1}^{1} g(u)^2 du, D = 2 (R) or 4 pi (C)
    QuadOptions opt;
    opt.tol = 1e-13;
    auto i2 = integrate_1d(
        [](double u) {
            double g = smooth_bump(u);
            return cplx{g * g, 0.0};
        },
        -1.0, 1.0, opt);
    double d = F.is_real() ? 2.0 : 2.0 * kTwoPi;
    h.norm_constant = 1.0 / std::sqrt(d * std::log(1.0 + a) * i2.value.real());
    return h;
}

// ---------------------------------------------------------------------------
// the vector f_chi
// ---------------------------------------------------------------------------

AnalyticNewvector AnalyticNewvector::make(const UnitaryCharacter& chi, const BumpProfile& h,
                                          double b) {
    AnalyticNewvector nv;
    nv.chi = chi;
    nv.h = h;
    nv.b = b > 0.0 ? b : h.a / (1.0 + h.a);
    if (!(nv.b < 1.0 / (1.0 + h.a)))
        throw std::invalid_argument("AnalyticNewvector: need b < 1/(1+a)");
    nv.T = spectral_parameter(chi);
    if (std::abs(nv.T) == 0.0)
        throw std::invalid_argument("AnalyticNewvector: T(chi) = 0");
    cplx chi_m1 = chi.eval({-1.0, 0.0});
    cplx psi_mT = chi.field.psi(-nv.T);
    nv.C_const = chi.field.is_real() ? chi_m1 * std::polar(1.0, -kPi / 4.0) * psi_mT
                                     : chi_m1 * psi_mT;
    return nv;
}

cplx f_on_big_cell(const AnalyticNewvector& nv, cplx t) {
    if (std::abs(t) == 0.0) return {0.0, 0.0};
    cplx s = t / nv.T;
    double hv = nv.h(s);
    if (hv == 0.0) return {0.0, 0.0};
    return nv.C_const * hv * nv.chi.inverse().eval(s) * nv.chi.field.module_pow(t, -0.5);
}

cplx f_on_lower_unipotent(const AnalyticNewvector& nv, cplx x) {
    if (std::abs(x) == 0.0) throw std::domain_error("f_on_lower_unipotent: x = 0");
    cplx s = nv.T * x;
    double hv = nv.h(s);
    if (hv == 0.0) return {0.0, 0.0};
    return nv.chi.eval(-nv.T * nv.T) * nv.C_const * hv * nv.chi.inverse().eval(s) *
           nv.chi.field.module_pow(x, -0.5);
}

cplx f_general(const AnalyticNewvector& nv, const Mat2& g) {
    if (std::abs(g.c) == 0.0)
        throw std::domain_error("f_general: lower-left entry vanishes (not in big cell)");
    cplx det = g.a * g.d - g.b * g.c;
    cplx ratio = det / (g.c * g.c);  // Bruhat: g = a(det/c^2) n(.) w n(d/c)
    cplx rest = f_on_big_cell(nv, g.d / g.c);
    if (rest == cplx{0.0, 0.0}) return rest;
    return nv.chi.eval(ratio) * nv.chi.field.module_pow(ratio, 0.5) * rest;
}

double check_atkin_lehner(const AnalyticNewvector& nv, const std::vector<cplx>& grid) {
    cplx chi_m1 = nv.chi.eval({-1.0, 0.0});
    cplx T2 = nv.T * nv.T;
    double worst = 0.0;
    for (cplx t : grid) {
        // w n(t) w_T = (1/T^2, 0; -t/T^2, 1)
        Mat2 g{1.0 / T2, {0.0, 0.0}, -t / T2, {1.0, 0.0}};
        cplx lhs = f_general(nv, g);
        cplx rhs = chi_m1 * f_on_big_cell(nv, t);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// translated Whittaker functions
// ---------------------------------------------------------------------------

cplx solve_t0(cplx z, cplx y) {
    if (std::abs(y) == 0.0) throw std::domain_error("solve_t0: y = 0");
    if (std::abs(z) < 1e-150) return -1.0 / y;
    // z^2 t^2 - y t - 1 = 0; the product of the roots is -1/z^2, so away from
    // the boundary exactly one root has |z t| < 1
    cplx sq = std::sqrt(y * y + 4.0 * z * z);
    cplx big = (std::abs(y + sq) >= std::abs(y - sq)) ? (y + sq) : (y - sq);
    cplx r1 = big / (2.0 * z * z);
    cplx r2 = -1.0 / (z * z * r1);
    cplx t0 = (std::abs(z * r1) < std::abs(z * r2)) ? r1 : r2;
    if (!(std::abs(z * t0) < 1.0 - 1e-12))
        throw std::domain_error("solve_t0: no root with |z t| < 1");
    return t0;
}

WhittakerThresholds whittaker_thresholds(const BumpProfile& h, double b) {
    double ap = 2.0 * h.a;
    double q = b * b * (1.0 + h.a) * (1.0 + h.a);
    return {(1.0 - q) / (1.0 + ap), (1.0 + q) * (1.0 + ap)};
}

namespace {

// Jacquet integrand in the t'-variable:
//   chi((1-zt)^2/t) psi(-T t y/(1-zt)) h(t) |t|_F^{-1/2} / |1-zt|_F
struct JacquetIntegrand {
    const AnalyticNewvector& nv;
    cplx z, y;

    cplx operator()(cplx t) const {
        double hv = nv.h(t);
        if (hv == 0.0) return {0.0, 0.0};
        cplx om = 1.0 - z * t;
        const LocalField& F = nv.chi.field;
        return nv.chi.eval(om * om / t) * F.psi(-nv.T * t * y / om) * hv *
               F.module_pow(t, -0.5) / F.module(om);
    }

    // total phase derivative over R: Phi'(t) = -2 pi T (1 - z^2 t^2 + t y)/(t (1-zt)^2)
    double dphi_r(double t) const {
        double zr = z.real(), yr = y.real(), Tr = nv.T.real();
        double om = 1.0 - zr * t;
        return -kTwoPi * Tr * (1.0 - zr * zr * t * t + t * yr) / (t * om * om);
    }
    // gradient magnitude over C
    double grad_c(cplx t) const {
        cplx om = 1.0 - z * t;
        return 2.0 * kTwoPi * std::abs(nv.T * (1.0 - z * z * t * t + t * y) / (t * om * om));
    }
};

cplx whittaker_prefactor(const AnalyticNewvector& nv, cplx y) {
    return nv.C_const * nv.chi.inverse().eval(y) * nv.chi.field.module_pow(nv.T * y, 0.5);
}

double sample_hint_r(const JacquetIntegrand& f, double a, double b) {
    double m = 0.0;
    for (double s : {0.0, 0.25, 0.5, 0.75, 1.0})
        m = std::max(m, std::abs(f.dphi_r(a + s * (b - a))));
    return 1.3 * m;
}

// absolutely convergent branch; valid whenever 1 - z t' stays away from 0 on
// supp h (in particular for all |z| <= b)
WhittakerValue compact_impl(const AnalyticNewvector& nv, cplx z, cplx y,
                            const QuadOptions& opt) {
    const LocalField F = nv.chi.field;
    JacquetIntegrand f{nv, z, y};
    const double lo = nv.h.support_lo(), hi = nv.h.support_hi();

    WhittakerValue out;
    out.y = y;
    out.z = z;
    out.method = WhittakerMethod::Quadrature;

    cplx pref = whittaker_prefactor(nv, y);
    cplx j{0.0, 0.0};
    double err = 0.0;
    long long evals = 0;

    if (F.is_real()) {
        for (auto [a, b] : {std::pair<double, double>{-hi, -lo}, {lo, hi}}) {
            QuadOptions o = opt;
            o.tol = opt.tol / 2.0;
            o.freq_hint = [&f](double x0, double x1) { return sample_hint_r(f, x0, x1); };
            auto r = integrate_1d([&f](double t) { return f(cplx{t, 0.0}); }, a, b, o);
            j += r.value;
            err += r.abs_error_estimate;
            evals += r.evaluations;
        }
    } else {
        double sup = 0.0;
        for (double rr : {lo, 1.0, hi})
            for (int k = 0; k < 8; ++k) {
                double th = kTwoPi * k / 8.0 + 0.13;
                sup = std::max(sup, f.grad_c(std::polar(rr, th)));
            }
        QuadOptions o = opt;
        o.freq_hint = [sup](double, double) { return 1.3 * sup; };
        auto r = integrate_c([&f](cplx t) { return f(t); }, DomainC{{0.0, 0.0}, hi, hi}, o);
        j = r.value;
        err = r.abs_error_estimate;
        evals = r.evaluations;
    }
    out.value = pref * j;
    out.abs_error_estimate = std::abs(pref) * err;
    out.evaluations = evals;
    return out;
}

// ---- the singular window over R: v = 1/(t' - 1/z) ----

struct WindowSideR {
    const JacquetIntegrand& f;
    double ts;    // 1/z
    double side;  // +1 or -1

    double tprime(double v) const { return ts + side / v; }
    cplx ghat(double v) const { return f(cplx{tprime(v), 0.0}) / (v * v); }
    // smooth nonnegative envelope of ghat
    double rho(double v) const {
        double t = tprime(v);
        double hv = f.nv.h(cplx{t, 0.0});
        if (hv == 0.0) return 0.0;
        double om = std::abs(1.0 - f.z.real() * t);
        return hv / (std::sqrt(std::abs(t)) * om * v * v);
    }
    double phip(double v) const { return f.dphi_r(tprime(v)) * (-side / (v * v)); }
};

double deriv5(const std::function<double(double)>& g, double x, double h) {
    return (-g(x + 2 * h) + 8 * g(x + h) - 8 * g(x - h) + g(x - 2 * h)) / (12.0 * h);
}

// one window side: GK over [1/delta, V] plus 3-term integration-by-parts tail
void window_side_r(const WindowSideR& w, double v0, double tol, cplx& acc, double& err,
                   long long& evals) {
    double vstat = 0.0;
    {
        double zr = w.f.z.real(), yr = w.f.y.real();
        cplx zc{zr, 0.0}, yc{yr, 0.0};
        cplx sq = std::sqrt(yc * yc + 4.0 * zc * zc);
        for (cplx root : {(yc + sq) / (2.0 * zc * zc), (yc - sq) / (2.0 * zc * zc)}) {
            double v = w.side / (root.real() - w.ts);
            if (v > v0) vstat = std::max(vstat, v);
        }
    }
    double alpha_far = std::abs(w.phip(1e9));
    double v1 = std::max({4.0 * v0, 4.0 * vstat,
                          alpha_far > 0 ? 60.0 / alpha_far : 4.0 * v0});
    v1 = std::min(v1, 1e9);

    QuadOptions o;
    o.tol = tol;
    o.max_evals = 4000000;
    o.freq_hint = [&w](double a, double b) {
        double m = 0.0;
        for (double s : {0.0, 0.5, 1.0})
            m = std::max(m, std::abs(w.phip(a + s * (b - a))));
        return 1.3 * m;
    };
    auto gk = integrate_1d([&w](double v) { return w.ghat(v); }, v0, v1, o);
    acc += gk.value;
    err += gk.abs_error_estimate;
    evals += gk.evaluations;

    double V = v1;
    double rhoV = w.rho(V);
    if (rhoV < 1e-280 || std::abs(w.phip(V)) < 1e-300) return;
    cplx U = w.ghat(V) / rhoV;  // e^{i phi(V)}

    auto iphip = [&w](double v) { return cplx{0.0, 1.0} * w.phip(v); };
    double hV = 1e-3 * V;
    auto q0 = [&](double v) { return cplx{w.rho(v), 0.0} / iphip(v); };
    auto a1 = [&](double v) {
        auto re = [&](double x) { return q0(x).real(); };
        auto im = [&](double x) { return q0(x).imag(); };
        return cplx{deriv5(re, v, hV), deriv5(im, v, hV)};
    };
    auto q1 = [&](double v) { return a1(v) / iphip(v); };
    auto a2 = [&](double v) {
        auto re = [&](double x) { return q1(x).real(); };
        auto im = [&](double x) { return q1(x).imag(); };
        return cplx{deriv5(re, v, 2.0 * hV), deriv5(im, v, 2.0 * hV)};
    };

    cplx b0 = q0(V) * U;
    cplx b1 = a1(V) / iphip(V) * U;
    cplx b2 = a2(V) / iphip(V) * U;
    acc += -b0 + b1 - b2;
    err += 2.0 * std::abs(b2);
    evals += 64;
}

WhittakerValue extended_r(const AnalyticNewvector& nv, cplx z, cplx y,
                          const QuadOptions& opt) {
    const double lo = nv.h.support_lo(), hi = nv.h.support_hi();
    const double delta = 0.08;
    JacquetIntegrand f{nv, z, y};
    double ts = 1.0 / z.real();

    cplx j{0.0, 0.0};
    double err = 0.0;
    long long evals = 0;

    for (auto [a, b] : {std::pair<double, double>{-hi, -lo}, {lo, hi}}) {
        std::vector<std::pair<double, double>> pieces;
        double wl = ts - delta, wr = ts + delta;
        if (wr <= a || wl >= b) {
            pieces.push_back({a, b});
        } else {
            if (wl > a) pieces.push_back({a, wl});
            if (wr < b) pieces.push_back({wr, b});
        }
        for (auto [pa, pb] : pieces) {
            QuadOptions o = opt;
            o.tol = opt.tol / 4.0;
            o.freq_hint = [&f](double x0, double x1) { return sample_hint_r(f, x0, x1); };
            auto r = integrate_1d([&f](double t) { return f(cplx{t, 0.0}); }, pa, pb, o);
            j += r.value;
            err += r.abs_error_estimate;
            evals += r.evaluations;
        }
    }

    for (double side : {1.0, -1.0}) {
        double near = ts, far = ts + side * delta;
        double wlo = std::min(near, far), whi = std::max(near, far);
        if (whi < -hi || wlo > hi) continue;
        if (whi < lo && wlo > -lo) continue;  // window inside the central gap
        WindowSideR w{f, ts, side};
        window_side_r(w, 1.0 / delta, opt.tol / 4.0, j, err, evals);
    }

    cplx pref = whittaker_prefactor(nv, y);
    WhittakerValue out;
    out.y = y;
    out.z = z;
    out.method = WhittakerMethod::Quadrature;
    out.value = pref * j;
    out.abs_error_estimate = std::abs(pref) * err;
    out.evaluations = evals;
    return out;
}

// ---- the singular window over C: truncated log-polar shells ----

const std::vector<double>& angle_table(int n) {
    static thread_local std::map<int, std::vector<double>> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<double> t(n);
    for (int j = 0; j < n; ++j) t[j] = kTwoPi * j / n;
    return cache.emplace(n, std::move(t)).first->second;
}

WhittakerValue extended_c(const AnalyticNewvector& nv, cplx z, cplx y,
                          const QuadOptions& opt) {
    const double hi = nv.h.support_hi();
    const double delta = 0.08;
    JacquetIntegrand f{nv, z, y};
    cplx ts = 1.0 / z;

    auto mask_in = [delta, ts](cplx t) {
        double rho = std::abs(t - ts);
        return smooth_step(2.0 * (1.0 - rho / delta));
    };

    cplx j{0.0, 0.0};
    double err = 0.0;
    long long evals = 0;

    {  // regular part with the window smoothly removed
        double sup = 0.0;
        for (double rr : {nv.h.support_lo(), 1.0, hi})
            for (int k = 0; k < 16; ++k) {
                cplx t = std::polar(rr, kTwoPi * k / 16.0 + 0.07);
                if (std::abs(t - ts) > delta / 2.0) sup = std::max(sup, f.grad_c(t));
            }
        QuadOptions o = opt;
        o.tol = opt.tol / 2.0;
        o.freq_hint = [sup](double, double) { return 1.3 * sup; };
        auto r = integrate_c([&](cplx t) { return f(t) * (1.0 - mask_in(t)); },
                             DomainC{{0.0, 0.0}, hi, hi}, o);
        j = r.value;
        err = r.abs_error_estimate;
        evals = r.evaluations;
    }

    // window: v = 1/(t - ts); d_C t = d_C v / |v|^4 and in log-polar the measure
    // is 2 e^{-2w} dw dtheta. The oscillation x(R) ~ 4 pi |T y/z^2| R forces a
    // node cap; the unresolved inner tail goes into the error estimate.
    {
        double gamma = 4.0 * kPi * std::abs(nv.T * y / (z * z));
        double w0 = std::log(1.0 / delta);
        double shell = std::log(2.0);
        double last = 0.0, prev = 0.0;
        bool capped = false;
        int quiet = 0;
        for (int k = 0; k < 30; ++k) {
            double wa = w0 + k * shell, wb = wa + shell;
            double xosc = gamma * std::exp(wb);
            int n = 8 * (2 * std::abs(nv.chi.m) + static_cast<int>(std::ceil(xosc / kPi)) + 8);
            n = ((n + 63) / 64) * 64;
            if (n > 16384) {
                capped = true;
                break;
            }
            const auto& th = angle_table(n);
            long long local = 0;
            QuadOptions o;
            o.tol = opt.tol / 8.0;
            o.max_evals = 2000000;
            o.freq_hint = [gamma, &nv](double, double b) {
                return gamma * std::exp(b) + 4.0 * std::abs(nv.chi.lambda);
            };
            auto r = integrate_1d(
                [&](double w) {
                    double rv = std::exp(w);
                    cplx s{0.0, 0.0};
                    for (int q = 0; q < n; ++q) {
                        cplx v = std::polar(rv, th[q]);
                        cplx t = ts + 1.0 / v;
                        s += f(t) * mask_in(t);
                    }
                    local += n;
                    return s * (kTwoPi / n) * 2.0 * std::exp(-2.0 * w);
                },
                wa, wb, o);
            j += r.value;
            err += r.abs_error_estimate;
            evals += r.evaluations + local;
            prev = last;
            last = std::abs(r.value);
            if (last < opt.tol / 4.0)
                ++quiet;
            else
                quiet = 0;
            if (quiet >= 2) break;
        }
        if (capped) err += 3.0 * (last + prev);
    }

    cplx pref = whittaker_prefactor(nv, y);
    WhittakerValue out;
    out.y = y;
    out.z = z;
    out.method = WhittakerMethod::Quadrature;
    out.value = pref * j;
    out.abs_error_estimate = std::abs(pref) * err;
    out.evaluations = evals;
    return out;
}

}  // namespace

WhittakerValue whittaker_quadrature(const AnalyticNewvector& nv, cplx z, cplx y,
                                    const QuadOptions& opt) {
    if (std::abs(y) == 0.0) throw std::domain_error("whittaker_quadrature: y = 0");
    if (std::abs(z) > nv.b * (1.0 + 1e-12))
        throw std::invalid_argument("whittaker_quadrature: |z| > b; use whittaker_extended");
    return compact_impl(nv, z, y, opt);
}

WhittakerValue whittaker_asymptotic(const AnalyticNewvector& nv, cplx z, cplx y) {
    if (std::abs(y) == 0.0) throw std::domain_error("whittaker_asymptotic: y = 0");
    auto th = whittaker_thresholds(nv.h, nv.b);
    WhittakerValue out;
    out.y = y;
    out.z = z;
    out.method = WhittakerMethod::Asymptotic;
    out.abs_error_estimate = std::pow(conductor(nv.chi), -1.0 / nv.chi.field.degree());
    double ay = std::abs(y);
    if (ay > th.Y2 || ay < th.Y1) return out;  // decay branches: main term 0

    cplx t0 = solve_t0(z, y);
    cplx zt0 = z * t0;
    cplx phase = nv.chi.field.psi(nv.T * zt0) * nv.chi.eval((1.0 - zt0) / (1.0 + zt0));
    double amp =
        nv.h(t0) * nv.chi.field.module_pow((1.0 - zt0 * zt0) / (1.0 + zt0 * zt0), 0.5);
    out.value = phase * amp;
    return out;
}

WhittakerValue whittaker_extended(const AnalyticNewvector& nv, cplx z, cplx y,
                                  const QuadOptions& opt) {
    if (std::abs(y) == 0.0) throw std::domain_error("whittaker_extended: y = 0");
    double az = std::abs(z);
    if (az < nv.b * (1.0 - 1e-12) || az > 1.0 + 1e-12)
        throw std::invalid_argument("whittaker_extended: need b <= |z| <= 1");
    if (az * nv.h.support_hi() < 0.9) return compact_impl(nv, z, y, opt);
    return nv.chi.field.is_real() ? extended_r(nv, z, y, opt) : extended_c(nv, z, y, opt);
}

WhittakerValue whittaker_value(const AnalyticNewvector& nv, cplx z, cplx y,
                               const QuadOptions& opt) {
    double az = std::abs(z);
    if (az <= nv.b) return whittaker_quadrature(nv, z, y, opt);
    if (az <= 1.0 + 1e-12) return whittaker_extended(nv, z, y, opt);
    throw std::invalid_argument("whittaker_value: |z| > 1 not supported directly");
}

}  // namespace newphase
