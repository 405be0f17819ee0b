#include "newphase/stat_phase.hpp"

#include <cmath>
#include <stdexcept>

namespace newphase {

double nonstationary_bound(const LedgerParams& p) {
    if (!(p.X > 0 && p.U > 0 && p.Y > 0 && p.Q > 0 && p.R > 0 && p.area_S > 0) || p.m < 0)
        throw std::invalid_argument("nonstationary_bound: ledger fields must be positive");
    double m = p.m;
    double ur = std::pow(p.U * p.R, -m);
    double qr = std::pow(p.Q * p.R, -m);
    return p.area_S * p.X * std::pow(p.Y, -m) * (ur + qr + qr * qr);
}

double noncompact_bound_rapid(double x_l1, double y, int m) {
    if (!(x_l1 > 0 && y > 0) || m < 0)
        throw std::invalid_argument("noncompact_bound_rapid: positive inputs required");
    return x_l1 / std::pow(y, m);
}

double noncompact_bound_stationary(double x_sup_near_t0, double x_l1,
                                   double y_over_t0_module, int m) {
    if (!(x_sup_near_t0 > 0 && x_l1 > 0 && y_over_t0_module >= 0) || m < 0)
        throw std::invalid_argument("noncompact_bound_stationary: positive inputs required");
    double base = 1.0 + y_over_t0_module;
    return x_sup_near_t0 / std::sqrt(base) + x_l1 / std::pow(base, m);
}

std::vector<double> symmetric_eigenvalues(std::vector<double> a, int n) {
    if (static_cast<int>(a.size()) != n * n)
        throw std::invalid_argument("symmetric_eigenvalues: size mismatch");
    auto at = [&](int i, int j) -> double& { return a[i * n + j]; };
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
        if (off < 1e-30) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double apq = at(p, q);
                if (std::abs(apq) < 1e-300) continue;
                double theta = 0.5 * (at(q, q) - at(p, p)) / apq;
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (int k = 0; k < n; ++k) {
                    double akp = at(k, p), akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = at(p, k), aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (int i = 0; i < n; ++i) ev[i] = at(i, i);
    return ev;
}

cplx hessian_factor(const std::vector<double>& h, int n) {
    auto ev = symmetric_eigenvalues(h, n);
    double det = 1.0;
    int sgn = 0;
    for (double e : ev) {
        det *= e;
        sgn += (e > 0) - (e < 0);
    }
    if (std::abs(det) < 1e-12)
        throw std::domain_error("hessian_factor: degenerate Hessian");
    double mag = std::pow(std::abs(det) / std::pow(kTwoPi, n), -0.5);
    double arg = kPi * sgn / 4.0;
    return mag * cplx{std::cos(arg), std::sin(arg)};
}

StationaryPointData make_stationary_point(std::vector<double> t0, double phi_at_t0,
                                          const std::vector<double>& hessian_rowmajor,
                                          cplx w_at_t0) {
    StationaryPointData sp;
    int n = static_cast<int>(t0.size());
    sp.t0 = std::move(t0);
    sp.phase_at_t0 = {std::cos(phi_at_t0), std::sin(phi_at_t0)};
    sp.hessian_factor = hessian_factor(hessian_rowmajor, n);
    sp.amplitude_at_t0 = w_at_t0;
    return sp;
}

cplx leading_term(const StationaryPointData& sp) {
    return sp.phase_at_t0 * sp.hessian_factor * sp.amplitude_at_t0;
}

cplx leading_term_complex(cplx d2phi_at_t0, double phi_at_t0, cplx w_at_t0) {
    double mag = std::abs(d2phi_at_t0) / kTwoPi;
    if (mag < 1e-12)
        throw std::domain_error("leading_term_complex: vanishing second derivative");
    return cplx{std::cos(phi_at_t0), std::sin(phi_at_t0)} * w_at_t0 / mag;
}

std::vector<std::pair<int, int>> expansion_index_set(int l) {
    std::vector<std::pair<int, int>> out;
    for (int k = 0; 2 * (l + k) >= 3 * k; ++k) out.push_back({l + k, k});
    return out;
}

namespace {
// truncated power-series product, coefficients indexed by power
std::vector<cplx> series_mul(const std::vector<cplx>& a, const std::vector<cplx>& b,
                             int nmax) {
    std::vector<cplx> c(nmax + 1, cplx{0.0, 0.0});
    for (int i = 0; i <= nmax && i < static_cast<int>(a.size()); ++i) {
        if (a[i] == cplx{0.0, 0.0}) continue;
        for (int j = 0; i + j <= nmax && j < static_cast<int>(b.size()); ++j)
            c[i + j] += a[i] * b[j];
    }
    return c;
}
}  // namespace

std::vector<cplx> expansion_terms_1d(const std::vector<cplx>& w_derivs,
                                     const std::vector<double>& phi_derivs, int m) {
    if (m < 0) throw std::invalid_argument("expansion_terms_1d: m >= 0");
    if (static_cast<int>(w_derivs.size()) < 2 * m + 1)
        throw std::invalid_argument("expansion_terms_1d: need w derivatives to order 2m");
    if (m > 0 && static_cast<int>(phi_derivs.size()) < 2 * m + 4)
        throw std::invalid_argument("expansion_terms_1d: need Phi derivatives to order 2m+3");
    if (static_cast<int>(phi_derivs.size()) < 3)
        throw std::invalid_argument("expansion_terms_1d: need Phi'' at t0");
    double phi2 = phi_derivs[2];
    if (std::abs(phi2) < 1e-12)
        throw std::domain_error("expansion_terms_1d: degenerate Phi''(t0)");

    const int nmax = 6 * m + 1;
    std::vector<cplx> wc(nmax + 1, cplx{0.0, 0.0});
    {
        double fact = 1.0;
        for (int r = 0; r <= nmax; ++r) {
            if (r > 0) fact *= r;
            if (r < static_cast<int>(w_derivs.size())) wc[r] = w_derivs[r] / fact;
        }
    }
    // i * g, g = Phi - Phi(t0) - Phi''(t0)(t-t0)^2/2: cubic order onwards
    std::vector<cplx> igc(nmax + 1, cplx{0.0, 0.0});
    {
        double fact = 6.0;
        for (int r = 3; r <= nmax; ++r) {
            if (r > 3) fact *= r;
            if (r < static_cast<int>(phi_derivs.size()))
                igc[r] = cplx{0.0, 1.0} * (phi_derivs[r] / fact);
        }
    }

    std::vector<std::vector<cplx>> prod(2 * m + 1);
    prod[0] = wc;
    for (int k = 1; k <= 2 * m; ++k) prod[k] = series_mul(prod[k - 1], igc, nmax);

    const cplx dfac = cplx{0.0, 1.0} / (2.0 * phi2);  // D = dfac * d^2/dt^2
    std::vector<cplx> p(m + 1, cplx{0.0, 0.0});
    for (int l = 0; l <= m; ++l) {
        cplx acc{0.0, 0.0};
        for (auto [j, k] : expansion_index_set(l)) {
            int order = 2 * j;
            if (order > nmax) continue;
            double fact2j = 1.0, factj = 1.0, factk = 1.0;
            for (int r = 2; r <= order; ++r) fact2j *= r;
            for (int r = 2; r <= j; ++r) factj *= r;
            for (int r = 2; r <= k; ++r) factk *= r;
            // (2j)! * coeff_{2j} = (w (i g)^k)^{(2j)}(t0)
            acc += std::pow(dfac, j) * (fact2j * prod[k][order]) / (factj * factk);
        }
        p[l] = acc;
    }
    return p;
}

// ---- self-checks ----

double check_gradient(const PhaseSpec& spec, const std::vector<std::vector<double>>& points) {
    double worst = 0.0;
    for (const auto& t : points) {
        auto g = spec.gradient(t);
        for (int i = 0; i < spec.dimension; ++i) {
            double h = 1e-6 * (1.0 + std::abs(t[i]));
            auto tp = t, tm = t;
            tp[i] += h;
            tm[i] -= h;
            double fd = (spec.value(tp) - spec.value(tm)) / (2.0 * h);
            double scale = std::abs(g[i]) + std::abs(fd) + 1e-12;
            worst = std::max(worst, std::abs(g[i] - fd) / scale);
        }
    }
    return worst;
}

double check_harmonic(const PhaseSpecC& spec, const std::vector<cplx>& points) {
    double worst = 0.0;
    for (cplx z : points) {
        double h = 1e-5 * (1.0 + std::abs(z));
        auto v = [&](double dx, double dy) { return spec.value(z + cplx{dx, dy}); };
        double fx = (v(h, 0) - v(-h, 0)) / (2 * h);
        double fy = (v(0, h) - v(0, -h)) / (2 * h);
        double fxx = (v(h, 0) - 2 * v(0, 0) + v(-h, 0)) / (h * h);
        double fyy = (v(0, h) - 2 * v(0, 0) + v(0, -h)) / (h * h);
        double fxy = (v(h, h) - v(h, -h) - v(-h, h) + v(-h, -h)) / (4 * h * h);

        double grad = std::hypot(fx, fy);
        double rhs1 = 2.0 * std::abs(spec.dz(z));
        worst = std::max(worst, std::abs(grad - rhs1) / (grad + rhs1 + 1e-12));

        double det = fxx * fyy - fxy * fxy;
        double rhs2 = -4.0 * std::norm(spec.dzz(z));
        worst = std::max(worst,
                         std::abs(det - rhs2) / (std::abs(det) + std::abs(rhs2) + 1e-9));
    }
    return worst;
}

}  // namespace newphase
