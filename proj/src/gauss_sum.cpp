#include "newphase/gauss_sum.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace newphase {

WindowV WindowV::plateau(double a0, double b0) {
    if (!(0.0 < a0 && a0 < b0))
        throw std::invalid_argument("WindowV::plateau: need 0 < A0 < B0");
    WindowV v;
    v.A0 = a0;
    v.B0 = b0;
    double la = std::log(a0), lb = std::log(b0);
    v.radial = [la, lb](double r) {
        if (!(r > 0.0)) return 0.0;
        double u = (2.0 * std::log(r) - (la + lb)) / (lb - la);  // [-1, 1] across supp
        return smooth_plateau(u);
    };
    return v;
}

WindowV WindowV::weighted(LocalField F, double exponent) const {
    WindowV w = *this;
    auto base = radial;
    int deg = F.degree();
    w.radial = [base, exponent, deg](double r) {
        double v = base(r);
        if (v == 0.0) return 0.0;
        return v * std::pow(r, exponent * deg);  // |y|_F = r^deg
    };
    return w;
}

cplx phase_constant(const UnitaryCharacter& chi) {
    cplx T = spectral_parameter(chi);
    if (std::abs(T) == 0.0)
        throw std::domain_error("phase_constant: T(chi) = 0");
    double arg = -kPi / 4.0 * (2 - chi.field.degree());
    return cplx{std::cos(arg), std::sin(arg)} * chi.eval(T) * chi.field.psi(-T);
}

namespace {

// int_0^{2pi} e^{i (m th - x cos th)} dth by trapezoid; N chosen ~2.5x Nyquist.
// cos tables cached per quantized N.
const std::vector<double>& cos_table(int n) {
    static thread_local std::map<int, std::vector<double>> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<double> tab(n);
    for (int j = 0; j < n; ++j) tab[j] = std::cos(kTwoPi * j / n);
    return cache.emplace(n, std::move(tab)).first->second;
}

int angular_nodes(int m, double x) {
    int need = 8 * (std::abs(m) + static_cast<int>(std::ceil(std::abs(x) / kPi)) + 8);
    return ((need + 63) / 64) * 64;
}

cplx angular_integral(int m, double x, long long& evals) {
    int n = angular_nodes(m, x);
    const auto& ct = cos_table(n);
    double re = 0.0, im = 0.0;
    for (int j = 0; j < n; ++j) {
        double th = kTwoPi * j / n;
        double phase = m * th - x * ct[j];
        re += std::cos(phase);
        im += std::sin(phase);
    }
    evals += n;
    return cplx{re, im} * (kTwoPi / n);
}

}  // namespace

QuadResult gauss_sum_oracle(const UnitaryCharacter& chi, cplx t, const WindowV& v,
                            const QuadOptions& opt) {
    if (std::abs(t) == 0.0) throw std::domain_error("gauss_sum_oracle: t = 0");
    const LocalField F = chi.field;
    const double at = std::abs(t);
    const double u0 = std::log(v.A0 * at), u1 = std::log(v.B0 * at);
    const double lambda = chi.lambda;

    if (F.is_real()) {
        double tr = t.real();
        QuadOptions o = opt;
        o.freq_hint = [lambda, u1](double, double b) {
            return std::abs(lambda) + kTwoPi * std::exp(std::min(b, u1));
        };
        // u = log|y|, both signs: d^x y -> du
        return integrate_1d(
            [&](double u) {
                double r = std::exp(u);
                cplx s{0.0, 0.0};
                for (double sign : {1.0, -1.0}) {
                    double y = sign * r;
                    double win = v.at_radius(std::abs(y / tr));
                    if (win == 0.0) continue;
                    s += win * chi.eval({y, 0.0}) * F.psi({-y, 0.0});
                }
                return s;
            },
            u0, u1, o);
    }

    // C: log-polar; angular trapezoid, radial adaptive
    long long theta_evals = 0;
    QuadOptions o = opt;
    o.freq_hint = [lambda, u1](double, double b) {
        return 2.0 * std::abs(lambda) + 2.0 * kTwoPi * std::exp(std::min(b, u1));
    };
    int m = chi.m;
    QuadResult r = integrate_1d(
        [&](double u) {
            double rr = std::exp(u);
            double win = v.at_radius(rr / at);
            if (win == 0.0) return cplx{0.0, 0.0};
            cplx rad = cplx{std::cos(2.0 * lambda * u), std::sin(2.0 * lambda * u)};
            return win * rad * angular_integral(m, 2.0 * kTwoPi * rr, theta_evals);
        },
        u0, u1, o);
    r.value *= 2.0;  // d^x = 2 du dtheta
    r.abs_error_estimate *= 2.0;
    r.evaluations += theta_evals;
    return r;
}

cplx gauss_sum_asymptotic(const UnitaryCharacter& chi, cplx t, const WindowV& v) {
    if (std::abs(t) == 0.0) throw std::domain_error("gauss_sum_asymptotic: t = 0");
    cplx T = spectral_parameter(chi);
    double win = v.at_radius(std::abs(T / t));
    if (win == 0.0) return {0.0, 0.0};
    return phase_constant(chi) / std::sqrt(conductor(chi)) * win;
}

GaussRegime classify_regime(const UnitaryCharacter& chi, cplx t, const GaussThresholds& th) {
    if (std::abs(t) == 0.0) throw std::domain_error("classify_regime: t = 0");
    double ratio = std::abs(spectral_parameter(chi) / t);
    return (ratio >= th.A1 && ratio <= th.B1) ? GaussRegime::Bulk : GaussRegime::RapidDecay;
}

}  // namespace newphase
