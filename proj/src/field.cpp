#include "newphase/field.hpp"

#include <cmath>

#include "json.hpp"

namespace newphase {

namespace {

// (z/|z|)^m by binary powering; |result| renormalized to kill drift.
cplx unit_power(cplx z, int m) {
    if (m == 0) return {1.0, 0.0};
    cplx u = z / std::abs(z);
    if (m < 0) {
        u = std::conj(u);
        m = -m;
    }
    cplx acc{1.0, 0.0};
    while (m > 0) {
        if (m & 1) acc *= u;
        u *= u;
        m >>= 1;
    }
    return acc / std::abs(acc);
}

}  // namespace

cplx UnitaryCharacter::eval(cplx z) const {
    if (z == cplx{0.0, 0.0})
        throw std::domain_error("UnitaryCharacter::eval: zero argument");
    // Complex arguments are allowed even over R (phase constants evaluate chi
    // at T); the two-factor formula extends verbatim.
    cplx unit = unit_power(z, m);
    double arg = lambda * std::log(field.module(z));
    return unit * cplx{std::cos(arg), std::sin(arg)};
}

cplx spectral_parameter(const UnitaryCharacter& chi) {
    if (chi.field.is_real()) return {chi.lambda / kTwoPi, 0.0};
    // m/(2i) = -i m/2
    return cplx{chi.lambda, -0.5 * chi.m} / kTwoPi;
}

double conductor(const UnitaryCharacter& chi, AbsMVariant variant) {
    if (chi.field.is_real()) {
        double m = (variant == AbsMVariant::AbsoluteValue) ? std::abs(chi.m) : chi.m;
        return 1.0 + std::hypot(chi.lambda, m) / kTwoPi;
    }
    double mh = 0.5 * ((variant == AbsMVariant::AbsoluteValue) ? std::abs(chi.m) : chi.m);
    double base = 1.0 + std::hypot(chi.lambda, mh) / kTwoPi;
    return base * base;
}

// Lanczos approximation, g = 7, n = 9; relative error ~1e-13 in the half-plane
// Re z > 1/2, reflected otherwise.
double log_abs_gamma(cplx z) {
    static const double coef[9] = {
        0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
        771.32342877765313,      -176.61502916214059,   12.507343278686905,
        -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

    // poles of Gamma at z = 0, -1, -2, ...
    if (z.imag() == 0.0 && z.real() <= 0.0 &&
        std::abs(z.real() - std::round(z.real())) < 1e-14)
        throw PoleError("log_abs_gamma: pole at nonpositive integer");

    if (z.real() < 0.5) {
        // |Gamma(z)| = pi / (|sin(pi z)| |Gamma(1-z)|)
        cplx s = std::sin(kPi * z);
        if (std::abs(s) == 0.0) throw PoleError("log_abs_gamma: pole (reflection)");
        return std::log(kPi) - std::log(std::abs(s)) - log_abs_gamma(cplx{1.0, 0.0} - z);
    }
    cplx zz = z - 1.0;
    cplx x = coef[0];
    for (int i = 1; i < 9; ++i) x += coef[i] / (zz + static_cast<double>(i));
    cplx t = zz + 7.5;
    cplx lg = 0.5 * std::log(kTwoPi) + (zz + 0.5) * std::log(t) - t + std::log(x);
    return lg.real();
}

double gamma_r_magnitude(cplx s) {
    return std::exp(-0.5 * s.real() * std::log(kPi) + log_abs_gamma(0.5 * s));
}

double gamma_c_magnitude(cplx s) {
    return 2.0 * std::exp(-s.real() * std::log(kTwoPi) + log_abs_gamma(s));
}

double l_factor_magnitude(const UnitaryCharacter& chi, cplx s, AbsMVariant variant) {
    cplx ilam{0.0, chi.lambda};
    if (chi.field.is_real()) {
        double m = (variant == AbsMVariant::AbsoluteValue) ? std::abs(chi.m) : chi.m;
        return gamma_r_magnitude(s + ilam + m);
    }
    double mh = 0.5 * ((variant == AbsMVariant::AbsoluteValue) ? std::abs(chi.m) : chi.m);
    return gamma_c_magnitude(s + ilam + mh);
}

double gamma_factor_magnitude(const UnitaryCharacter& chi, cplx s, AbsMVariant variant) {
    return l_factor_magnitude(chi.inverse(), cplx{1.0, 0.0} - s, variant) /
           l_factor_magnitude(chi, s, variant);
}

std::string to_json_string(const UnitaryCharacter& chi) {
    nlohmann::json j;
    j["field"] = chi.field.name();
    j["m"] = chi.m;
    j["lambda"] = chi.lambda;
    return j.dump();
}

UnitaryCharacter character_from_json_string(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    std::string f = j.at("field").get<std::string>();
    if (f != "R" && f != "C")
        throw std::invalid_argument("character: field must be \"R\" or \"C\"");
    LocalField field = (f == "R") ? real_field() : complex_field();
    return UnitaryCharacter(field, j.at("m").get<int>(), j.at("lambda").get<double>());
}

}  // namespace newphase
