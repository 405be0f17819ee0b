#pragma once

// Local-field arithmetic for the two archimedean fields: R and C.
// Holds the additive character psi_F, the module |.|_F, unitary characters
// chi = chi_m |.|^{i lambda} with their spectral parameters and analytic
// conductors, and the magnitudes of GL(1) L- and gamma-factors.

#include <complex>
#include <stdexcept>
#include <string>

namespace newphase {

using cplx = std::complex<double>;

inline constexpr double kPi    = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

struct PoleError : std::domain_error {
    using std::domain_error::domain_error;
};

enum class FieldKind { Real, Complex };

struct LocalField {
    FieldKind kind = FieldKind::Real;

    constexpr int degree() const { return kind == FieldKind::Real ? 1 : 2; }
    constexpr bool is_real() const { return kind == FieldKind::Real; }

    // |x|_F: usual absolute value on R, x*conj(x) on C.
    double module(cplx x) const {
        double r = std::abs(x);
        return kind == FieldKind::Real ? r : r * r;
    }
    // |x|_F^s for real s (x != 0).
    double module_pow(cplx x, double s) const {
        return std::pow(module(x), s);
    }

    // Additive character: psi_R(x) = e^{2 pi i x}, psi_C(z) = e^{2 pi i (z + conj z)}.
    cplx psi(cplx x) const {
        double arg = kind == FieldKind::Real ? kTwoPi * x.real()
                                             : 2.0 * kTwoPi * x.real();
        return {std::cos(arg), std::sin(arg)};
    }

    std::string name() const { return kind == FieldKind::Real ? "R" : "C"; }
};

inline LocalField real_field() { return {FieldKind::Real}; }
inline LocalField complex_field() { return {FieldKind::Complex}; }

// Whether the conductor/L-factor over C uses the paper's literal m/2 or the
// conventional |m|/2. For the conductor the two coincide (m enters |i*lambda + m/2|
// through its square); the L-factor pole structure does depend on it.
enum class AbsMVariant { Literal, AbsoluteValue };

// chi = chi_m |.|_F^{i lambda}, chi_m(z) = (z/|z|)^m.
// m is 0 or 1 over R, any integer over C.
struct UnitaryCharacter {
    LocalField field;
    int m = 0;
    double lambda = 0.0;

    UnitaryCharacter() = default;
    UnitaryCharacter(LocalField f, int m_, double lambda_)
        : field(f), m(f.is_real() ? ((m_ % 2) + 2) % 2 : m_), lambda(lambda_) {}

    bool trivial() const { return m == 0 && lambda == 0.0; }

    // chi(z); no logarithm branch is ever taken: the unit part is computed by
    // binary powering of z/|z| and the |.|^{i lambda} part from the real log.
    cplx eval(cplx z) const;

    UnitaryCharacter inverse() const {
        return UnitaryCharacter(field, field.is_real() ? m : -m, -lambda);
    }
    UnitaryCharacter times(const UnitaryCharacter& other) const {
        return UnitaryCharacter(field, m + other.m, lambda + other.lambda);
    }
};

// T(chi): lambda/(2 pi) over R, (lambda + m/(2i))/(2 pi) over C.
cplx spectral_parameter(const UnitaryCharacter& chi);

// C(chi): 1 + |i lambda + m|/(2 pi) over R, (1 + |i lambda + m/2|/(2 pi))^2 over C.
double conductor(const UnitaryCharacter& chi, AbsMVariant variant = AbsMVariant::Literal);

// Re log Gamma(z) for complex z, poles -> PoleError.
double log_abs_gamma(cplx z);

// |Gamma_R(s)| = |pi^{-s/2} Gamma(s/2)|, |Gamma_C(s)| = |2 (2 pi)^{-s} Gamma(s)|.
double gamma_r_magnitude(cplx s);
double gamma_c_magnitude(cplx s);

// |L(chi, s)| with L = Gamma_R(s + i lambda + m) over R, Gamma_C(s + i lambda + m/2) over C.
double l_factor_magnitude(const UnitaryCharacter& chi, cplx s,
                          AbsMVariant variant = AbsMVariant::Literal);

// |gamma(chi, s)| = |L(1-s, chi^{-1})| / |L(s, chi)| (the epsilon-factor is unimodular).
double gamma_factor_magnitude(const UnitaryCharacter& chi, cplx s,
                              AbsMVariant variant = AbsMVariant::Literal);

std::string to_json_string(const UnitaryCharacter& chi);
UnitaryCharacter character_from_json_string(const std::string& text);

}  // namespace newphase
