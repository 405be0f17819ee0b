#pragma once

// Generalized Gauss sums G(chi, t) = int V(y/t) chi(y) psi_F(-y) d^x y:
// brute-force evaluation, the asymptotic main term c_chi C(chi)^{-1/2} V(T/t),
// and the bulk / rapid-decay regime split.

#include <functional>

#include "newphase/field.hpp"
#include "newphase/quadrature.hpp"

namespace newphase {

// radial window on F^x, supported in A0 <= |y| <= B0 (Euclidean |.|)
struct WindowV {
    double A0 = 0.5, B0 = 2.0;
    std::function<double(double)> radial;  // value at r = |y|

    double operator()(cplx y) const { return radial(std::abs(y)); }
    double at_radius(double r) const { return radial(r); }

    // C^inf bump equal to 1 on the middle half of [A0, B0] (log scale)
    static WindowV plateau(double a0, double b0);
    // multiply by |y|_F^{exponent} (e.g. V_1 = V |y|^{1/2+sigma} for mellin)
    WindowV weighted(LocalField F, double exponent) const;
};

enum class GaussRegime { RapidDecay, Bulk };

struct GaussThresholds {
    double A1, B1;
    // the paper only asserts existence of A1 < A0 < B0 < B1; factors of 2 keep
    // the regimes well separated
    static GaussThresholds defaults(const WindowV& v) { return {v.A0 / 2.0, 2.0 * v.B0}; }
};

// c_chi = e^{-pi i (2 - deg F)/4} chi(T) psi_F(-T); requires T(chi) != 0
cplx phase_constant(const UnitaryCharacter& chi);

// quadrature value of the defining integral over the support shell
QuadResult gauss_sum_oracle(const UnitaryCharacter& chi, cplx t, const WindowV& v,
                            const QuadOptions& opt = {});

// c_chi C(chi)^{-1/2} V(T/t); evaluates V radially at |T/t|
cplx gauss_sum_asymptotic(const UnitaryCharacter& chi, cplx t, const WindowV& v);

// Bulk iff A1 <= |T/t| <= B1 (closed on the bulk side)
GaussRegime classify_regime(const UnitaryCharacter& chi, cplx t, const GaussThresholds& th);

}  // namespace newphase
