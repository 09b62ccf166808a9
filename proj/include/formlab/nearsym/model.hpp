#pragma once

#include "formlab/form.hpp"

#include <array>
#include <optional>

namespace formlab::nearsym {

using ext::Form;
using ext::Poly;
using ext::VectorField;

/// The standard self-dual constant 2-forms on R^4:
///   omega1 = dx1^dx2 + dx3^dx4, omega2 = dx1^dx3 - dx2^dx4,
///   omega3 = dx1^dx4 + dx2^dx3.
Form sd_basis(int i);
/// Anti-self-dual partners (same formulas with the second term negated).
Form asd_basis(int i);

/// Quadratic coefficients of the model form:
///   f1 = 2 x1 x3 - 2 x2 x4 - x3 x4
///   f2 = -x1 (4 x2 + x3)
///   f3 = x2^2 + x3^2 - H(x1, x4),  H = 3 x1^2 - x1 x4 - x4^2
Poly model_f(int i);
Poly model_h();

/// The hyperbola slopes through the origin for the eps = 0 zero set:
/// x4 = t x1 with t^2 + t - 3 = 0, i.e. t = (-1 +- sqrt(13)) / 2.
std::array<double, 2> model_zero_line_slopes();

/// omega + eps * omega3 with omega = f1 w1 + f2 w2 + f3 w3. Rejects eps < 0.
Form build_model_form(const Rational& eps);

/// Decompose a 2-form on R^4 into components against the SD basis
/// (g1, g2, g3) and the ASD basis (h1, h2, h3).
struct SdDecomposition {
    std::array<Poly, 3> sd;
    std::array<Poly, 3> asd;
    bool is_self_dual() const { return asd[0].is_zero() && asd[1].is_zero() && asd[2].is_zero(); }
};
SdDecomposition sd_decompose(const Form& w);

/// Exact primitive via the Euler formula: for a closed k-form whose
/// coefficients split into homogeneous parts of degree d, the 1-form
/// sum_d iota_E(w_d) / (d + k) satisfies d(lambda) = w. Rejects non-closed
/// input (no exact Euler primitive exists then).
Form liouville_primitive(const Form& w);

/// Exact rational points on the eps = 1 model zero set
/// {x2 = x3 = 0, H(x1, x4) = 1}, from the secant parametrization of the
/// conic through its rational point (x1, x4) = (1, 1).
std::vector<RatVector> model_zero_points_eps1(int count);

/// If w equals f1 w1 + f2 w2 + (f3 + c) w3 for a constant c >= 0, return c.
std::optional<Rational> match_model_family(const Form& w);

}  // namespace formlab::nearsym
