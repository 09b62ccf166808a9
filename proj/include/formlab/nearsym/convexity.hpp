#pragma once

#include "formlab/form.hpp"
#include "formlab/rng.hpp"

#include <array>
#include <string>
#include <vector>

namespace formlab::nearsym {

using ext::Form;
using ext::VectorField;

/// Outcome of the omega-convexity test for the sphere of a given radius:
/// L_V omega = omega decided exactly for polynomial data, outward
/// transversality of V at sphere samples, and the near-contact behaviour of
/// the induced 1-form iota_V omega restricted to the sphere.
struct ConvexityReport {
    bool liouville_exact = false;
    bool transverse = true;
    int sphere_samples = 0;

    Form induced_lambda;  // ambient iota_V omega; its restriction is checked below

    std::vector<std::array<double, 4>> zeros_on_sphere;
    double min_abs_f_off_zeros = 0;
    bool f_sign_consistent = true;
    int f_sign = 0;

    std::string failure;  // "NotLiouville" / "NotTransverse" when failing

    ConvexityReport() : induced_lambda(4, 1) {}
    bool pass() const { return liouville_exact && transverse && f_sign_consistent; }
};

ConvexityReport convexity_check(const Form& w, const VectorField& v, const Rational& sphere_radius,
                                int samples = 400, std::uint64_t seed = 2);

}  // namespace formlab::nearsym
