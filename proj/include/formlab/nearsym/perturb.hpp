#pragma once

#include "formlab/nearsym/verify.hpp"
#include "formlab/rng.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace formlab::nearsym {

/// Radial cutoff: 1 on r <= r_inner, 0 on r >= r_outer, quintic smoothstep
/// in log r in between, so d(rho)/dr >= -delta()/r with
/// delta() = 15/8 / log(r_outer/r_inner).
struct RadialProfile {
    double r_inner = 1.0;
    double r_outer = 2.718281828459045;

    double log_width() const;
    double delta() const;
    double value(double r) const;
    double derivative(double r) const;
};

/// omega_eps = d(lambda + eps * rho * mu) evaluated pointwise:
/// d(lambda) + eps * (rho d(mu) + rho' dr ^ mu). lambda and mu are exact
/// polynomial 1-forms; the profile enters numerically.
Sampled2Form cutoff_perturbation(const Form& lambda, const Form& mu, const RadialProfile& rho, double eps);

struct PerturbCheck {
    double eps = 0;

    int antipodal_pairs = 0;
    double antipodal_residual = 0;

    double profile_derivative_residual = 0;  // analytic rho' vs finite differences
    double closedness_residual = 0;          // finite-difference d(omega_eps) at samples

    // wedge density f = (w ^ w)/vol on the coarse grid, then refined in
    // balls around stalled zero-curve endpoints (where the construction is
    // most stressed)
    bool wedge_nonnegative = true;
    double min_f = 0;
    Vec4 first_failure{};

    bool zeros_transverse = true;
    bool zero_set_is_manifold = true;  // false if any traced curve terminates in the ball
    int component_count = 0;
    int noncompact_components = 0;
    std::vector<TracedComponent> components;

    bool near_symplectic() const { return wedge_nonnegative && zeros_transverse && zero_set_is_manifold; }
    bool pass(int expected_components = 2) const {
        return near_symplectic() && component_count == expected_components &&
               noncompact_components == expected_components && antipodal_residual <= 1e-10;
    }
    /// Name of the first failed condition, empty when pass(2) holds.
    std::string first_failure_name() const;
};

PerturbCheck check_cutoff_perturbation(const Form& lambda, const Form& mu, const RadialProfile& rho, double eps,
                                       std::uint64_t seed = 1, int antipodal_samples = 1000);

/// Bisection for the largest eps in [lo, hi] with a near-symplectic
/// perturbation and exactly two non-compact zero components. When the
/// property already fails at lo (it does for the radial-cutoff
/// construction: the interpolation region obstructs the crossing), the
/// threshold is empty and `note` names the failing condition.
struct ThresholdResult {
    std::optional<double> eps_max;
    std::string note;
};
ThresholdResult locate_two_component_eps_threshold(const Form& lambda, const Form& mu, const RadialProfile& rho,
                                                   double lo, double hi, int iterations = 14,
                                                   std::uint64_t seed = 1);

}  // namespace formlab::nearsym
