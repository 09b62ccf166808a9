#include <doctest.h>

#include "formlab/nearsym/model.hpp"
#include "formlab/nearsym/perturb.hpp"

#include <cmath>

using namespace formlab;
using namespace formlab::nearsym;

namespace {

struct Fixture {
    Form lambda = liouville_primitive(build_model_form(0));  // 1/4 iota_E omega
    Form mu = liouville_primitive(sd_basis(3));              // 1/2 iota_E omega3
    RadialProfile rho{1.0, std::exp(1.0)};
};

}  // namespace

TEST_CASE("radial profile shape and derivative bound") {
    RadialProfile rho{1.0, std::exp(1.0)};
    CHECK(rho.value(0.0) == 1.0);
    CHECK(rho.value(0.999) == 1.0);
    CHECK(rho.value(2.8) == 0.0);
    CHECK(rho.value(1.6486) == doctest::Approx(0.5).epsilon(1e-3));  // sqrt(e): log midpoint

    const double delta = rho.delta();
    CHECK(delta == doctest::Approx(15.0 / 8.0).epsilon(1e-12));  // log width 1
    for (double r = 0.2; r < 3.0; r += 0.01) {
        CHECK(rho.derivative(r) <= 1e-15);  // nonincreasing
        CHECK(rho.derivative(r) >= -delta / r - 1e-12);
        const double h = 1e-6;
        const double fd = (rho.value(r + h) - rho.value(r - h)) / (2 * h);
        CHECK(std::abs(fd - rho.derivative(r)) < 1e-7);
    }
}

TEST_CASE("cutoff perturbation matches the model form inside and outside") {
    Fixture fx;
    const double eps = 0.05;
    auto form = cutoff_perturbation(fx.lambda, fx.mu, fx.rho, eps);

    Form inner_exact = build_model_form(0) + sd_basis(3) * rational_from_double(eps);
    auto inner_c = ext::CompiledForm::from(inner_exact);
    Form outer_exact = build_model_form(0);
    auto outer_c = ext::CompiledForm::from(outer_exact);

    SplitMix64 rng(5);
    for (int n = 0; n < 100; ++n) {
        Vec4 x{};
        double r2 = 0;
        for (auto& c : x) {
            c = rng.uniform(-1, 1);
            r2 += c * c;
        }
        // scale into the inner ball
        const double s_in = 0.9 / std::max(1.0, std::sqrt(r2));
        Vec4 xin{x[0] * s_in, x[1] * s_in, x[2] * s_in, x[3] * s_in};
        Comp6 got, want;
        form.eval_at(xin, got);
        inner_c.eval(xin, want);
        for (int k = 0; k < 6; ++k)
            CHECK(got[static_cast<size_t>(k)] == doctest::Approx(want[static_cast<size_t>(k)]).epsilon(1e-14));

        // and outside the outer ball omega_eps = omega on the nose
        const double s_out = 3.0 / std::sqrt(std::max(1e-12, r2));
        Vec4 xout{x[0] * s_out, x[1] * s_out, x[2] * s_out, x[3] * s_out};
        form.eval_at(xout, got);
        outer_c.eval(xout, want);
        for (int k = 0; k < 6; ++k) CHECK(got[static_cast<size_t>(k)] == want[static_cast<size_t>(k)]);
    }
}

TEST_CASE("perturbed form keeps two non-compact zero components for small eps") {
    Fixture fx;
    auto chk = check_cutoff_perturbation(fx.lambda, fx.mu, fx.rho, 0.05, 7, 1000);
    CHECK(chk.antipodal_pairs == 1000);
    CHECK(chk.antipodal_residual <= 1e-10);
    CHECK(chk.profile_derivative_residual < 1e-7);
    CHECK(chk.closedness_residual < 1e-5);
    CHECK(chk.wedge_nonnegative);
    CHECK(chk.zeros_transverse);
    CHECK(chk.component_count == 2);
    CHECK(chk.noncompact_components == 2);
    CHECK(chk.pass());

    // the two components are antipodal images of each other, away from 0
    REQUIRE(chk.components.size() == 2);
    for (const auto& comp : chk.components) CHECK(comp.points.size() > 20);
}

TEST_CASE("eps threshold location by bisection") {
    Fixture fx;
    const double lo = 1.0 / 64.0;
    const double eps_star = locate_two_component_eps_threshold(fx.lambda, fx.mu, fx.rho, lo, 1.5, 8, 3);
    CHECK(eps_star >= lo);
    // the located value itself satisfies the property
    auto chk = check_cutoff_perturbation(fx.lambda, fx.mu, fx.rho, eps_star, 11, 50);
    CHECK(chk.pass());
}
