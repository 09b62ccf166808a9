#include <doctest.h>

#include "formlab/nearsym/model.hpp"
#include "formlab/nearsym/verify.hpp"
#include "test_util.hpp"

#include <algorithm>
#include <cmath>

using namespace formlab;
using namespace formlab::nearsym;

TEST_CASE("model form is closed and self-dual, exactly") {
    Form w = build_model_form(0);
    CHECK(ext::exterior_d(w).is_zero());
    CHECK(ext::hodge_star(w, ext::FlatFrame::standard(4)) == w);

    Form w1 = build_model_form(1);
    CHECK(ext::exterior_d(w1).is_zero());
    CHECK(ext::hodge_star(w1, ext::FlatFrame::standard(4)) == w1);

    CHECK_THROWS_AS(build_model_form(Rational(-1, 2)), std::invalid_argument);
}

TEST_CASE("model form evaluations") {
    Form w = build_model_form(0);
    RatVector origin{0, 0, 0, 0};
    CHECK(w.evaluate(origin).is_zero());

    // f3(1,0,0,0) = -H(1,0) = -3
    RatVector e1{1, 0, 0, 0};
    CHECK(model_f(3).eval(e1) == Rational(-3));
    CHECK(model_h().eval(e1) == Rational(3));
}

TEST_CASE("sd decomposition recovers the model coefficients") {
    Form w = build_model_form(Rational(2, 3));
    auto d = sd_decompose(w);
    CHECK(d.is_self_dual());
    CHECK(d.sd[0] == model_f(1));
    CHECK(d.sd[1] == model_f(2));
    CHECK(d.sd[2] == model_f(3) + Poly::constant(4, Rational(2, 3)));

    auto eps = match_model_family(w);
    REQUIRE(eps.has_value());
    CHECK(*eps == Rational(2, 3));

    CHECK(!match_model_family(sd_basis(1)).has_value());
    CHECK(!match_model_family(w + asd_basis(1)).has_value());
}

TEST_CASE("liouville primitive via the Euler formula") {
    // constant form: mu = 1/2 iota_E omega3
    Form w3 = sd_basis(3);
    Form mu = liouville_primitive(w3);
    CHECK(mu == ext::interior_product(VectorField::euler(4), w3) * Rational(1, 2));
    CHECK(ext::exterior_d(mu) == w3);

    // homogeneous quadratic coefficients: lambda = 1/4 iota_E omega
    Form w = build_model_form(0);
    Form lam = liouville_primitive(w);
    CHECK(lam == ext::interior_product(VectorField::euler(4), w) * Rational(1, 4));
    CHECK(ext::exterior_d(lam) == w);

    // mixed homogeneity still has an exact primitive
    Form mixed = build_model_form(Rational(1, 7));
    CHECK(ext::exterior_d(liouville_primitive(mixed)) == mixed);

    CHECK(liouville_primitive(Form::zero(4, 2)).is_zero());

    // non-closed input is rejected
    Form not_closed = sd_basis(1) * Poly::variable(4, 2);
    CHECK_THROWS_AS(liouville_primitive(not_closed), std::invalid_argument);
}

TEST_CASE("exact zero points of the eps=1 model") {
    auto pts = model_zero_points_eps1(100);
    REQUIRE(static_cast<int>(pts.size()) == 100);
    Poly h = model_h();
    Form w = build_model_form(1);
    for (const auto& p : pts) {
        CHECK(p[1] == 0);
        CHECK(p[2] == 0);
        CHECK(h.eval(p) == 1);
        CHECK(w.evaluate(p).is_zero());
    }
    // all distinct
    std::sort(pts.begin(), pts.end());
    CHECK(std::adjacent_find(pts.begin(), pts.end()) == pts.end());
}

TEST_CASE("zero-line slopes for eps=0 satisfy t^2 + t - 3 = 0") {
    for (double t : model_zero_line_slopes()) CHECK(std::abs(t * t + t - 3.0) < 1e-12);
}

TEST_CASE("transversality rank along the model zero sets") {
    Form w1 = build_model_form(1);
    for (const auto& p : model_zero_points_eps1(20)) CHECK(transversality_rank(w1, p) == 3);

    Form w0 = build_model_form(0);
    RatVector origin{0, 0, 0, 0};
    CHECK(transversality_rank(w0, origin) == 0);
}

TEST_CASE("orientation form at an exact hyperbola point") {
    Form w = build_model_form(1);
    RatVector p{1, 0, 0, 1};
    auto tangents = zero_tangents(w, p);
    REQUIRE(tangents.size() == 1);

    auto of = canonical_orientation(w, p, tangents[0], ext::FlatFrame::standard(4));
    CHECK(of.symmetric);
    CHECK(of.trace_g == 0);
    CHECK(of.det != 0);

    // flipping the tangent flips the sign of det (odd dimension)
    RatVector flipped = tangents[0];
    for (auto& c : flipped) c = -c;
    auto of2 = canonical_orientation(w, p, flipped, ext::FlatFrame::standard(4));
    CHECK(of2.det_sign == -of.det_sign);

    // the hand-checked tangent (3,0,0,5) has det A > 0
    RatVector t{3, 0, 0, 5};
    auto of3 = canonical_orientation(w, p, t, ext::FlatFrame::standard(4));
    CHECK(of3.det_sign == 1);
    CHECK(of3.canonical_tangent == t);
}

TEST_CASE("orientation form rejects bad inputs") {
    Form w = build_model_form(1);
    RatVector off{1, 1, 0, 1};
    RatVector t{3, 0, 0, 5};
    CHECK_THROWS_WITH_AS(canonical_orientation(w, off, t, ext::FlatFrame::standard(4)),
                         doctest::Contains("NotOnZeroSet"), std::invalid_argument);

    RatVector p{1, 0, 0, 1};
    RatVector not_tangent{1, 0, 0, 0};
    CHECK_THROWS_WITH_AS(canonical_orientation(w, p, not_tangent, ext::FlatFrame::standard(4)),
                         doctest::Contains("TangentNotInKernel"), std::invalid_argument);
}

TEST_CASE("tracelessness and symmetry hold at many sampled zeros") {
    Form w = build_model_form(1);
    for (const auto& p : model_zero_points_eps1(40)) {
        auto tangents = zero_tangents(w, p);
        REQUIRE(tangents.size() == 1);
        auto of = canonical_orientation(w, p, tangents[0], ext::FlatFrame::standard(4));
        CHECK(of.symmetric);
        CHECK(of.trace_g == 0);
        CHECK(of.det != 0);
    }
}

TEST_CASE("canonical orientation is constant along a branch") {
    Form w = build_model_form(1);
    // order right-branch points by the slope parameter t = x4/x1
    std::vector<std::pair<Rational, RatVector>> branch;
    for (auto& p : model_zero_points_eps1(80))
        if (p[0] > 0) branch.emplace_back(p[3] / p[0], p);
    std::sort(branch.begin(), branch.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    REQUIRE(branch.size() > 10);

    RatVector prev_tangent;
    for (const auto& [t, p] : branch) {
        auto tangents = zero_tangents(w, p);
        REQUIRE(tangents.size() == 1);
        auto of = canonical_orientation(w, p, tangents[0], ext::FlatFrame::standard(4));
        RatVector ct = of.canonical_tangent;
        if (!prev_tangent.empty()) {
            Rational dot = 0;
            for (size_t i = 0; i < 4; ++i) dot += ct[i] * prev_tangent[i];
            CHECK(dot > 0);  // canonical tangents never flip along the branch
        }
        prev_tangent = ct;
    }
}

TEST_CASE("verify_near_symplectic on the model family") {
    auto grid = GridSpec::cube(4, Rational(-3, 2), Rational(3, 2), 5);
    auto frame = ext::FlatFrame::standard(4);

    SUBCASE("eps = 0: near-symplectic away from the line crossing") {
        auto rep = verify_near_symplectic(build_model_form(0), frame, grid);
        CHECK(rep.closed);
        CHECK(rep.selfdual);
        CHECK(rep.status == ZeroSetReport::Status::DegenerateZero);
        CHECK(rep.first_failure.find("origin") != std::string::npos);
        REQUIRE(rep.components.size() == 2);
        for (const auto& c : rep.components) {
            CHECK(c.kind == ZeroCurve::Kind::Line);
            CHECK(c.noncompact);
        }
        // all samples away from the origin are transverse
        int nonorigin_pass = 0;
        for (const auto& t : rep.transversality) {
            const bool at_origin = t.point == Vec4{0, 0, 0, 0};
            if (!at_origin) {
                CHECK(t.pass);
                ++nonorigin_pass;
            } else {
                CHECK(!t.pass);
            }
        }
        CHECK(nonorigin_pass >= 24);
    }

    SUBCASE("eps = 1: near-symplectic everywhere") {
        auto rep = verify_near_symplectic(build_model_form(1), frame, grid);
        CHECK(rep.pass());
        CHECK(rep.closed);
        CHECK(rep.selfdual);
        CHECK(rep.wedge_min >= 0);
        REQUIRE(rep.components.size() == 2);
        for (const auto& c : rep.components) CHECK(c.kind == ZeroCurve::Kind::HyperbolaBranch);
        for (const auto& t : rep.transversality) CHECK(t.pass);
        CHECK(!rep.morse_bott.empty());
        for (const auto& mb : rep.morse_bott) {
            CHECK(mb.positive_definite);
            for (double ev : mb.normal_hessian_eigs) CHECK(ev > 0);
        }
        for (const auto& os : rep.orientation) {
            CHECK(os.symmetric);
            CHECK(os.trace_residual <= 1e-12);
            CHECK(os.det_sign != 0);
        }
    }

    SUBCASE("constant symplectic form: empty zero set") {
        auto rep = verify_near_symplectic(sd_basis(1), frame, grid);
        CHECK(rep.pass());
        CHECK(rep.components.empty());
        CHECK(rep.wedge_min == 2.0);
    }

    SUBCASE("non-closed input is reported") {
        Form bad = sd_basis(1) * Poly::variable(4, 2);
        auto rep = verify_near_symplectic(bad, frame, grid);
        CHECK(rep.status == ZeroSetReport::Status::NotClosed);
    }

    SUBCASE("indefinite wedge is reported") {
        // omega1 + x-dependent ASD contamination goes negative on the grid
        Form bad = sd_basis(1) + asd_basis(1) * Poly::constant(4, 2);
        auto rep = verify_near_symplectic(bad, frame, grid);
        CHECK(rep.status == ZeroSetReport::Status::IndefiniteWedge);
        CHECK(!rep.first_failure.empty());
    }
}

TEST_CASE("continuation recovers the eps=1 zero set without the symbolic path") {
    // Feed the tracer directly so the model shortcut is bypassed.
    Form w = build_model_form(1);
    auto f = Sampled2Form::from_poly(w);
    std::vector<Vec4> seeds;
    for (double x1 = -2.0; x1 <= 2.0; x1 += 0.5)
        for (double x4 = -2.0; x4 <= 2.0; x4 += 0.5) seeds.push_back(Vec4{x1, 0.1, -0.1, x4});
    ContinuationParams params;
    params.ball_radius = 2.5;
    auto comps = trace_zero_components(f, seeds, params);
    REQUIRE(comps.size() == 2);
    Poly h = model_h();
    for (const auto& c : comps) {
        CHECK(c.noncompact);
        CHECK(c.points.size() > 10);
        for (const auto& pt : c.points) {
            CHECK(std::abs(pt[1]) < 1e-8);
            CHECK(std::abs(pt[2]) < 1e-8);
            RatVector pr;
            for (double v : pt) pr.push_back(rational_from_double(v));
            CHECK(std::abs(to_double(h.eval(pr)) - 1.0) < 1e-8);
        }
    }
}
