#include <doctest.h>

#include "formlab/poly.hpp"
#include "test_util.hpp"

using namespace formlab;
using namespace formlab::ext;

TEST_CASE("polynomial arithmetic is exact") {
    Poly x1 = Poly::variable(4, 0);
    Poly x2 = Poly::variable(4, 1);
    Poly s = x1 + x2;
    Poly sq = s * s;

    Poly expected(4);
    expected += x1 * x1;
    expected += x1 * x2 * Rational(2);
    expected += x2 * x2;
    CHECK(sq == expected);

    // No rounding: (1/3) * 3 == 1 exactly.
    Poly third = Poly::constant(4, Rational(1, 3));
    CHECK(third * Rational(3) == Poly::constant(4, 1));
}

TEST_CASE("zero coefficients are never stored") {
    Poly x1 = Poly::variable(3, 0);
    Poly diff = x1 - x1;
    CHECK(diff.is_zero());
    CHECK(diff.terms().empty());

    Poly p = x1 * Rational(2) + x1 * Rational(-2);
    CHECK(p.terms().empty());
}

TEST_CASE("partial derivatives") {
    // d/dx1 (x1^2 x3) = 2 x1 x3
    Poly p = Poly::variable(4, 0) * Poly::variable(4, 0) * Poly::variable(4, 2);
    Poly d = p.derivative(0);
    Poly expected = Poly::variable(4, 0) * Poly::variable(4, 2) * Rational(2);
    CHECK(d == expected);
    CHECK(p.derivative(3).is_zero());
}

TEST_CASE("evaluation at rational points") {
    // p = x1*x2 - 1/2
    Poly p = Poly::variable(3, 0) * Poly::variable(3, 1) - Poly::constant(3, Rational(1, 2));
    RatVector pt{Rational(2, 3), Rational(3, 4), Rational(0)};
    CHECK(p.eval(pt) == Rational(0));  // 2/3 * 3/4 = 1/2
}

TEST_CASE("linear substitution") {
    // x -> (x2, x1) swap on p = x1^2 - x2 gives x2^2 - x1
    RatMatrix swap{{0, 1}, {1, 0}};
    RatMatrix m = RatMatrix::identity(3);
    m(0, 0) = 0;
    m(0, 1) = 1;
    m(1, 0) = 1;
    m(1, 1) = 0;
    Poly p = Poly::variable(3, 0) * Poly::variable(3, 0) - Poly::variable(3, 1);
    Poly q = p.substitute_linear(m);
    Poly expected = Poly::variable(3, 1) * Poly::variable(3, 1) - Poly::variable(3, 0);
    CHECK(q == expected);
}

TEST_CASE("homogeneous parts") {
    Poly p = Poly::variable(4, 0) + Poly::variable(4, 1) * Poly::variable(4, 2) + Poly::constant(4, 5);
    auto parts = p.homogeneous_parts();
    CHECK(parts.size() == 3);
    CHECK(parts.at(0) == Poly::constant(4, 5));
    CHECK(parts.at(1) == Poly::variable(4, 0));
    CHECK(!p.is_homogeneous());
    int deg = 0;
    CHECK(parts.at(2).is_homogeneous(&deg));
    CHECK(deg == 2);
}

TEST_CASE("canonical printing and parsing round-trip") {
    testutil::Rng rng(7);
    for (int iter = 0; iter < 50; ++iter) {
        Poly p = testutil::random_poly(rng, 4, 4, 6);
        if (p.is_zero()) continue;
        Poly q = Poly::parse(4, p.str());
        CHECK(q == p);
    }

    Poly f1 = Poly::parse(4, "2*x1*x3 - 2*x2*x4 - x3*x4");
    CHECK(f1.str() == "2*x1*x3 - 2*x2*x4 - x3*x4");
    CHECK(Poly::parse(4, "1/2*x1^2").eval(RatVector{2, 0, 0, 0}) == 2);

    CHECK_THROWS_AS(Poly::parse(3, "x4"), std::invalid_argument);
    CHECK_THROWS_AS(Poly::parse(3, ""), std::invalid_argument);
    CHECK_THROWS_AS(Poly::parse(3, "x1 +"), std::invalid_argument);
}

TEST_CASE("exact square roots of rationals") {
    Rational root;
    CHECK(exact_sqrt(Rational(9, 4), root));
    CHECK(root == Rational(3, 2));
    CHECK(exact_sqrt(Rational(0), root));
    CHECK(root == 0);
    CHECK(!exact_sqrt(Rational(2), root));
    CHECK(!exact_sqrt(Rational(-1), root));
}

TEST_CASE("rational_from_double is exact") {
    double x = 0.1;
    Rational r = rational_from_double(x);
    CHECK(to_double(r) == x);
    CHECK(rational_from_double(-3.5) == Rational(-7, 2));
    CHECK(rational_from_double(0.0) == 0);
}

TEST_CASE("exact linear algebra basics") {
    RatMatrix a{{2, 1}, {1, 2}};
    // 2x2 det, inverse, rank
    // (matrix literals take Rational entries)
    RatMatrix m(2, 2);
    m(0, 0) = 2;
    m(0, 1) = 1;
    m(1, 0) = 1;
    m(1, 1) = 2;
    CHECK(m.det() == 3);
    CHECK(m.rank() == 2);
    auto inv = m.inverse();
    REQUIRE(inv.has_value());
    CHECK((*inv) * m == RatMatrix::identity(2));
    CHECK(m.is_positive_definite());

    RatMatrix sing(2, 2);
    sing(0, 0) = 1;
    sing(0, 1) = 2;
    sing(1, 0) = 2;
    sing(1, 1) = 4;
    CHECK(sing.det() == 0);
    CHECK(sing.rank() == 1);
    CHECK(!sing.inverse().has_value());
    auto ker = sing.kernel();
    REQUIRE(ker.size() == 1);
    // kernel vector satisfies sing * v = 0
    RatVector v = ker[0];
    RatVector prod = sing * v;
    CHECK(prod[0] == 0);
    CHECK(prod[1] == 0);
}

TEST_CASE("LDL^T of SPD matrices") {
    RatMatrix g(3, 3);
    g(0, 0) = 4;
    g(1, 1) = 2;
    g(2, 2) = 9;
    g(0, 1) = g(1, 0) = 2;
    auto f = g.ldlt();
    REQUIRE(f.has_value());
    const auto& [L, d] = *f;
    // Reconstruct
    RatMatrix D(3, 3);
    for (int i = 0; i < 3; ++i) D(i, i) = d[static_cast<size_t>(i)];
    CHECK(L * D * L.transposed() == g);
}
