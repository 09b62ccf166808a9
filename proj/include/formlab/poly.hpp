#pragma once

#include "formlab/exact_linalg.hpp"
#include "formlab/rational.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace formlab::ext {

/// Exponent multi-index for up to 4 variables; unused slots stay zero.
struct Monomial {
    std::array<std::uint8_t, 4> e{0, 0, 0, 0};

    auto operator<=>(const Monomial&) const = default;

    int degree() const { return e[0] + e[1] + e[2] + e[3]; }
};

/// Multivariate polynomial on R^3 or R^4 with exact rational coefficients.
/// Zero-coefficient terms are never stored, so equality is structural.
class Poly {
public:
    explicit Poly(int num_vars = 4);

    static Poly constant(int num_vars, const Rational& c);
    static Poly variable(int num_vars, int i);
    static Poly monomial(int num_vars, const Monomial& m, const Rational& c);

    int num_vars() const { return num_vars_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<Monomial, Rational>& terms() const { return terms_; }

    void add_term(const Monomial& m, const Rational& c);

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator-() const;
    Poly operator*(const Poly& o) const;
    Poly operator*(const Rational& c) const;
    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);

    bool operator==(const Poly& o) const = default;

    Poly derivative(int i) const;

    Rational eval(std::span<const Rational> x) const;
    double eval_d(std::span<const double> x) const;

    /// x -> M x substitution (pullback of the coefficient by a linear map).
    Poly substitute_linear(const RatMatrix& m) const;

    int total_degree() const;  // -1 for the zero polynomial
    bool is_homogeneous(int* degree_out = nullptr) const;
    /// Split into homogeneous parts, keyed by degree.
    std::map<int, Poly> homogeneous_parts() const;

    /// Canonical text: terms in graded-lex order, e.g. "2*x1*x3 - x3*x4".
    std::string str() const;
    static Poly parse(int num_vars, std::string_view text);

private:
    int num_vars_;
    std::map<Monomial, Rational> terms_;
};

inline Poly operator*(const Rational& c, const Poly& p) { return p * c; }

/// Flattened double-precision copy of a Poly for hot evaluation loops.
struct CompiledPoly {
    struct Term {
        double c;
        std::array<std::uint8_t, 4> e;
    };
    std::vector<Term> terms;
    int num_vars = 4;

    static CompiledPoly from(const Poly& p);
    double eval(std::span<const double> x) const;
};

}  // namespace formlab::ext
