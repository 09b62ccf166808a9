#pragma once

#include "formlab/exact_linalg.hpp"
#include "formlab/poly.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace formlab::ext {

/// Constant-coefficient flat metric data on R^3 or R^4.
struct FlatFrame {
    int dimension = 4;
    RatMatrix metric = RatMatrix::identity(4);
    int orientation = +1;

    static FlatFrame standard(int dim) {
        FlatFrame f;
        f.dimension = dim;
        f.metric = RatMatrix::identity(dim);
        f.orientation = +1;
        return f;
    }

    bool metric_is_identity() const { return metric == RatMatrix::identity(dimension); }
    void validate() const;
};

/// Polynomial vector field; component count equals the dimension.
class VectorField {
public:
    explicit VectorField(std::vector<Poly> components);

    static VectorField euler(int num_vars);                       // sum x_i d/dx_i
    static VectorField constant(int num_vars, const RatVector& v);

    int num_vars() const { return static_cast<int>(comps_.size()); }
    const Poly& component(int i) const { return comps_[static_cast<size_t>(i)]; }
    VectorField operator*(const Rational& c) const;

    RatVector eval(std::span<const Rational> x) const;

private:
    std::vector<Poly> comps_;
};

/// Differential k-form on flat R^n with polynomial coefficients.
///
/// Components are stored against bitmasks over the variables with the
/// canonical (strictly increasing) index order; insertion with an arbitrary
/// index tuple normalizes the sign. No zero coefficients are kept, so
/// operator== decides equality of forms exactly.
class Form {
public:
    Form(int num_vars, int degree);

    static Form zero(int num_vars, int degree) { return Form(num_vars, degree); }
    /// Basis k-form dx_{idx[0]} ^ ... ^ dx_{idx[k-1]} (0-based indices).
    static Form basis(int num_vars, std::span<const int> idx);

    int num_vars() const { return num_vars_; }
    int degree() const { return degree_; }
    bool is_zero() const { return comps_.empty(); }

    /// Adds coeff * dx_{idx}; repeated indices contribute nothing.
    void add_term(std::span<const int> idx, const Poly& coeff);
    void add_mask_term(unsigned mask, const Poly& coeff);

    const std::map<unsigned, Poly>& components() const { return comps_; }
    const Poly& component(unsigned mask) const;
    const Poly& component(std::span<const int> idx) const;

    /// Components in lexicographic order of the increasing index tuples.
    std::vector<std::pair<std::vector<int>, const Poly*>> lex_components() const;

    Form operator+(const Form& o) const;
    Form operator-(const Form& o) const;
    Form operator-() const;
    Form operator*(const Rational& c) const;
    Form operator*(const Poly& p) const;
    Form& operator+=(const Form& o);

    bool operator==(const Form& o) const = default;

    /// Exact evaluation: the constant form at a rational point.
    Form evaluate(std::span<const Rational> x) const;

private:
    int num_vars_;
    int degree_;
    std::map<unsigned, Poly> comps_;
};

Form wedge(const Form& a, const Form& b);
Form exterior_d(const Form& a);
Form hodge_star(const Form& a, const FlatFrame& frame);
Form interior_product(const VectorField& x, const Form& a);
/// Flat-connection covariant derivative: componentwise directional derivative.
Form covariant_derivative(const Form& a, const VectorField& direction);
/// Pullback by the linear map x -> M x (singular M allowed).
Form pullback_linear(const RatMatrix& m, const Form& a);
/// Lie derivative by the coefficient-transport (coordinate) formula.
Form lie_derivative(const VectorField& x, const Form& a);

/// Pointwise inner product <a, b>_g as a polynomial: a ^ *b = <a,b> vol_g.
Poly pointwise_inner(const Form& a, const Form& b, const FlatFrame& frame);

/// Canonical text: one line per component, "indices : polynomial",
/// lines ordered lexicographically by index tuple. The zero form is "".
std::string to_text(const Form& a);
Form form_from_text(int num_vars, int degree, std::string_view text);

/// Basis change with B^T G B = I for the frame metric G, plus whether
/// it was representable exactly (all LDL^T pivots perfect squares).
struct Orthonormalization {
    RatMatrix transform;
    bool exact;
};
Orthonormalization orthonormalize(const FlatFrame& frame);

/// Flattened double-precision copy for hot evaluation loops; component
/// order matches Form::lex_components().
struct CompiledForm {
    int num_vars = 4;
    int degree = 0;
    std::vector<unsigned> masks;  // lex-tuple order
    std::vector<CompiledPoly> comps;

    static CompiledForm from(const Form& f);
    void eval(std::span<const double> x, std::span<double> out) const;
};

namespace detail {
int merge_sign(unsigned a, unsigned b);  // 0 if masks intersect, else +-1
std::vector<int> mask_to_tuple(unsigned mask, int n);
unsigned full_mask(int n);
std::vector<unsigned> masks_lex_order(int n, int k);
}  // namespace detail

}  // namespace formlab::ext
