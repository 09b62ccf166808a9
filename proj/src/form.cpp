#include "formlab/form.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace formlab::ext {

namespace detail {

int merge_sign(unsigned a, unsigned b) {
    if (a & b) return 0;
    // Parity of inversions when concatenating tuple(a), tuple(b) and sorting.
    int inversions = 0;
    for (unsigned bit = b; bit; bit &= bit - 1) {
        const int i = std::countr_zero(bit);
        inversions += std::popcount(a >> (i + 1));
    }
    return (inversions % 2 == 0) ? 1 : -1;
}

std::vector<int> mask_to_tuple(unsigned mask, int n) {
    std::vector<int> t;
    for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) t.push_back(i);
    return t;
}

unsigned full_mask(int n) { return (1u << n) - 1u; }

std::vector<unsigned> masks_lex_order(int n, int k) {
    std::vector<std::pair<std::vector<int>, unsigned>> items;
    for (unsigned m = 0; m <= full_mask(n); ++m)
        if (std::popcount(m) == k) items.emplace_back(mask_to_tuple(m, n), m);
    std::sort(items.begin(), items.end());
    std::vector<unsigned> out;
    out.reserve(items.size());
    for (auto& [t, m] : items) out.push_back(m);
    return out;
}

}  // namespace detail

using detail::full_mask;
using detail::mask_to_tuple;
using detail::merge_sign;

void FlatFrame::validate() const {
    if (dimension != 3 && dimension != 4) throw std::invalid_argument("frame dimension must be 3 or 4");
    if (orientation != 1 && orientation != -1) throw std::invalid_argument("orientation must be +1 or -1");
    if (metric.rows() != dimension || metric.cols() != dimension)
        throw std::invalid_argument("metric shape mismatch");
    if (!metric.is_symmetric()) throw std::invalid_argument("metric must be symmetric");
    if (!metric.is_positive_definite()) throw std::invalid_argument("metric must be positive-definite");
}

VectorField::VectorField(std::vector<Poly> components) : comps_(std::move(components)) {
    if (comps_.empty()) throw std::invalid_argument("empty vector field");
    const int nv = comps_.front().num_vars();
    if (static_cast<int>(comps_.size()) != nv)
        throw std::invalid_argument("component count must equal dimension");
    for (const auto& c : comps_)
        if (c.num_vars() != nv) throw std::invalid_argument("mixed num_vars in vector field");
}

VectorField VectorField::euler(int num_vars) {
    std::vector<Poly> comps;
    comps.reserve(static_cast<size_t>(num_vars));
    for (int i = 0; i < num_vars; ++i) comps.push_back(Poly::variable(num_vars, i));
    return VectorField(std::move(comps));
}

VectorField VectorField::constant(int num_vars, const RatVector& v) {
    if (static_cast<int>(v.size()) != num_vars) throw std::invalid_argument("constant field dimension");
    std::vector<Poly> comps;
    comps.reserve(v.size());
    for (const auto& c : v) comps.push_back(Poly::constant(num_vars, c));
    return VectorField(std::move(comps));
}

VectorField VectorField::operator*(const Rational& c) const {
    std::vector<Poly> comps;
    comps.reserve(comps_.size());
    for (const auto& p : comps_) comps.push_back(p * c);
    return VectorField(std::move(comps));
}

RatVector VectorField::eval(std::span<const Rational> x) const {
    RatVector v;
    v.reserve(comps_.size());
    for (const auto& p : comps_) v.push_back(p.eval(x));
    return v;
}

Form::Form(int num_vars, int degree) : num_vars_(num_vars), degree_(degree) {
    if (num_vars != 3 && num_vars != 4) throw std::invalid_argument("num_vars must be 3 or 4");
    if (degree < 0 || degree > num_vars) throw std::invalid_argument("form degree out of range 0..n");
}

Form Form::basis(int num_vars, std::span<const int> idx) {
    Form f(num_vars, static_cast<int>(idx.size()));
    f.add_term(idx, Poly::constant(num_vars, 1));
    return f;
}

void Form::add_term(std::span<const int> idx, const Poly& coeff) {
    if (static_cast<int>(idx.size()) != degree_) throw std::invalid_argument("index tuple length != degree");
    if (coeff.num_vars() != num_vars_) throw std::invalid_argument("coefficient num_vars mismatch");
    // Normalize: sort indices, tracking the permutation sign.
    std::vector<int> t(idx.begin(), idx.end());
    int sign = 1;
    for (size_t i = 0; i < t.size(); ++i)
        for (size_t j = i + 1; j < t.size(); ++j) {
            if (t[i] == t[j]) return;  // repeated index: term vanishes
            if (t[i] > t[j]) {
                std::swap(t[i], t[j]);
                sign = -sign;
            }
        }
    unsigned mask = 0;
    for (int i : t) {
        if (i < 0 || i >= num_vars_) throw std::invalid_argument("form index out of range");
        mask |= (1u << i);
    }
    add_mask_term(mask, sign > 0 ? coeff : -coeff);
}

void Form::add_mask_term(unsigned mask, const Poly& coeff) {
    if (std::popcount(mask) != degree_) throw std::invalid_argument("mask popcount != degree");
    if (coeff.is_zero()) return;
    auto [it, inserted] = comps_.emplace(mask, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second.is_zero()) comps_.erase(it);
    }
}

const Poly& Form::component(unsigned mask) const {
    static const Poly zero3(3), zero4(4);
    auto it = comps_.find(mask);
    if (it != comps_.end()) return it->second;
    return num_vars_ == 3 ? zero3 : zero4;
}

const Poly& Form::component(std::span<const int> idx) const {
    unsigned mask = 0;
    for (int i : idx) mask |= (1u << i);
    return component(mask);
}

std::vector<std::pair<std::vector<int>, const Poly*>> Form::lex_components() const {
    std::vector<std::pair<std::vector<int>, const Poly*>> out;
    for (unsigned m : detail::masks_lex_order(num_vars_, degree_)) {
        auto it = comps_.find(m);
        if (it != comps_.end()) out.emplace_back(mask_to_tuple(m, num_vars_), &it->second);
    }
    return out;
}

Form Form::operator+(const Form& o) const {
    Form r = *this;
    r += o;
    return r;
}

Form& Form::operator+=(const Form& o) {
    if (num_vars_ != o.num_vars_ || degree_ != o.degree_)
        throw std::invalid_argument("form shape mismatch in sum");
    for (const auto& [m, p] : o.comps_) add_mask_term(m, p);
    return *this;
}

Form Form::operator-(const Form& o) const { return *this + (-o); }

Form Form::operator-() const {
    Form r(num_vars_, degree_);
    for (const auto& [m, p] : comps_) r.comps_.emplace(m, -p);
    return r;
}

Form Form::operator*(const Rational& c) const {
    Form r(num_vars_, degree_);
    if (c == 0) return r;
    for (const auto& [m, p] : comps_) r.comps_.emplace(m, p * c);
    return r;
}

Form Form::operator*(const Poly& p) const {
    Form r(num_vars_, degree_);
    for (const auto& [m, q] : comps_) r.add_mask_term(m, q * p);
    return r;
}

Form Form::evaluate(std::span<const Rational> x) const {
    Form r(num_vars_, degree_);
    for (const auto& [m, p] : comps_) r.add_mask_term(m, Poly::constant(num_vars_, p.eval(x)));
    return r;
}

Form wedge(const Form& a, const Form& b) {
    if (a.num_vars() != b.num_vars()) throw std::invalid_argument("wedge: dimension mismatch");
    if (a.degree() + b.degree() > a.num_vars()) throw std::invalid_argument("wedge: degree overflow");
    Form r(a.num_vars(), a.degree() + b.degree());
    for (const auto& [ma, pa] : a.components())
        for (const auto& [mb, pb] : b.components()) {
            const int s = merge_sign(ma, mb);
            if (s == 0) continue;
            Poly prod = pa * pb;
            r.add_mask_term(ma | mb, s > 0 ? prod : -prod);
        }
    return r;
}

Form exterior_d(const Form& a) {
    if (a.degree() == a.num_vars()) return Form(a.num_vars(), a.degree());  // top degree: d == 0, kept at top degree
    Form r(a.num_vars(), a.degree() + 1);
    for (const auto& [m, p] : a.components())
        for (int i = 0; i < a.num_vars(); ++i) {
            if (m & (1u << i)) continue;
            Poly dp = p.derivative(i);
            if (dp.is_zero()) continue;
            const int s = merge_sign(1u << i, m);
            r.add_mask_term(m | (1u << i), s > 0 ? dp : -dp);
        }
    return r;
}

Orthonormalization orthonormalize(const FlatFrame& frame) {
    frame.validate();
    if (frame.metric_is_identity()) return {RatMatrix::identity(frame.dimension), true};
    auto f = frame.metric.ldlt();
    // validate() guarantees SPD, so LDL^T exists with positive pivots.
    const auto& [L, d] = *f;
    const int n = frame.dimension;
    bool exact = true;
    RatVector inv_sqrt(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        Rational root;
        if (exact_sqrt(d[static_cast<size_t>(i)], root)) {
            inv_sqrt[static_cast<size_t>(i)] = Rational(1) / root;
        } else {
            exact = false;
            inv_sqrt[static_cast<size_t>(i)] =
                rational_from_double(1.0 / std::sqrt(to_double(d[static_cast<size_t>(i)])));
        }
    }
    RatMatrix lt_inv = *L.transposed().inverse();
    RatMatrix b(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) b(i, j) = lt_inv(i, j) * inv_sqrt[static_cast<size_t>(j)];
    return {std::move(b), exact};
}

Form hodge_star(const Form& a, const FlatFrame& frame) {
    frame.validate();
    if (frame.dimension != a.num_vars()) throw std::invalid_argument("hodge_star: frame dimension mismatch");
    const int n = a.num_vars();
    auto star_std = [n](const Form& f) {
        Form r(n, n - f.degree());
        for (const auto& [m, p] : f.components()) {
            const unsigned mc = full_mask(n) & ~m;
            const int s = merge_sign(m, mc);
            r.add_mask_term(mc, s > 0 ? p : -p);
        }
        return r;
    };
    Form result(n, n - a.degree());
    if (frame.metric_is_identity()) {
        result = star_std(a);
    } else {
        const auto on = orthonormalize(frame);
        const RatMatrix b_inv = *on.transform.inverse();
        result = pullback_linear(b_inv, star_std(pullback_linear(on.transform, a)));
    }
    return frame.orientation > 0 ? result : -result;
}

Form interior_product(const VectorField& x, const Form& a) {
    if (x.num_vars() != a.num_vars()) throw std::invalid_argument("interior_product: dimension mismatch");
    if (a.degree() == 0) return Form(a.num_vars(), 0);
    Form r(a.num_vars(), a.degree() - 1);
    for (const auto& [m, p] : a.components()) {
        int pos = 0;
        for (int i = 0; i < a.num_vars(); ++i) {
            if (!(m & (1u << i))) continue;
            Poly term = p * x.component(i);
            if (!term.is_zero()) r.add_mask_term(m & ~(1u << i), pos % 2 == 0 ? term : -term);
            ++pos;
        }
    }
    return r;
}

Form covariant_derivative(const Form& a, const VectorField& direction) {
    if (direction.num_vars() != a.num_vars())
        throw std::invalid_argument("covariant_derivative: dimension mismatch");
    Form r(a.num_vars(), a.degree());
    for (const auto& [m, p] : a.components()) {
        Poly acc(a.num_vars());
        for (int i = 0; i < a.num_vars(); ++i) {
            Poly dp = p.derivative(i);
            if (!dp.is_zero()) acc += direction.component(i) * dp;
        }
        r.add_mask_term(m, acc);
    }
    return r;
}

Form pullback_linear(const RatMatrix& m, const Form& a) {
    const int n = a.num_vars();
    if (m.rows() != n || m.cols() != n) throw std::invalid_argument("pullback matrix shape mismatch");
    // phi(x) = M x pulls dx_i back to sum_j M(i,j) dx_j.
    std::vector<Form> row(static_cast<size_t>(n), Form(n, 1));
    for (int i = 0; i < n; ++i) {
        Form f(n, 1);
        for (int j = 0; j < n; ++j) {
            const int idx[1] = {j};
            f.add_term(idx, Poly::constant(n, m(i, j)));
        }
        row[static_cast<size_t>(i)] = std::move(f);
    }
    Form r(n, a.degree());
    for (const auto& [mask, p] : a.components()) {
        Form factor(n, 0);
        factor.add_term({}, p.substitute_linear(m));
        Form acc = factor;
        for (int i : mask_to_tuple(mask, n)) acc = wedge(acc, row[static_cast<size_t>(i)]);
        r += acc;
    }
    return r;
}

Form lie_derivative(const VectorField& x, const Form& a) {
    if (x.num_vars() != a.num_vars()) throw std::invalid_argument("lie_derivative: dimension mismatch");
    // Transport of coefficients plus the terms from d(x^j) hitting each slot.
    Form r = covariant_derivative(a, x);
    const int n = a.num_vars();
    for (const auto& [mask, p] : a.components()) {
        auto tuple = mask_to_tuple(mask, n);
        for (size_t slot = 0; slot < tuple.size(); ++slot)
            for (int j = 0; j < n; ++j) {
                // replacing slot index i_m by j contributes (d X^{i_m} / d x_j) alpha_J
                Poly dx_slot = x.component(tuple[slot]).derivative(j);
                if (dx_slot.is_zero()) continue;
                std::vector<int> idx = tuple;
                idx[slot] = j;
                r.add_term(idx, p * dx_slot);
            }
    }
    return r;
}

Poly pointwise_inner(const Form& a, const Form& b, const FlatFrame& frame) {
    if (a.degree() != b.degree() || a.num_vars() != b.num_vars())
        throw std::invalid_argument("pointwise_inner: shape mismatch");
    Form vol = hodge_star(Form::basis(a.num_vars(), {}), frame);
    const Poly& vol_coeff = vol.component(full_mask(a.num_vars()));
    if (vol_coeff.terms().size() != 1)
        throw std::invalid_argument("pointwise_inner: unsupported frame");
    const Rational scale = vol_coeff.terms().begin()->second;
    Form pairing = wedge(a, hodge_star(b, frame));
    return pairing.component(full_mask(a.num_vars())) * (Rational(1) / scale);
}

std::string to_text(const Form& a) {
    std::ostringstream out;
    for (const auto& [tuple, poly] : a.lex_components()) {
        bool first = true;
        for (int i : tuple) {
            if (!first) out << " ";
            first = false;
            out << (i + 1);
        }
        out << " : " << poly->str() << "\n";
    }
    return out.str();
}

Form form_from_text(int num_vars, int degree, std::string_view text) {
    Form f(num_vars, degree);
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto colon = line.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("form line missing ':'");
        std::istringstream head(line.substr(0, colon));
        std::vector<int> idx;
        int v;
        while (head >> v) {
            if (v < 1 || v > num_vars) throw std::invalid_argument("form index out of range");
            idx.push_back(v - 1);
        }
        f.add_term(idx, Poly::parse(num_vars, line.substr(colon + 1)));
    }
    return f;
}

CompiledForm CompiledForm::from(const Form& f) {
    CompiledForm c;
    c.num_vars = f.num_vars();
    c.degree = f.degree();
    for (unsigned m : detail::masks_lex_order(f.num_vars(), f.degree())) {
        c.masks.push_back(m);
        c.comps.push_back(CompiledPoly::from(f.component(m)));
    }
    return c;
}

void CompiledForm::eval(std::span<const double> x, std::span<double> out) const {
    for (size_t i = 0; i < comps.size(); ++i) out[i] = comps[i].eval(x);
}

}  // namespace formlab::ext
