#include "formlab/nearsym/model.hpp"

#include <cmath>
#include <stdexcept>

namespace formlab::nearsym {

namespace {

Form basis2(int i, int j) {
    const int idx[2] = {i, j};
    return Form::basis(4, idx);
}

}  // namespace

Form sd_basis(int i) {
    switch (i) {
        case 1: return basis2(0, 1) + basis2(2, 3);
        case 2: return basis2(0, 2) - basis2(1, 3);
        case 3: return basis2(0, 3) + basis2(1, 2);
        default: throw std::invalid_argument("sd_basis index must be 1, 2 or 3");
    }
}

Form asd_basis(int i) {
    switch (i) {
        case 1: return basis2(0, 1) - basis2(2, 3);
        case 2: return basis2(0, 2) + basis2(1, 3);
        case 3: return basis2(0, 3) - basis2(1, 2);
        default: throw std::invalid_argument("asd_basis index must be 1, 2 or 3");
    }
}

Poly model_f(int i) {
    switch (i) {
        case 1: return Poly::parse(4, "2*x1*x3 - 2*x2*x4 - x3*x4");
        case 2: return Poly::parse(4, "-4*x1*x2 - x1*x3");
        case 3: return Poly::parse(4, "x2^2 + x3^2 - 3*x1^2 + x1*x4 + x4^2");
        default: throw std::invalid_argument("model_f index must be 1, 2 or 3");
    }
}

Poly model_h() { return Poly::parse(4, "3*x1^2 - x1*x4 - x4^2"); }

std::array<double, 2> model_zero_line_slopes() {
    const double s = std::sqrt(13.0);
    return {(-1.0 + s) / 2.0, (-1.0 - s) / 2.0};
}

Form build_model_form(const Rational& eps) {
    if (eps < 0) throw std::invalid_argument("build_model_form: eps must be >= 0");
    Form w(4, 2);
    for (int i = 1; i <= 3; ++i) w += sd_basis(i) * model_f(i);
    w += sd_basis(3) * eps;
    return w;
}

SdDecomposition sd_decompose(const Form& w) {
    if (w.num_vars() != 4 || w.degree() != 2) throw std::invalid_argument("sd_decompose expects a 2-form on R^4");
    const auto frame = ext::FlatFrame::standard(4);
    SdDecomposition d{{Poly(4), Poly(4), Poly(4)}, {Poly(4), Poly(4), Poly(4)}};
    for (int i = 1; i <= 3; ++i) {
        d.sd[static_cast<size_t>(i - 1)] = ext::pointwise_inner(w, sd_basis(i), frame) * Rational(1, 2);
        d.asd[static_cast<size_t>(i - 1)] = ext::pointwise_inner(w, asd_basis(i), frame) * Rational(1, 2);
    }
    return d;
}

Form liouville_primitive(const Form& w) {
    if (w.degree() < 1) throw std::invalid_argument("liouville_primitive expects degree >= 1");
    if (!ext::exterior_d(w).is_zero())
        throw std::invalid_argument("liouville_primitive: form is not closed, no Euler primitive");
    const int n = w.num_vars();
    const int k = w.degree();
    const VectorField euler = VectorField::euler(n);

    // Split by coefficient homogeneity; each part of a closed form is closed.
    std::map<int, Form> parts;
    for (const auto& [mask, p] : w.components())
        for (const auto& [deg, hp] : p.homogeneous_parts()) {
            auto [it, inserted] = parts.emplace(deg, Form(n, k));
            it->second.add_mask_term(mask, hp);
        }

    Form lambda(n, k - 1);
    for (const auto& [deg, part] : parts)
        lambda += ext::interior_product(euler, part) * Rational(1, deg + k);
    return lambda;
}

std::vector<RatVector> model_zero_points_eps1(int count) {
    // Secant lines (x1, x4) = (1 + s, 1 + m s) through the rational point
    // (1, 1) on H = 1 meet the conic again at s = (3m - 5) / (3 - m - m^2).
    std::vector<RatVector> pts;
    pts.reserve(static_cast<size_t>(count));
    int k = 0;
    while (static_cast<int>(pts.size()) < count) {
        Rational m(k % 2 == 0 ? k : -k, 7);  // walk outward, mixing signs
        ++k;
        Rational denom = Rational(3) - m - m * m;
        if (denom == 0) continue;
        Rational s = (Rational(3) * m - 5) / denom;
        if (s == 0 && pts.size() > 1) continue;  // base point already listed once
        RatVector p{Rational(1) + s, Rational(0), Rational(0), Rational(1) + m * s};
        pts.push_back(std::move(p));
    }
    return pts;
}

std::optional<Rational> match_model_family(const Form& w) {
    if (w.num_vars() != 4 || w.degree() != 2) return std::nullopt;
    auto d = sd_decompose(w);
    if (!d.is_self_dual()) return std::nullopt;
    if (d.sd[0] != model_f(1) || d.sd[1] != model_f(2)) return std::nullopt;
    Poly diff = d.sd[2] - model_f(3);
    if (diff.is_zero()) return Rational(0);
    if (diff.terms().size() != 1 || diff.terms().begin()->first.degree() != 0) return std::nullopt;
    Rational c = diff.terms().begin()->second;
    if (c < 0) return std::nullopt;
    return c;
}

}  // namespace formlab::nearsym
