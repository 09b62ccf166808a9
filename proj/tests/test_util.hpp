#pragma once

#include "formlab/form.hpp"
#include "formlab/poly.hpp"

#include <cstdint>
#include <vector>

namespace formlab::testutil {

/// Deterministic 64-bit generator (splitmix64); identical across platforms.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        state += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, n).
    std::uint64_t below(std::uint64_t n) { return next() % n; }

    int int_in(int lo, int hi) { return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1))); }

    Rational rational(int max_abs_num = 9, int max_den = 4) {
        int num = int_in(-max_abs_num, max_abs_num);
        int den = int_in(1, max_den);
        return Rational(num, den);
    }

    double real(double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(next() >> 11) * 0x1.0p-53);
    }
};

inline ext::Poly random_poly(Rng& rng, int num_vars, int max_degree, int terms = 4) {
    ext::Poly p(num_vars);
    for (int t = 0; t < terms; ++t) {
        ext::Monomial m;
        int budget = rng.int_in(0, max_degree);
        for (int d = 0; d < budget; ++d) {
            int var = rng.int_in(0, num_vars - 1);
            m.e[static_cast<size_t>(var)]++;
        }
        p.add_term(m, rng.rational());
    }
    return p;
}

inline ext::Form random_form(Rng& rng, int num_vars, int degree, int max_coeff_degree = 3) {
    ext::Form f(num_vars, degree);
    for (unsigned mask : ext::detail::masks_lex_order(num_vars, degree))
        f.add_mask_term(mask, random_poly(rng, num_vars, max_coeff_degree));
    return f;
}

inline ext::VectorField random_vector_field(Rng& rng, int num_vars, int max_coeff_degree = 2) {
    std::vector<ext::Poly> comps;
    for (int i = 0; i < num_vars; ++i) comps.push_back(random_poly(rng, num_vars, max_coeff_degree));
    return ext::VectorField(std::move(comps));
}

}  // namespace formlab::testutil
