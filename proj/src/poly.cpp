#include "formlab/poly.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace formlab::ext {

namespace {

void check_vars(int num_vars) {
    if (num_vars != 3 && num_vars != 4) throw std::invalid_argument("num_vars must be 3 or 4");
}

/// Display order: higher total degree first, then descending lex on exponents,
/// so e.g. "2*x1*x3 - 2*x2*x4 - x3*x4" keeps the x1 terms in front.
bool graded_lex_less(const Monomial& a, const Monomial& b) {
    if (a.degree() != b.degree()) return a.degree() > b.degree();
    return a.e > b.e;
}

}  // namespace

Poly::Poly(int num_vars) : num_vars_(num_vars) { check_vars(num_vars); }

Poly Poly::constant(int num_vars, const Rational& c) {
    Poly p(num_vars);
    p.add_term(Monomial{}, c);
    return p;
}

Poly Poly::variable(int num_vars, int i) {
    check_vars(num_vars);
    if (i < 0 || i >= num_vars) throw std::invalid_argument("variable index out of range");
    Monomial m;
    m.e[static_cast<size_t>(i)] = 1;
    return monomial(num_vars, m, 1);
}

Poly Poly::monomial(int num_vars, const Monomial& m, const Rational& c) {
    Poly p(num_vars);
    p.add_term(m, c);
    return p;
}

void Poly::add_term(const Monomial& m, const Rational& c) {
    for (int i = num_vars_; i < 4; ++i)
        if (m.e[static_cast<size_t>(i)] != 0) throw std::invalid_argument("exponent on missing variable");
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Poly Poly::operator+(const Poly& o) const {
    Poly r = *this;
    r += o;
    return r;
}

Poly& Poly::operator+=(const Poly& o) {
    if (num_vars_ != o.num_vars_) throw std::invalid_argument("num_vars mismatch");
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

Poly Poly::operator-(const Poly& o) const {
    Poly r = *this;
    r -= o;
    return r;
}

Poly& Poly::operator-=(const Poly& o) {
    if (num_vars_ != o.num_vars_) throw std::invalid_argument("num_vars mismatch");
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

Poly Poly::operator-() const {
    Poly r(num_vars_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
}

Poly Poly::operator*(const Poly& o) const {
    if (num_vars_ != o.num_vars_) throw std::invalid_argument("num_vars mismatch");
    Poly r(num_vars_);
    for (const auto& [ma, ca] : terms_)
        for (const auto& [mb, cb] : o.terms_) {
            Monomial m;
            for (size_t i = 0; i < 4; ++i) {
                int s = ma.e[i] + mb.e[i];
                if (s > 255) throw std::overflow_error("monomial degree overflow");
                m.e[i] = static_cast<std::uint8_t>(s);
            }
            r.add_term(m, ca * cb);
        }
    return r;
}

Poly Poly::operator*(const Rational& c) const {
    Poly r(num_vars_);
    if (c == 0) return r;
    for (const auto& [m, v] : terms_) r.terms_.emplace(m, v * c);
    return r;
}

Poly Poly::derivative(int i) const {
    if (i < 0 || i >= num_vars_) throw std::invalid_argument("derivative index out of range");
    Poly r(num_vars_);
    for (const auto& [m, c] : terms_) {
        const auto ei = m.e[static_cast<size_t>(i)];
        if (ei == 0) continue;
        Monomial d = m;
        d.e[static_cast<size_t>(i)] = static_cast<std::uint8_t>(ei - 1);
        r.add_term(d, c * ei);
    }
    return r;
}

Rational Poly::eval(std::span<const Rational> x) const {
    if (static_cast<int>(x.size()) != num_vars_) throw std::invalid_argument("point dimension mismatch");
    Rational total = 0;
    for (const auto& [m, c] : terms_) {
        Rational t = c;
        for (int i = 0; i < num_vars_; ++i)
            for (int k = 0; k < m.e[static_cast<size_t>(i)]; ++k) t *= x[static_cast<size_t>(i)];
        total += t;
    }
    return total;
}

double Poly::eval_d(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != num_vars_) throw std::invalid_argument("point dimension mismatch");
    double total = 0;
    for (const auto& [m, c] : terms_) {
        double t = to_double(c);
        for (int i = 0; i < num_vars_; ++i)
            for (int k = 0; k < m.e[static_cast<size_t>(i)]; ++k) t *= x[static_cast<size_t>(i)];
        total += t;
    }
    return total;
}

Poly Poly::substitute_linear(const RatMatrix& m) const {
    if (m.rows() != num_vars_ || m.cols() != num_vars_) throw std::invalid_argument("substitution matrix shape");
    // Images of the variables: x_i -> sum_j m(i,j) x_j.
    std::vector<Poly> image;
    image.reserve(static_cast<size_t>(num_vars_));
    for (int i = 0; i < num_vars_; ++i) {
        Poly li(num_vars_);
        for (int j = 0; j < num_vars_; ++j) {
            Monomial mono;
            mono.e[static_cast<size_t>(j)] = 1;
            li.add_term(mono, m(i, j));
        }
        image.push_back(std::move(li));
    }
    Poly r(num_vars_);
    for (const auto& [mono, c] : terms_) {
        Poly t = Poly::constant(num_vars_, c);
        for (int i = 0; i < num_vars_; ++i)
            for (int k = 0; k < mono.e[static_cast<size_t>(i)]; ++k) t = t * image[static_cast<size_t>(i)];
        r += t;
    }
    return r;
}

int Poly::total_degree() const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
    return d;
}

bool Poly::is_homogeneous(int* degree_out) const {
    if (terms_.empty()) {
        if (degree_out) *degree_out = -1;
        return true;
    }
    const int d = terms_.begin()->first.degree();
    for (const auto& [m, c] : terms_)
        if (m.degree() != d) return false;
    if (degree_out) *degree_out = d;
    return true;
}

std::map<int, Poly> Poly::homogeneous_parts() const {
    std::map<int, Poly> parts;
    for (const auto& [m, c] : terms_) {
        auto [it, inserted] = parts.emplace(m.degree(), Poly(num_vars_));
        it->second.add_term(m, c);
    }
    return parts;
}

std::string Poly::str() const {
    if (terms_.empty()) return "0";
    std::vector<std::pair<Monomial, Rational>> items(terms_.begin(), terms_.end());
    std::sort(items.begin(), items.end(),
              [](const auto& a, const auto& b) { return graded_lex_less(a.first, b.first); });
    std::ostringstream out;
    bool first = true;
    for (const auto& [m, c] : items) {
        Rational a = c;
        if (first) {
            if (a < 0) {
                out << "-";
                a = -a;
            }
        } else {
            out << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        first = false;
        const bool has_vars = m.degree() > 0;
        if (!has_vars || a != 1) {
            out << to_string(a);
            if (has_vars) out << "*";
        }
        bool first_var = true;
        for (int i = 0; i < num_vars_; ++i) {
            const int e = m.e[static_cast<size_t>(i)];
            if (e == 0) continue;
            if (!first_var) out << "*";
            first_var = false;
            out << "x" << (i + 1);
            if (e > 1) out << "^" << e;
        }
    }
    return out.str();
}

namespace {

struct Lexer {
    std::string_view s;
    size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= s.size();
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    bool accept(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    BigInt integer() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) throw std::invalid_argument("expected integer in polynomial at offset " + std::to_string(start));
        return BigInt(std::string(s.substr(start, pos - start)));
    }
};

}  // namespace

Poly Poly::parse(int num_vars, std::string_view text) {
    check_vars(num_vars);
    Lexer lx{text};
    Poly result(num_vars);
    if (lx.eof()) throw std::invalid_argument("empty polynomial");
    bool first = true;
    while (!lx.eof()) {
        int sign = 1;
        if (lx.accept('-'))
            sign = -1;
        else if (lx.accept('+')) {
            if (first) throw std::invalid_argument("leading '+' not allowed");
        } else if (!first) {
            throw std::invalid_argument("expected '+' or '-' between terms");
        }
        first = false;
        Rational coef = sign;
        Monomial m;
        bool saw_factor = false;
        bool expect_factor = true;
        while (expect_factor) {
            char c = lx.peek();
            if (std::isdigit(static_cast<unsigned char>(c))) {
                BigInt num = lx.integer();
                if (lx.accept('/')) {
                    BigInt den = lx.integer();
                    if (den == 0) throw std::invalid_argument("zero denominator");
                    coef *= Rational(num, den);
                } else {
                    coef *= Rational(num);
                }
                saw_factor = true;
            } else if (c == 'x') {
                ++lx.pos;
                BigInt idx = lx.integer();
                if (idx < 1 || idx > num_vars) throw std::invalid_argument("variable index out of range");
                int power = 1;
                if (lx.accept('^')) power = static_cast<int>(lx.integer());
                auto& slot = m.e[static_cast<size_t>(static_cast<int>(idx) - 1)];
                if (slot + power > 255) throw std::overflow_error("exponent overflow");
                slot = static_cast<std::uint8_t>(slot + power);
                saw_factor = true;
            } else {
                throw std::invalid_argument("unexpected character in polynomial");
            }
            expect_factor = lx.accept('*');
        }
        if (!saw_factor) throw std::invalid_argument("empty term");
        result.add_term(m, coef);
    }
    return result;
}

CompiledPoly CompiledPoly::from(const Poly& p) {
    CompiledPoly c;
    c.num_vars = p.num_vars();
    c.terms.reserve(p.terms().size());
    for (const auto& [m, coef] : p.terms()) c.terms.push_back({to_double(coef), m.e});
    return c;
}

double CompiledPoly::eval(std::span<const double> x) const {
    double total = 0;
    for (const auto& t : terms) {
        double v = t.c;
        for (int i = 0; i < num_vars; ++i) {
            const auto& e = t.e[static_cast<size_t>(i)];
            for (int k = 0; k < e; ++k) v *= x[static_cast<size_t>(i)];
        }
        total += v;
    }
    return total;
}

}  // namespace formlab::ext
