#pragma once

#include "formlab/rational.hpp"

#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <vector>

namespace formlab {

/// Small dense matrix over exact rationals. Row-major.
class RatMatrix {
public:
    RatMatrix() = default;
    RatMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}
    RatMatrix(std::initializer_list<std::initializer_list<Rational>> init) {
        rows_ = static_cast<int>(init.size());
        cols_ = rows_ ? static_cast<int>(init.begin()->size()) : 0;
        a_.reserve(static_cast<size_t>(rows_) * cols_);
        for (const auto& row : init) {
            if (static_cast<int>(row.size()) != cols_) throw std::invalid_argument("ragged initializer");
            for (const auto& v : row) a_.push_back(v);
        }
    }

    static RatMatrix identity(int n) {
        RatMatrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Rational& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const Rational& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    bool operator==(const RatMatrix& o) const = default;

    RatMatrix transposed() const {
        RatMatrix t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    RatMatrix operator*(const RatMatrix& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("matrix product shape mismatch");
        RatMatrix r(rows_, o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                const Rational& v = (*this)(i, k);
                if (v == 0) continue;
                for (int j = 0; j < o.cols_; ++j) r(i, j) += v * o(k, j);
            }
        return r;
    }

    RatVector operator*(const RatVector& x) const {
        if (cols_ != static_cast<int>(x.size())) throw std::invalid_argument("matrix-vector shape mismatch");
        RatVector y(rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) y[i] += (*this)(i, j) * x[j];
        return y;
    }

    bool is_symmetric() const {
        if (rows_ != cols_) return false;
        for (int i = 0; i < rows_; ++i)
            for (int j = i + 1; j < cols_; ++j)
                if ((*this)(i, j) != (*this)(j, i)) return false;
        return true;
    }

    Rational trace() const {
        Rational t = 0;
        for (int i = 0; i < rows_; ++i) t += (*this)(i, i);
        return t;
    }

    Rational det() const {
        if (rows_ != cols_) throw std::invalid_argument("det of non-square matrix");
        RatMatrix m = *this;
        Rational d = 1;
        for (int c = 0; c < cols_; ++c) {
            int p = -1;
            for (int r = c; r < rows_; ++r)
                if (m(r, c) != 0) {
                    p = r;
                    break;
                }
            if (p < 0) return 0;
            if (p != c) {
                for (int j = 0; j < cols_; ++j) std::swap(m(p, j), m(c, j));
                d = -d;
            }
            d *= m(c, c);
            for (int r = c + 1; r < rows_; ++r) {
                if (m(r, c) == 0) continue;
                Rational f = m(r, c) / m(c, c);
                for (int j = c; j < cols_; ++j) m(r, j) -= f * m(c, j);
            }
        }
        return d;
    }

    int rank() const {
        RatMatrix m = *this;
        int rank = 0;
        for (int c = 0; c < cols_ && rank < rows_; ++c) {
            int p = -1;
            for (int r = rank; r < rows_; ++r)
                if (m(r, c) != 0) {
                    p = r;
                    break;
                }
            if (p < 0) continue;
            for (int j = 0; j < cols_; ++j) std::swap(m(p, j), m(rank, j));
            for (int r = rank + 1; r < rows_; ++r) {
                if (m(r, c) == 0) continue;
                Rational f = m(r, c) / m(rank, c);
                for (int j = c; j < cols_; ++j) m(r, j) -= f * m(rank, j);
            }
            ++rank;
        }
        return rank;
    }

    std::optional<RatMatrix> inverse() const {
        if (rows_ != cols_) throw std::invalid_argument("inverse of non-square matrix");
        RatMatrix m = *this;
        RatMatrix inv = identity(rows_);
        for (int c = 0; c < cols_; ++c) {
            int p = -1;
            for (int r = c; r < rows_; ++r)
                if (m(r, c) != 0) {
                    p = r;
                    break;
                }
            if (p < 0) return std::nullopt;
            for (int j = 0; j < cols_; ++j) {
                std::swap(m(p, j), m(c, j));
                std::swap(inv(p, j), inv(c, j));
            }
            Rational piv = m(c, c);
            for (int j = 0; j < cols_; ++j) {
                m(c, j) /= piv;
                inv(c, j) /= piv;
            }
            for (int r = 0; r < rows_; ++r) {
                if (r == c || m(r, c) == 0) continue;
                Rational f = m(r, c);
                for (int j = 0; j < cols_; ++j) {
                    m(r, j) -= f * m(c, j);
                    inv(r, j) -= f * inv(c, j);
                }
            }
        }
        return inv;
    }

    /// Null space basis (exact), as columns.
    std::vector<RatVector> kernel() const {
        RatMatrix m = *this;
        std::vector<int> pivot_col;
        int rank = 0;
        for (int c = 0; c < cols_ && rank < rows_; ++c) {
            int p = -1;
            for (int r = rank; r < rows_; ++r)
                if (m(r, c) != 0) {
                    p = r;
                    break;
                }
            if (p < 0) continue;
            for (int j = 0; j < cols_; ++j) std::swap(m(p, j), m(rank, j));
            Rational piv = m(rank, c);
            for (int j = 0; j < cols_; ++j) m(rank, j) /= piv;
            for (int r = 0; r < rows_; ++r) {
                if (r == rank || m(r, c) == 0) continue;
                Rational f = m(r, c);
                for (int j = 0; j < cols_; ++j) m(r, j) -= f * m(rank, j);
            }
            pivot_col.push_back(c);
            ++rank;
        }
        std::vector<RatVector> basis;
        for (int c = 0; c < cols_; ++c) {
            bool is_pivot = false;
            for (int pc : pivot_col)
                if (pc == c) is_pivot = true;
            if (is_pivot) continue;
            RatVector v(cols_, Rational(0));
            v[c] = 1;
            for (int r = 0; r < rank; ++r) v[pivot_col[r]] = -m(r, c);
            basis.push_back(std::move(v));
        }
        return basis;
    }

    /// LDL^T of a symmetric matrix: returns (L unit lower triangular, D diagonal entries).
    /// Fails (nullopt) if a leading principal minor vanishes.
    std::optional<std::pair<RatMatrix, RatVector>> ldlt() const {
        if (!is_symmetric()) return std::nullopt;
        const int n = rows_;
        RatMatrix L = identity(n);
        RatVector d(n);
        for (int j = 0; j < n; ++j) {
            Rational dj = (*this)(j, j);
            for (int k = 0; k < j; ++k) dj -= L(j, k) * L(j, k) * d[k];
            if (dj == 0) return std::nullopt;
            d[j] = dj;
            for (int i = j + 1; i < n; ++i) {
                Rational v = (*this)(i, j);
                for (int k = 0; k < j; ++k) v -= L(i, k) * L(j, k) * d[k];
                L(i, j) = v / dj;
            }
        }
        return std::make_pair(std::move(L), std::move(d));
    }

    bool is_positive_definite() const {
        auto f = ldlt();
        if (!f) return false;
        for (const auto& d : f->second)
            if (d <= 0) return false;
        return true;
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Rational> a_;
};

/// Solve A x = b exactly; nullopt if singular.
inline std::optional<RatVector> solve(const RatMatrix& A, const RatVector& b) {
    auto inv = A.inverse();
    if (!inv) return std::nullopt;
    return (*inv) * b;
}

}  // namespace formlab
