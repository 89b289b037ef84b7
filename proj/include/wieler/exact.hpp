#pragma once
// Exact integer and rational matrices: Smith normal form, rank, column
// spaces, characteristic polynomials.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <utility>
#include <vector>

namespace wieler {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}
    Matrix(std::initializer_list<std::initializer_list<T>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_) throw std::invalid_argument("ragged matrix initializer");
            for (const auto& x : row) data_.push_back(x);
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }
    [[nodiscard]] bool square() const { return rows_ == cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    [[nodiscard]] Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    [[nodiscard]] Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
        Matrix b(nr, nc);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
        return b;
    }

    [[nodiscard]] std::vector<T> column(std::size_t j) const {
        std::vector<T> c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product shape mismatch");
        Matrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T& aik = a(i, k);
                if (aik == 0) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }

    friend std::vector<T> operator*(const Matrix& a, const std::vector<T>& x) {
        if (a.cols_ != x.size()) throw std::invalid_argument("matrix-vector shape mismatch");
        std::vector<T> y(a.rows_, T(0));
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t j = 0; j < a.cols_; ++j) y[i] += a(i, j) * x[j];
        return y;
    }

    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        Matrix c = a;
        for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] -= b.data_[i];
        return c;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    [[nodiscard]] Matrix pow(unsigned k) const {
        Matrix result = identity(rows_);
        Matrix base = *this;
        while (k) {
            if (k & 1u) result = result * base;
            k >>= 1u;
            if (k) base = base * base;
        }
        return result;
    }

    template <class U>
    [[nodiscard]] Matrix<U> cast() const {
        Matrix<U> m(rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(i, j) = U((*this)(i, j));
        return m;
    }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
    }
    void swap_cols(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
    }
    // row[dst] += k * row[src]
    void add_row(std::size_t dst, std::size_t src, const T& k) {
        for (std::size_t j = 0; j < cols_; ++j) (*this)(dst, j) += k * (*this)(src, j);
    }
    // col[dst] += k * col[src]
    void add_col(std::size_t dst, std::size_t src, const T& k) {
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, dst) += k * (*this)(i, src);
    }
    void negate_row(std::size_t r) {
        for (std::size_t j = 0; j < cols_; ++j) (*this)(r, j) = -(*this)(r, j);
    }
    void negate_col(std::size_t c) {
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, c) = -(*this)(i, c);
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using IntMatrix = Matrix<Integer>;
using RatMatrix = Matrix<Rational>;

template <class T>
std::ostream& operator<<(std::ostream& os, const Matrix<T>& m) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        os << (i ? "\n[" : "[");
        for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << m(i, j);
        os << "]";
    }
    return os;
}

inline Integer floor_div(const Integer& a, const Integer& b) {
    Integer q = a / b;  // truncates toward zero
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

/// Smith normal form P * D * Q = S with P, Q unimodular and S diagonal,
/// s_1 | s_2 | ... | s_r, all s_i > 0. The inverses of P and Q are tracked
/// alongside so that D = P^{-1} S Q^{-1} can be checked exactly.
struct SmithForm {
    IntMatrix P, P_inv, Q, Q_inv;
    std::vector<Integer> diagonal;  // the r nonzero invariant factors
    std::size_t rank = 0;

    [[nodiscard]] IntMatrix S(std::size_t rows, std::size_t cols) const {
        IntMatrix s(rows, cols);
        for (std::size_t i = 0; i < diagonal.size(); ++i) s(i, i) = diagonal[i];
        return s;
    }
};

inline SmithForm smith_normal_form(const IntMatrix& input) {
    const std::size_t m = input.rows();
    const std::size_t n = input.cols();
    IntMatrix A = input;
    SmithForm out;
    out.P = IntMatrix::identity(m);
    out.P_inv = IntMatrix::identity(m);
    out.Q = IntMatrix::identity(n);
    out.Q_inv = IntMatrix::identity(n);

    // Row operation bookkeeping: A <- E A, P <- E P, P_inv <- P_inv E^{-1}.
    auto row_swap = [&](std::size_t a, std::size_t b) {
        A.swap_rows(a, b);
        out.P.swap_rows(a, b);
        out.P_inv.swap_cols(a, b);
    };
    auto row_add = [&](std::size_t dst, std::size_t src, const Integer& k) {
        A.add_row(dst, src, k);
        out.P.add_row(dst, src, k);
        out.P_inv.add_col(src, dst, -k);
    };
    auto row_neg = [&](std::size_t r) {
        A.negate_row(r);
        out.P.negate_row(r);
        out.P_inv.negate_col(r);
    };
    // Column operation bookkeeping: A <- A E, Q <- Q E, Q_inv <- E^{-1} Q_inv.
    auto col_swap = [&](std::size_t a, std::size_t b) {
        A.swap_cols(a, b);
        out.Q.swap_cols(a, b);
        out.Q_inv.swap_rows(a, b);
    };
    auto col_add = [&](std::size_t dst, std::size_t src, const Integer& k) {
        A.add_col(dst, src, k);
        out.Q.add_col(dst, src, k);
        out.Q_inv.add_row(src, dst, -k);
    };

    std::size_t t = 0;
    while (t < m && t < n) {
        // pivot: smallest nonzero |entry| in the trailing block
        std::optional<std::pair<std::size_t, std::size_t>> piv;
        for (std::size_t i = t; i < m; ++i)
            for (std::size_t j = t; j < n; ++j)
                if (A(i, j) != 0 && (!piv || abs(A(i, j)) < abs(A(piv->first, piv->second)))) piv = {i, j};
        if (!piv) break;
        row_swap(t, piv->first);
        col_swap(t, piv->second);

        for (;;) {
            bool dirty = false;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (A(i, t) == 0) continue;
                row_add(i, t, -floor_div(A(i, t), A(t, t)));
                if (A(i, t) != 0) {
                    row_swap(t, i);
                    dirty = true;
                }
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (A(t, j) == 0) continue;
                col_add(j, t, -floor_div(A(t, j), A(t, t)));
                if (A(t, j) != 0) {
                    col_swap(t, j);
                    dirty = true;
                }
            }
            if (dirty) continue;
            // row and column cleared; enforce divisibility of the trailing block
            std::optional<std::size_t> bad_row;
            for (std::size_t i = t + 1; i < m && !bad_row; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (A(i, j) % A(t, t) != 0) {
                        bad_row = i;
                        break;
                    }
            if (!bad_row) break;
            row_add(t, *bad_row, Integer(1));
        }
        if (A(t, t) < 0) row_neg(t);
        out.diagonal.push_back(A(t, t));
        ++t;
    }
    out.rank = out.diagonal.size();
    return out;
}

inline Integer determinant(const IntMatrix& a) {
    if (!a.square()) throw std::invalid_argument("determinant of non-square matrix");
    // Bareiss fraction-free elimination
    IntMatrix m = a;
    const std::size_t n = m.rows();
    Integer sign = 1, prev = 1;
    for (std::size_t k = 0; k < n; ++k) {
        if (m(k, k) == 0) {
            std::size_t r = k + 1;
            while (r < n && m(r, k) == 0) ++r;
            if (r == n) return 0;
            m.swap_rows(k, r);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
        prev = m(k, k);
    }
    return n ? sign * m(n - 1, n - 1) : Integer(1);
}

/// Reduced row echelon form over Q; returns pivot columns.
inline std::vector<std::size_t> rref(RatMatrix& m) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && m(p, c) == 0) ++p;
        if (p == m.rows()) continue;
        m.swap_rows(r, p);
        const Rational inv = Rational(1) / m(r, c);
        for (std::size_t j = 0; j < m.cols(); ++j) m(r, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i)
            if (i != r && m(i, c) != 0) m.add_row(i, r, -m(i, c));
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

inline std::size_t rank(const RatMatrix& a) {
    RatMatrix m = a;
    return rref(m).size();
}

inline std::size_t rank(const IntMatrix& a) { return rank(a.cast<Rational>()); }

/// Basis of the column space, as the pivot columns of the matrix itself.
inline RatMatrix column_space_basis(const RatMatrix& a) {
    RatMatrix m = a;
    const auto piv = rref(m);
    RatMatrix b(a.rows(), piv.size());
    for (std::size_t k = 0; k < piv.size(); ++k)
        for (std::size_t i = 0; i < a.rows(); ++i) b(i, k) = a(i, piv[k]);
    return b;
}

/// Solve B X = Y exactly for B of full column rank; throws if inconsistent.
inline RatMatrix solve_full_column_rank(const RatMatrix& B, const RatMatrix& Y) {
    if (B.rows() != Y.rows()) throw std::invalid_argument("solve: shape mismatch");
    RatMatrix aug(B.rows(), B.cols() + Y.cols());
    for (std::size_t i = 0; i < B.rows(); ++i) {
        for (std::size_t j = 0; j < B.cols(); ++j) aug(i, j) = B(i, j);
        for (std::size_t j = 0; j < Y.cols(); ++j) aug(i, B.cols() + j) = Y(i, j);
    }
    const auto piv = rref(aug);
    for (std::size_t k = 0; k < piv.size(); ++k)
        if (piv[k] != k) throw std::domain_error("solve: inconsistent system or rank-deficient basis");
    if (piv.size() != B.cols()) throw std::domain_error("solve: right-hand side outside the column space");
    RatMatrix X(B.cols(), Y.cols());
    for (std::size_t i = 0; i < B.cols(); ++i)
        for (std::size_t j = 0; j < Y.cols(); ++j) X(i, j) = aug(i, B.cols() + j);
    return X;
}

inline RatMatrix inverse(const RatMatrix& a) {
    if (!a.square()) throw std::invalid_argument("inverse of non-square matrix");
    return solve_full_column_rank(a, RatMatrix::identity(a.rows()));
}

/// Characteristic polynomial det(xI - A), coefficients from degree 0 upward
/// (monic). Faddeev-LeVerrier over Q.
inline std::vector<Rational> characteristic_polynomial(const RatMatrix& a) {
    if (!a.square()) throw std::invalid_argument("characteristic polynomial of non-square matrix");
    const std::size_t n = a.rows();
    std::vector<Rational> c(n + 1);
    c[n] = 1;
    RatMatrix Mk(n, n);  // M_0 = 0
    for (std::size_t k = 1; k <= n; ++k) {
        RatMatrix next = a * Mk;
        for (std::size_t i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
        Mk = std::move(next);
        Rational tr = 0;
        RatMatrix AM = a * Mk;
        for (std::size_t i = 0; i < n; ++i) tr += AM(i, i);
        c[n - k] = -tr / Rational(static_cast<long long>(k));
    }
    return c;
}

inline std::vector<Integer> characteristic_polynomial(const IntMatrix& a) {
    const auto c = characteristic_polynomial(a.cast<Rational>());
    std::vector<Integer> out;
    out.reserve(c.size());
    for (const auto& x : c) {
        if (denominator(x) != 1) throw std::logic_error("integer matrix with non-integral characteristic polynomial");
        out.push_back(numerator(x));
    }
    return out;
}

inline bool is_unimodular(const IntMatrix& a) {
    if (!a.square()) return false;
    const Integer d = determinant(a);
    return d == 1 || d == -1;
}

}  // namespace wieler
