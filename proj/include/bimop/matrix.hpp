#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bimop/errors.hpp"
#include "bimop/scalar.hpp"

namespace bimop {

/// Dense row-major matrix.
template <Scalar T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, ScalarTraits<T>::zero()) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows_ * cols_)
            throw DimensionMismatch("matrix data has " + std::to_string(data_.size()) +
                                    " entries, expected " + std::to_string(rows_ * cols_));
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = ScalarTraits<T>::one();
        return m;
    }

    /// Row-major nested initializer, e.g. from_rows({{1, 2}, {3, 4}}).
    static Matrix from_rows(const std::vector<std::vector<T>>& rows) {
        const std::size_t r = rows.size();
        const std::size_t c = r ? rows.front().size() : 0;
        Matrix m(r, c);
        for (std::size_t i = 0; i < r; ++i) {
            if (rows[i].size() != c) throw DimensionMismatch("ragged row list");
            for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
    const std::vector<T>& data() const noexcept { return data_; }

    Matrix transposed() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    std::vector<T> operator*(std::span<const T> x) const {
        if (x.size() != cols_) throw DimensionMismatch("matrix-vector size mismatch");
        std::vector<T> y(rows_, ScalarTraits<T>::zero());
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) y[i] += (*this)(i, j) * x[j];
        return y;
    }

    Matrix operator*(const Matrix& rhs) const {
        if (cols_ != rhs.rows_) throw DimensionMismatch("matrix product size mismatch");
        Matrix out(rows_, rhs.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                if (is_zero((*this)(i, k))) continue;
                for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += (*this)(i, k) * rhs(k, j);
            }
        return out;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

namespace detail {

inline void require_square(std::size_t rows, std::size_t cols) {
    if (rows != cols)
        throw NotSquare("expected a square matrix, got " + std::to_string(rows) + "x" + std::to_string(cols));
}

template <Scalar T>
double max_row_norm(const Matrix<T>& m) {
    double best = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) s += ScalarTraits<T>::magnitude(m(i, j));
        best = std::max(best, s);
    }
    return best;
}

/// Fraction-free elimination. Every intermediate is the determinant of a minor,
/// so integer input stays integral and the final pivot is det(m).
inline Rational bareiss(Matrix<Rational> a) {
    const std::size_t n = a.rows();
    if (n == 0) return Rational(1);
    int sign = 1;
    Rational prev(1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (sgn(a(k, k)) == 0) {
            std::size_t p = k + 1;
            while (p < n && sgn(a(p, k)) == 0) ++p;
            if (p == n) return Rational(0);
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                Rational v = a(k, k) * a(i, j) - a(i, k) * a(k, j);
                a(i, j) = v / prev;
            }
        }
        prev = a(k, k);
    }
    Rational d = a(n - 1, n - 1);
    return sign < 0 ? Rational(-d) : d;
}

/// Partial-pivot LU, returns the product of pivots.
inline double lu_det(Matrix<double> a) {
    const std::size_t n = a.rows();
    double det = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::fabs(a(i, k)) > std::fabs(a(p, k))) p = i;
        if (a(p, k) == 0.0) return 0.0;
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            det = -det;
        }
        det *= a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a(i, k) / a(k, k);
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
        }
    }
    return det;
}

}  // namespace detail

template <Scalar T>
T det(const Matrix<T>& m) {
    detail::require_square(m.rows(), m.cols());
    if constexpr (ScalarTraits<T>::exact)
        return detail::bareiss(m);
    else
        return detail::lu_det(m);
}

/// Smallest |pivot| of partial-pivot elimination, relative to the max-row-norm,
/// after equilibrating columns and then rows to unit max-norm. Lies in [0, 1]
/// and is insensitive to per-row and per-column scaling; it behaves like a
/// reciprocal condition estimate. 0 means exactly singular in binary64.
template <Scalar T>
double relative_min_pivot(const Matrix<T>& m) {
    detail::require_square(m.rows(), m.cols());
    const std::size_t n = m.rows();
    if (n == 0) return 1.0;
    Matrix<double> a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = ScalarTraits<T>::to_double(m(i, j));
    for (std::size_t j = 0; j < n; ++j) {
        double c = 0.0;
        for (std::size_t i = 0; i < n; ++i) c = std::max(c, std::fabs(a(i, j)));
        if (c == 0.0) return 0.0;
        for (std::size_t i = 0; i < n; ++i) a(i, j) /= c;
    }
    for (std::size_t i = 0; i < n; ++i) {
        double c = 0.0;
        for (std::size_t j = 0; j < n; ++j) c = std::max(c, std::fabs(a(i, j)));
        if (c == 0.0) return 0.0;
        for (std::size_t j = 0; j < n; ++j) a(i, j) /= c;
    }
    const double norm = detail::max_row_norm(a);
    double smallest = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::fabs(a(i, k)) > std::fabs(a(p, k))) p = i;
        if (a(p, k) == 0.0) return 0.0;
        if (p != k)
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
        smallest = std::min(smallest, std::fabs(a(k, k)) / norm);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a(i, k) / a(k, k);
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
        }
    }
    return smallest;
}

/// Solves m x = rhs. Exact mode eliminates with the first nonzero pivot and is
/// exact; float mode uses partial pivoting and declares the system singular
/// when |pivot| <= tol.singular * max-row-norm.
template <Scalar T>
std::vector<T> solve(const Matrix<T>& m, std::span<const T> rhs, const Tolerance& tol = {}) {
    detail::require_square(m.rows(), m.cols());
    const std::size_t n = m.rows();
    if (rhs.size() != n)
        throw DimensionMismatch("rhs has " + std::to_string(rhs.size()) + " entries, expected " + std::to_string(n));

    Matrix<T> a = m;
    std::vector<T> b(rhs.begin(), rhs.end());
    const double threshold = ScalarTraits<T>::exact ? 0.0 : tol.singular * detail::max_row_norm(m);

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        if constexpr (ScalarTraits<T>::exact) {
            while (p < n && is_zero(a(p, k))) ++p;
            if (p == n) throw Singular("0");
        } else {
            for (std::size_t i = k + 1; i < n; ++i)
                if (std::fabs(a(i, k)) > std::fabs(a(p, k))) p = i;
            if (std::fabs(a(p, k)) <= threshold) throw Singular(to_string(detail::lu_det(m)));
        }
        if (p != k) {
            for (std::size_t j = k; j < n; ++j) std::swap(a(k, j), a(p, j));
            std::swap(b[k], b[p]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            if (is_zero(a(i, k))) continue;
            const T f = a(i, k) / a(k, k);
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
            b[i] -= f * b[k];
        }
    }
    std::vector<T> x(n, ScalarTraits<T>::zero());
    for (std::size_t k = n; k-- > 0;) {
        T acc = b[k];
        for (std::size_t j = k + 1; j < n; ++j) acc -= a(k, j) * x[j];
        x[k] = acc / a(k, k);
    }
    return x;
}

template <Scalar T>
std::vector<T> solve(const Matrix<T>& m, const std::vector<T>& rhs, const Tolerance& tol = {}) {
    return solve(m, std::span<const T>(rhs), tol);
}

}  // namespace bimop
