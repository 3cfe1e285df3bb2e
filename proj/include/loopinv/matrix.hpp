#pragma once

// Dense matrices over an exact field scalar (Rational or AlgebraicNumber).
// Scalars must support +,-,*, field_inv(), scalar_is_zero(), and default
// construction to zero.

#include <loopinv/rational.hpp>
#include <loopinv/unipoly.hpp>

#include <optional>
#include <vector>

namespace loopinv {

inline Rational field_inv(const Rational& q) {
    if (q == 0) throw std::domain_error("inverse of zero");
    return Rational(1) / q;
}
inline bool scalar_is_zero(const Rational& q) { return q == 0; }

template <class T>
class Mat {
  public:
    Mat() : rows_(0), cols_(0) {}
    Mat(size_t r, size_t c) : rows_(r), cols_(c), a_(r * c) {}
    Mat(size_t r, size_t c, const T& fill) : rows_(r), cols_(c), a_(r * c, fill) {}

    static Mat identity(size_t n, const T& one) {
        Mat m(n, n);
        for (size_t i = 0; i < n; ++i) m.at(i, i) = one;
        return m;
    }

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    T& at(size_t i, size_t j) { return a_[i * cols_ + j]; }
    const T& at(size_t i, size_t j) const { return a_[i * cols_ + j]; }

    bool operator==(const Mat& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }

    Mat operator*(const Mat& o) const {
        assert(cols_ == o.rows_);
        Mat r(rows_, o.cols_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t k = 0; k < cols_; ++k) {
                const T& v = at(i, k);
                if (scalar_is_zero(v)) continue;
                for (size_t j = 0; j < o.cols_; ++j) r.at(i, j) = r.at(i, j) + v * o.at(k, j);
            }
        return r;
    }

    std::vector<T> operator*(const std::vector<T>& v) const {
        assert(cols_ == v.size());
        std::vector<T> r(rows_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j) r[i] = r[i] + at(i, j) * v[j];
        return r;
    }

    Mat operator+(const Mat& o) const {
        assert(rows_ == o.rows_ && cols_ == o.cols_);
        Mat r(rows_, cols_);
        for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
        return r;
    }
    Mat operator-(const Mat& o) const {
        assert(rows_ == o.rows_ && cols_ == o.cols_);
        Mat r(rows_, cols_);
        for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
        return r;
    }
    Mat operator*(const T& s) const {
        Mat r(rows_, cols_);
        for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] * s;
        return r;
    }

    Mat transpose() const {
        Mat r(cols_, rows_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
        return r;
    }

    bool is_zero() const {
        for (const auto& v : a_)
            if (!scalar_is_zero(v)) return false;
        return true;
    }

    Mat pow(unsigned long e, const T& one) const {
        assert(rows_ == cols_);
        Mat r = identity(rows_, one);
        Mat b = *this;
        while (e) {
            if (e & 1) r = r * b;
            b = b * b;
            e >>= 1;
        }
        return r;
    }

  private:
    size_t rows_, cols_;
    std::vector<T> a_;
};

// Row echelon elimination; returns rank. Pivot selection: first row with a
// nonzero entry in the leftmost unsettled column (keeps runs reproducible).
template <class T>
size_t row_echelon(Mat<T>& m, std::vector<size_t>* pivot_cols = nullptr) {
    size_t rank = 0;
    for (size_t col = 0; col < m.cols() && rank < m.rows(); ++col) {
        size_t sel = rank;
        while (sel < m.rows() && scalar_is_zero(m.at(sel, col))) ++sel;
        if (sel == m.rows()) continue;
        if (sel != rank)
            for (size_t j = 0; j < m.cols(); ++j) std::swap(m.at(sel, j), m.at(rank, j));
        T inv = field_inv(m.at(rank, col));
        for (size_t j = col; j < m.cols(); ++j) m.at(rank, j) = m.at(rank, j) * inv;
        for (size_t i = 0; i < m.rows(); ++i) {
            if (i == rank || scalar_is_zero(m.at(i, col))) continue;
            T f = m.at(i, col);
            for (size_t j = col; j < m.cols(); ++j) m.at(i, j) = m.at(i, j) - f * m.at(rank, j);
        }
        if (pivot_cols) pivot_cols->push_back(col);
        ++rank;
    }
    return rank;
}

template <class T>
std::optional<Mat<T>> inverse(const Mat<T>& m, const T& one) {
    assert(m.rows() == m.cols());
    size_t n = m.rows();
    Mat<T> aug(n, 2 * n);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, n + i) = one;
    }
    if (row_echelon(aug) != n) return std::nullopt;
    Mat<T> r(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) r.at(i, j) = aug.at(i, n + j);
    return r;
}

// Basis of the right kernel, one column vector per basis element. Free
// variables are processed in increasing column order.
template <class T>
std::vector<std::vector<T>> kernel_basis(Mat<T> m, const T& one) {
    std::vector<size_t> pivots;
    row_echelon(m, &pivots);
    std::vector<bool> is_pivot(m.cols(), false);
    for (size_t c : pivots) is_pivot[c] = true;
    std::vector<std::vector<T>> basis;
    for (size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        std::vector<T> v(m.cols());
        v[free] = one;
        for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = T() - m.at(r, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

// Solve m*x = b; nullopt when inconsistent. Underdetermined systems get the
// solution with free variables set to zero.
template <class T>
std::optional<std::vector<T>> solve_linear(Mat<T> m, std::vector<T> b, const T& one) {
    assert(m.rows() == b.size());
    Mat<T> aug(m.rows(), m.cols() + 1);
    for (size_t i = 0; i < m.rows(); ++i) {
        for (size_t j = 0; j < m.cols(); ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, m.cols()) = b[i];
    }
    std::vector<size_t> pivots;
    size_t rank = row_echelon(aug, &pivots);
    for (size_t r = 0; r < rank; ++r)
        if (pivots[r] == m.cols()) return std::nullopt;  // pivot in rhs column
    std::vector<T> x(m.cols());
    for (size_t r = 0; r < rank; ++r) x[pivots[r]] = aug.at(r, m.cols());
    (void)one;
    return x;
}

// Characteristic polynomial det(xI - M) of a rational matrix
// (Faddeev-LeVerrier).
inline UniPoly charpoly(const Mat<Rational>& m) {
    size_t n = m.rows();
    assert(n == m.cols());
    std::vector<Rational> c(n + 1, Rational(0));
    c[n] = Rational(1);
    Mat<Rational> acc = Mat<Rational>::identity(n, Rational(1));
    for (size_t k = 1; k <= n; ++k) {
        acc = m * acc;
        Rational tr(0);
        for (size_t i = 0; i < n; ++i) tr += acc.at(i, i);
        Rational coeff = -tr / Rational(static_cast<long>(k));
        c[n - k] = coeff;
        for (size_t i = 0; i < n; ++i) acc.at(i, i) += coeff;
    }
    return UniPoly(std::move(c));
}

}  // namespace loopinv
