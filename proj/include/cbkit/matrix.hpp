#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "cbkit/field.hpp"

namespace cbkit {

// Dense exact matrix over one field.
class ExactMatrix {
public:
    ExactMatrix(FieldPtr field, std::size_t rows, std::size_t cols)
        : field_(std::move(field)), rows_(rows), cols_(cols),
          entries_(rows * cols, field_->zero()) {}

    static ExactMatrix identity(const FieldPtr& field, std::size_t n) {
        ExactMatrix m(field, n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = field->one();
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const FieldPtr& field() const { return field_; }

    Scalar& at(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const Scalar& at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    ExactMatrix transpose() const {
        ExactMatrix t(field_, cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
        return t;
    }

    std::vector<Scalar> apply(const std::vector<Scalar>& v) const {
        if (v.size() != cols_) throw field_error("matrix-vector dimension mismatch");
        std::vector<Scalar> out(rows_, field_->zero());
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if (!at(i, j).is_zero() && !v[j].is_zero()) out[i] += at(i, j) * v[j];
        return out;
    }

    ExactMatrix without_row(std::size_t row) const {
        ExactMatrix m(field_, rows_ - 1, cols_);
        std::size_t r = 0;
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i == row) continue;
            for (std::size_t j = 0; j < cols_; ++j) m.at(r, j) = at(i, j);
            ++r;
        }
        return m;
    }

private:
    FieldPtr field_;
    std::size_t rows_, cols_;
    std::vector<Scalar> entries_;
};

namespace detail {

// Fraction-free (Bareiss) rank over Q: clear row denominators, then
// integer Bareiss. Keeps intermediate entries at determinant size.
inline std::size_t rank_bareiss_rational(const ExactMatrix& m) {
    const std::size_t rows = m.rows(), cols = m.cols();
    std::vector<std::vector<mpz_class>> a(rows, std::vector<mpz_class>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        mpz_class lcm = 1;
        for (std::size_t j = 0; j < cols; ++j)
            mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(),
                    m.at(i, j).rational().get_den_mpz_t());
        for (std::size_t j = 0; j < cols; ++j) {
            mpq_class v = m.at(i, j).rational() * lcm;
            a[i][j] = v.get_num();
        }
    }
    mpz_class prev = 1;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < rows && a[pivot][col] == 0) ++pivot;
        if (pivot == rows) continue;
        std::swap(a[rank], a[pivot]);
        for (std::size_t i = rank + 1; i < rows; ++i) {
            for (std::size_t j = col + 1; j < cols; ++j) {
                mpz_class num = a[rank][col] * a[i][j] - a[i][col] * a[rank][j];
                a[i][j] = num / prev;  // exact by Bareiss
            }
            a[i][col] = 0;
        }
        prev = a[rank][col];
        ++rank;
    }
    return rank;
}

}  // namespace detail

// Reduced row echelon form in place; returns pivot column indices.
// Generic exact elimination, used over finite fields and for nullspaces.
inline std::vector<std::size_t> rref_in_place(ExactMatrix& m) {
    std::vector<std::size_t> pivots;
    std::size_t rank = 0;
    const std::size_t rows = m.rows(), cols = m.cols();
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < rows && m.at(pivot, col).is_zero()) ++pivot;
        if (pivot == rows) continue;
        if (pivot != rank)
            for (std::size_t j = col; j < cols; ++j) std::swap(m.at(rank, j), m.at(pivot, j));
        Scalar inv = m.at(rank, col).inverse();
        for (std::size_t j = col; j < cols; ++j) m.at(rank, j) *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == rank || m.at(i, col).is_zero()) continue;
            Scalar factor = m.at(i, col);
            for (std::size_t j = col; j < cols; ++j)
                m.at(i, j) -= factor * m.at(rank, j);
        }
        pivots.push_back(col);
        ++rank;
    }
    return pivots;
}

// Exact rank. Fraction-free over Q, plain elimination over finite fields.
inline std::size_t rank(const ExactMatrix& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    if (m.field()->kind() == FieldKind::rationals) return detail::rank_bareiss_rational(m);
    ExactMatrix work = m;
    // forward elimination only; no back substitution needed for rank
    std::size_t rank = 0;
    const std::size_t rows = work.rows(), cols = work.cols();
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < rows && work.at(pivot, col).is_zero()) ++pivot;
        if (pivot == rows) continue;
        if (pivot != rank)
            for (std::size_t j = col; j < cols; ++j)
                std::swap(work.at(rank, j), work.at(pivot, j));
        Scalar inv = work.at(rank, col).inverse();
        for (std::size_t i = rank + 1; i < rows; ++i) {
            if (work.at(i, col).is_zero()) continue;
            Scalar factor = work.at(i, col) * inv;
            for (std::size_t j = col; j < cols; ++j)
                work.at(i, j) -= factor * work.at(rank, j);
        }
        ++rank;
    }
    return rank;
}

// Exact basis of the right kernel; size == cols - rank.
inline std::vector<std::vector<Scalar>> nullspace_basis(const ExactMatrix& m) {
    ExactMatrix work = m;
    std::vector<std::size_t> pivots = rref_in_place(work);
    const std::size_t cols = m.cols();
    std::vector<bool> is_pivot(cols, false);
    for (std::size_t c : pivots) is_pivot[c] = true;
    std::vector<std::vector<Scalar>> basis;
    for (std::size_t free_col = 0; free_col < cols; ++free_col) {
        if (is_pivot[free_col]) continue;
        std::vector<Scalar> v(cols, m.field()->zero());
        v[free_col] = m.field()->one();
        for (std::size_t r = 0; r < pivots.size(); ++r)
            v[pivots[r]] = -work.at(r, free_col);
        basis.push_back(std::move(v));
    }
    return basis;
}

// Exact determinant of a square matrix by elimination with division;
// fine for the small (<= 6x6) matrices the geometry modules use.
inline Scalar determinant(const ExactMatrix& m) {
    if (m.rows() != m.cols()) throw field_error("determinant of non-square matrix");
    const std::size_t n = m.rows();
    ExactMatrix work = m;
    Scalar det = m.field()->one();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && work.at(pivot, col).is_zero()) ++pivot;
        if (pivot == n) return m.field()->zero();
        if (pivot != col) {
            for (std::size_t j = col; j < n; ++j) std::swap(work.at(col, j), work.at(pivot, j));
            det = -det;
        }
        det *= work.at(col, col);
        Scalar inv = work.at(col, col).inverse();
        for (std::size_t i = col + 1; i < n; ++i) {
            if (work.at(i, col).is_zero()) continue;
            Scalar factor = work.at(i, col) * inv;
            for (std::size_t j = col; j < n; ++j)
                work.at(i, j) -= factor * work.at(col, j);
        }
    }
    return det;
}

// Basis of the left kernel {y : y M = 0} plus the rank, from a single
// elimination of [M | I]. This is the Cayley-Bacharach fast path.
struct LeftKernel {
    std::size_t rank = 0;
    std::vector<std::vector<Scalar>> basis;  // each of length rows(M)
};

inline LeftKernel left_kernel(const ExactMatrix& m) {
    const std::size_t rows = m.rows(), cols = m.cols();
    ExactMatrix aug(m.field(), rows, cols + rows);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, cols + i) = m.field()->one();
    }
    // forward elimination on the M block, carrying the identity block along
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < rows && aug.at(pivot, col).is_zero()) ++pivot;
        if (pivot == rows) continue;
        if (pivot != rank)
            for (std::size_t j = col; j < cols + rows; ++j)
                std::swap(aug.at(rank, j), aug.at(pivot, j));
        Scalar inv = aug.at(rank, col).inverse();
        for (std::size_t i = rank + 1; i < rows; ++i) {
            if (aug.at(i, col).is_zero()) continue;
            Scalar factor = aug.at(i, col) * inv;
            for (std::size_t j = col; j < cols + rows; ++j)
                aug.at(i, j) -= factor * aug.at(rank, j);
        }
        ++rank;
    }
    LeftKernel out;
    out.rank = rank;
    for (std::size_t i = rank; i < rows; ++i) {
        std::vector<Scalar> y(rows, m.field()->zero());
        for (std::size_t j = 0; j < rows; ++j) y[j] = aug.at(i, cols + j);
        out.basis.push_back(std::move(y));
    }
    return out;
}

}  // namespace cbkit
