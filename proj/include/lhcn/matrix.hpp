#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "lhcn/error.hpp"

namespace lhcn {

// Dense row-major matrix. All kernels accumulate in a fixed order so that
// repeated runs on one platform produce bit-identical results.
template <typename T>
class MatrixT {
public:
    MatrixT() = default;
    MatrixT(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    T* row(std::size_t r) { return data_.data() + r * cols_; }
    const T* row(std::size_t r) const { return data_.data() + r * cols_; }

    std::vector<T>& data() { return data_; }
    const std::vector<T>& data() const { return data_; }

    bool all_finite() const {
        for (const T& v : data_) {
            if (!std::isfinite(static_cast<double>(v))) return false;
        }
        return true;
    }

    template <typename U>
    MatrixT<U> cast() const {
        MatrixT<U> out(rows_, cols_);
        for (std::size_t i = 0; i < data_.size(); ++i) {
            out.data()[i] = static_cast<U>(data_[i]);
        }
        return out;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using Matrix = MatrixT<double>;

// C = A * B. i-k-j loop order: the inner loop runs over contiguous rows of B
// and C, and the sum over k is strictly ascending. Exact zeros in A are
// skipped; with 0 * x == 0 this cannot change the accumulated values, and it
// makes multiplications with sparse feature matrices cheap without a
// dedicated sparse type.
template <typename T>
MatrixT<T> matmul(const MatrixT<T>& a, const MatrixT<T>& b) {
    if (a.cols() != b.rows()) fail(ErrorKind::validation, "matmul: inner dimensions differ");
    MatrixT<T> c(a.rows(), b.cols());
    const std::size_t n = b.cols();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const T* arow = a.row(i);
        T* crow = c.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const T aik = arow[k];
            if (aik == T{}) continue;
            const T* brow = b.row(k);
            for (std::size_t j = 0; j < n; ++j) crow[j] += aik * brow[j];
        }
    }
    return c;
}

// C = A^T * B, accumulating over rows of A in ascending order.
template <typename T>
MatrixT<T> matmul_transA(const MatrixT<T>& a, const MatrixT<T>& b) {
    if (a.rows() != b.rows()) fail(ErrorKind::validation, "matmul_transA: row counts differ");
    MatrixT<T> c(a.cols(), b.cols());
    const std::size_t n = b.cols();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const T* arow = a.row(i);
        const T* brow = b.row(i);
        for (std::size_t p = 0; p < a.cols(); ++p) {
            const T aip = arow[p];
            if (aip == T{}) continue;
            T* crow = c.row(p);
            for (std::size_t j = 0; j < n; ++j) crow[j] += aip * brow[j];
        }
    }
    return c;
}

// C = A * B^T (row-by-row dot products, ascending k).
template <typename T>
MatrixT<T> matmul_transB(const MatrixT<T>& a, const MatrixT<T>& b) {
    if (a.cols() != b.cols()) fail(ErrorKind::validation, "matmul_transB: column counts differ");
    MatrixT<T> c(a.rows(), b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const T* arow = a.row(i);
        T* crow = c.row(i);
        for (std::size_t j = 0; j < b.rows(); ++j) {
            const T* brow = b.row(j);
            T acc{};
            for (std::size_t k = 0; k < a.cols(); ++k) acc += arow[k] * brow[k];
            crow[j] = acc;
        }
    }
    return c;
}

// Compressed sparse row matrix with sorted column indices per row.
template <typename T>
class CsrMatrixT {
public:
    CsrMatrixT() = default;

    // adj[r] must be sorted by column index and free of duplicates.
    static CsrMatrixT from_rows(std::size_t rows, std::size_t cols,
                                const std::vector<std::vector<std::pair<std::int32_t, T>>>& adj) {
        CsrMatrixT m;
        m.rows_ = rows;
        m.cols_ = cols;
        m.indptr_.assign(1, 0);
        m.indptr_.reserve(rows + 1);
        std::size_t nnz = 0;
        for (const auto& row : adj) nnz += row.size();
        m.indices_.reserve(nnz);
        m.values_.reserve(nnz);
        for (std::size_t r = 0; r < rows; ++r) {
            for (const auto& [col, val] : adj[r]) {
                m.indices_.push_back(col);
                m.values_.push_back(val);
            }
            m.indptr_.push_back(m.indices_.size());
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t nnz() const { return values_.size(); }

    const std::vector<std::size_t>& indptr() const { return indptr_; }
    const std::vector<std::int32_t>& indices() const { return indices_; }
    const std::vector<T>& values() const { return values_; }

    // Stored value at (r, c), or zero. Linear scan; intended for tests and
    // small instances.
    T at(std::size_t r, std::size_t c) const {
        for (std::size_t k = indptr_[r]; k < indptr_[r + 1]; ++k) {
            if (static_cast<std::size_t>(indices_[k]) == c) return values_[k];
        }
        return T{};
    }

    T row_sum(std::size_t r) const {
        T acc{};
        for (std::size_t k = indptr_[r]; k < indptr_[r + 1]; ++k) acc += values_[k];
        return acc;
    }

    // Y = this * B with B dense. Per output row the sum runs over stored
    // entries in ascending column order.
    MatrixT<T> multiply(const MatrixT<T>& b) const {
        if (cols_ != b.rows()) fail(ErrorKind::validation, "csr multiply: inner dimensions differ");
        MatrixT<T> y(rows_, b.cols());
        const std::size_t n = b.cols();
        for (std::size_t r = 0; r < rows_; ++r) {
            T* yrow = y.row(r);
            for (std::size_t k = indptr_[r]; k < indptr_[r + 1]; ++k) {
                const T v = values_[k];
                const T* brow = b.row(static_cast<std::size_t>(indices_[k]));
                for (std::size_t j = 0; j < n; ++j) yrow[j] += v * brow[j];
            }
        }
        return y;
    }

    MatrixT<T> to_dense() const {
        MatrixT<T> d(rows_, cols_);
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t k = indptr_[r]; k < indptr_[r + 1]; ++k) {
                d(r, static_cast<std::size_t>(indices_[k])) = values_[k];
            }
        }
        return d;
    }

    template <typename U>
    CsrMatrixT<U> cast() const {
        CsrMatrixT<U> out;
        out.rows_ = rows_;
        out.cols_ = cols_;
        out.indptr_ = indptr_;
        out.indices_ = indices_;
        out.values_.reserve(values_.size());
        for (const T& v : values_) out.values_.push_back(static_cast<U>(v));
        return out;
    }

    bool operator==(const CsrMatrixT& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_ && indptr_ == other.indptr_ &&
               indices_ == other.indices_ && values_ == other.values_;
    }

private:
    template <typename U>
    friend class CsrMatrixT;

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::size_t> indptr_{0};
    std::vector<std::int32_t> indices_;
    std::vector<T> values_;
};

using CsrMatrix = CsrMatrixT<double>;

}  // namespace lhcn
