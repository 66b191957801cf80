#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dubois {

// Exact rational scalar. All linear algebra in this library is done over Q
// with no rounding anywhere.
using Rat = boost::multiprecision::cpp_rational;

/// Dense matrix of exact rationals, row-major.
class RatMatrix {
public:
    RatMatrix() = default;
    RatMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols) {}

    RatMatrix(std::initializer_list<std::initializer_list<Rat>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        a_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_)
                throw std::invalid_argument("RatMatrix: ragged initializer");
            for (const auto& v : row) a_.push_back(v);
        }
    }

    static RatMatrix identity(std::size_t n) {
        RatMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    static RatMatrix zero(std::size_t rows, std::size_t cols) {
        return RatMatrix(rows, cols);
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rat& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Rat& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    bool operator==(const RatMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }
    bool operator!=(const RatMatrix& o) const { return !(*this == o); }

    bool is_zero() const {
        for (const auto& v : a_)
            if (v != 0) return false;
        return true;
    }

    RatMatrix operator*(const RatMatrix& o) const {
        if (cols_ != o.rows_)
            throw std::invalid_argument("RatMatrix: dimension mismatch in product (" +
                                        shape_str() + " * " + o.shape_str() + ")");
        RatMatrix r(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const Rat& aik = (*this)(i, k);
                if (aik == 0) continue;
                for (std::size_t j = 0; j < o.cols_; ++j)
                    r(i, j) += aik * o(k, j);
            }
        return r;
    }

    RatMatrix operator+(const RatMatrix& o) const {
        require_same_shape(o, "+");
        RatMatrix r(rows_, cols_);
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
        return r;
    }

    RatMatrix operator-(const RatMatrix& o) const {
        require_same_shape(o, "-");
        RatMatrix r(rows_, cols_);
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
        return r;
    }

    RatMatrix operator-() const {
        RatMatrix r(rows_, cols_);
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = -a_[i];
        return r;
    }

    RatMatrix scaled(const Rat& c) const {
        RatMatrix r(rows_, cols_);
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = c * a_[i];
        return r;
    }

    RatMatrix transposed() const {
        RatMatrix r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    /// Columns [c0, c1) as a new matrix.
    RatMatrix col_slice(std::size_t c0, std::size_t c1) const {
        RatMatrix r(rows_, c1 - c0);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = c0; j < c1; ++j) r(i, j - c0) = (*this)(i, j);
        return r;
    }

    /// Rows [r0, r1) as a new matrix.
    RatMatrix row_slice(std::size_t r0, std::size_t r1) const {
        RatMatrix r(r1 - r0, cols_);
        for (std::size_t i = r0; i < r1; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(i - r0, j) = (*this)(i, j);
        return r;
    }

    RatMatrix select_cols(const std::vector<std::size_t>& idx) const {
        RatMatrix r(rows_, idx.size());
        for (std::size_t j = 0; j < idx.size(); ++j)
            for (std::size_t i = 0; i < rows_; ++i) r(i, j) = (*this)(i, idx[j]);
        return r;
    }

    std::string shape_str() const {
        return std::to_string(rows_) + "x" + std::to_string(cols_);
    }

private:
    void require_same_shape(const RatMatrix& o, const char* op) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument(std::string("RatMatrix: shape mismatch in ") + op +
                                        " (" + shape_str() + " vs " + o.shape_str() + ")");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rat> a_;
};

inline RatMatrix hstack(const RatMatrix& a, const RatMatrix& b) {
    if (a.rows() != b.rows())
        throw std::invalid_argument("hstack: row counts differ");
    RatMatrix r(a.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j) r(i, a.cols() + j) = b(i, j);
    }
    return r;
}

inline RatMatrix vstack(const RatMatrix& a, const RatMatrix& b) {
    if (a.cols() != b.cols())
        throw std::invalid_argument("vstack: column counts differ");
    RatMatrix r(a.rows() + b.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) r(a.rows() + i, j) = b(i, j);
    return r;
}

/// Block-diagonal of two matrices (off-diagonal blocks zero).
inline RatMatrix block_diag(const RatMatrix& a, const RatMatrix& b) {
    RatMatrix r(a.rows() + b.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) r(a.rows() + i, a.cols() + j) = b(i, j);
    return r;
}

} // namespace dubois
