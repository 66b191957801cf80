#pragma once

#include "dubois/matrix.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace dubois {

struct RrefResult {
    RatMatrix mat;
    std::vector<std::size_t> pivots; // pivot column per nonzero row, increasing
};

/// Reduced row echelon form by exact Gauss-Jordan elimination.
inline RrefResult rref(const RatMatrix& m) {
    RatMatrix a = m;
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
        std::size_t piv = row;
        while (piv < a.rows() && a(piv, col) == 0) ++piv;
        if (piv == a.rows()) continue;
        if (piv != row)
            for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(piv, j), a(row, j));
        Rat inv = Rat(1) / a(row, col);
        for (std::size_t j = col; j < a.cols(); ++j) a(row, j) *= inv;
        for (std::size_t i = 0; i < a.rows(); ++i) {
            if (i == row || a(i, col) == 0) continue;
            Rat f = a(i, col);
            for (std::size_t j = col; j < a.cols(); ++j) a(i, j) -= f * a(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return {std::move(a), std::move(pivots)};
}

inline std::size_t rank(const RatMatrix& m) { return rref(m).pivots.size(); }

/// Basis of the null space; columns satisfy m * result = 0,
/// column count = cols(m) - rank(m).
inline RatMatrix kernel_basis(const RatMatrix& m) {
    RrefResult r = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (std::size_t p : r.pivots) is_pivot[p] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t j = 0; j < m.cols(); ++j)
        if (!is_pivot[j]) free_cols.push_back(j);

    RatMatrix k(m.cols(), free_cols.size());
    for (std::size_t fj = 0; fj < free_cols.size(); ++fj) {
        std::size_t col = free_cols[fj];
        k(col, fj) = 1;
        for (std::size_t pr = 0; pr < r.pivots.size(); ++pr)
            k(r.pivots[pr], fj) = -r.mat(pr, col);
    }
    return k;
}

/// True iff every column of `vectors` lies in the column span of `span`.
inline bool subspace_contains(const RatMatrix& span, const RatMatrix& vectors) {
    if (span.rows() != vectors.rows())
        throw std::invalid_argument("subspace_contains: row counts differ");
    if (vectors.cols() == 0) return true;
    std::size_t r0 = rank(span);
    return rank(hstack(span, vectors)) == r0;
}

/// Any exact solution X of a * X = b, or nullopt if the system is inconsistent.
inline std::optional<RatMatrix> solve(const RatMatrix& a, const RatMatrix& b) {
    if (a.rows() != b.rows())
        throw std::invalid_argument("solve: row counts differ");
    RrefResult r = rref(hstack(a, b));
    for (std::size_t p : r.pivots)
        if (p >= a.cols()) return std::nullopt; // pivot in the rhs block
    RatMatrix x(a.cols(), b.cols());
    for (std::size_t pr = 0; pr < r.pivots.size(); ++pr)
        for (std::size_t j = 0; j < b.cols(); ++j)
            x(r.pivots[pr], j) = r.mat(pr, a.cols() + j);
    return x;
}

/// Inverse of a square matrix; throws if singular.
inline RatMatrix inverse(const RatMatrix& a) {
    if (a.rows() != a.cols())
        throw std::invalid_argument("inverse: matrix not square");
    RrefResult r = rref(hstack(a, RatMatrix::identity(a.rows())));
    if (r.pivots.size() != a.rows() || (a.rows() && r.pivots.back() >= a.cols()))
        throw std::invalid_argument("inverse: matrix is singular");
    return r.mat.col_slice(a.cols(), 2 * a.cols());
}

/// Columns of m that form a basis of its column space (the pivot columns).
inline RatMatrix column_space_basis(const RatMatrix& m) {
    return m.select_cols(rref(m).pivots);
}

struct Quotient {
    RatMatrix proj;    // (n - r) x n, kernel = span(sub)
    RatMatrix section; // n x (n - r), proj * section = I
};

/// Projection onto a complement of span(sub) in Q^n, with a section.
/// sub must have full column rank.
inline Quotient quotient_with_section(std::size_t ambient_dim, const RatMatrix& sub) {
    if (sub.rows() != ambient_dim)
        throw std::invalid_argument("quotient_with_section: sub has wrong ambient dimension");
    const std::size_t r = sub.cols();
    if (rank(sub) != r)
        throw std::invalid_argument("quotient_with_section: sub is not full column rank");

    // Extend the columns of sub to a basis by standard vectors, then read the
    // quotient projection off the inverse of the assembled basis matrix.
    RrefResult ext = rref(hstack(sub, RatMatrix::identity(ambient_dim)));
    std::vector<std::size_t> completing;
    for (std::size_t p : ext.pivots)
        if (p >= r) completing.push_back(p - r);

    RatMatrix basis(ambient_dim, ambient_dim);
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t i = 0; i < ambient_dim; ++i) basis(i, j) = sub(i, j);
    for (std::size_t j = 0; j < completing.size(); ++j)
        basis(completing[j], r + j) = 1;

    RatMatrix inv = inverse(basis);
    Quotient q;
    q.proj = inv.row_slice(r, ambient_dim);
    q.section = basis.col_slice(r, ambient_dim);
    return q;
}

/// Surjection with kernel exactly span(sub), plus the quotient dimension.
inline std::pair<RatMatrix, std::size_t> quotient_map(std::size_t ambient_dim,
                                                      const RatMatrix& sub) {
    Quotient q = quotient_with_section(ambient_dim, sub);
    return {q.proj, q.proj.rows()};
}

} // namespace dubois
