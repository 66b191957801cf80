#pragma once

#include "dubois/complex.hpp"

#include <random>

namespace dubois {

/// Deterministic generators of small random objects for property suites.
/// Everything is seeded explicitly so failures replay exactly.
namespace testgen {

using Rng = std::mt19937;

inline Rat random_rational(Rng& rng, int num_bound = 5, unsigned den_bound = 3) {
    std::uniform_int_distribution<int> num(-num_bound, num_bound);
    std::uniform_int_distribution<unsigned> den(1, den_bound);
    return Rat(num(rng), den(rng));
}

inline RatMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
    RatMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = random_rational(rng);
    return m;
}

/// Random invertible matrix: unitriangular lower times unitriangular upper,
/// so invertibility is by construction.
inline RatMatrix random_invertible(Rng& rng, std::size_t size) {
    RatMatrix l = RatMatrix::identity(size), u = RatMatrix::identity(size);
    for (std::size_t i = 0; i < size; ++i)
        for (std::size_t j = 0; j < i; ++j) {
            l(i, j) = random_rational(rng);
            u(j, i) = random_rational(rng);
        }
    return l * u;
}

/// Random valid bounded complex over degrees [0, top]: a direct sum of
/// elementary two-term contractible pieces and single-degree summands,
/// conjugated by a random change of basis in every degree. Every bounded
/// complex of Q-vector spaces decomposes this way, so the sample space is
/// honest; d*d = 0 holds by construction and is re-asserted by callers.
inline CochainComplex random_complex(Rng& rng, int top = 3, std::size_t max_dim = 8) {
    if (top < 0) top = 0;
    std::uniform_int_distribution<std::size_t> dim_pick(0, max_dim);
    // per-degree target dims; split each degree into (arrows in, arrows out, harmonic)
    std::vector<std::size_t> dims(static_cast<std::size_t>(top) + 1);
    for (auto& d : dims) d = dim_pick(rng);

    CochainComplex c;
    c.lo = 0;
    c.hi = top;
    for (int m = 0; m <= top; ++m) c.dims[m] = dims[static_cast<std::size_t>(m)];
    // choose ranks r_m <= min(dim m, dim_{m+1} - r_{m+1} reserved) greedily;
    // the reservation makes consecutive differentials compose to zero below
    std::vector<std::size_t> rank_of(static_cast<std::size_t>(top), 0);
    for (int m = top - 1; m >= 0; --m) {
        std::size_t a = dims[static_cast<std::size_t>(m)];
        std::size_t b = dims[static_cast<std::size_t>(m + 1)];
        std::size_t out_reserved = (m + 1 < top) ? rank_of[static_cast<std::size_t>(m + 1)] : 0;
        std::size_t cap = std::min(a, b - std::min(b, out_reserved) );
        std::uniform_int_distribution<std::size_t> rp(0, cap);
        rank_of[static_cast<std::size_t>(m)] = rp(rng);
    }
    for (int m = 0; m < top; ++m) {
        std::size_t a = dims[static_cast<std::size_t>(m)];
        std::size_t b = dims[static_cast<std::size_t>(m + 1)];
        std::size_t r = rank_of[static_cast<std::size_t>(m)];
        RatMatrix d(b, a);
        // send the LAST r source coordinates to the FIRST r target ones;
        // the next differential uses its own last coordinates as sources,
        // which are disjoint from these targets, so d*d = 0.
        for (std::size_t i = 0; i < r; ++i) d(i, a - r + i) = 1;
        c.diff[m] = d;
    }
    // conjugate: replace basis of each degree by a random invertible change
    std::vector<RatMatrix> g;
    g.reserve(dims.size());
    for (std::size_t m = 0; m < dims.size(); ++m) g.push_back(random_invertible(rng, dims[m]));
    for (int m = 0; m < top; ++m)
        c.diff[m] = g[static_cast<std::size_t>(m + 1)] * c.d(m) *
                    inverse(g[static_cast<std::size_t>(m)]);
    return c;
}

} // namespace testgen
} // namespace dubois
