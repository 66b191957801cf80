#pragma once

#include "dubois/linalg.hpp"
#include "dubois/matrix.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace dubois {

/// Bounded cochain complex of finite-dimensional Q-vector spaces.
///
/// twist_weight is the formal power of the pulled-back line bundle carried by
/// the complex. All models trivialize that bundle globally, so the weight is
/// pure bookkeeping; operations that glue complexes check it to catch unit
/// errors.
struct CochainComplex {
    int lo = 0;
    int hi = -1; // hi < lo: zero complex
    std::map<int, std::size_t> dims;
    std::map<int, RatMatrix> diff; // diff[m]: dims(m+1) x dims(m)
    int twist_weight = 0;

    std::size_t dim(int m) const {
        auto it = dims.find(m);
        return it == dims.end() ? 0 : it->second;
    }

    RatMatrix d(int m) const {
        auto it = diff.find(m);
        if (it != diff.end()) return it->second;
        return RatMatrix::zero(dim(m + 1), dim(m));
    }

    bool is_zero() const {
        for (const auto& [m, n] : dims)
            if (n != 0) return false;
        return true;
    }

    static CochainComplex zero(int weight = 0) {
        CochainComplex c;
        c.twist_weight = weight;
        return c;
    }
};

inline bool same_dims(const CochainComplex& a, const CochainComplex& b) {
    int lo = std::min(a.lo, b.lo), hi = std::max(a.hi, b.hi);
    for (int m = lo; m <= hi; ++m)
        if (a.dim(m) != b.dim(m)) return false;
    return true;
}

inline bool operator==(const CochainComplex& a, const CochainComplex& b) {
    if (a.twist_weight != b.twist_weight || !same_dims(a, b)) return false;
    int lo = std::min(a.lo, b.lo), hi = std::max(a.hi, b.hi);
    for (int m = lo - 1; m <= hi; ++m)
        if (a.d(m) != b.d(m)) return false;
    return true;
}

inline bool operator!=(const CochainComplex& a, const CochainComplex& b) {
    return !(a == b);
}

/// True iff d has the right shapes and d(m+1) * d(m) = 0 everywhere.
/// Shape violations throw (they are malformed data, not a failed check).
inline bool validate_complex(const CochainComplex& c) {
    for (const auto& [m, n] : c.dims)
        if (n > 0 && (m < c.lo || m > c.hi))
            throw std::invalid_argument("validate_complex: nonzero dim outside [lo,hi] at degree " +
                                        std::to_string(m));
    for (const auto& [m, mat] : c.diff)
        if (mat.rows() != c.dim(m + 1) || mat.cols() != c.dim(m))
            throw std::invalid_argument("validate_complex: differential shape mismatch at degree " +
                                        std::to_string(m));
    for (int m = c.lo; m + 1 <= c.hi; ++m)
        if (!(c.d(m + 1) * c.d(m)).is_zero()) return false;
    return true;
}

/// shift(c,k)^m = c^{m+k}, with differential (-1)^k d.
inline CochainComplex shift(const CochainComplex& c, int k) {
    CochainComplex s;
    s.twist_weight = c.twist_weight;
    s.lo = c.lo - k;
    s.hi = c.hi - k;
    for (const auto& [m, n] : c.dims) s.dims[m - k] = n;
    for (const auto& [m, mat] : c.diff)
        s.diff[m - k] = (k % 2 == 0) ? mat : -mat;
    return s;
}

/// Identical spaces and differentials, twist weight raised by k.
inline CochainComplex twist(const CochainComplex& c, int k) {
    CochainComplex t = c;
    t.twist_weight += k;
    return t;
}

/// Degreewise direct sum with block-diagonal differential.
inline CochainComplex direct_sum(const CochainComplex& a, const CochainComplex& b) {
    if (a.twist_weight != b.twist_weight)
        throw std::invalid_argument("direct_sum: twist weight mismatch");
    CochainComplex s;
    s.twist_weight = a.twist_weight;
    s.lo = std::min(a.lo, b.lo);
    s.hi = std::max(a.hi, b.hi);
    if (a.hi < a.lo && b.hi < b.lo) { s.lo = 0; s.hi = -1; return s; }
    if (a.hi < a.lo) return b;
    if (b.hi < b.lo) return a;
    for (int m = s.lo; m <= s.hi; ++m) s.dims[m] = a.dim(m) + b.dim(m);
    for (int m = s.lo - 1; m <= s.hi; ++m) s.diff[m] = block_diag(a.d(m), b.d(m));
    return s;
}

/// Chain map of pure degree k between complexes; mat(m) has shape
/// target.dim(m+k) x source.dim(m).
struct ChainMap {
    CochainComplex source;
    CochainComplex target;
    int degree = 0;
    std::map<int, RatMatrix> mats;

    RatMatrix mat(int m) const {
        auto it = mats.find(m);
        if (it != mats.end()) return it->second;
        return RatMatrix::zero(target.dim(m + degree), source.dim(m));
    }
};

inline ChainMap identity_map(const CochainComplex& c) {
    ChainMap f;
    f.source = c;
    f.target = c;
    for (const auto& [m, n] : c.dims)
        if (n) f.mats[m] = RatMatrix::identity(n);
    return f;
}

inline ChainMap zero_map(const CochainComplex& src, const CochainComplex& tgt, int degree = 0) {
    ChainMap f;
    f.source = src;
    f.target = tgt;
    f.degree = degree;
    return f;
}

/// Signed chain-map law: target.d(m+k) * f(m) = (-1)^k f(m+1) * source.d(m).
inline bool is_chain_map(const ChainMap& f) {
    const int k = f.degree;
    for (const auto& [m, mat] : f.mats)
        if (mat.rows() != f.target.dim(m + k) || mat.cols() != f.source.dim(m))
            throw std::invalid_argument("is_chain_map: matrix shape mismatch at degree " +
                                        std::to_string(m));
    int lo = std::min(f.source.lo, f.target.lo - k) - 1;
    int hi = std::max(f.source.hi, f.target.hi - k);
    for (int m = lo; m <= hi; ++m) {
        RatMatrix lhs = f.target.d(m + k) * f.mat(m);
        RatMatrix rhs = f.mat(m + 1) * f.source.d(m);
        if (k % 2 != 0) rhs = -rhs;
        if (lhs != rhs) return false;
    }
    return true;
}

/// Plain composition g . f (degrees add; no extra sign is introduced).
inline ChainMap compose(const ChainMap& g, const ChainMap& f) {
    ChainMap h;
    h.source = f.source;
    h.target = g.target;
    h.degree = f.degree + g.degree;
    int lo = f.source.lo, hi = f.source.hi;
    for (int m = lo; m <= hi; ++m)
        if (f.source.dim(m))
            h.mats[m] = g.mat(m + f.degree) * f.mat(m);
    return h;
}

inline bool maps_equal(const ChainMap& a, const ChainMap& b) {
    if (a.degree != b.degree || !same_dims(a.source, b.source) ||
        !same_dims(a.target, b.target))
        return false;
    int lo = std::min(a.source.lo, b.source.lo);
    int hi = std::max(a.source.hi, b.source.hi);
    for (int m = lo; m <= hi; ++m)
        if (a.mat(m) != b.mat(m)) return false;
    return true;
}

struct ConeResult {
    CochainComplex cone;
    ChainMap inject;  // target -> cone, second summand
    ChainMap project; // cone -> source[1], first summand
};

/// Mapping cone of a degree-0 chain map, cone^m = source^{m+1} + target^m,
/// differential [[-d_src, 0], [f, d_tgt]].
inline ConeResult cone(const ChainMap& f) {
    if (f.degree != 0)
        throw std::invalid_argument("cone: chain map must have degree 0");
    if (f.source.twist_weight != f.target.twist_weight)
        throw std::invalid_argument("cone: twist weight mismatch");

    const CochainComplex& a = f.source;
    const CochainComplex& b = f.target;
    CochainComplex c;
    c.twist_weight = a.twist_weight;
    c.lo = std::min(a.lo - 1, b.lo);
    c.hi = std::max(a.hi - 1, b.hi);
    if (c.hi < c.lo) { c.lo = 0; c.hi = -1; }
    for (int m = c.lo; m <= c.hi; ++m) c.dims[m] = a.dim(m + 1) + b.dim(m);
    for (int m = c.lo - 1; m <= c.hi; ++m) {
        const std::size_t sa = a.dim(m + 1), sb = b.dim(m);
        const std::size_t ta = a.dim(m + 2), tb = b.dim(m + 1);
        RatMatrix d(ta + tb, sa + sb);
        RatMatrix da = a.d(m + 1), db = b.d(m), fm = f.mat(m + 1);
        for (std::size_t i = 0; i < ta; ++i)
            for (std::size_t j = 0; j < sa; ++j) d(i, j) = -da(i, j);
        for (std::size_t i = 0; i < tb; ++i) {
            for (std::size_t j = 0; j < sa; ++j) d(ta + i, j) = fm(i, j);
            for (std::size_t j = 0; j < sb; ++j) d(ta + i, sa + j) = db(i, j);
        }
        c.diff[m] = d;
    }

    ConeResult r;
    r.cone = c;
    r.inject.source = b;
    r.inject.target = c;
    for (int m = c.lo; m <= c.hi; ++m) {
        RatMatrix inj(c.dim(m), b.dim(m));
        for (std::size_t i = 0; i < b.dim(m); ++i) inj(a.dim(m + 1) + i, i) = 1;
        r.inject.mats[m] = inj;
    }
    r.project.source = c;
    r.project.target = shift(a, 1);
    for (int m = c.lo; m <= c.hi; ++m) {
        RatMatrix prj(a.dim(m + 1), c.dim(m));
        for (std::size_t i = 0; i < a.dim(m + 1); ++i) prj(i, i) = 1;
        r.project.mats[m] = prj;
    }
    return r;
}

/// Per-degree cohomology dimensions: dim ker d^m - rank d^{m-1}.
inline std::map<int, std::size_t> cohomology_dims(const CochainComplex& c) {
    if (!validate_complex(c))
        throw std::invalid_argument("cohomology_dims: not a complex (d*d != 0)");
    std::map<int, std::size_t> h;
    for (int m = c.lo; m <= c.hi; ++m) {
        std::size_t z = c.dim(m) - rank(c.d(m));
        h[m] = z - rank(c.d(m - 1));
    }
    return h;
}

inline long euler_characteristic(const CochainComplex& c) {
    long chi = 0;
    for (const auto& [m, n] : c.dims)
        chi += (m % 2 == 0 ? 1 : -1) * static_cast<long>(n);
    return chi;
}

/// True iff the induced maps on cohomology are isomorphisms in every degree.
/// Computed exactly from cycle and boundary spans.
inline bool quasi_iso(const ChainMap& f) {
    if (f.degree != 0)
        throw std::invalid_argument("quasi_iso: chain map must have degree 0");
    if (!is_chain_map(f))
        throw std::invalid_argument("quasi_iso: not a chain map");
    int lo = std::min(f.source.lo, f.target.lo);
    int hi = std::max(f.source.hi, f.target.hi);
    for (int m = lo; m <= hi; ++m) {
        RatMatrix za = kernel_basis(f.source.d(m));
        RatMatrix zb = kernel_basis(f.target.d(m));
        RatMatrix ba = f.source.d(m - 1); // spans boundaries of source
        RatMatrix bb = f.target.d(m - 1);
        std::size_t ha = za.cols() - rank(ba);
        std::size_t zb_dim = zb.cols();
        RatMatrix fza = f.mat(m) * za;
        std::size_t r_bb = rank(bb);
        std::size_t r_img = rank(hstack(fza, bb)); // span of image classes + boundaries
        // injective on H^m: image of induced map has full dimension ha
        if (r_img - r_bb != ha) return false;
        // surjective on H^m: image classes + boundaries exhaust the cycles
        if (r_img != zb_dim) return false;
    }
    return true;
}

} // namespace dubois
