#pragma once

#include "dubois/complex.hpp"
#include "dubois/linalg.hpp"

#include <map>
#include <string>
#include <vector>

namespace dubois {

/// Decreasing filtration of an ambient complex by subcomplexes.
///
/// Level p is stored as a span: per degree m, a matrix whose columns span
/// F^p in the ambient coordinates of degree m. F^0 is the full ambient,
/// F^{n+1} = 0. Negative p refers to F^0 (the filtration is constant there).
struct FilteredComplex {
    CochainComplex ambient;
    int n = 0;
    std::vector<std::map<int, RatMatrix>> levels; // index p in [0, n+1]

    RatMatrix span(int p, int m) const {
        if (p < 0) p = 0;
        if (p > n + 1) p = n + 1;
        if (p < static_cast<int>(levels.size())) {
            auto it = levels[p].find(m);
            if (it != levels[p].end()) return it->second;
        }
        return RatMatrix::zero(ambient.dim(m), 0);
    }
};

/// Checks the four filtration invariants exactly. On failure returns false
/// and, if `why` is given, the first violated level/degree.
inline bool validate_filtration(const FilteredComplex& f, std::string* why = nullptr) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (static_cast<int>(f.levels.size()) != f.n + 2)
        return fail("expected " + std::to_string(f.n + 2) + " levels, found " +
                    std::to_string(f.levels.size()));
    if (!validate_complex(f.ambient)) return fail("ambient is not a complex");
    for (int p = 0; p <= f.n + 1; ++p)
        for (const auto& [m, s] : f.levels[p])
            if (s.rows() != f.ambient.dim(m))
                return fail("level " + std::to_string(p) + " degree " + std::to_string(m) +
                            ": span has wrong ambient dimension");
    for (int m = f.ambient.lo; m <= f.ambient.hi; ++m) {
        if (rank(f.span(0, m)) != f.ambient.dim(m))
            return fail("F^0 is not full at degree " + std::to_string(m));
        if (f.span(f.n + 1, m).cols() != 0 && rank(f.span(f.n + 1, m)) != 0)
            return fail("F^{n+1} nonzero at degree " + std::to_string(m));
        for (int p = 0; p <= f.n; ++p)
            if (!subspace_contains(f.span(p, m), f.span(p + 1, m)))
                return fail("F^" + std::to_string(p + 1) + " not contained in F^" +
                            std::to_string(p) + " at degree " + std::to_string(m));
    }
    for (int p = 0; p <= f.n + 1; ++p)
        for (int m = f.ambient.lo; m < f.ambient.hi; ++m)
            if (!subspace_contains(f.span(p, m + 1), f.ambient.d(m) * f.span(p, m)))
                return fail("d(F^" + std::to_string(p) + ") not contained in F^" +
                            std::to_string(p) + " at degree " + std::to_string(m));
    return true;
}

/// Stupid truncation filtration: F^p keeps the complex only in degrees >= p.
inline FilteredComplex bete_filtration(const CochainComplex& c) {
    if (!validate_complex(c))
        throw std::invalid_argument("bete_filtration: input is not a complex");
    FilteredComplex f;
    f.ambient = c;
    f.n = std::max(c.hi, 0);
    f.levels.resize(f.n + 2);
    for (int p = 0; p <= f.n + 1; ++p)
        for (int m = c.lo; m <= c.hi; ++m)
            if (m >= p && c.dim(m))
                f.levels[p][m] = RatMatrix::identity(c.dim(m));
    return f;
}

struct SubComplex {
    CochainComplex complex;         // abstract complex on the chosen basis
    ChainMap include;               // into the ambient
    std::map<int, RatMatrix> basis; // ambient_dim(m) x dim(m), the chosen columns
};

/// The subcomplex F^p with basis the pivot columns of the stored span, plus
/// its inclusion into the ambient complex.
inline SubComplex sub_complex(const FilteredComplex& f, int p) {
    if (p > f.n + 1)
        throw std::invalid_argument("sub_complex: level out of range");
    SubComplex s;
    s.complex.twist_weight = f.ambient.twist_weight;
    s.complex.lo = f.ambient.lo;
    s.complex.hi = f.ambient.hi;
    if (s.complex.hi < s.complex.lo) { s.complex.lo = 0; s.complex.hi = -1; }
    for (int m = f.ambient.lo; m <= f.ambient.hi; ++m) {
        RatMatrix b = column_space_basis(f.span(p, m));
        s.basis[m] = b;
        s.complex.dims[m] = b.cols();
    }
    for (int m = f.ambient.lo; m < f.ambient.hi; ++m) {
        RatMatrix image = f.ambient.d(m) * s.basis[m];
        auto x = solve(s.basis[m + 1], image);
        if (!x)
            throw std::invalid_argument("sub_complex: level " + std::to_string(p) +
                                        " is not d-stable at degree " + std::to_string(m));
        s.complex.diff[m] = *x;
    }
    s.include.source = s.complex;
    s.include.target = f.ambient;
    s.include.mats = s.basis;
    return s;
}

struct QuotientComplex {
    CochainComplex complex;
    std::map<int, RatMatrix> proj; // ambient coords -> quotient coords
    std::map<int, RatMatrix> sect; // quotient coords -> ambient coords
};

/// Quotient of a complex by a d-stable subspace span, with induced
/// differential computed by lift / apply d / push forward.
inline QuotientComplex quotient_complex(const CochainComplex& amb,
                                        const std::map<int, RatMatrix>& sub_spans) {
    auto span_at = [&](int m) {
        auto it = sub_spans.find(m);
        if (it != sub_spans.end()) return column_space_basis(it->second);
        return RatMatrix::zero(amb.dim(m), 0);
    };
    QuotientComplex q;
    q.complex.twist_weight = amb.twist_weight;
    q.complex.lo = amb.lo;
    q.complex.hi = amb.hi;
    if (q.complex.hi < q.complex.lo) { q.complex.lo = 0; q.complex.hi = -1; }
    for (int m = amb.lo; m <= amb.hi; ++m) {
        Quotient quo = quotient_with_section(amb.dim(m), span_at(m));
        q.proj[m] = quo.proj;
        q.sect[m] = quo.section;
        q.complex.dims[m] = quo.proj.rows();
    }
    for (int m = amb.lo; m < amb.hi; ++m) {
        // well-definedness: d must carry the subspace into the subspace
        if (!(q.proj[m + 1] * (amb.d(m) * span_at(m))).is_zero())
            throw std::invalid_argument("quotient_complex: subspace not d-stable at degree " +
                                        std::to_string(m));
        q.complex.diff[m] = q.proj[m + 1] * amb.d(m) * q.sect[m];
    }
    return q;
}

/// The associated graded piece F^p / F^{p+1}, in the coordinates of F^p.
inline QuotientComplex graded_piece_data(const FilteredComplex& f, int p) {
    SubComplex sp = sub_complex(f, p);
    std::map<int, RatMatrix> sub_in_p;
    for (int m = f.ambient.lo; m <= f.ambient.hi; ++m) {
        auto x = solve(sp.basis[m], f.span(p + 1, m));
        if (!x)
            throw std::invalid_argument("graded_piece: F^{p+1} not contained in F^p at degree " +
                                        std::to_string(m));
        sub_in_p[m] = *x;
    }
    return quotient_complex(sp.complex, sub_in_p);
}

inline CochainComplex graded_piece(const FilteredComplex& f, int p) {
    if (p < 0 || p > f.n)
        throw std::invalid_argument("graded_piece: level out of range");
    return graded_piece_data(f, p).complex;
}

/// Degreewise exactness of 0 -> A -> B -> C -> 0 given a: A->B and b: B->C.
inline bool check_ses(const ChainMap& a, const ChainMap& b) {
    if (a.degree != 0 || b.degree != 0)
        throw std::invalid_argument("check_ses: maps must have degree 0");
    if (!same_dims(a.target, b.source))
        throw std::invalid_argument("check_ses: middle terms disagree");
    if (a.source.twist_weight != a.target.twist_weight ||
        b.source.twist_weight != b.target.twist_weight)
        throw std::invalid_argument("check_ses: twist weight mismatch in row");
    if (!is_chain_map(a) || !is_chain_map(b))
        throw std::invalid_argument("check_ses: arguments are not chain maps");
    int lo = std::min({a.source.lo, a.target.lo, b.target.lo});
    int hi = std::max({a.source.hi, a.target.hi, b.target.hi});
    for (int m = lo; m <= hi; ++m) {
        RatMatrix am = a.mat(m), bm = b.mat(m);
        if (rank(am) != a.source.dim(m)) return false;        // a injective
        if (rank(bm) != b.target.dim(m)) return false;        // b surjective
        if (!(bm * am).is_zero()) return false;               // im a <= ker b
        if (rank(am) != b.source.dim(m) - rank(bm)) return false; // im a = ker b
    }
    return true;
}

} // namespace dubois
