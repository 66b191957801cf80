#pragma once

#include "dubois/complex.hpp"
#include "dubois/filtered.hpp"
#include "dubois/report.hpp"
#include "dubois/tower.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

namespace dubois {

enum class ModelKind { smooth_plane, nodal_union, nodal_normalization_target, custom };

/// A concrete algebraic incarnation: filtered complex, wedge operator,
/// relative-forms references for the graded comparisons, and basis labels.
struct ModelBundle {
    ModelKind kind = ModelKind::custom;
    unsigned D = 0;
    FilteredComplex F;
    WedgeOperator W;
    CochainComplex relative_complex;                 // smooth family only
    std::map<int, CochainComplex> reference_relative; // p -> stand-in, placed in degree p
    std::map<int, std::vector<std::string>> labels;  // ambient basis labels per degree
    bool has_comparison_maps = false;
};

namespace monomial {

/// Exponent vectors of total degree <= D in `vars` variables, fixed order.
inline std::vector<std::vector<unsigned>> list(unsigned vars, unsigned D) {
    std::vector<std::vector<unsigned>> out;
    std::vector<unsigned> cur(vars, 0);
    // counts in lexicographic order of exponent vectors
    auto rec = [&](auto&& self, unsigned pos, unsigned left) -> void {
        if (pos == vars) {
            out.push_back(cur);
            return;
        }
        for (unsigned e = 0; e <= left; ++e) {
            cur[pos] = e;
            self(self, pos + 1, left - e);
        }
        cur[pos] = 0;
    };
    rec(rec, 0, D);
    return out;
}

inline std::size_t index_of(const std::vector<std::vector<unsigned>>& mons,
                            const std::vector<unsigned>& m) {
    auto it = std::find(mons.begin(), mons.end(), m);
    if (it == mons.end()) throw std::logic_error("monomial not in list");
    return static_cast<std::size_t>(it - mons.begin());
}

/// k-element subsets of {0..vars-1}, each sorted, in lexicographic order.
inline std::vector<std::vector<unsigned>> subsets(unsigned vars, unsigned k) {
    std::vector<std::vector<unsigned>> out;
    std::vector<unsigned> cur;
    auto rec = [&](auto&& self, unsigned start) -> void {
        if (cur.size() == k) {
            out.push_back(cur);
            return;
        }
        for (unsigned v = start; v < vars; ++v) {
            cur.push_back(v);
            self(self, v + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

inline std::string label(const std::vector<unsigned>& expo, const std::vector<unsigned>& subset,
                         const std::vector<std::string>& var_names) {
    std::string s;
    bool any = false;
    for (std::size_t v = 0; v < expo.size(); ++v) {
        if (expo[v] == 0) continue;
        if (any) s += "*";
        s += var_names[v];
        if (expo[v] > 1) s += "^" + std::to_string(expo[v]);
        any = true;
    }
    if (!any) s = "1";
    for (std::size_t i = 0; i < subset.size(); ++i)
        s += (i == 0 ? " d" : "^d") + var_names[subset[i]];
    return s;
}

} // namespace monomial

/// Truncated polynomial de Rham complex: degree-k piece has basis
/// {monomial of total degree <= D} x {k-subsets of the variables}; the
/// differential is the exterior derivative (coefficient-degree lowering,
/// hence stable under the truncation).
inline CochainComplex truncated_de_rham(unsigned num_vars, unsigned D) {
    if (num_vars < 1 || D < 1)
        throw std::invalid_argument("truncated_de_rham: need num_vars >= 1, D >= 1");
    auto mons = monomial::list(num_vars, D);
    CochainComplex c;
    c.lo = 0;
    c.hi = static_cast<int>(num_vars);
    std::vector<std::vector<std::vector<unsigned>>> subs(num_vars + 1);
    for (unsigned k = 0; k <= num_vars; ++k) {
        subs[k] = monomial::subsets(num_vars, k);
        c.dims[static_cast<int>(k)] = mons.size() * subs[k].size();
    }
    for (unsigned k = 0; k < num_vars; ++k) {
        RatMatrix d(c.dims[k + 1], c.dims[k]);
        for (std::size_t sj = 0; sj < subs[k].size(); ++sj) {
            const auto& S = subs[k][sj];
            for (std::size_t mj = 0; mj < mons.size(); ++mj) {
                std::size_t col = sj * mons.size() + mj;
                for (unsigned v = 0; v < num_vars; ++v) {
                    if (std::find(S.begin(), S.end(), v) != S.end()) continue;
                    if (mons[mj][v] == 0) continue;
                    auto dm = mons[mj];
                    dm[v] -= 1;
                    std::vector<unsigned> T = S;
                    auto pos = std::lower_bound(T.begin(), T.end(), v);
                    int sign = (pos - T.begin()) % 2 == 0 ? 1 : -1;
                    T.insert(pos, v);
                    std::size_t ti = monomial::index_of(subs[k + 1], T);
                    std::size_t row = ti * mons.size() + monomial::index_of(mons, dm);
                    d(row, col) += sign * static_cast<int>(mons[mj][v]);
                }
            }
        }
        c.diff[static_cast<int>(k)] = d;
    }
    return c;
}

/// X = affine plane (t, x), C = affine line (t), f = projection. Filtration
/// is the stupid truncation of the truncated absolute de Rham complex, the
/// wedge is "wedge with dt" on the right.
inline ModelBundle build_smooth_plane_family(unsigned D) {
    if (D < 2) throw std::invalid_argument("build_smooth_plane_family: need D >= 2");
    const unsigned vars = 2; // t = var 0, x = var 1
    auto mons = monomial::list(vars, D);
    const std::size_t M = mons.size();

    ModelBundle b;
    b.kind = ModelKind::smooth_plane;
    b.D = D;
    CochainComplex amb = truncated_de_rham(vars, D);
    b.F = bete_filtration(amb);

    // wedge on the right: (f dx_S) ^ dt = (-1)^{|S|} f dt^dx_S, zero if dt in S
    b.W.carrier = b.F;
    std::vector<std::vector<std::vector<unsigned>>> subs = {
        monomial::subsets(vars, 0), monomial::subsets(vars, 1), monomial::subsets(vars, 2)};
    for (unsigned k = 0; k < vars; ++k) {
        RatMatrix w(amb.dim(k + 1), amb.dim(k));
        for (std::size_t sj = 0; sj < subs[k].size(); ++sj) {
            const auto& S = subs[k][sj];
            if (std::find(S.begin(), S.end(), 0u) != S.end()) continue;
            std::vector<unsigned> T = S;
            T.insert(T.begin(), 0u);
            std::size_t ti = monomial::index_of(subs[k + 1], T);
            int sign = S.size() % 2 == 0 ? 1 : -1;
            for (std::size_t mj = 0; mj < M; ++mj)
                w(ti * M + mj, sj * M + mj) = sign;
        }
        b.W.mats[static_cast<int>(k)] = w;
    }

    // relative complex: forms in dx only, same coefficient truncation
    {
        CochainComplex rel;
        rel.lo = 0;
        rel.hi = 1;
        rel.dims[0] = M;
        rel.dims[1] = M;
        RatMatrix d(M, M);
        for (std::size_t mj = 0; mj < M; ++mj) {
            if (mons[mj][1] == 0) continue;
            auto dm = mons[mj];
            dm[1] -= 1;
            d(monomial::index_of(mons, dm), mj) += static_cast<int>(mons[mj][1]);
        }
        rel.diff[0] = d;
        b.relative_complex = rel;
    }

    // references: Omega^p_{X/C} placed in degree p, at the weight of Gr_E^p
    const int n = 2;
    for (int p = 0; p <= n - 1; ++p) {
        CochainComplex r;
        r.lo = r.hi = p;
        r.dims[p] = M;
        r.twist_weight = p - n;
        b.reference_relative[p] = r;
    }

    std::vector<std::string> names = {"t", "x"};
    for (unsigned k = 0; k <= vars; ++k) {
        std::vector<std::string>& lab = b.labels[static_cast<int>(k)];
        for (const auto& S : subs[k])
            for (const auto& mo : mons) lab.push_back(monomial::label(mo, S, names));
    }
    b.has_comparison_maps = true;
    return b;
}

/// Comparison maps for the smooth family: contraction by d/dt, defined on
/// E^p and killing delta_p(E^{p+1}); check_assoc_graded descends them to the
/// graded quotients. Nonzero only in degree p, where (E^p)^p is the
/// sub-basis of F^{p+1} in ambient degree p+1.
inline std::map<int, ChainMap> smooth_comparison_maps(const ModelBundle& b,
                                                      const DuBoisTower& t) {
    if (b.kind != ModelKind::smooth_plane)
        throw std::invalid_argument("smooth_comparison_maps: not the smooth plane bundle");
    auto mons = monomial::list(2, b.D);
    const std::size_t M = mons.size();
    std::map<int, ChainMap> out;
    for (int p = 0; p <= t.n - 1; ++p) {
        ChainMap cm;
        cm.source = t.e(p);
        cm.target = b.reference_relative.at(p);
        // basis of F^{p+1} in ambient degree p+1, contracted: keep the dt-part
        const RatMatrix& basis = t.sub.at(p + 1).basis.at(p + 1);
        // in both ambient degrees the dt-carrying block comes first (dt before
        // dx, dt^dx the only 2-form block), so contraction keeps columns 0..M-1
        RatMatrix contract(M, b.F.ambient.dim(p + 1));
        for (std::size_t mj = 0; mj < M; ++mj) contract(mj, mj) = 1;
        RatMatrix first = contract * basis; // M x dim F^{p+1, p+1}
        RatMatrix mat(M, t.e(p).dim(p));
        for (std::size_t i = 0; i < M; ++i)
            for (std::size_t j = 0; j < first.cols(); ++j) mat(i, j) = first(i, j);
        cm.mats[p] = mat;
        out[p] = cm;
    }
    return out;
}

/// X = union of the two coordinate lines in the plane, f = x + y, resolved
/// by the square (two disjoint lines, the node, its two preimages). The
/// incarnation is the total complex with the preimage column shifted by one.
///
/// Ambient layout, degree 0: functions on line 1 (u^0..u^D), functions on
/// line 2 (v^0..v^D), the constant on the node Z. Degree 1: u^i du, v^i dv,
/// then the two point values on Z-tilde.
inline ModelBundle build_nodal_union_family(unsigned D) {
    if (D < 2) throw std::invalid_argument("build_nodal_union_family: need D >= 2");
    const std::size_t L = D + 1; // per-line coefficient dimension
    ModelBundle b;
    b.kind = ModelKind::nodal_union;
    b.D = D;

    CochainComplex amb;
    amb.lo = 0;
    amb.hi = 1;
    amb.dims[0] = 2 * L + 1;
    amb.dims[1] = 2 * L + 2;
    RatMatrix d0(2 * L + 2, 2 * L + 1);
    for (std::size_t line = 0; line < 2; ++line)
        for (std::size_t i = 1; i <= D; ++i)
            d0(line * L + (i - 1), line * L + i) = static_cast<int>(i); // derivative
    // restriction-difference: value at 0 on each branch minus the node value
    d0(2 * L + 0, 0 * L + 0) = 1;
    d0(2 * L + 1, 1 * L + 0) = 1;
    d0(2 * L + 0, 2 * L) = -1;
    d0(2 * L + 1, 2 * L) = -1;
    amb.diff[0] = d0;

    b.F.ambient = amb;
    b.F.n = 1;
    b.F.levels.resize(3);
    b.F.levels[0][0] = RatMatrix::identity(2 * L + 1);
    b.F.levels[0][1] = RatMatrix::identity(2 * L + 2);
    RatMatrix f1(2 * L + 2, 2 * L); // one-forms on the two lines only
    for (std::size_t j = 0; j < 2 * L; ++j) f1(j, j) = 1;
    b.F.levels[1][1] = f1;

    // wedge with f*(dt): du on line 1, dv on line 2, zero on the points
    b.W.carrier = b.F;
    RatMatrix w0(2 * L + 2, 2 * L + 1);
    for (std::size_t j = 0; j < 2 * L; ++j) w0(j, j) = 1;
    b.W.mats[0] = w0;

    // reference for p = 0 from the absolute-to-relative triangle at top
    // degree: Omega^0_{X/C} (x) L = Gr_F^1 [1], so the stand-in is
    // F^1[1] (x) L^{-1}, which lives in degree 0.
    b.reference_relative[0] = twist(shift(sub_complex(b.F, 1).complex, 1), -1);

    auto& l0 = b.labels[0];
    auto& l1 = b.labels[1];
    for (std::size_t line = 0; line < 2; ++line) {
        std::string var = line == 0 ? "u" : "v";
        for (std::size_t i = 0; i <= D; ++i)
            l0.push_back(i == 0 ? "1@" + var : var + (i > 1 ? "^" + std::to_string(i) : "") + "@" + var);
        for (std::size_t i = 0; i <= D; ++i)
            l1.push_back((i == 0 ? std::string("1") : var + (i > 1 ? "^" + std::to_string(i) : "")) +
                         " d" + var);
    }
    l0.push_back("1@Z");
    l1.push_back("1@Zt1");
    l1.push_back("1@Zt2");
    return b;
}

/// The smooth target of the normalization morphism: two disjoint lines over
/// the base via u and v respectively, with its own bete filtration and wedge.
inline ModelBundle build_nodal_normalization_target(unsigned D) {
    const std::size_t L = D + 1;
    ModelBundle b;
    b.kind = ModelKind::nodal_normalization_target;
    b.D = D;

    CochainComplex amb;
    amb.lo = 0;
    amb.hi = 1;
    amb.dims[0] = 2 * L;
    amb.dims[1] = 2 * L;
    RatMatrix d0(2 * L, 2 * L);
    for (std::size_t line = 0; line < 2; ++line)
        for (std::size_t i = 1; i <= D; ++i)
            d0(line * L + (i - 1), line * L + i) = static_cast<int>(i);
    amb.diff[0] = d0;
    b.F = bete_filtration(amb);

    b.W.carrier = b.F;
    b.W.mats[0] = RatMatrix::identity(2 * L); // f ^ du resp. f ^ dv

    b.reference_relative[0] = twist(shift(sub_complex(b.F, 1).complex, 1), -1);

    auto& l0 = b.labels[0];
    auto& l1 = b.labels[1];
    for (std::size_t line = 0; line < 2; ++line) {
        std::string var = line == 0 ? "u" : "v";
        for (std::size_t i = 0; i <= D; ++i) {
            std::string mono = i == 0 ? "1" : var + (i > 1 ? "^" + std::to_string(i) : "");
            l0.push_back(mono + "@" + var);
            l1.push_back(mono + " d" + var);
        }
    }
    return b;
}

struct NormalizationData {
    ModelBundle X; // nodal union
    ModelBundle Y; // disjoint lines
    ChainMap gamma_ambient; // pull-back of forms: drop the Z / Z-tilde strata
};

inline NormalizationData build_nodal_normalization(unsigned D) {
    NormalizationData nd;
    nd.X = build_nodal_union_family(D);
    nd.Y = build_nodal_normalization_target(D);
    const std::size_t L = D + 1;
    ChainMap g;
    g.source = nd.X.F.ambient;
    g.target = nd.Y.F.ambient;
    RatMatrix g0(2 * L, 2 * L + 1), g1(2 * L, 2 * L + 2);
    for (std::size_t j = 0; j < 2 * L; ++j) {
        g0(j, j) = 1;
        g1(j, j) = 1;
    }
    g.mats[0] = g0;
    g.mats[1] = g1;
    nd.gamma_ambient = g;
    return nd;
}

/// Restricts an ambient filtered morphism to per-level maps in the towers'
/// sub-bases (solving against the chosen basis columns).
inline std::map<int, ChainMap> restrict_filtered_morphism(const ChainMap& gamma_ambient,
                                                          const DuBoisTower& tX,
                                                          const DuBoisTower& tY) {
    std::map<int, ChainMap> out;
    for (int p = tX.p_min; p <= tX.n + 1; ++p) {
        ChainMap g;
        g.source = tX.sub.at(p).complex;
        g.target = tY.sub.at(p).complex;
        for (int m = tX.F.ambient.lo; m <= tX.F.ambient.hi; ++m) {
            RatMatrix img = gamma_ambient.mat(m) * tX.sub.at(p).basis.at(m);
            auto x = solve(tY.sub.at(p).basis.at(m), img);
            if (!x)
                throw std::invalid_argument("restrict_filtered_morphism: morphism not filtered at p = " +
                                            std::to_string(p) + ", degree " + std::to_string(m));
            g.mats[m] = *x;
        }
        out[p] = g;
    }
    return out;
}

/// Specializes t = t0 in the smooth family's relative complex and compares
/// against the fiber's truncated de Rham complex.
inline CheckReport fiber_restriction_smooth_check(const ModelBundle& b, const Rat& t0) {
    if (b.kind != ModelKind::smooth_plane)
        throw std::invalid_argument("fiber_restriction_smooth_check: not the smooth plane bundle");
    auto mons = monomial::list(2, b.D);
    const std::size_t M = mons.size();
    CochainComplex fiber = truncated_de_rham(1, b.D);
    const std::size_t Mf = fiber.dim(0);

    RatMatrix s(Mf, M); // t^i x^j -> t0^i x^j
    for (std::size_t mj = 0; mj < M; ++mj) {
        Rat coef = 1;
        for (unsigned e = 0; e < mons[mj][0]; ++e) coef *= t0;
        s(mons[mj][1], mj) += coef;
    }
    ChainMap sub;
    sub.source = b.relative_complex;
    sub.target = fiber;
    sub.mats[0] = s;
    sub.mats[1] = s;

    CheckReport rep;
    rep.name = "fiber_restriction";
    rep.add(0, is_chain_map(sub), "exact", "specialization commutes with d");
    bool surj = rank(s) == Mf;
    rep.add(1, surj, "exact", "specialization surjects onto the fiber complex");
    bool dims_ok = fiber.dim(0) == Mf && fiber.dim(1) == Mf;
    rep.add(2, dims_ok, "exact", "fiber dims match truncated de Rham of one variable");
    auto h_fiber = cohomology_dims(fiber);
    auto h_ref = cohomology_dims(truncated_de_rham(1, b.D));
    rep.add(3, h_fiber == h_ref, "exact", "fiber cohomology dims match");
    return rep;
}

} // namespace dubois
