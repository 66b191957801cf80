#pragma once

#include "dubois/complex.hpp"
#include "dubois/filtered.hpp"
#include "dubois/report.hpp"

#include <map>
#include <stdexcept>
#include <string>

namespace dubois {

/// Degree +1, square-zero, filtration-raising operator in ambient
/// coordinates: the geometric "wedge with the pulled-back 1-form". It
/// commutes with d; the chain map into the shifted complex carries the
/// Koszul sign (-1)^m, applied in sign_normalized().
struct WedgeOperator {
    FilteredComplex carrier;
    std::map<int, RatMatrix> mats; // mat(m): dim(m+1) x dim(m)

    RatMatrix mat(int m) const {
        auto it = mats.find(m);
        if (it != mats.end()) return it->second;
        return RatMatrix::zero(carrier.ambient.dim(m + 1), carrier.ambient.dim(m));
    }

    /// W~^m = (-1)^m W^m, a degree-0 chain map ambient -> ambient[1] (x) L^{-1}.
    ChainMap sign_normalized() const {
        ChainMap f;
        f.source = carrier.ambient;
        f.target = twist(shift(carrier.ambient, 1), -1);
        for (int m = carrier.ambient.lo; m <= carrier.ambient.hi; ++m) {
            RatMatrix w = mat(m);
            f.mats[m] = (m % 2 == 0) ? w : -w;
        }
        return f;
    }
};

inline bool validate_wedge(const WedgeOperator& w, std::string* why = nullptr) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (!validate_filtration(w.carrier, why)) return false;
    const CochainComplex& a = w.carrier.ambient;
    for (const auto& [m, mat] : w.mats)
        if (mat.rows() != a.dim(m + 1) || mat.cols() != a.dim(m))
            return fail("wedge matrix shape mismatch at degree " + std::to_string(m));
    for (int m = a.lo; m < a.hi; ++m) {
        if (!(w.mat(m + 1) * w.mat(m)).is_zero())
            return fail("wedge not square-zero at degree " + std::to_string(m));
        if (a.d(m + 1) * w.mat(m) != w.mat(m + 1) * a.d(m))
            return fail("wedge does not commute with d at degree " + std::to_string(m));
    }
    // sign-normalized chain map law (forced by commutation, checked anyway)
    if (!is_chain_map(w.sign_normalized()))
        return fail("sign-normalized wedge violates the chain-map law");
    for (int p = 0; p <= w.carrier.n; ++p)
        for (int m = a.lo; m < a.hi; ++m)
            if (!subspace_contains(w.carrier.span(p + 1, m + 1), w.mat(m) * w.carrier.span(p, m)))
                return fail("wedge not filtered: W(F^" + std::to_string(p) +
                            ") escapes F^" + std::to_string(p + 1) + " at degree " +
                            std::to_string(m));
    return true;
}

struct SesRow {
    ChainMap include; // E^{p+1} -> E^p (x) L
    ChainMap project; // E^p (x) L -> F^{p+1}[1] (twisted to match)
};

/// The relative Du Bois tower {E^p} built by descending recursion:
/// E^p = cone(w_{p+1}) (x) L^{-1}, with E^p = 0 for p >= n.
///
/// Twist bookkeeping: E^p carries weight p - n, so every SES row
/// 0 -> E^{p+1} -> E^p (x) L -> F^{p+1}[1] -> 0 is weight-homogeneous once
/// the F-term is twisted to the same weight.
struct DuBoisTower {
    FilteredComplex F;
    WedgeOperator W;
    int p_min = -1;
    int n = 0;

    std::map<int, SubComplex> sub; // F^p as abstract complexes, p in [p_min, n+1]
    std::map<int, CochainComplex> E;    // p in [p_min, n]
    std::map<int, ChainMap> w;          // w_p : F^p (at weight p-n) -> E^p
    std::map<int, ChainMap> delta;      // E^{p+1} -> E^p, p in [p_min, n-1]
    std::map<int, SesRow> ses;          // p in [p_min, n]
    std::map<int, ChainMap> f_include;  // F^{p+1} -> F^p in sub-bases

    int weight(int p) const { return p - n; }

    const CochainComplex& e(int p) const {
        static const CochainComplex z = CochainComplex::zero();
        auto it = E.find(p);
        return it == E.end() ? z : it->second;
    }

    /// w''_p : F^p (x) L -> E^p (x) L (same matrices as w_p, weight view).
    ChainMap w_dd(int p) const {
        ChainMap f = w.at(p);
        f.source = twist(f.source, 1);
        f.target = twist(f.target, 1);
        return f;
    }

    /// w'_p : E^p (x) L -> F^{p+1}[1], the SES projection.
    ChainMap w_d(int p) const { return ses.at(p).project; }
};

namespace detail {

/// Restriction of the sign-normalized wedge to level p, landing in level p+1:
/// solves B_{p+1}(m+1) X = W~(m) B_p(m) per degree.
inline std::map<int, RatMatrix> wedge_in_sub_bases(const WedgeOperator& W,
                                                   const SubComplex& from,
                                                   const SubComplex& to) {
    std::map<int, RatMatrix> out;
    const CochainComplex& a = W.carrier.ambient;
    for (int m = a.lo; m <= a.hi; ++m) {
        RatMatrix wm = W.mat(m);
        RatMatrix img = (m % 2 == 0) ? wm * from.basis.at(m) : -(wm * from.basis.at(m));
        RatMatrix tgt = (m + 1 <= a.hi) ? to.basis.at(m + 1)
                                        : RatMatrix::zero(a.dim(m + 1), 0);
        auto x = solve(tgt, img);
        if (!x)
            throw std::invalid_argument("build_tower: wedge image escapes the next level at degree " +
                                        std::to_string(m));
        out[m] = *x;
    }
    return out;
}

} // namespace detail

/// Builds the tower down to p_min with all maps and SES witnesses.
inline DuBoisTower build_tower(const FilteredComplex& F, const WedgeOperator& W,
                               int p_min = -1) {
    std::string why;
    if (!validate_wedge(W, &why))
        throw std::invalid_argument("build_tower: invalid wedge: " + why);
    DuBoisTower t;
    t.F = F;
    t.W = W;
    t.n = F.n;
    t.p_min = p_min;
    if (p_min > t.n)
        throw std::invalid_argument("build_tower: p_min exceeds n");

    for (int p = t.n + 1; p >= p_min; --p) t.sub.emplace(p, sub_complex(F, p));
    // inclusion maps F^{p+1} -> F^p in the chosen sub-bases
    for (int p = p_min; p <= t.n; ++p) {
        const SubComplex& outer = t.sub.at(p);
        const SubComplex& inner = t.sub.at(p + 1);
        ChainMap inc;
        inc.source = inner.complex;
        inc.target = outer.complex;
        for (int m = F.ambient.lo; m <= F.ambient.hi; ++m) {
            auto x = solve(outer.basis.at(m), inner.basis.at(m));
            if (!x)
                throw std::invalid_argument("build_tower: filtration levels not nested at degree " +
                                            std::to_string(m));
            inc.mats[m] = *x;
        }
        t.f_include.emplace(p, std::move(inc));
    }

    // descending recursion
    t.E.emplace(t.n, CochainComplex::zero(t.weight(t.n)));
    {
        ChainMap wn = zero_map(twist(t.sub.at(t.n).complex, t.weight(t.n)),
                               CochainComplex::zero(t.weight(t.n)));
        t.w.emplace(t.n, std::move(wn));
    }
    for (int p = t.n - 1; p >= p_min; --p) {
        ConeResult cr = cone(t.w.at(p + 1));
        CochainComplex ep = twist(cr.cone, -1); // weight p - n

        SesRow row;
        row.include = cr.inject;              // E^{p+1} -> cone = E^p (x) L
        row.project = cr.project;             // cone -> F^{p+1}[1] at weight p+1-n
        t.ses.emplace(p, std::move(row));

        // delta_p : E^{p+1} -> E^p by cone functoriality on the square
        // (F^{p+2} -> F^{p+1}, E^{p+2} -> E^{p+1}).
        ChainMap dl;
        dl.source = t.e(p + 1);
        dl.target = ep;
        if (p + 1 < t.n) {
            const ChainMap& finc = t.f_include.at(p + 1); // F^{p+2} -> F^{p+1}
            const ChainMap& dnext = t.delta.at(p + 1);    // E^{p+2} -> E^{p+1}
            for (int m = dl.source.lo; m <= dl.source.hi; ++m)
                dl.mats[m] = block_diag(finc.mat(m + 1), dnext.mat(m));
        }
        t.delta.emplace(p, std::move(dl));
        t.E.emplace(p, std::move(ep));

        // w_p = (wedge restricted, 0) into F^{p+1}[1] (+) E^{p+1}
        std::map<int, RatMatrix> c = detail::wedge_in_sub_bases(W, t.sub.at(p), t.sub.at(p + 1));
        ChainMap wp;
        wp.source = twist(t.sub.at(p).complex, t.weight(p));
        wp.target = t.e(p);
        for (int m = wp.source.lo; m <= wp.source.hi; ++m) {
            std::size_t top = t.sub.at(p + 1).complex.dim(m + 1);
            std::size_t bot = t.e(p + 1).dim(m);
            RatMatrix mat(top + bot, wp.source.dim(m));
            const RatMatrix& cm = c.at(m);
            for (std::size_t i = 0; i < top; ++i)
                for (std::size_t j = 0; j < mat.cols(); ++j) mat(i, j) = cm(i, j);
            wp.mats[m] = mat;
        }
        if (!is_chain_map(wp))
            throw std::logic_error("build_tower: w_p violates the chain-map law at p = " +
                                   std::to_string(p));
        t.w.emplace(p, std::move(wp));
    }
    // trivial row at p = n: 0 -> 0 -> 0 -> F^{n+1}[1] = 0 -> 0
    {
        SesRow row;
        row.include = zero_map(CochainComplex::zero(t.weight(t.n) + 1), twist(t.e(t.n), 1));
        row.project = zero_map(twist(t.e(t.n), 1),
                               twist(shift(t.sub.at(t.n + 1).complex, 1), t.weight(t.n) + 1));
        t.ses.emplace(t.n, std::move(row));
    }
    return t;
}

/// Every tower row 0 -> E^{p+1} -> E^p (x) L -> F^{p+1}[1] -> 0, checked by
/// exact degreewise rank computations.
inline CheckReport verify_ses_tower(const DuBoisTower& t) {
    CheckReport rep;
    rep.name = "ses";
    for (int p = t.p_min; p <= t.n; ++p) {
        const SesRow& row = t.ses.at(p);
        bool ok = false;
        std::string note;
        try {
            ok = check_ses(row.include, row.project);
        } catch (const std::exception& e) {
            note = e.what();
        }
        rep.add(p, ok, "exact", note);
    }
    return rep;
}

/// delta_p is an injective chain map and the morphism of SES rows
/// (F-inclusion, delta_p (x) L, F[1]-inclusion) commutes exactly.
inline CheckReport verify_subcomplex(const DuBoisTower& t) {
    CheckReport rep;
    rep.name = "subcomplex";
    for (int p = t.p_min; p <= t.n - 1; ++p) {
        const ChainMap& dl = t.delta.at(p);
        bool ok = is_chain_map(dl);
        std::string note;
        if (!ok) note = "delta is not a chain map";
        if (ok)
            for (int m = dl.source.lo; m <= dl.source.hi && ok; ++m)
                if (rank(dl.mat(m)) != dl.source.dim(m)) {
                    ok = false;
                    note = "delta not injective at degree " + std::to_string(m);
                }
        if (ok && p + 1 <= t.n - 1) {
            // two commuting squares between row p+1 and row p
            const SesRow& top = t.ses.at(p + 1);
            const SesRow& bot = t.ses.at(p);
            const ChainMap& dnext = t.delta.at(p + 1);
            const ChainMap& finc = t.f_include.at(p + 1);
            int lo = t.e(p + 1).lo - 1, hi = t.e(p + 1).hi + 1;
            for (int m = lo; m <= hi && ok; ++m) {
                if (dl.mat(m) * top.include.mat(m) != bot.include.mat(m) * dnext.mat(m)) {
                    ok = false;
                    note = "left square fails at degree " + std::to_string(m);
                } else if (bot.project.mat(m) * dl.mat(m) !=
                           finc.mat(m + 1) * top.project.mat(m)) {
                    ok = false;
                    note = "right square fails at degree " + std::to_string(m);
                }
            }
        }
        rep.add(p, ok, "exact", note);
    }
    return rep;
}

struct GradedQuotient {
    CochainComplex complex;
    std::map<int, RatMatrix> proj;
    std::map<int, RatMatrix> sect;
};

/// E^p / delta_p(E^{p+1}) with induced differential.
inline GradedQuotient graded_quotient_data(const DuBoisTower& t, int p) {
    if (p < t.p_min || p > t.n - 1)
        throw std::invalid_argument("graded_quotient: p out of range");
    const ChainMap& dl = t.delta.at(p);
    std::map<int, RatMatrix> spans;
    for (int m = t.e(p).lo; m <= t.e(p).hi; ++m) spans[m] = dl.mat(m);
    QuotientComplex q = quotient_complex(t.e(p), spans);
    return {q.complex, q.proj, q.sect};
}

inline CochainComplex graded_quotient(const DuBoisTower& t, int p) {
    return graded_quotient_data(t, p).complex;
}

namespace detail {

/// Descends a map defined on an ambient complex to a map on quotients,
/// asserting well-definedness (it must kill the killed subspace).
inline RatMatrix descend(const RatMatrix& map_m, const RatMatrix& killed_src,
                         const RatMatrix& proj_tgt, const RatMatrix& sect_src) {
    if (!(proj_tgt * (map_m * killed_src)).is_zero())
        throw std::logic_error("descend: map does not respect the quotient");
    return proj_tgt * map_m * sect_src;
}

} // namespace detail

/// Per p: the nine-lemma row 0 -> Gr_E^{p+1} -> Gr_E^p (x) L -> Gr_F^{p+1}[1] -> 0,
/// plus (when a reference is available) comparison against the model's
/// relative-forms stand-in, by explicit quasi-isomorphism when a comparison
/// map is supplied and by cohomology-dims equality otherwise.
///
/// comparison_maps[p], when present, is a chain map E^p -> reference[p] that
/// kills delta_p(E^{p+1}); it is descended to the graded quotient here.
inline CheckReport check_assoc_graded(const DuBoisTower& t,
                                      const std::map<int, CochainComplex>& reference,
                                      const std::map<int, ChainMap>& comparison_maps = {}) {
    for (int p = 0; p <= t.n - 1; ++p)
        if (!reference.count(p))
            throw std::invalid_argument("check_assoc_graded: missing reference for p = " +
                                        std::to_string(p));
    CheckReport rep;
    rep.name = "assoc_graded";
    std::map<int, GradedQuotient> gr;
    for (int p = t.p_min; p <= t.n - 1; ++p) gr.emplace(p, graded_quotient_data(t, p));

    for (int p = t.p_min; p <= t.n - 1; ++p) {
        bool ok = true;
        std::string note;
        std::string evidence = "exact";
        try {
            // nine-lemma row on graded pieces
            const GradedQuotient& gp = gr.at(p);
            const SesRow& row = t.ses.at(p);
            CochainComplex grE_next =
                (p + 1 <= t.n - 1) ? gr.at(p + 1).complex : CochainComplex::zero(t.weight(p + 1));
            QuotientComplex grF = quotient_complex(
                t.sub.at(p + 1).complex,
                [&] {
                    std::map<int, RatMatrix> s;
                    for (int m = t.F.ambient.lo; m <= t.F.ambient.hi; ++m)
                        s[m] = t.f_include.at(p + 1).mat(m);
                    return s;
                }());

            ChainMap inc_bar;
            inc_bar.source = grE_next;
            inc_bar.target = twist(gp.complex, 1);
            ChainMap prj_bar;
            prj_bar.source = twist(gp.complex, 1);
            prj_bar.target = twist(shift(grF.complex, 1), t.weight(p) + 1);
            for (int m = t.e(p).lo; m <= t.e(p).hi; ++m) {
                if (p + 1 <= t.n - 1 && t.e(p + 1).dim(m) > 0) {
                    const GradedQuotient& gn = gr.at(p + 1);
                    RatMatrix killed = t.delta.at(p + 1).mat(m); // delta_{p+1}(E^{p+2})
                    inc_bar.mats[m] =
                        detail::descend(row.include.mat(m), killed, gp.proj.at(m), gn.sect.at(m));
                }
                RatMatrix killed_mid = t.delta.at(p).mat(m);
                prj_bar.mats[m] =
                    detail::descend(row.project.mat(m), killed_mid, grF.proj.at(m + 1), gp.sect.at(m));
            }
            ok = check_ses(inc_bar, prj_bar);
            if (!ok) note = "nine-lemma row not exact";

            // reference comparison
            if (ok && p >= 0) {
                const CochainComplex& ref = reference.at(p);
                auto cit = comparison_maps.find(p);
                if (cit != comparison_maps.end()) {
                    ChainMap bar;
                    bar.source = gp.complex;
                    bar.target = ref;
                    for (int m = gp.complex.lo; m <= gp.complex.hi; ++m) {
                        RatMatrix tgt_id = RatMatrix::identity(ref.dim(m));
                        bar.mats[m] = detail::descend(cit->second.mat(m), t.delta.at(p).mat(m),
                                                      tgt_id, gp.sect.at(m));
                    }
                    ok = quasi_iso(bar);
                    if (!ok) note = "comparison map is not a quasi-isomorphism";
                } else {
                    evidence = "dims-match";
                    ok = cohomology_dims(gp.complex) == cohomology_dims(ref);
                    if (!ok) note = "cohomology dims differ from reference";
                }
            }
        } catch (const std::exception& e) {
            ok = false;
            note = e.what();
        }
        rep.add(p, ok, evidence, note);
    }
    return rep;
}

/// The rotated triangles E^{p-1}[-1] (x) L -> F^p -> E^p -> +1: verifies the
/// underlying SES rows and that every F^p -> E^p is the restriction of the
/// single map F^0 -> E^0 (through the delta inclusions).
inline CheckReport abs_to_rel_triangles(const DuBoisTower& t) {
    if (t.p_min > -1)
        throw std::invalid_argument("abs_to_rel_triangles: requires p_min <= -1 (E^{-1} needed)");
    CheckReport rep;
    rep.name = "abs_to_rel";
    for (int p = 0; p <= t.n; ++p) {
        bool ok = true;
        std::string note;
        try {
            ok = check_ses(t.ses.at(p - 1).include, t.ses.at(p - 1).project);
            if (!ok) note = "underlying SES row fails at index " + std::to_string(p - 1);
            if (ok) {
                // composite inclusion E^p -> E^0 through the deltas
                ChainMap into_e0 = identity_map(t.e(p));
                for (int r = p - 1; r >= 0; --r) into_e0 = compose(t.delta.at(r), into_e0);
                // composite inclusion F^p -> F^0
                ChainMap into_f0 = identity_map(t.sub.at(p).complex);
                for (int r = p - 1; r >= 0; --r) into_f0 = compose(t.f_include.at(r), into_f0);
                ChainMap lhs = compose(into_e0, t.w.at(p));
                ChainMap rhs = compose(t.w.at(0), into_f0);
                for (int m = t.F.ambient.lo; m <= t.F.ambient.hi && ok; ++m)
                    if (lhs.mat(m) != rhs.mat(m)) {
                        ok = false;
                        note = "F^p -> E^p is not the restriction of F^0 -> E^0 at degree " +
                               std::to_string(m);
                    }
            }
        } catch (const std::exception& e) {
            ok = false;
            note = e.what();
        }
        rep.add(p, ok, "exact", note);
    }
    return rep;
}

/// True iff delta(-1) and delta(-2) induce isomorphisms on cohomology.
/// The chain-level inclusions are never square below p = 0 (each cone adds a
/// summand), so stationarity is checked at the level the statement lives on:
/// exact cohomology isomorphism.
inline bool stationary_check(const DuBoisTower& t) {
    if (t.p_min > -2)
        throw std::invalid_argument("stationary_check: requires p_min <= -2");
    if (t.e(0).is_zero() && t.e(-1).is_zero() && t.e(-2).is_zero()) return true;
    return quasi_iso(t.delta.at(-1)) && quasi_iso(t.delta.at(-2));
}

/// Lifts a filtered morphism gamma (per-level maps in sub-bases) to the
/// towers: alpha_p = (gamma_{p+1}[1], alpha_{p+1}) blockwise by descending
/// recursion. Throws if gamma is not filtered (squares with the level
/// inclusions must commute).
inline std::map<int, ChainMap> induce_tower_morphism(const std::map<int, ChainMap>& gamma,
                                                     const DuBoisTower& tX,
                                                     const DuBoisTower& tY) {
    if (tX.n != tY.n || tX.p_min != tY.p_min)
        throw std::invalid_argument("induce_tower_morphism: towers have different shapes");
    for (int p = tX.p_min; p <= tX.n; ++p) {
        if (!gamma.count(p))
            throw std::invalid_argument("induce_tower_morphism: gamma missing at p = " +
                                        std::to_string(p));
        if (!is_chain_map(gamma.at(p)))
            throw std::invalid_argument("induce_tower_morphism: gamma_p not a chain map at p = " +
                                        std::to_string(p));
        if (p < tX.n) {
            ChainMap lhs = compose(gamma.at(p), tX.f_include.at(p));
            ChainMap rhs = compose(tY.f_include.at(p), gamma.at(p + 1));
            if (!maps_equal(lhs, rhs))
                throw std::invalid_argument("induce_tower_morphism: gamma is not filtered at p = " +
                                            std::to_string(p));
        }
    }
    std::map<int, ChainMap> alpha;
    alpha.emplace(tX.n, zero_map(tX.e(tX.n), tY.e(tY.n)));
    for (int p = tX.n - 1; p >= tX.p_min; --p) {
        ChainMap a;
        a.source = tX.e(p);
        a.target = tY.e(p);
        const ChainMap& g = gamma.at(p + 1);
        const ChainMap& an = alpha.at(p + 1);
        for (int m = a.source.lo; m <= a.source.hi; ++m)
            a.mats[m] = block_diag(g.mat(m + 1), an.mat(m));
        alpha.emplace(p, std::move(a));
    }
    return alpha;
}

/// Commutation of diagram rows under (alpha_{p+1}, alpha_p (x) L, gamma_{p+1}[1])
/// for all p, plus the global square alpha_0 w_0^X = w_0^Y gamma_0.
inline CheckReport verify_functorial_diagram(const std::map<int, ChainMap>& alpha,
                                             const std::map<int, ChainMap>& gamma,
                                             const DuBoisTower& tX, const DuBoisTower& tY) {
    CheckReport rep;
    rep.name = "functorial";
    for (int p = tX.p_min; p <= tX.n - 1; ++p) {
        bool ok = true;
        std::string note;
        try {
            const SesRow& rx = tX.ses.at(p);
            const SesRow& ry = tY.ses.at(p);
            const ChainMap& beta = alpha.at(p); // same matrices as alpha_p, viewed (x) L
            int lo = tX.e(p).lo - 1, hi = tX.e(p).hi + 1;
            for (int m = lo; m <= hi && ok; ++m) {
                if (beta.mat(m) * rx.include.mat(m) != ry.include.mat(m) * alpha.at(p + 1).mat(m)) {
                    ok = false;
                    note = "left square fails at degree " + std::to_string(m);
                } else if (ry.project.mat(m) * beta.mat(m) !=
                           gamma.at(p + 1).mat(m + 1) * rx.project.mat(m)) {
                    ok = false;
                    note = "right square fails at degree " + std::to_string(m);
                }
            }
            if (ok && !is_chain_map(alpha.at(p))) {
                ok = false;
                note = "alpha_p is not a chain map";
            }
            if (ok && p == 0) {
                ChainMap lhs = compose(alpha.at(0), tX.w.at(0));
                ChainMap rhs = compose(tY.w.at(0), gamma.at(0));
                if (!maps_equal(lhs, rhs)) {
                    ok = false;
                    note = "global square at p = 0 fails";
                }
            }
        } catch (const std::exception& e) {
            ok = false;
            note = e.what();
        }
        rep.add(p, ok, "exact", note);
    }
    return rep;
}

} // namespace dubois
