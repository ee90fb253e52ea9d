#include "mwk/transfer.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "mwk/factor.hpp"

namespace mwk {

namespace {

/**
 * Splits off the omega_{E/k} factor of a twist label; returns the extra
 * label (possibly "") carried through the transfer.
 */
std::string split_omega_twist(const Extension& E, const std::string& twist) {
    if (twist.empty() || twist == E.w_label) return "";
    const std::string pre = E.w_label + "*";
    if (twist.rfind(pre, 0) == 0) return twist.substr(pre.size());
    const std::string suf = "*" + E.w_label;
    if (twist.size() > suf.size() &&
        twist.compare(twist.size() - suf.size(), suf.size(), suf) == 0)
        return twist.substr(0, twist.size() - suf.size());
    throw DomainError("transfer twist mismatch: element is not omega-twisted for " +
                      E.w_label);
}

/** One solution of M x = rhs (M given as rows), or nullopt if inconsistent. */
std::optional<std::vector<Value>> solve_exact(FieldId k, std::vector<std::vector<Value>> M,
                                              std::vector<Value> rhs) {
    size_t rows = M.size();
    size_t cols = rows ? M[0].size() : 0;
    std::vector<int> pivot_col(rows, -1);
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t p = r;
        while (p < rows && v_is_zero(M[p][c])) ++p;
        if (p == rows) continue;
        std::swap(M[p], M[r]);
        std::swap(rhs[p], rhs[r]);
        Value inv = v_inv(M[r][c]);
        for (size_t j = c; j < cols; ++j) M[r][j] = v_mul(inv, M[r][j]);
        rhs[r] = v_mul(inv, rhs[r]);
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || v_is_zero(M[i][c])) continue;
            Value f = M[i][c];
            for (size_t j = c; j < cols; ++j)
                M[i][j] = v_sub(M[i][j], v_mul(f, M[r][j]));
            rhs[i] = v_sub(rhs[i], v_mul(f, rhs[r]));
        }
        pivot_col[r] = static_cast<int>(c);
        ++r;
    }
    for (size_t i = r; i < rows; ++i)
        if (!v_is_zero(rhs[i])) return std::nullopt;
    std::vector<Value> x(cols, v_zero(k));
    for (size_t i = 0; i < r; ++i) x[pivot_col[i]] = rhs[i];
    return x;
}

/**
 * Decomposition of a Witt class in I^2 as sum_j d_j <<p_j>> <<q_j>>;
 * DomainError if the class is not even-rank with square discriminant.
 */
std::vector<std::tuple<Int, Value, Value>> i2_pfister_decomposition(const GWElement& delta) {
    FieldId k = delta.fid;
    std::vector<std::tuple<Int, Value, Value>> out;
    // signed diagonal entries
    std::vector<std::pair<int, Value>> diag;
    for (const auto& [n, u] : delta.terms) {
        long c = n.get_si();
        for (long i = 0; i < std::abs(c); ++i) diag.push_back({c > 0 ? 1 : -1, u});
    }
    if (diag.size() % 2 != 0) throw DomainError("Witt class of odd rank is not in I^2");
    // pair the entries into s * <a> <<c>> pieces
    std::vector<std::pair<int, Value>> residual;  // s * <<c>>
    for (size_t i = 0; i + 1 < diag.size(); i += 2) {
        auto [s1, a] = diag[i];
        auto [s2, b] = diag[i + 1];
        int s;
        Value front, inner;
        if (s1 == 1 && s2 == -1) {            // <a> - <b> = <a><<ab>>
            s = 1; front = a; inner = v_mul(a, b);
        } else if (s1 == -1 && s2 == 1) {     // <b> - <a> = <b><<ab>>
            s = 1; front = b; inner = v_mul(a, b);
        } else if (s1 == 1 && s2 == 1) {      // <a> + <b> = <a><<-ab>> in W
            s = 1; front = a; inner = v_neg(v_mul(a, b));
        } else {                              // -(<a> + <b>)
            s = -1; front = a; inner = v_neg(v_mul(a, b));
        }
        if (is_square(inner)) continue;       // <<square>> = 0
        // <a><<c>> = <<c>> - <<a>><<c>>
        if (!is_square(front)) out.push_back({Int(-s), front, inner});
        residual.push_back({s, inner});
    }
    // fold the remaining 1-fold Pfister forms
    std::vector<Value> pos;
    for (auto& [s, c] : residual) {
        pos.push_back(c);
        if (s < 0) out.push_back({Int(-1), c, c});  // -<<c>> = <<c>> - <<c,c>> in W
    }
    while (pos.size() > 1) {
        Value c = pos[pos.size() - 2];
        Value d = pos[pos.size() - 1];
        pos.pop_back();
        pos.pop_back();
        out.push_back({Int(1), c, d});              // <<c>> + <<d>> = <<cd>> + <<c,d>>
        Value cd = v_mul(c, d);
        if (!is_square(cd)) pos.push_back(cd);
    }
    if (!pos.empty())
        throw DomainError("Witt class with nontrivial discriminant is not in I^2");
    (void)k;
    return out;
}

/** Word lift of a Milnor symbol (eta-free words). */
MWElement km_word_lift(const KMSymbol& s) {
    MWElement r = mw_zero(s.fid, s.n);
    for (const auto& [c, w] : s.terms)
        r = mw_add(r, mw_word(s.fid, c, 0, w));
    return r;
}

/** Degree-0 (or eta-factored) transfer through the differential GW-transfer. */
MWElement transfer_low_degree(const Extension& E, const MWElement& a,
                              const std::string& extra) {
    int n = a.n;
    // factor eta^{-n}: each word eta^r[u..] of degree n <= 0 has r >= -n
    std::vector<MWWord> shifted;
    for (const auto& w : a.terms) {
        MWWord s = w;
        s.r = w.r + n;
        shifted.push_back(s);
    }
    MWElement a0 = mw_zero(E.ext, 0);
    for (const auto& w : shifted) a0 = mw_add(a0, mw_word(E.ext, w.c, w.r, w.u));
    GWElement g = mw_mu_prime(a0);
    g.twist = E.w_label;
    GWElement G = gw_transfer(E, g);
    MWElement R = mw_from_gw(G);
    if (n < 0) R = mw_mul(mw_word(E.base, 1, -n, {}), R);
    return mw_set_twist(R, extra);
}

bool chain_is_default(const Extension& E, const std::vector<Value>& chain) {
    if (chain.size() != E.gens.size()) return false;
    for (size_t i = 0; i < chain.size(); ++i) {
        Value gv = E.stage_deg[i] > 1
                       ? gen_value(E, i)
                       : eval_at_gens(mp_neg(mp_coeff_in(E.minpolys[i],
                                                         static_cast<int>(i), 0)),
                                      E);
        if (!v_eq(chain[i], gv)) return false;
    }
    return true;
}

/** A tower presentation of E/k along a generator chain, with the monomial
 * values (in E) matching the tower's basis order. */
struct ChainTower {
    Extension L;
    std::vector<Value> mono_values;  // in E.ext, ordered like ext_basis(L.ext)
};

ChainTower build_chain_tower(const Extension& E, const std::vector<Value>& chain) {
    FieldId k = E.base;
    int N = E.degree;
    std::vector<Value> cur = {v_one(E.ext)};
    std::vector<Monomial> curmono = {Monomial{}};
    int nv = static_cast<int>(chain.size());
    std::vector<MPoly> raw;  // stage polys, built in `nv` variables directly

    for (int i = 0; i < nv; ++i) {
        const Value& al = chain[i];
        if (v_is_zero(al)) throw DomainError("zero chain generator");
        if (al.fid != E.ext) throw DomainError("chain generator outside the extension");
        int maxd = N / static_cast<int>(cur.size());
        bool found = false;
        for (int d = 1; d <= maxd && !found; ++d) {
            std::vector<Value> cand;
            std::vector<std::vector<Value>> cols;
            Value ap = v_one(E.ext);
            std::vector<Value> alpow;  // al^0 .. al^{d-1}
            for (int j = 0; j < d; ++j) {
                alpow.push_back(ap);
                ap = v_mul(ap, al);
            }
            for (const auto& b : cur)
                for (int j = 0; j < d; ++j) {
                    Value v = v_mul(b, alpow[j]);
                    cand.push_back(v);
                    cols.push_back(ext_coords(v));
                }
            std::vector<Value> target = ext_coords(ap);  // al^d
            // assemble row-major system
            std::vector<std::vector<Value>> M(N, std::vector<Value>(cand.size(), v_zero(k)));
            for (size_t c = 0; c < cols.size(); ++c)
                for (int r0 = 0; r0 < N; ++r0) M[r0][c] = cols[c][r0];
            auto x = solve_exact(k, M, target);
            if (!x) continue;
            found = true;
            // stage polynomial t_i^d - sum x * mono * t_i^j
            MPoly f = mp_zero(k, nv);
            Monomial lead(nv, 0);
            lead[i] = d;
            mp_add_term(f, lead, v_one(k));
            for (size_t bi = 0; bi < cur.size(); ++bi)
                for (int j = 0; j < d; ++j) {
                    const Value& cxy = (*x)[bi * d + j];
                    if (v_is_zero(cxy)) continue;
                    Monomial m(nv, 0);
                    for (size_t g = 0; g < curmono[bi].size(); ++g) m[g] = curmono[bi][g];
                    m[i] = j;
                    mp_add_term(f, m, v_neg(cxy));
                }
            raw.push_back(f);
            // extend the spanning monomials
            std::vector<Value> nc;
            std::vector<Monomial> nm;
            for (size_t bi = 0; bi < cur.size(); ++bi)
                for (int j = 0; j < d; ++j) {
                    nc.push_back(cand[bi * d + j]);
                    Monomial m = curmono[bi];
                    m.push_back(j);
                    nm.push_back(m);
                }
            cur = std::move(nc);
            curmono = std::move(nm);
        }
        if (!found) throw DomainError("chain generator has unbounded degree");
    }
    if (static_cast<int>(cur.size()) != N)
        throw DomainError("generator chain does not generate the extension");
    ChainTower t;
    t.L = make_extension(k, raw);
    t.mono_values = cur;
    return t;
}

/** Value of E.ext rewritten over the chain tower's basis. */
Value chain_transport(const ChainTower& T, const Value& u) {
    FieldId k = T.L.base;
    int N = T.L.degree;
    std::vector<std::vector<Value>> M(N, std::vector<Value>(N, v_zero(k)));
    for (int c = 0; c < N; ++c) {
        auto coords = ext_coords(T.mono_values[c]);
        for (int r0 = 0; r0 < N; ++r0) M[r0][c] = coords[r0];
    }
    auto x = solve_exact(k, M, ext_coords(u));
    if (!x) throw DomainError("chain transport failed");
    return ext_make(T.L.ext, std::move(*x));
}

}  // namespace

MWElement mw_transfer(const Extension& E, const MWElement& a) {
    if (a.fid != E.ext) throw DomainError("transfer of an element over the wrong field");
    std::string extra = split_omega_twist(E, a.twist);
    FieldId k = E.base;
    int n = a.n;
    if (a.terms.empty()) return mw_zero(k, n);
    if (n <= 0) return transfer_low_degree(E, a, extra);

    NormalizedPair np = mw_normalize(a);
    KMSymbol Mk = km_transfer(np.milnorPart, E);
    GWElement w = np.wittPart;
    w.twist = E.w_label;
    GWElement Gk = gw_transfer(E, w);

    MWElement L = km_word_lift(Mk);
    GWElement delta = gw_sub(Gk, mw_mu_prime(L));
    if (!witt_equal(delta, gw_zero(k))) {
        try {
            if (!gw_in_In(delta, n + 1))
                throw DomainError("transfer gluing failed: correction not in I^(n+1)");
        } catch (const CapabilityError&) {
            // membership undecidable here; the reconstruction below still
            // realizes the exact (Witt, Milnor) pair
        }
        if (n == 1) {
            for (const auto& [d, p, q] : i2_pfister_decomposition(delta))
                L = mw_add(L, mw_word(k, -d, 1, {p, q}));
        } else {
            throw CapabilityError(
                "Milnor-Witt transfer with a nonzero I^(n+1) correction in degree >= 2");
        }
    }
    return mw_set_twist(L, extra);
}

MWElement mw_transfer_bass_tate(const Extension& E, const MWElement& a,
                                const std::vector<Value>& chain) {
    if (a.fid != E.ext) throw DomainError("transfer of an element over the wrong field");
    std::string extra = split_omega_twist(E, a.twist);
    Extension L = E;
    MWElement b = mw_set_twist(a, "");
    if (!chain.empty() && !chain_is_default(E, chain)) {
        if (!E.separable)
            throw CapabilityError(
                "Bass-Tate chain conversion requires a separable presentation");
        ChainTower T = build_chain_tower(E, chain);
        // rebase the canonical-module basis through the trace normalization:
        // tau_E(x) = Tr(x / e_E), so the w_E-basis element <w_unit_E / e_E>
        // corresponds to the abstract trace functional.
        b = mw_twist_unit(v_div(E.w_unit, tower_etale_unit(E)), b);
        std::vector<MWWord> moved;
        for (const auto& wd : b.terms) {
            MWWord m = wd;
            for (auto& u : m.u) u = chain_transport(T, u);
            moved.push_back(m);
        }
        MWElement bl = mw_zero(T.L.ext, b.n);
        for (const auto& m : moved) bl = mw_add(bl, mw_word(T.L.ext, m.c, m.r, m.u));
        b = mw_twist_unit(v_div(tower_etale_unit(T.L), T.L.w_unit), bl);
        L = T.L;
    }

    NestedTower nt = nested_tower(L);
    MWElement cur = mw_base_change(nt.flat_to_top, b);
    FieldId top = nt.steps.back().ext;
    // comparison unit of the literal stacking: w_L / prod (step w-units)
    Value c = hom_apply(nt.flat_to_top, L.w_unit);
    for (const auto& st : nt.steps) c = v_div(c, embed(st.w_unit, top));
    if (!v_is_one(c)) cur = mw_twist_unit(c, cur);

    std::string tw;
    for (int i = static_cast<int>(nt.steps.size()) - 1; i >= 0; --i)
        tw = tw.empty() ? nt.steps[i].w_label : tw + "*" + nt.steps[i].w_label;
    cur = mw_set_twist(cur, tw);
    for (int i = static_cast<int>(nt.steps.size()) - 1; i >= 0; --i)
        cur = mw_transfer(nt.steps[i], cur);
    return mw_set_twist(cur, extra);
}

MWElement mw_transfer_request(const TransferRequest& req) {
    if (req.method == TransferMethod::BassTate)
        return mw_transfer_bass_tate(req.E, req.element, req.chain);
    return mw_transfer(req.E, req.element);
}

MWElement mw_base_change(const FieldHom& phi, const MWElement& a) {
    MWElement r = mw_zero(phi.dst, a.n);
    for (const auto& w : a.terms) {
        std::vector<Value> u;
        for (const auto& x : w.u) u.push_back(hom_apply(phi, x));
        r = mw_add(r, mw_word(phi.dst, w.c, w.r, u));
    }
    return mw_set_twist(r, a.twist);
}

KMSymbol km_base_change(const FieldHom& phi, const KMSymbol& a) {
    KMSymbol r = km_zero(phi.dst, a.n);
    for (const auto& [c, w] : a.terms) {
        if (a.n == 0) {
            r = km_add(r, km_scale(c, km_int(phi.dst, 1)));
            continue;
        }
        std::vector<Value> u;
        for (const auto& x : w) u.push_back(hom_apply(phi, x));
        r = km_add(r, km_scale(c, km_word(phi.dst, u)));
    }
    return r;
}

GWElement gw_base_change(const FieldHom& phi, const GWElement& a) {
    GWElement r = gw_zero(phi.dst);
    for (const auto& [n, u] : a.terms)
        r = gw_add(r, gw_scale(n, gw_gen(hom_apply(phi, u))));
    r.twist = a.twist;
    return r;
}

Value tower_etale_unit(const Extension& E) {
    int nv = static_cast<int>(E.gens.size());
    Value e = v_one(E.ext);
    for (int i = 0; i < nv; ++i) {
        if (!E.sep_stage[i]) throw DomainError("inseparable stage has no etale unit");
        const MPoly& f = E.minpolys[i];
        MPoly df = mp_zero(E.base, nv);
        for (int d = 1; d <= mp_deg_in(f, i); ++d) {
            MPoly cd = mp_coeff_in(f, i, d);
            MPoly t = mp_scale(v_int(E.base, d), cd);
            for (int j = 0; j < d - 1; ++j) t = mp_mul(t, mp_var(E.base, nv, i));
            df = mp_add(df, t);
        }
        e = v_mul(e, eval_at_gens(df, E));
    }
    if (v_is_zero(e)) throw DomainError("vanishing derivative: presentation not etale");
    return e;
}

MWElement place_transfer(const Place& v, const MWElement& a) {
    if (a.fid != v.kappa)
        throw DomainError("place transfer of a coefficient over the wrong field");
    if (!v.kappa_ext) return mw_set_twist(a, "");
    return mw_transfer(*v.kappa_ext, a);
}

MWElement quadratic_degree(const P1Divisor& D) {
    FieldId k = field(D.kt).base;
    int q = D.q;
    if (D.at_infinity) q = D.at_infinity->n;
    else if (!D.finite.empty()) q = D.finite.front().coeff.n;
    MWElement sum = mw_zero(k, q);
    for (const auto& pc : D.finite) sum = mw_add(sum, place_transfer(pc.v, pc.coeff));
    if (D.at_infinity) sum = mw_add(sum, *D.at_infinity);
    return sum;
}

ReciprocityReport reciprocity_check(const MWElement& sigma) {
    FieldId kt = sigma.fid;
    const FieldInfo& fi = field(kt);
    if (fi.kind != FieldKind::FunctionField)
        throw DomainError("reciprocity is checked over a rational function field");
    FieldId k = fi.base;
    if (!sigma.twist.empty())
        throw DomainError("reciprocity input carries an unexpected twist");

    std::map<std::string, Place> support;
    for (const auto& w : sigma.terms)
        for (const auto& u : w.u)
            for (auto& v : support_places(u)) support.emplace(v.label, v);

    ReciprocityReport rep;
    rep.sum = mw_zero(k, sigma.n - 1);
    for (auto& [label, v] : support) {
        MWElement r = mw_residue(sigma, v);
        MWElement tr;
        if (v.kappa_ext)
            tr = mw_transfer(*v.kappa_ext, mw_set_twist(r, v.kappa_ext->w_label));
        else
            tr = mw_set_twist(r, "");
        rep.sum = mw_add(rep.sum, tr);
        rep.perPlace.push_back({label, r, tr});
    }
    // infinity, with the dt = -s^{-2} ds renormalization
    Place vinf = place_infinity(kt);
    MWElement rinf = mw_residue(sigma, vinf);
    MWElement trinf = mw_twist_unit(v_int(k, -1L), mw_set_twist(rinf, ""));
    rep.sum = mw_add(rep.sum, trinf);
    rep.perPlace.push_back({vinf.label, rinf, trinf});

    rep.ok = mw_is_zero(rep.sum);
    return rep;
}

ReciprocityReport reciprocity_check(const Value& f) {
    if (v_is_zero(f)) throw DomainError("reciprocity of the zero function");
    return reciprocity_check(mw_sym(f));
}

}  // namespace mwk
