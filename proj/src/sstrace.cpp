#include "mwk/sstrace.hpp"

#include <sstream>

namespace mwk {

namespace {

size_t basis_index(const Presentation& P, const Monomial& m) {
    size_t idx = 0;
    for (int i = 0; i < P.n; ++i) idx = idx * P.stage_deg[i] + m[i];
    return idx;
}

std::vector<Value> solve_linear(std::vector<std::vector<Value>> m, std::vector<Value> rhs,
                                FieldId fid) {
    size_t n = m.size();
    for (size_t k = 0; k < n; ++k) {
        size_t piv = n;
        for (size_t i = k; i < n; ++i)
            if (!v_is_zero(m[i][k])) {
                piv = i;
                break;
            }
        if (piv == n) throw DomainError("singular linear system");
        std::swap(m[piv], m[k]);
        std::swap(rhs[piv], rhs[k]);
        Value inv = v_inv(m[k][k]);
        for (size_t j = k; j < n; ++j) m[k][j] = v_mul(m[k][j], inv);
        rhs[k] = v_mul(rhs[k], inv);
        for (size_t i = 0; i < n; ++i) {
            if (i == k || v_is_zero(m[i][k])) continue;
            Value f = m[i][k];
            for (size_t j = k; j < n; ++j) m[i][j] = v_sub(m[i][j], v_mul(f, m[k][j]));
            rhs[i] = v_sub(rhs[i], v_mul(f, rhs[k]));
        }
    }
    return rhs;
}

Value mat_det_local(std::vector<std::vector<Value>> m, FieldId fid) {
    size_t n = m.size();
    Value det = v_one(fid);
    for (size_t k = 0; k < n; ++k) {
        size_t piv = n;
        for (size_t i = k; i < n; ++i)
            if (!v_is_zero(m[i][k])) {
                piv = i;
                break;
            }
        if (piv == n) return v_zero(fid);
        if (piv != k) {
            std::swap(m[piv], m[k]);
            det = v_neg(det);
        }
        det = v_mul(det, m[k][k]);
        Value inv = v_inv(m[k][k]);
        for (size_t i = k + 1; i < n; ++i) {
            if (v_is_zero(m[i][k])) continue;
            Value f = v_mul(m[i][k], inv);
            for (size_t j = k; j < n; ++j) m[i][j] = v_sub(m[i][j], v_mul(f, m[k][j]));
        }
    }
    return det;
}

MPoly mdet(const std::vector<std::vector<MPoly>>& m, FieldId fid, int nvars) {
    size_t n = m.size();
    if (n == 0) return mp_const(fid, nvars, v_one(fid));
    if (n == 1) return m[0][0];
    MPoly det = mp_zero(fid, nvars);
    for (size_t j = 0; j < n; ++j) {
        if (mp_is_zero(m[0][j])) continue;
        std::vector<std::vector<MPoly>> minor;
        for (size_t i = 1; i < n; ++i) {
            std::vector<MPoly> row;
            for (size_t k = 0; k < n; ++k)
                if (k != j) row.push_back(m[i][k]);
            minor.push_back(std::move(row));
        }
        MPoly t = mp_mul(m[0][j], mdet(minor, fid, nvars));
        det = (j % 2 == 0) ? mp_add(det, t) : mp_sub(det, t);
    }
    return det;
}

/** Exact division of g by (x_var - y_var); DomainError on nonzero remainder. */
MPoly divided_difference(const MPoly& g, int xv, int yv) {
    // remainder check: substitute x -> y
    MPoly yvar = mp_var(g.coeff, g.nvars, yv);
    if (!mp_is_zero(mp_subst(g, xv, yvar)))
        throw DomainError("divided difference is not exact");
    // quotient: sum_k c_k sum_{l<k} x^l y^{k-1-l}
    int d = mp_deg_in(g, xv);
    MPoly q = mp_zero(g.coeff, g.nvars);
    for (int k = 1; k <= d; ++k) {
        MPoly ck = mp_coeff_in(g, xv, k);
        if (mp_is_zero(ck)) continue;
        for (int l = 0; l < k; ++l) {
            Monomial m(g.nvars, 0);
            m[xv] = l;
            m[yv] = k - 1 - l;
            MPoly mono = mp_zero(g.coeff, g.nvars);
            mono.terms[m] = v_one(g.coeff);
            q = mp_add(q, mp_mul(ck, mono));
        }
    }
    return q;
}

}  // namespace

Presentation make_presentation(FieldId A, std::vector<MPoly> f) {
    Presentation P;
    P.A = A;
    P.n = static_cast<int>(f.size());
    P.f = std::move(f);
    P.rank = 1;
    for (int i = 0; i < P.n; ++i) {
        if (P.f[i].nvars != P.n) throw DomainError("presentation variable count mismatch");
        for (int j = i + 1; j < P.n; ++j)
            if (mp_deg_in(P.f[i], j) > 0)
                throw DomainError("presentation is not triangular");
        mp_check_monic(P.f[i], i);
        int d = mp_deg_in(P.f[i], i);
        P.stage_deg.push_back(d);
        P.rank *= d;
        P.sys.emplace_back(i, P.f[i]);
    }
    // monomial basis in ext_basis-compatible order (last variable fastest)
    Monomial cur(P.n, 0);
    while (true) {
        P.basis.push_back(cur);
        int i = P.n - 1;
        while (i >= 0) {
            if (++cur[i] < P.stage_deg[i]) break;
            cur[i] = 0;
            --i;
        }
        if (i < 0) break;
    }
    return P;
}

Presentation presentation_of(const Extension& E) {
    return make_presentation(E.base, E.minpolys);
}

MPoly pres_reduce(const Presentation& P, const MPoly& g) {
    return mp_normal_form(g, P.sys);
}

std::vector<Value> pres_coords(const Presentation& P, const MPoly& g) {
    MPoly r = pres_reduce(P, g);
    std::vector<Value> c(P.rank, v_zero(P.A));
    for (const auto& [m, v] : r.terms) c[basis_index(P, m)] = v;
    return c;
}

MPoly ext_value_poly(const Value& a) {
    const FieldInfo& f = field(a.fid);
    if (f.kind != FieldKind::Extension) throw DomainError("not an extension element");
    auto basis = ext_basis(a.fid);
    auto coords = ext_coords(a);
    MPoly p = mp_zero(f.base, static_cast<int>(f.gens.size()));
    for (size_t i = 0; i < basis.size(); ++i)
        if (!v_is_zero(coords[i])) mp_add_term(p, basis[i], coords[i]);
    return p;
}

MPoly bezoutian(const Presentation& P) {
    int n = P.n;
    int N = 2 * n;
    std::vector<std::vector<MPoly>> c(n, std::vector<MPoly>(n, mp_zero(P.A, N)));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            // g1: vars < j -> y, vars >= j -> x ; g2: vars <= j -> y
            std::vector<int> map1(n), map2(n);
            for (int k = 0; k < n; ++k) {
                map1[k] = k < j ? n + k : k;
                map2[k] = k <= j ? n + k : k;
            }
            MPoly g1 = mp_remap(P.f[i], N, map1);
            MPoly g2 = mp_remap(P.f[i], N, map2);
            c[i][j] = divided_difference(mp_sub(g1, g2), j, n + j);
        }
    }
    MPoly delta = mdet(c, P.A, N);
    // reduce on both sides
    std::vector<std::pair<int, MPoly>> sys2;
    for (int k = 0; k < n; ++k) {
        std::vector<int> mapx(n), mapy(n);
        for (int t = 0; t < n; ++t) {
            mapx[t] = t;
            mapy[t] = n + t;
        }
        sys2.emplace_back(k, mp_remap(P.f[k], N, mapx));
        sys2.emplace_back(n + k, mp_remap(P.f[k], N, mapy));
    }
    return mp_normal_form(delta, sys2);
}

std::vector<Value> ss_trace(const Presentation& P) {
    MPoly delta = bezoutian(P);
    int r = P.rank;
    std::vector<std::vector<Value>> D(r, std::vector<Value>(r, v_zero(P.A)));
    for (const auto& [m, v] : delta.terms) {
        Monomial mx(P.n), my(P.n);
        for (int i = 0; i < P.n; ++i) {
            mx[i] = m[i];
            my[i] = m[P.n + i];
        }
        size_t i = basis_index(P, mx), j = basis_index(P, my);
        D[i][j] = v_add(D[i][j], v);
    }
    // Phi(Delta)(tau) = sum_ij D_ij tau(m_i) m_j = 1  <=>  D^T tau = e_0
    std::vector<std::vector<Value>> Dt(r, std::vector<Value>(r, v_zero(P.A)));
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) Dt[j][i] = D[i][j];
    std::vector<Value> rhs(r, v_zero(P.A));
    rhs[0] = v_one(P.A);  // basis[0] is the monomial 1
    return solve_linear(std::move(Dt), std::move(rhs), P.A);
}

Value tau_apply(const Presentation& P, const std::vector<Value>& tau, const MPoly& b) {
    std::vector<Value> c = pres_coords(P, b);
    Value r = v_zero(P.A);
    for (int i = 0; i < P.rank; ++i) r = v_add(r, v_mul(tau[i], c[i]));
    return r;
}

Value residue_symbol(const MPoly& lambda, const Presentation& P) {
    return tau_apply(P, ss_trace(P), lambda);
}

Gram form_gram(const Presentation& P, const std::vector<Value>& tau) {
    Gram g(P.rank, std::vector<Value>(P.rank, v_zero(P.A)));
    for (int i = 0; i < P.rank; ++i) {
        MPoly mi = mp_zero(P.A, P.n);
        mi.terms[P.basis[i]] = v_one(P.A);
        for (int j = i; j < P.rank; ++j) {
            MPoly mj = mp_zero(P.A, P.n);
            mj.terms[P.basis[j]] = v_one(P.A);
            Value t = tau_apply(P, tau, mp_mul(mi, mj));
            g[i][j] = t;
            g[j][i] = t;
        }
    }
    return g;
}

Value usual_trace(const Presentation& P, const MPoly& b) {
    Value tr = v_zero(P.A);
    for (int j = 0; j < P.rank; ++j) {
        MPoly mj = mp_zero(P.A, P.n);
        mj.terms[P.basis[j]] = v_one(P.A);
        std::vector<Value> c = pres_coords(P, mp_mul(b, mj));
        tr = v_add(tr, c[j]);
    }
    return tr;
}

bool is_etale(const Presentation& P) {
    std::vector<std::vector<Value>> T(P.rank, std::vector<Value>(P.rank, v_zero(P.A)));
    for (int i = 0; i < P.rank; ++i) {
        MPoly mi = mp_zero(P.A, P.n);
        mi.terms[P.basis[i]] = v_one(P.A);
        for (int j = i; j < P.rank; ++j) {
            MPoly mj = mp_zero(P.A, P.n);
            mj.terms[P.basis[j]] = v_one(P.A);
            Value t = usual_trace(P, mp_mul(mi, mj));
            T[i][j] = t;
            T[j][i] = t;
        }
    }
    return !v_is_zero(mat_det_local(std::move(T), P.A));
}

GWElement gw_transfer(const Extension& E, const GWElement& a) {
    if (a.fid != E.ext) throw DomainError("transfer source mismatch");
    if (!a.twist.empty() && a.twist != E.w_label)
        throw DomainError("transfer twist does not match omega_{E/k}");
    Presentation P = presentation_of(E);
    std::vector<Value> tau = ss_trace(P);
    // basis elements as field values
    std::vector<Value> mv;
    for (int i = 0; i < P.rank; ++i) {
        std::vector<Value> c(P.rank, v_zero(E.base));
        c[i] = v_one(E.base);
        mv.push_back(ext_make(E.ext, c));
    }
    GWElement out = gw_zero(E.base);
    for (const auto& [nmult, u] : a.terms) {
        Value cu = v_mul(u, E.w_unit);
        Gram g(P.rank, std::vector<Value>(P.rank, v_zero(E.base)));
        for (int i = 0; i < P.rank; ++i)
            for (int j = i; j < P.rank; ++j) {
                std::vector<Value> coords = ext_coords(v_mul(cu, v_mul(mv[i], mv[j])));
                Value t = v_zero(E.base);
                for (int k = 0; k < P.rank; ++k) t = v_add(t, v_mul(tau[k], coords[k]));
                g[i][j] = t;
                g[j][i] = t;
            }
        out = gw_add(out, gw_scale(nmult, gram_to_gw(g, E.base)));
    }
    return out;
}

Value linear_form_to_omega(const Extension& E, const std::vector<Value>& phi) {
    Presentation P = presentation_of(E);
    if (static_cast<int>(phi.size()) != P.rank)
        throw DomainError("linear form has wrong length");
    std::vector<Value> tau = ss_trace(P);
    Gram g = form_gram(P, tau);
    std::vector<Value> b = solve_linear(g, phi, P.A);
    return ext_make(E.ext, b);
}

}  // namespace mwk
