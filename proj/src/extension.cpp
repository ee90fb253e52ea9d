#include "mwk/extension.hpp"

#include <sstream>

#include "mwk/factor.hpp"

namespace mwk {

namespace {

FieldId register_ext_field(FieldId base, const std::vector<std::string>& gens,
                           const std::vector<MPoly>& monic_minpolys,
                           const std::vector<int>& stage_deg,
                           const std::vector<bool>& separable) {
    FieldInfo info;
    info.kind = FieldKind::Extension;
    info.base = base;
    info.gens = gens;
    info.minpolys = monic_minpolys;
    info.stage_deg = stage_deg;
    info.separable = separable;
    info.degree = 1;
    for (int d : stage_deg) info.degree *= d;
    std::ostringstream os;
    os << field(base).name << "[";
    for (size_t i = 0; i < gens.size(); ++i) os << (i ? "," : "") << gens[i];
    os << "]";
    info.name = os.str();
    return register_field(std::move(info));
}

/** Rewrites an extension value as a polynomial in the first `nvars` variables. */
MPoly value_as_mpoly(const Value& a, int nvars, FieldId coeff) {
    const FieldInfo& f = field(a.fid);
    if (a.fid == coeff) return mp_const(coeff, nvars, a);
    if (f.kind != FieldKind::Extension || f.base != coeff)
        throw DomainError("value is not one extension stage above the coefficient field");
    auto basis = ext_basis(a.fid);
    const auto coords = ext_coords(a);
    MPoly r = mp_zero(coeff, nvars);
    for (size_t i = 0; i < basis.size(); ++i) {
        if (v_is_zero(coords[i])) continue;
        Monomial m(nvars, 0);
        for (size_t g = 0; g < basis[i].size(); ++g) m[g] = basis[i][g];
        mp_add_term(r, m, coords[i]);
    }
    return r;
}

bool stage_irreducible(const UPoly& f, FieldId K, std::string* why) {
    int d = up_deg(f);
    if (d == 1) return true;
    if (field_size(K)) {
        Factorization fac = factor(f, K);
        if (fac.factors.size() == 1 && fac.factors[0].second == 1) return true;
        if (why) *why = up_str(fac.factors[0].first, "t");
        return false;
    }
    Int p = characteristic(K);
    // binomial t^p - a in characteristic p: irreducible iff a is not a p-th power
    if (p > 0 && d == static_cast<int>(p.get_si())) {
        bool binomial = true;
        for (int i = 1; i < d; ++i)
            if (i < static_cast<int>(f.size()) && !v_is_zero(f[i])) binomial = false;
        if (binomial) {
            Value a = v_neg(f[0]);
            if (!is_pth_power(a, p.get_si())) return true;
            if (why) *why = "p-th power constant term";
            return false;
        }
    }
    if (d == 2 && p != 2) {
        // t^2 + b t + c irreducible iff b^2 - 4c is a non-square
        Value b = f.size() > 1 ? f[1] : v_zero(K);
        Value c = f[0];
        Value disc = v_sub(v_mul(b, b), v_mul(v_int(K, 4L), c));
        if (!is_square(disc)) return true;
        if (why) *why = "square discriminant";
        return false;
    }
    throw CapabilityError("no irreducibility test over this coefficient field/degree");
}

}  // namespace

Value gen_value(const Extension& E, int i) {
    auto basis = ext_basis(E.ext);
    std::vector<Value> c(E.degree, v_zero(E.base));
    Monomial m(E.gens.size(), 0);
    m[i] = 1;
    for (size_t k = 0; k < basis.size(); ++k)
        if (basis[k] == m) {
            c[k] = v_one(E.base);
            return ext_make(E.ext, std::move(c));
        }
    throw DomainError("generator is not a basis monomial (degree-1 stage)");
}

Value eval_at_gens(const MPoly& f, const Extension& E) {
    Value r = v_zero(E.ext);
    for (const auto& [m, c] : f.terms) {
        Value term = embed(c, E.ext);
        for (size_t g = 0; g < m.size() && g < E.gens.size(); ++g)
            if (m[g] > 0) {
                // degree-1 stages have no basis monomial for the generator;
                // use its reduced value instead
                Value gv;
                if (E.stage_deg[g] > 1) {
                    gv = gen_value(E, g);
                } else {
                    // alpha_g is the root of a linear polynomial: alpha = -f(0..)
                    MPoly cst = mp_coeff_in(E.minpolys[g], static_cast<int>(g), 0);
                    Extension sub = E;  // evaluate recursively over the same field
                    gv = v_neg(eval_at_gens(cst, sub));
                }
                for (int k = 0; k < m[g]; ++k) term = v_mul(term, gv);
            }
        r = v_add(r, term);
    }
    return r;
}

Extension make_extension(FieldId base, std::vector<MPoly> minpolys,
                         std::vector<std::string> gens) {
    int n = static_cast<int>(minpolys.size());
    if (n == 0) throw DomainError("empty presentation");
    if (gens.empty())
        for (int i = 0; i < n; ++i) gens.push_back("a" + std::to_string(i));
    if (static_cast<int>(gens.size()) != n) throw DomainError("one generator name per stage");

    Extension cur;  // partial tower over base; degree-0 start
    cur.base = base;
    cur.ext = base;
    cur.degree = 1;
    cur.w_unit = v_one(base);

    std::vector<MPoly> monic;      // over base, n variables
    std::vector<int> stage_deg;
    std::vector<bool> separable;
    std::vector<Value> scales_in_partial;  // each in the partial field where it lives
    std::vector<FieldId> scale_fields;

    for (int i = 0; i < n; ++i) {
        MPoly f = minpolys[i];
        if (f.nvars != n) throw DomainError("stage polynomial has wrong variable count");
        for (int j = i + 1; j < n; ++j)
            if (mp_deg_in(f, j) > 0)
                throw DomainError("stage polynomial uses a later variable (not triangular)");
        int d = mp_deg_in(f, i);
        if (d < 1) throw DomainError("stage polynomial constant in its variable");

        // convert to univariate over the partial tower field
        UPoly fu(d + 1, v_zero(cur.ext));
        for (int k = 0; k <= d; ++k) {
            MPoly ck = mp_coeff_in(f, i, k);
            fu[k] = (cur.ext == base && i == 0)
                        ? (ck.terms.empty() ? v_zero(base) : ck.terms.begin()->second)
                        : eval_at_gens(ck, cur);
        }
        Value lc = fu[d];
        if (v_is_zero(lc)) throw DomainError("vanishing leading coefficient");
        bool scaled = !v_is_one(lc);
        if (scaled) {
            Value il = v_inv(lc);
            for (auto& c : fu) c = v_mul(il, c);
        }
        std::string why;
        if (!stage_irreducible(fu, cur.ext, &why))
            throw DomainError("reducible stage polynomial" +
                              (why.empty() ? std::string() : " (factor: " + why + ")"));
        stage_deg.push_back(d);
        separable.push_back(!up_derivative(fu).empty());
        if (scaled) {
            scales_in_partial.push_back(lc);
            scale_fields.push_back(cur.ext);
        }

        // reconstruct the monic stage polynomial over the base in n variables
        MPoly fm = mp_zero(base, n);
        for (int k = 0; k <= d; ++k) {
            MPoly ck = value_as_mpoly(fu[k], n, base);
            Monomial shift(n, 0);
            shift[i] = k;
            MPoly xv = mp_zero(base, n);
            xv.terms[shift] = v_one(base);
            fm = mp_add(fm, mp_mul(ck, xv));
        }
        monic.push_back(fm);

        // extend the partial tower
        std::vector<MPoly> partial_polys;
        std::vector<int> remap;
        for (int k = 0; k <= i; ++k) remap.push_back(k);
        for (int k = 0; k <= i; ++k) {
            std::vector<int> full_to_partial(n, 0);
            for (int x = 0; x < n; ++x) full_to_partial[x] = std::min(x, i);
            partial_polys.push_back(mp_remap(monic[k], i + 1, full_to_partial));
        }
        std::vector<std::string> partial_gens(gens.begin(), gens.begin() + i + 1);
        std::vector<int> partial_deg(stage_deg.begin(), stage_deg.end());
        std::vector<bool> partial_sep(separable.begin(), separable.end());
        FieldId pf = register_ext_field(base, partial_gens, partial_polys, partial_deg,
                                        partial_sep);
        cur.ext = pf;
        cur.gens = partial_gens;
        cur.minpolys = partial_polys;
        cur.stage_deg = partial_deg;
        cur.degree = 1;
        for (int dd : partial_deg) cur.degree *= dd;
    }

    Extension E;
    E.base = base;
    E.ext = cur.ext;
    E.gens = gens;
    E.minpolys = monic;
    E.stage_deg = stage_deg;
    E.degree = cur.degree;
    E.sep_stage = separable;
    E.separable = true;
    for (bool s : separable) E.separable = E.separable && s;
    E.w_label = "w[" + field(E.ext).name + "]";
    // w = (prod scale^{-1}) * w_monic
    E.w_unit = v_one(E.ext);
    for (size_t k = 0; k < scales_in_partial.size(); ++k) {
        // lift the scale from its partial field into E
        Value s = scales_in_partial[k];
        Value lifted;
        if (scale_fields[k] == base) {
            lifted = embed(s, E.ext);
        } else {
            MPoly as_poly = value_as_mpoly(s, n, base);
            lifted = eval_at_gens(as_poly, E);
        }
        E.w_unit = v_mul(E.w_unit, v_inv(lifted));
    }
    return E;
}

Extension trivial_extension(FieldId k) {
    MPoly t = mp_var(k, 1, 0);
    return make_extension(k, {t}, {"t0"});
}

Value etale_unit(const Extension& E) {
    if (E.gens.size() != 1) throw DomainError("etale_unit needs a monogenic extension");
    if (!E.sep_stage[0]) throw DomainError("inseparable extension has no etale unit");
    UPoly f = mp_to_up(E.minpolys[0], 0);
    UPoly df = up_derivative(f);
    Value alpha = E.stage_deg[0] > 1 ? gen_value(E, 0) : v_neg(embed(
        E.minpolys[0].terms.count(Monomial{0}) ? E.minpolys[0].terms.at(Monomial{0})
                                                : v_zero(E.base),
        E.ext));
    return up_eval(df, alpha);
}

Value compose_canonical(const Extension& L_over_E, const Extension& E_over_k,
                        const Extension& L_over_k) {
    if (L_over_k.base != E_over_k.base || L_over_E.base != E_over_k.ext)
        throw DomainError("tower fields do not match");
    int m = static_cast<int>(E_over_k.gens.size());
    int r = static_cast<int>(L_over_E.gens.size());
    int n = static_cast<int>(L_over_k.gens.size());
    if (n != m + r) throw DomainError("presentations not concatenable (stage counts)");
    // first m stages must be E/k's
    for (int i = 0; i < m; ++i) {
        std::vector<int> remap(m);
        for (int j = 0; j < m; ++j) remap[j] = j;
        MPoly want = mp_remap(E_over_k.minpolys[i], n, remap);
        if (!mp_eq(want, L_over_k.minpolys[i]))
            throw DomainError("presentations not concatenable (lower stages differ)");
    }
    // last r stages must be L/E's with E-coefficients expanded in the first m vars
    for (int i = 0; i < r; ++i) {
        MPoly src = L_over_E.minpolys[i];  // coefficients in E
        MPoly want = mp_zero(L_over_k.minpolys[0].coeff, n);
        for (const auto& [mono, c] : src.terms) {
            MPoly cm = value_as_mpoly(c, n, E_over_k.base);
            Monomial shifted(n, 0);
            for (int j = 0; j < r; ++j) shifted[m + j] = mono[j];
            MPoly xv = mp_zero(want.coeff, n);
            xv.terms[shifted] = v_one(want.coeff);
            want = mp_add(want, mp_mul(cm, xv));
        }
        if (!mp_eq(want, L_over_k.minpolys[m + i]))
            throw DomainError("presentations not concatenable (upper stages differ)");
    }
    // c = w_unit(L/k) / (w_unit(L/E) . w_unit(E/k)), everything lifted into L/k
    FieldHom ek;
    ek.src = E_over_k.ext;
    ek.dst = L_over_k.ext;
    for (int i = 0; i < m; ++i) ek.gen_images.push_back(gen_value(L_over_k, i));
    FieldHom le;
    le.src = L_over_E.ext;
    le.dst = L_over_k.ext;
    for (int i = 0; i < r; ++i) le.gen_images.push_back(gen_value(L_over_k, m + i));
    le.base_hom = std::make_shared<const FieldHom>(ek);
    Value denom = v_mul(hom_apply(le, L_over_E.w_unit), hom_apply(ek, E_over_k.w_unit));
    return v_div(L_over_k.w_unit, denom);
}

FieldHom identity_hom(FieldId fid) {
    FieldHom h;
    h.src = fid;
    h.dst = fid;
    const FieldInfo& f = field(fid);
    if (f.kind == FieldKind::FunctionField) {
        h.var_image = rf_make(fid, up_x(f.base), {v_one(f.base)});
    } else if (f.kind == FieldKind::Extension) {
        for (size_t i = 0; i < f.gens.size(); ++i) {
            if (f.stage_deg[i] > 1) {
                auto basis = ext_basis(fid);
                std::vector<Value> c(f.degree, v_zero(f.base));
                Monomial m(f.gens.size(), 0);
                m[i] = 1;
                for (size_t k = 0; k < basis.size(); ++k)
                    if (basis[k] == m) c[k] = v_one(f.base);
                h.gen_images.push_back(ext_make(fid, std::move(c)));
            } else {
                h.gen_images.push_back(v_zero(fid));  // placeholder; degree-1 stage
            }
        }
    }
    return h;
}

Value hom_apply(const FieldHom& h, const Value& a) {
    if (a.fid == h.dst && a.fid == h.src && !h.var_image && h.gen_images.empty()) return a;
    const FieldInfo& f = field(a.fid);
    auto apply_base = [&](const Value& b) -> Value {
        if (h.base_hom) return hom_apply(*h.base_hom, b);
        return embed(b, h.dst);
    };
    switch (f.kind) {
        case FieldKind::Rationals:
            return v_rat(h.dst, std::get<Rat>(a.rep));
        case FieldKind::Finite:
            return embed(a, h.dst);
        case FieldKind::FunctionField: {
            if (!h.var_image) return embed(a, h.dst);
            const RFData& d = rf_data(a);
            auto eval = [&](const UPoly& p) {
                Value r = v_zero(h.dst);
                for (int i = up_deg(p); i >= 0; --i)
                    r = v_add(v_mul(r, *h.var_image), apply_base(p[i]));
                return r;
            };
            return v_div(eval(d.num), eval(d.den));
        }
        case FieldKind::Extension: {
            if (h.gen_images.empty()) return embed(a, h.dst);
            auto basis = ext_basis(a.fid);
            const auto coords = ext_coords(a);
            Value r = v_zero(h.dst);
            for (size_t i = 0; i < basis.size(); ++i) {
                if (v_is_zero(coords[i])) continue;
                Value term = apply_base(coords[i]);
                for (size_t g = 0; g < basis[i].size(); ++g)
                    for (int k = 0; k < basis[i][g]; ++k)
                        term = v_mul(term, h.gen_images[g]);
                r = v_add(r, term);
            }
            return r;
        }
    }
    throw DomainError("unsupported homomorphism application");
}

NestedTower nested_tower(const Extension& E) {
    NestedTower t;
    int n = static_cast<int>(E.gens.size());
    if (n == 1) {
        t.steps = {E};
        FieldHom h = identity_hom(E.ext);
        t.flat_to_top = h;
        return t;
    }
    FieldId cur = E.base;
    std::vector<Value> flat_gen_images;  // images of E's generators in `cur`
    for (int i = 0; i < n; ++i) {
        // stage polynomial as univariate over `cur`
        const MPoly& f = E.minpolys[i];
        int d = mp_deg_in(f, i);
        MPoly fu = mp_zero(cur, 1);
        for (int k = 0; k <= d; ++k) {
            MPoly ck = mp_coeff_in(f, i, k);
            // evaluate earlier variables at their nested images
            Value cv = v_zero(cur);
            for (const auto& [mono, c] : ck.terms) {
                Value term = embed(c, cur);
                for (int g = 0; g < i; ++g)
                    for (int x = 0; x < mono[g]; ++x)
                        term = v_mul(term, flat_gen_images[g]);
                cv = v_add(cv, term);
            }
            Monomial m{k};
            mp_add_term(fu, m, cv);
        }
        Extension step = make_extension(cur, {fu}, {E.gens[i]});
        FieldId next = step.ext;
        for (auto& gv : flat_gen_images) gv = embed(gv, next);
        if (step.stage_deg[0] > 1) {
            flat_gen_images.push_back(gen_value(step, 0));
        } else {
            Value a0 = fu.terms.count(Monomial{0}) ? fu.terms.at(Monomial{0}) : v_zero(cur);
            flat_gen_images.push_back(embed(v_neg(a0), next));
        }
        t.steps.push_back(step);
        cur = next;
    }
    FieldHom h;
    h.src = E.ext;
    h.dst = cur;
    h.gen_images = flat_gen_images;
    t.flat_to_top = h;
    return t;
}

}  // namespace mwk
