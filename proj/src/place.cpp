#include "mwk/place.hpp"

#include <algorithm>

#include "mwk/factor.hpp"

namespace mwk {

namespace {

long ord_at(const UPoly& f, const UPoly& pi) {
    // multiplicity of pi in f (f != 0)
    long m = 0;
    UPoly r = f;
    while (true) {
        auto [q, rem] = up_divmod(r, pi);
        if (up_deg(rem) >= 0) return m;
        ++m;
        r = q;
    }
}

}  // namespace

Place make_place(FieldId kt, UPoly pi) {
    const FieldInfo& f = field(kt);
    if (f.kind != FieldKind::FunctionField)
        throw DomainError("places live on rational function fields");
    pi = up_trim(std::move(pi));
    if (up_deg(pi) < 1) throw DomainError("uniformizer must be non-constant");
    if (!v_is_one(up_lc(pi))) throw DomainError("uniformizer must be monic");
    if (!up_irreducible(pi, f.base)) throw DomainError("uniformizer must be irreducible");
    Place v;
    v.kt = kt;
    v.pi = pi;
    v.degree = up_deg(pi);
    v.label = "(" + up_str(pi, f.var) + ")";
    if (v.degree == 1) {
        v.kappa = f.base;
    } else {
        MPoly mp = mp_from_up(pi, f.base, 1, 0);
        Extension E = make_extension(f.base, {mp}, {"x"});
        v.kappa = E.ext;
        v.kappa_ext = E;
    }
    return v;
}

Place place_infinity(FieldId kt) {
    const FieldInfo& f = field(kt);
    if (f.kind != FieldKind::FunctionField)
        throw DomainError("places live on rational function fields");
    Place v;
    v.kt = kt;
    v.infinite = true;
    v.kappa = f.base;
    v.degree = 1;
    v.label = "inf";
    return v;
}

long place_val(const Place& v, const Value& a) {
    if (v_is_zero(a)) throw DomainError("valuation of zero");
    const RFData& d = rf_data(a);
    if (v.infinite) return static_cast<long>(up_deg(d.den)) - up_deg(d.num);
    return ord_at(d.num, v.pi) - ord_at(d.den, v.pi);
}

Value place_uniformizer(const Place& v) {
    const FieldInfo& f = field(v.kt);
    if (v.infinite) return rf_make(v.kt, up_const(v_one(f.base)), up_x(f.base));
    return rf_make(v.kt, v.pi, up_const(v_one(f.base)));
}

Value place_reduce(const Place& v, const Value& a) {
    const FieldInfo& f = field(v.kt);
    if (v_is_zero(a)) return v_zero(v.kappa);
    long val = place_val(v, a);
    if (val < 0) throw DomainError("reduction of an element with a pole");
    if (val > 0) return v_zero(v.kappa);
    const RFData& d = rf_data(a);
    if (v.infinite) {
        // equal degrees: ratio of leading coefficients
        return v_div(up_lc(d.num), up_lc(d.den));
    }
    if (v.degree == 1) {
        // pi = t - c: evaluate at c
        Value c = v_neg(v.pi[0]);
        return v_div(up_eval(d.num, c), up_eval(d.den, c));
    }
    // reduce num and den mod pi, map into kappa = k[x]/(pi)
    auto to_kappa = [&](const UPoly& p) {
        UPoly r = up_divmod(p, v.pi).second;
        std::vector<Value> coords(v.degree, v_zero(f.base));
        for (int i = 0; i <= up_deg(r); ++i) coords[i] = r[i];
        return ext_make(v.kappa, std::move(coords));
    };
    return v_div(to_kappa(d.num), to_kappa(d.den));
}

Value place_lift(const Place& v, const Value& r) {
    const FieldInfo& f = field(v.kt);
    if (v.kappa == f.base) {
        if (v_is_zero(r)) return v_zero(v.kt);
        return rf_make(v.kt, up_const(r), up_const(v_one(f.base)));
    }
    std::vector<Value> coords = ext_coords(r);
    UPoly num;
    for (auto& c : coords) num.push_back(c);
    return rf_make(v.kt, up_trim(std::move(num)), up_const(v_one(f.base)));
}

std::vector<Place> support_places(const Value& a) {
    if (v_is_zero(a)) throw DomainError("support of zero");
    const FieldInfo& f = field(a.fid);
    if (f.kind != FieldKind::FunctionField)
        throw DomainError("support places need a function-field element");
    const RFData& d = rf_data(a);
    std::vector<Place> out;
    std::vector<UPoly> seen;
    auto add = [&](const UPoly& pi) {
        for (const auto& s : seen)
            if (up_eq(s, pi)) return;
        seen.push_back(pi);
        out.push_back(make_place(a.fid, pi));
    };
    if (up_deg(d.num) >= 1)
        for (auto& [pi, m] : factor(d.num, f.base).factors) add(pi);
    if (up_deg(d.den) >= 1)
        for (auto& [pi, m] : factor(d.den, f.base).factors) add(pi);
    return out;
}

std::vector<UPoly> monic_irreducibles(FieldId k, int degree) {
    std::optional<Int> qs = field_size(k);
    if (!qs) throw CapabilityError("irreducible enumeration needs a finite field");
    if (*qs > 1000) throw CapabilityError("field too large to enumerate");
    long q = qs->get_si();
    // enumerate all elements of k
    std::vector<Value> elems;
    const FieldInfo& f = field(k);
    if (f.kind == FieldKind::Finite) {
        std::vector<long> idx(f.e, 0);
        while (true) {
            FFData d;
            d.c = idx;
            Value v;
            v.fid = k;
            v.rep = d;
            elems.push_back(v);
            int i = 0;
            for (; i < f.e; ++i) {
                if (++idx[i] < f.p) break;
                idx[i] = 0;
            }
            if (i == f.e) break;
        }
    } else {
        throw CapabilityError("irreducible enumeration over this field model");
    }
    std::vector<UPoly> out;
    std::vector<int> idx(degree, 0);
    while (true) {
        UPoly p(degree + 1, v_zero(k));
        for (int i = 0; i < degree; ++i) p[i] = elems[idx[i]];
        p[degree] = v_one(k);
        if (up_irreducible(p, k)) out.push_back(p);
        int i = 0;
        for (; i < degree; ++i) {
            if (++idx[i] < static_cast<int>(q)) break;
            idx[i] = 0;
        }
        if (i == degree) break;
    }
    return out;
}

Place good_place(FieldId kt, const std::vector<Value>& units_needed) {
    const FieldInfo& f = field(kt);
    for (int deg = 1; deg <= 6; ++deg) {
        for (const UPoly& pi : monic_irreducibles(f.base, deg)) {
            Place v = make_place(kt, pi);
            bool ok = true;
            for (const Value& u : units_needed)
                if (v_is_zero(u) || place_val(v, u) != 0) {
                    ok = false;
                    break;
                }
            if (ok) return v;
        }
    }
    throw CapabilityError("no good place found up to degree 6");
}

}  // namespace mwk
