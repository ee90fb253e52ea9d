#include "mwk/chowwitt.hpp"

#include <map>
#include <sstream>

#include "json.hpp"

namespace mwk {

namespace {

FieldId curve_base(const Curve& C) {
    const FieldInfo& f = field(C.kt);
    if (f.kind != FieldKind::FunctionField)
        throw DomainError("curve over a non-rational-function field");
    return f.base;
}

/** <t^d> sigma: the bundle conversion u = s^{-d} v at infinity. */
MWElement bundle_conversion_at_infinity(const MWElement& sigma, int d) {
    if (d == 0) return sigma;
    FieldId kt = sigma.fid;
    Value t = rf_make(kt, up_x(field(kt).base), {v_one(field(kt).base)});
    Value td = d > 0 ? v_pow(t, Int(d)) : v_inv(v_pow(t, Int(-d)));
    return mw_twist_unit(td, sigma);
}

/**
 * The coefficient of a divisor at infinity: residue of <t^d> sigma with
 * respect to s = 1/t, with the <-1> of dt = -s^{-2} ds folded in, stored in
 * the canonical trivialization (untwisted label).
 */
MWElement infinity_coefficient(const MWElement& sigma, const Curve& C) {
    Place vinf = place_infinity(C.kt);
    MWElement r = mw_residue(bundle_conversion_at_infinity(sigma, C.bundle_degree), vinf);
    return mw_twist_unit(v_int(curve_base(C), -1L), mw_strip_twist(r));
}

std::map<std::string, Place> finite_support(const MWElement& sigma) {
    std::map<std::string, Place> support;
    for (const auto& w : sigma.terms)
        for (const auto& u : w.u)
            for (auto& v : support_places(u)) support.emplace(v.label, v);
    return support;
}

/** Converted transfer of a finite coefficient down to k (conversion unit 1). */
MWElement finite_coefficient_transfer(const PlacedCoefficient& pc) {
    if (!pc.v.kappa_ext) return mw_strip_twist(pc.coeff);
    return mw_transfer(*pc.v.kappa_ext, mw_set_twist(pc.coeff, pc.v.kappa_ext->w_label));
}

Int coefficient_rank(const MWElement& a) {
    if (a.n != 0) throw DomainError("rank of a coefficient of nonzero degree");
    return gw_rank(mw_mu_prime(a));
}

}  // namespace

Curve curve_A1(FieldId kt) {
    Curve C;
    C.kind = CurveKind::A1;
    C.kt = kt;
    curve_base(C);
    return C;
}

Curve curve_P1(FieldId kt, int bundle_degree) {
    Curve C;
    C.kind = CurveKind::P1;
    C.kt = kt;
    C.bundle_degree = bundle_degree;
    curve_base(C);
    return C;
}

Curve curve_SpecOv(const Place& v) {
    Curve C;
    C.kind = CurveKind::SpecOv;
    C.kt = v.kt;
    C.v = v;
    curve_base(C);
    return C;
}

QuadraticDivisor tdiv(const MWElement& sigma, const Curve& C) {
    if (sigma.fid != C.kt) throw DomainError("divisor class of a section over the wrong field");
    if (!sigma.twist.empty())
        throw DomainError("divisor class input must be trivialized (untwisted label)");
    QuadraticDivisor D;
    D.curve = C;
    D.q = sigma.n - 1;
    if (C.kind == CurveKind::SpecOv) {
        MWElement r = mw_residue(sigma, *C.v);
        if (!mw_is_zero(r)) D.finite.push_back({*C.v, r});
        return D;
    }
    for (auto& [label, v] : finite_support(sigma)) {
        MWElement r = mw_residue(sigma, v);
        if (!mw_is_zero(r)) D.finite.push_back({v, r});
    }
    if (C.kind == CurveKind::P1) {
        MWElement rinf = infinity_coefficient(sigma, C);
        if (!mw_is_zero(rinf)) D.at_infinity = rinf;
    }
    return D;
}

A1Decomposition a1_decompose(const MWElement& sigma) {
    FieldId kt = sigma.fid;
    Curve C = curve_A1(kt);
    FieldId k = curve_base(C);
    std::vector<Value> units;
    for (const auto& w : sigma.terms)
        for (const auto& u : w.u) units.push_back(u);
    auto usable = [&](const Place& v) {
        for (const auto& u : units)
            if (place_val(v, u) != 0) return false;
        return true;
    };
    std::optional<Place> at;
    if (field_size(k)) {
        for (const auto& pi : monic_irreducibles(k, 1)) {
            Place v = make_place(kt, pi);
            if (usable(v)) {
                at = v;
                break;
            }
        }
    } else if (field(k).kind == FieldKind::Rationals) {
        for (long c = 0; c <= 200 && !at; ++c)
            for (long s : {c, -c}) {
                Place v = make_place(kt, {v_int(k, -s), v_one(k)});
                if (usable(v)) {
                    at = v;
                    break;
                }
            }
    } else {
        throw CapabilityError("no rational specialization point search over this base");
    }
    if (!at) throw CapabilityError("no rational place avoids the support");
    A1Decomposition dec{mw_specialize(sigma, *at), *at, tdiv(sigma, C)};
    return dec;
}

std::vector<PlacedCoefficient> localization_residue(const MWElement& sigma,
                                                    const std::vector<Place>& Z,
                                                    const Curve& C) {
    if (sigma.fid != C.kt) throw DomainError("localization of a section over the wrong field");
    std::vector<PlacedCoefficient> out;
    for (const auto& z : Z) {
        if (z.infinite) {
            if (C.kind != CurveKind::P1)
                throw DomainError("the place at infinity lies on P^1 only");
            out.push_back({z, infinity_coefficient(sigma, C)});
        } else {
            out.push_back({z, mw_residue(sigma, z)});
        }
    }
    return out;
}

PB1Class pb1_class(const QuadraticDivisor& D) {
    if (D.curve.kind != CurveKind::P1)
        throw DomainError("class invariants are computed on P^1");
    FieldId k = curve_base(D.curve);
    int q = D.q;
    PB1Class cls;
    cls.even = (D.curve.bundle_degree % 2 == 0);
    if (cls.even) {
        MWElement sum = mw_zero(k, q);
        for (const auto& pc : D.finite) sum = mw_add(sum, finite_coefficient_transfer(pc));
        if (D.at_infinity) sum = mw_add(sum, mw_strip_twist(*D.at_infinity));
        cls.mw = sum;
        cls.km = km_zero(k, std::max(q, 0));
        return cls;
    }
    cls.mw = mw_zero(k, q);
    cls.km = km_zero(k, std::max(q, 0));
    if (q < 0) return cls;  // negative Milnor K-theory vanishes
    if (q == 0) {
        Int total = 0;
        for (const auto& pc : D.finite)
            total += Int(pc.v.degree) * coefficient_rank(pc.coeff);
        if (D.at_infinity) total += coefficient_rank(*D.at_infinity);
        cls.degree = total;
        cls.km = km_int(k, total);
        return cls;
    }
    KMSymbol sum = km_zero(k, q);
    for (const auto& pc : D.finite) {
        KMSymbol s = mw_forget(pc.coeff);
        sum = km_add(sum, pc.v.kappa_ext ? km_transfer(s, *pc.v.kappa_ext) : s);
    }
    if (D.at_infinity) sum = km_add(sum, mw_forget(*D.at_infinity));
    cls.km = sum;
    return cls;
}

bool pb1_equal(const PB1Class& a, const PB1Class& b) {
    if (a.even != b.even) throw DomainError("class comparison across bundle parities");
    if (a.even) return mw_equal(a.mw, b.mw);
    return km_equal(a.km, b.km);
}

ZeroCycle forget_divisor(const QuadraticDivisor& D) {
    if (D.q != 0) throw DomainError("the forgetful map acts in GG-degree 0");
    ZeroCycle z;
    z.curve = D.curve;
    for (const auto& pc : D.finite) z.finite.push_back({pc.v, coefficient_rank(pc.coeff)});
    if (D.at_infinity) z.at_infinity = coefficient_rank(*D.at_infinity);
    return z;
}

QuadraticDivisor hyper_divisor(const ZeroCycle& z) {
    QuadraticDivisor D;
    D.curve = z.curve;
    D.q = 0;
    for (const auto& cp : z.finite) {
        MWElement c = mw_scale(cp.mult, mw_h(cp.v.kappa));
        D.finite.push_back({cp.v, mw_set_twist(c, "nu" + cp.v.label)});
    }
    if (z.at_infinity != 0)
        D.at_infinity = mw_scale(z.at_infinity, mw_h(curve_base(z.curve)));
    return D;
}

Int cycle_degree(const ZeroCycle& z) {
    Int total = z.at_infinity;
    for (const auto& cp : z.finite) total += Int(cp.v.degree) * cp.mult;
    return total;
}

MWElement dvr_lift(const Place& v, const MWElement& coeff) {
    Value pi = place_uniformizer(v);
    MWElement out = mw_zero(v.kt, coeff.n + 1);
    for (const auto& w : coeff.terms) {
        std::vector<Value> units = {pi};
        for (const auto& u : w.u) units.push_back(place_lift(v, u));
        out = mw_add(out, mw_word(v.kt, w.c, w.r, units));
    }
    return out;
}

std::string divisor_json(const QuadraticDivisor& D) {
    nlohmann::json arr = nlohmann::json::array();
    auto entry = [&](const nlohmann::json& point, const MWElement& coeff) {
        arr.push_back({{"point", point}, {"coefficient", mw_str(mw_strip_twist(coeff))},
                       {"twist", coeff.twist}});
    };
    for (const auto& pc : D.finite) {
        nlohmann::json point = nlohmann::json::array();
        for (const auto& c : pc.v.pi) point.push_back(v_str(c));
        entry(point, pc.coeff);
    }
    if (D.at_infinity) entry("inf", *D.at_infinity);
    return arr.dump();
}

}  // namespace mwk
