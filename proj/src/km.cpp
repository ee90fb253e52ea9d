#include "mwk/km.hpp"

#include <sstream>

#include "mwk/factor.hpp"
#include "mwk/gw.hpp"

namespace mwk {

namespace {

/** Drops zero coefficients and words containing the unit 1 ({1} = 0). */
std::vector<std::pair<Int, std::vector<Value>>> collect(
    std::vector<std::pair<Int, std::vector<Value>>> in) {
    std::vector<std::pair<Int, std::vector<Value>>> out;
    for (auto& [c, w] : in) {
        if (c == 0) continue;
        bool trivial = false;
        for (const auto& u : w) {
            if (v_is_zero(u)) throw DomainError("zero entry in a Milnor symbol");
            if (v_is_one(u)) trivial = true;
        }
        if (trivial) continue;
        bool merged = false;
        for (auto& [d, x] : out) {
            if (x.size() != w.size()) continue;
            bool same = true;
            for (size_t i = 0; same && i < w.size(); ++i) same = v_eq(x[i], w[i]);
            if (same) {
                d += c;
                merged = true;
                break;
            }
        }
        if (!merged) out.emplace_back(c, w);
    }
    std::erase_if(out, [](const auto& t) { return t.first == 0; });
    return out;
}

KMSymbol make(FieldId fid, int n, std::vector<std::pair<Int, std::vector<Value>>> t) {
    KMSymbol s;
    s.fid = fid;
    s.n = n;
    s.terms = collect(std::move(t));
    return s;
}

/** x + xi*y with xi = {pi}: the residue pair algebra over kappa. */
struct KPair {
    KMSymbol x, y;
};

KPair kp_one(FieldId kappa) { return {km_int(kappa, 1), km_zero(kappa, -1)}; }

/** Multiply by ({abar}, m): theta of a unit decomposition u = a*pi^m. */
KPair kp_mul_unit(const KPair& p, const Value& abar, long m) {
    FieldId kappa = abar.fid;
    KMSymbol x2 = km_word(kappa, {abar});
    // (x1 + xi y1)({abar} + xi m) with xi a = -a xi (deg 1) and xi^2 = -xi{-1}:
    //   x = x1*{abar}
    //   y = (-1)^{deg x1} m*x1 + y1*{abar} + (-1)^{deg y1 + 1} m*y1*{-1}
    KMSymbol x = km_mul(p.x, x2);
    KMSymbol y = km_zero(kappa, p.x.n);
    if (m != 0) {
        KMSymbol t = km_scale(Int(m), p.x);
        if (p.x.n % 2 != 0) t = km_neg(t);
        y = km_add(y, t);
    }
    if (p.y.n >= 0) {
        y = km_add(y, km_mul(p.y, x2));
        if (m != 0) {
            KMSymbol t = km_scale(Int(m), km_mul(p.y, km_word(kappa, {v_int(kappa, -1L)})));
            if ((p.y.n + 1) % 2 != 0) t = km_neg(t);
            y = km_add(y, t);
        }
    }
    return {x, y};
}

Value mat_det(std::vector<std::vector<Value>> m, FieldId fid) {
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

long q_val(const Rat& a, const Int& p) {
    long v = 0;
    Int n = a.get_num();
    while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
        n /= p;
        ++v;
    }
    Int d = a.get_den();
    while (mpz_divisible_p(d.get_mpz_t(), p.get_mpz_t())) {
        d /= p;
        --v;
    }
    return v;
}

std::vector<Int> odd_support_primes(const KMSymbol& a) {
    std::vector<Int> out;
    auto add_factors = [&](Int n) {
        n = abs(n);
        for (Int d = 3; d * d <= n; d += 2) {
            while (n % d == 0) {
                if (std::find(out.begin(), out.end(), d) == out.end()) out.push_back(d);
                n /= d;
            }
        }
        while (n % 2 == 0) n /= 2;
        if (n > 1 && std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
    };
    for (const auto& [c, w] : a.terms)
        for (const auto& u : w) {
            Rat r = std::get<Rat>(u.rep);
            add_factors(r.get_num());
            add_factors(r.get_den());
        }
    return out;
}

}  // namespace

KMSymbol km_zero(FieldId fid, int n) { return make(fid, n, {}); }

KMSymbol km_int(FieldId fid, const Int& c) {
    return make(fid, 0, {{c, {}}});
}

KMSymbol km_word(FieldId fid, const std::vector<Value>& units) {
    return make(fid, static_cast<int>(units.size()), {{1, units}});
}

KMSymbol km_add(const KMSymbol& a, const KMSymbol& b) {
    if (a.fid != b.fid || a.n != b.n) throw DomainError("Milnor sum shape mismatch");
    auto t = a.terms;
    for (const auto& p : b.terms) t.push_back(p);
    return make(a.fid, a.n, t);
}

KMSymbol km_neg(const KMSymbol& a) {
    KMSymbol r = a;
    for (auto& [c, w] : r.terms) c = -c;
    return r;
}

KMSymbol km_sub(const KMSymbol& a, const KMSymbol& b) { return km_add(a, km_neg(b)); }

KMSymbol km_scale(const Int& c, const KMSymbol& a) {
    KMSymbol r = a;
    for (auto& [d, w] : r.terms) d *= c;
    r.terms = collect(r.terms);
    return r;
}

KMSymbol km_mul(const KMSymbol& a, const KMSymbol& b) {
    if (a.fid != b.fid) throw DomainError("Milnor product across fields");
    std::vector<std::pair<Int, std::vector<Value>>> t;
    for (const auto& [c, w] : a.terms)
        for (const auto& [d, x] : b.terms) {
            std::vector<Value> word = w;
            word.insert(word.end(), x.begin(), x.end());
            t.emplace_back(c * d, word);
        }
    return make(a.fid, a.n + b.n, t);
}

Int km_constant(const KMSymbol& a) {
    if (a.n != 0) throw DomainError("constant of a positive-degree symbol");
    Int c = 0;
    for (const auto& [d, w] : a.terms) c += d;
    return c;
}

bool km_is_zero(const KMSymbol& a) {
    if (a.terms.empty()) return true;
    if (a.n == 0) return km_constant(a) == 0;
    if (a.n == 1) {
        Value prod = v_one(a.fid);
        for (const auto& [c, w] : a.terms) prod = v_mul(prod, v_pow(w[0], c));
        return v_is_one(prod);
    }
    const FieldInfo& f = field(a.fid);
    if (field_size(a.fid)) return true;  // K^M_n(F_q) = 0 for n >= 2
    if (f.kind == FieldKind::Rationals) {
        if (a.n != 2)
            throw CapabilityError("Milnor equality over Q is limited to degree <= 2");
        for (const Int& p : odd_support_primes(a))
            if (!km_is_zero(km_residue_Q(a, p))) return false;
        int h2 = 1;
        for (const auto& [c, w] : a.terms) {
            int s = hilbert_symbol(std::get<Rat>(w[0].rep), std::get<Rat>(w[1].rep), 2);
            if (s == -1 && mpz_odd_p(c.get_mpz_t())) h2 = -h2;
        }
        return h2 == 1;
    }
    if (f.kind == FieldKind::FunctionField) {
        Value prod = v_one(a.fid);
        for (const auto& [c, w] : a.terms)
            for (const auto& u : w) prod = v_mul(prod, u);
        const RFData& pd = rf_data(prod);
        std::vector<Value> all_units;
        for (const auto& [c, w] : a.terms)
            for (const auto& u : w) all_units.push_back(u);
        if (up_deg(pd.num) >= 1 || up_deg(pd.den) >= 1)
            for (const Place& v : support_places(prod))
                if (!km_is_zero(km_residue(a, v))) return false;
        Place g = good_place(a.fid, all_units);
        return km_is_zero(km_specialize(a, g));
    }
    throw CapabilityError("Milnor equality undecidable over " + f.name +
                          " at degree " + std::to_string(a.n));
}

bool km_equal(const KMSymbol& a, const KMSymbol& b) {
    if (a.fid != b.fid || a.n != b.n) throw DomainError("Milnor comparison shape mismatch");
    return km_is_zero(km_sub(a, b));
}

KMSymbol km_residue(const KMSymbol& a, const Place& v) {
    if (a.n < 1) throw DomainError("residue needs degree >= 1");
    Value pi = place_uniformizer(v);
    KMSymbol out = km_zero(v.kappa, a.n - 1);
    for (const auto& [c, w] : a.terms) {
        KPair p = kp_one(v.kappa);
        for (const auto& u : w) {
            long m = place_val(v, u);
            Value abar = place_reduce(v, v_mul(u, v_pow(pi, Int(-m))));
            p = kp_mul_unit(p, abar, m);
        }
        out = km_add(out, km_scale(c, p.y));
    }
    return out;
}

KMSymbol km_residue_Q(const KMSymbol& a, const Int& p) {
    if (a.n < 1) throw DomainError("residue needs degree >= 1");
    FieldId kappa = field_GF(p.get_si());
    KMSymbol out = km_zero(kappa, a.n - 1);
    auto reduce = [&](const Rat& r) {
        Int num = r.get_num(), den = r.get_den();
        Int di;
        mpz_invert(di.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t());
        return v_int(kappa, ((num * di) % p + p) % p);
    };
    for (const auto& [c, w] : a.terms) {
        KPair q = kp_one(kappa);
        for (const auto& u : w) {
            Rat r = std::get<Rat>(u.rep);
            long m = q_val(r, p);
            Rat unit = r;
            for (long i = 0; i < m; ++i) unit /= Rat(p);
            for (long i = 0; i > m; --i) unit *= Rat(p);
            q = kp_mul_unit(q, reduce(unit), m);
        }
        out = km_add(out, km_scale(c, q.y));
    }
    return out;
}

KMSymbol km_specialize(const KMSymbol& a, const Place& v) {
    if (a.n == 0) {
        return km_int(v.kappa, km_constant(a));
    }
    Value pi = place_uniformizer(v);
    KMSymbol out = km_zero(v.kappa, a.n);
    for (const auto& [c, w] : a.terms) {
        std::vector<Value> word{pi};
        word.insert(word.end(), w.begin(), w.end());
        out = km_add(out, km_scale(c, km_residue(km_word(a.fid, word), v)));
    }
    return out;
}

Value ext_norm(const Extension& E, const Value& u) {
    const FieldInfo& f = field(E.ext);
    int d = E.degree;
    std::vector<std::vector<Value>> m(d, std::vector<Value>(d, v_zero(E.base)));
    for (int j = 0; j < d; ++j) {
        std::vector<Value> e(d, v_zero(E.base));
        e[j] = v_one(E.base);
        Value col = v_mul(u, ext_make(E.ext, e));
        std::vector<Value> coords = ext_coords(col);
        for (int i = 0; i < d; ++i) m[i][j] = coords[i];
    }
    (void)f;
    return mat_det(std::move(m), E.base);
}

KMSymbol km_transfer(const KMSymbol& a, const Extension& E) {
    if (a.fid != E.ext) throw DomainError("transfer source mismatch");
    if (a.n == 0) return km_int(E.base, km_constant(a) * E.degree);
    if (a.n == 1) {
        KMSymbol out = km_zero(E.base, 1);
        for (const auto& [c, w] : a.terms)
            out = km_add(out, km_scale(c, km_word(E.base, {ext_norm(E, w[0])})));
        return out;
    }
    if (field_size(E.ext)) return km_zero(E.base, a.n);  // K^M_n(F_q) = 0
    throw CapabilityError("Milnor transfer in degree >= 2 over infinite fields");
}

std::string km_str(const KMSymbol& a) {
    if (a.terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [c, w] : a.terms) {
        Int m = c;
        if (first) {
            if (m < 0) {
                os << "-";
                m = -m;
            }
        } else {
            os << (m < 0 ? " - " : " + ");
            if (m < 0) m = -m;
        }
        if (w.empty()) {
            os << m.get_str();
        } else {
            if (m != 1) os << m.get_str() << "*";
            os << "{";
            for (size_t i = 0; i < w.size(); ++i) os << (i ? "," : "") << v_str(w[i]);
            os << "}";
        }
        first = false;
    }
    return os.str();
}

}  // namespace mwk
