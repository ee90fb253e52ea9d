#include "mwk/factor.hpp"

#include <algorithm>
#include <atomic>

namespace mwk {

namespace {

std::atomic<std::uint64_t> g_seed{0x6d776b5eedULL};

bool finite_model(FieldId fid) { return field_size(fid).has_value(); }

}  // namespace

void set_factor_seed(std::uint64_t seed) { g_seed.store(seed); }
std::uint64_t factor_seed() { return g_seed.load(); }

UPoly up_powmod(const UPoly& a, const Int& e, const UPoly& m) {
    UPoly r = up_const(v_one(m[0].fid));
    UPoly base = up_divmod(a, m).second;
    Int n = e;
    while (n > 0) {
        if (mpz_odd_p(n.get_mpz_t())) r = up_divmod(up_mul(r, base), m).second;
        base = up_divmod(up_mul(base, base), m).second;
        n >>= 1;
    }
    return r;
}

Value rand_elem(FieldId fid, std::mt19937_64& rng) {
    const FieldInfo& f = field(fid);
    switch (f.kind) {
        case FieldKind::Rationals: {
            long n = static_cast<long>(rng() % 41) - 20;
            long d = static_cast<long>(rng() % 9) + 1;
            return v_rat(fid, Rat(n, d));
        }
        case FieldKind::Finite: {
            Value v;
            v.fid = fid;
            FFData dd;
            dd.c.resize(f.e);
            for (int i = 0; i < f.e; ++i) dd.c[i] = static_cast<long>(rng() % f.p);
            v.rep = std::move(dd);
            return v;
        }
        case FieldKind::FunctionField: {
            int dn = static_cast<int>(rng() % 3);
            UPoly num;
            for (int i = 0; i <= dn; ++i) num.push_back(rand_elem(f.base, rng));
            return rf_make(fid, std::move(num), {v_one(f.base)});
        }
        case FieldKind::Extension: {
            std::vector<Value> c;
            for (int i = 0; i < f.degree; ++i) c.push_back(rand_elem(f.base, rng));
            return ext_make(fid, std::move(c));
        }
    }
    return v_zero(fid);
}

Value rand_unit(FieldId fid, std::mt19937_64& rng) {
    for (int tries = 0; tries < 1000; ++tries) {
        Value v = rand_elem(fid, rng);
        if (!v_is_zero(v)) return v;
    }
    throw DomainError("failed to sample a unit");
}

// ---------------------------------------------------------------------------
// Finite-field factorization
// ---------------------------------------------------------------------------

namespace {

UPoly pth_root_poly(const UPoly& f, FieldId fid) {
    // f = h(t^p) with coefficients in a finite field of size q: the root has
    // coefficients c^{q/p}.
    long p = characteristic(fid).get_si();
    Int q = *field_size(fid);
    Int e = q / p;
    UPoly h;
    for (size_t i = 0; i < f.size(); ++i) {
        if (i % p != 0) {
            if (!v_is_zero(f[i])) throw DomainError("not a p-th power polynomial");
            continue;
        }
        h.push_back(v_pow(f[i], e));
    }
    return up_trim(std::move(h));
}

/** Squarefree decomposition of a monic polynomial over a finite field. */
void squarefree(const UPoly& f, FieldId fid, int mult,
                std::vector<std::pair<UPoly, int>>& out) {
    if (up_deg(f) <= 0) return;
    long p = characteristic(fid).get_si();
    UPoly df = up_derivative(f);
    if (df.empty()) {
        squarefree(pth_root_poly(f, fid), fid, mult * static_cast<int>(p), out);
        return;
    }
    UPoly c = up_gcd(f, df);
    UPoly w = up_divmod(f, c).first;
    int i = 1;
    while (up_deg(w) > 0) {
        UPoly y = up_gcd(w, c);
        UPoly z = up_divmod(w, y).first;
        if (up_deg(z) > 0) out.emplace_back(up_monic(z), mult * i);
        ++i;
        w = std::move(y);
        c = up_divmod(c, w).first;
    }
    if (up_deg(c) > 0) squarefree(pth_root_poly(c, fid), fid, mult * static_cast<int>(p), out);
}

UPoly random_poly_below(int deg, FieldId fid, std::mt19937_64& rng) {
    UPoly r;
    for (int i = 0; i < deg; ++i) r.push_back(rand_elem(fid, rng));
    return up_trim(std::move(r));
}

/** Equal-degree splitting: f monic squarefree, all factors of degree d. */
void equal_degree(const UPoly& f, int d, FieldId fid, std::mt19937_64& rng,
                  std::vector<UPoly>& out) {
    if (up_deg(f) == d) {
        out.push_back(up_monic(f));
        return;
    }
    Int q = *field_size(fid);
    bool even = mpz_even_p(q.get_mpz_t());
    while (true) {
        UPoly r = random_poly_below(up_deg(f), fid, rng);
        if (up_deg(r) < 1) continue;
        UPoly s;
        if (!even) {
            Int e = 1;
            for (int i = 0; i < d; ++i) e *= q;
            e = (e - 1) / 2;
            s = up_powmod(r, e, f);
            s = up_sub(s, up_const(v_one(fid)));
        } else {
            // trace map: r + r^2 + r^4 + ... + r^{2^{kd-1}} with q = 2^k
            int k = 0;
            Int t = q;
            while (t > 1) {
                t /= 2;
                ++k;
            }
            UPoly acc = up_divmod(r, f).second;
            UPoly pw = acc;
            for (int i = 1; i < k * d; ++i) {
                pw = up_divmod(up_mul(pw, pw), f).second;
                acc = up_add(acc, pw);
            }
            s = acc;
        }
        UPoly g = up_gcd(s, f);
        if (up_deg(g) > 0 && up_deg(g) < up_deg(f)) {
            equal_degree(g, d, fid, rng, out);
            equal_degree(up_divmod(f, g).first, d, fid, rng, out);
            return;
        }
    }
}

std::vector<UPoly> distinct_degree(const UPoly& f, FieldId fid, std::mt19937_64& rng) {
    std::vector<UPoly> irreducibles;
    Int q = *field_size(fid);
    UPoly g = f;
    UPoly x = up_x(fid);
    UPoly h = up_divmod(x, g).second;
    int d = 0;
    while (up_deg(g) > 0) {
        ++d;
        if (2 * d > up_deg(g)) {
            irreducibles.push_back(up_monic(g));
            break;
        }
        h = up_powmod(h, q, g);
        UPoly gd = up_gcd(up_sub(h, up_divmod(x, g).second), g);
        if (up_deg(gd) > 0) {
            equal_degree(gd, d, fid, rng, irreducibles);
            g = up_divmod(g, gd).first;
            h = up_divmod(h, g).second;
        }
    }
    return irreducibles;
}

Factorization factor_finite(const UPoly& p, FieldId fid) {
    Factorization r;
    r.unit = up_lc(p);
    UPoly f = up_monic(p);
    std::mt19937_64 rng(factor_seed());
    std::vector<std::pair<UPoly, int>> sf;
    squarefree(f, fid, 1, sf);
    for (const auto& [g, mult] : sf) {
        for (const UPoly& irr : distinct_degree(g, fid, rng)) r.factors.emplace_back(irr, mult);
    }
    std::sort(r.factors.begin(), r.factors.end(), [](const auto& a, const auto& b) {
        return up_deg(a.first) < up_deg(b.first);
    });
    return r;
}

// ---------------------------------------------------------------------------
// Q: rational-root extraction
// ---------------------------------------------------------------------------

std::vector<Int> small_divisors(Int n) {
    std::vector<Int> ds;
    n = abs(n);
    if (n == 0) return ds;
    for (Int d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            ds.push_back(d);
            ds.push_back(n / d);
        }
    }
    return ds;
}

Factorization factor_Q(const UPoly& p, FieldId fid) {
    Factorization r;
    r.unit = up_lc(p);
    UPoly f = up_monic(p);
    // clear denominators to search integer root candidates
    while (up_deg(f) > 0) {
        Int den_lcm = 1;
        for (const Value& c : f) {
            Rat q = std::get<Rat>(c.rep);
            Int d = q.get_den();
            den_lcm = den_lcm / gcd(den_lcm, d) * d;
        }
        Int a0 = 0, an = 0;
        {
            Rat q0 = std::get<Rat>(f[0].rep) * Rat(den_lcm);
            Rat qn = std::get<Rat>(f.back().rep) * Rat(den_lcm);
            a0 = q0.get_num();
            an = qn.get_num();
        }
        bool found = false;
        if (a0 == 0) {
            // root 0
            r.factors.emplace_back(up_x(fid), 0);
            f = up_divmod(f, up_x(fid)).first;
            found = true;
        } else {
            for (const Int& num : small_divisors(a0)) {
                for (const Int& den : small_divisors(an)) {
                    for (int sign = 1; sign >= -1 && !found; sign -= 2) {
                        Rat cand(sign * num, den);
                        cand.canonicalize();
                        Value root = v_rat(fid, cand);
                        if (v_is_zero(up_eval(f, root))) {
                            UPoly lin{v_neg(root), v_one(fid)};
                            r.factors.emplace_back(lin, 0);
                            f = up_divmod(f, lin).first;
                            found = true;
                        }
                    }
                    if (found) break;
                }
                if (found) break;
            }
        }
        if (!found) break;
    }
    if (up_deg(f) > 0) {
        // No rational root: degrees 2 and 3 are certified irreducible, more
        // would need true Q-factorization which is out of scope.
        if (up_deg(f) <= 3) {
            r.factors.emplace_back(f, 1);
        } else {
            throw CapabilityError(
                "factorization over Q beyond rational roots is not supported; "
                "supply the input pre-factored");
        }
    }
    // collapse duplicate linear factors and set multiplicities
    std::vector<std::pair<UPoly, int>> collected;
    for (auto& [g, m] : r.factors) {
        (void)m;
        bool merged = false;
        for (auto& [h, k] : collected)
            if (up_eq(g, h)) {
                ++k;
                merged = true;
                break;
            }
        if (!merged) collected.emplace_back(g, 1);
    }
    r.factors = std::move(collected);
    return r;
}

}  // namespace

Factorization factor(const UPoly& p, FieldId coeff_fid) {
    if (up_trim(p).empty()) throw DomainError("cannot factor the zero polynomial");
    if (finite_model(coeff_fid)) return factor_finite(up_trim(p), coeff_fid);
    if (field(coeff_fid).kind == FieldKind::Rationals) return factor_Q(up_trim(p), coeff_fid);
    throw CapabilityError("factorization is only supported over finite fields and Q");
}

bool up_irreducible(const UPoly& p, FieldId coeff_fid) {
    Factorization f = factor(p, coeff_fid);
    return f.factors.size() == 1 && f.factors[0].second == 1;
}

// ---------------------------------------------------------------------------
// Square classes
// ---------------------------------------------------------------------------

namespace {

/** Exact square root of a monic polynomial, characteristic != 2; nullopt if none. */
std::optional<UPoly> monic_poly_sqrt(const UPoly& f, FieldId fid) {
    int n = up_deg(f);
    if (n % 2 != 0) return std::nullopt;
    int m = n / 2;
    UPoly g(m + 1, v_zero(fid));
    g[m] = v_one(fid);
    Value half = v_inv(v_int(fid, 2L));
    for (int i = m - 1; i >= 0; --i) {
        UPoly r = up_sub(f, up_mul(g, g));
        if (r.empty()) break;
        if (up_deg(r) > m + i) return std::nullopt;
        if (up_deg(r) == m + i) g[i] = v_mul(half, r[m + i]);
    }
    if (!up_eq(up_mul(g, g), f)) return std::nullopt;
    return up_trim(std::move(g));
}

/** Square test for polynomials over a characteristic-2 field (recursive). */
std::optional<UPoly> char2_poly_sqrt(const UPoly& f, FieldId fid, Value* unused = nullptr) {
    (void)unused;
    UPoly g;
    for (size_t i = 0; i < f.size(); ++i) {
        if (i % 2 == 1) {
            if (!v_is_zero(f[i])) return std::nullopt;
            continue;
        }
        Value root;
        if (!is_pth_power(f[i], 2, &root)) return std::nullopt;
        g.push_back(root);
    }
    return up_trim(std::move(g));
}

std::optional<UPoly> poly_sqrt(const UPoly& f, FieldId fid) {
    if (characteristic(fid) == 2) return char2_poly_sqrt(f, fid);
    return monic_poly_sqrt(f, fid);
}

}  // namespace

bool is_square(const Value& a) {
    if (v_is_zero(a)) return true;
    const FieldInfo& f = field(a.fid);
    switch (f.kind) {
        case FieldKind::Rationals: {
            Rat q = std::get<Rat>(a.rep);
            if (q < 0) return false;
            Int n = q.get_num(), d = q.get_den();
            return mpz_perfect_square_p(n.get_mpz_t()) && mpz_perfect_square_p(d.get_mpz_t());
        }
        case FieldKind::Finite: {
            Int q = *field_size(a.fid);
            if (mpz_even_p(q.get_mpz_t())) return true;
            return v_is_one(v_pow(a, (q - 1) / 2));
        }
        case FieldKind::FunctionField: {
            const RFData& d = rf_data(a);
            // a = num/den is a square iff num*den is a square in k[t] up to a
            // square leading unit.
            UPoly h = up_mul(d.num, d.den);
            Value lc = up_lc(h);
            if (characteristic(a.fid) != 2) {
                if (!is_square(lc)) return false;
                return monic_poly_sqrt(up_monic(h), f.base).has_value();
            }
            return char2_poly_sqrt(h, f.base).has_value();
        }
        case FieldKind::Extension: {
            auto q = field_size(a.fid);
            if (q) {
                if (mpz_even_p(q->get_mpz_t())) return true;
                return v_is_one(v_pow(a, (*q - 1) / 2));
            }
            auto t = iso_transport(a);
            if (t) return is_square(*t);
            throw CapabilityError("square test undecidable over this field");
        }
    }
    return false;
}

Value square_class_rep(const Value& a) {
    if (v_is_zero(a)) throw DomainError("square class of zero");
    const FieldInfo& f = field(a.fid);
    switch (f.kind) {
        case FieldKind::Rationals: {
            Rat q = std::get<Rat>(a.rep);
            Int n = q.get_num() * q.get_den();
            // squarefree part by trial division
            Int sf = n < 0 ? -1 : 1;
            n = abs(n);
            for (Int d = 2; d * d <= n; ++d) {
                int m = 0;
                while (n % d == 0) {
                    n /= d;
                    ++m;
                }
                if (m % 2 == 1) sf *= d;
            }
            sf *= n;
            return v_rat(a.fid, Rat(sf));
        }
        case FieldKind::Finite:
        case FieldKind::Extension: {
            auto q = field_size(a.fid);
            if (!q) return a;
            if (mpz_even_p(q->get_mpz_t())) return v_one(a.fid);
            if (is_square(a)) return v_one(a.fid);
            // fixed non-square: first in the deterministic element order
            const FieldInfo& g = field(a.fid);
            if (g.kind == FieldKind::Finite) {
                for (long k = 2; k < g.p; ++k) {
                    Value c = v_int(a.fid, k);
                    if (!is_square(c)) return c;
                }
                // no prime-field non-square (e.g. GF(p^2) with all of F_p square):
                // fall back to generator-involving elements
                Value v;
                v.fid = a.fid;
                FFData dd;
                dd.c.assign(g.e, 0);
                dd.c[1] = 1;
                v.rep = std::move(dd);
                for (long k = 0; k < g.p; ++k) {
                    Value c = v_add(v, v_int(a.fid, k));
                    if (!is_square(c)) return c;
                }
            }
            return a;  // tower: keep as-is (still a fixed representative per input)
        }
        default:
            return a;
    }
}

bool is_pth_power(const Value& a, long p, Value* root) {
    if (v_is_zero(a)) {
        if (root) *root = a;
        return true;
    }
    const FieldInfo& f = field(a.fid);
    switch (f.kind) {
        case FieldKind::Rationals: {
            Rat q = std::get<Rat>(a.rep);
            Int n = q.get_num(), d = q.get_den();
            Int rn, rd;
            if (!mpz_root(rn.get_mpz_t(), n.get_mpz_t(), p)) return false;
            if (!mpz_root(rd.get_mpz_t(), d.get_mpz_t(), p)) return false;
            if (root) *root = v_rat(a.fid, Rat(rn, rd));
            return true;
        }
        case FieldKind::Finite:
        case FieldKind::Extension: {
            auto q = field_size(a.fid);
            if (q && characteristic(a.fid) == p) {
                if (root) *root = v_pow(a, *q / p);  // Frobenius is bijective
                return true;
            }
            if (f.kind == FieldKind::Extension) {
                auto t = iso_transport(a);
                if (t) {
                    // transporting the root back is not needed by callers
                    Value r;
                    bool ok = is_pth_power(*t, p, &r);
                    if (ok && root) throw CapabilityError("p-th root through isomorphism");
                    return ok;
                }
            }
            throw CapabilityError("p-th power test unsupported here");
        }
        case FieldKind::FunctionField: {
            if (characteristic(a.fid) != p)
                throw CapabilityError("p-th power test only in characteristic p");
            const RFData& d = rf_data(a);
            auto part = [&](const UPoly& g) -> std::optional<UPoly> {
                UPoly h;
                for (size_t i = 0; i < g.size(); ++i) {
                    if (i % p != 0) {
                        if (!v_is_zero(g[i])) return std::nullopt;
                        continue;
                    }
                    Value r;
                    if (!is_pth_power(g[i], p, &r)) return std::nullopt;
                    h.push_back(r);
                }
                return up_trim(std::move(h));
            };
            auto rn = part(d.num);
            auto rd = part(d.den);
            if (!rn || !rd) return false;
            if (root) *root = rf_make(a.fid, *rn, *rd);
            return true;
        }
    }
    return false;
}

}  // namespace mwk
