#include "mwk/gw.hpp"

#include <algorithm>
#include <sstream>

#include "mwk/factor.hpp"

namespace mwk {

namespace {

/** Collects terms over square-class representatives, dropping zeros. */
std::vector<std::pair<Int, Value>> collect(const std::vector<std::pair<Int, Value>>& in) {
    std::vector<std::pair<Int, Value>> out;
    for (const auto& [n, u] : in) {
        if (n == 0) continue;
        if (v_is_zero(u)) throw DomainError("<0> is not a form");
        Value r = square_class_rep(u);
        bool merged = false;
        for (auto& [m, w] : out)
            if (v_eq(w, r)) {
                m += n;
                merged = true;
                break;
            }
        if (!merged) out.emplace_back(n, r);
    }
    std::erase_if(out, [](const auto& t) { return t.first == 0; });
    return out;
}

GWElement make(FieldId fid, std::vector<std::pair<Int, Value>> terms, std::string twist) {
    GWElement a;
    a.fid = fid;
    a.terms = collect(terms);
    a.twist = std::move(twist);
    return a;
}

/** Actual diagonal representative of the Witt class: -<u> is <-u> in W. */
std::vector<Value> witt_rep(const GWElement& a) {
    std::vector<Value> d;
    for (const auto& [n, u] : a.terms) {
        Value e = n > 0 ? u : v_neg(u);
        Int m = n > 0 ? n : -n;
        for (Int i = 0; i < m; ++i) d.push_back(e);
    }
    return d;
}

Rat rat_of(const Value& v) { return std::get<Rat>(v.rep); }

std::vector<Rat> rat_diag(const std::vector<Value>& d) {
    std::vector<Rat> r;
    for (const auto& v : d) r.push_back(rat_of(v));
    return r;
}

long val_p(Int n, const Int& p) {
    long v = 0;
    while (n != 0 && mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
        n /= p;
        ++v;
    }
    return v;
}

/** Legendre symbol (u|p) of a p-adic unit rational, odd p. */
int legendre_rat(const Rat& u, const Int& p) {
    Int num = u.get_num(), den = u.get_den();
    Int di;
    mpz_invert(di.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t());
    Int r = (num * di) % p;
    return mpz_legendre(r.get_mpz_t(), p.get_mpz_t());
}

/** Residue of an odd rational mod 2^k. */
long mod_pow2(const Rat& u, long mod) {
    Int num = u.get_num(), den = u.get_den();
    Int m(mod);
    Int di;
    mpz_invert(di.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t());
    Int r = ((num * di) % m + m) % m;
    return r.get_si();
}

bool is_decidable_finite(FieldId fid) { return field_size(fid).has_value(); }

std::vector<Value> element_units(const GWElement& a) {
    std::vector<Value> u;
    for (const auto& [n, w] : a.terms) u.push_back(w);
    return u;
}

bool gw_is_zero(const GWElement& a);

bool witt_is_zero(const GWElement& a) {
    Int r = gw_rank(a);
    if (mpz_odd_p(r.get_mpz_t())) return false;
    GWElement u = a;
    u.twist.clear();  // h is canonical in every twist; compare untwisted
    GWElement c = gw_sub(u, gw_scale(r / 2, gw_h(a.fid)));
    return gw_is_zero(c);
}

bool gw_is_zero(const GWElement& a) {
    if (a.terms.empty()) return true;
    if (gw_rank(a) != 0) return false;
    const FieldInfo& f = field(a.fid);
    if (is_decidable_finite(a.fid)) {
        if (characteristic(a.fid) == 2) return true;  // rank classifies GW(F_q), q even
        return is_square(gw_det(a));
    }
    if (f.kind == FieldKind::Rationals) {
        auto [p, q] = gw_signature(a);
        if (p != q) return false;
        if (!is_square(gw_det(a))) return false;
        // split into actual forms: positive terms vs negated negative terms
        std::vector<Rat> pos, neg;
        for (const auto& [n, u] : a.terms) {
            auto& side = n > 0 ? pos : neg;
            Int m = n > 0 ? n : -n;
            for (Int i = 0; i < m; ++i) side.push_back(rat_of(u));
        }
        for (const Int& pr : relevant_primes(a))
            if (hasse_symbol(pos, pr) != hasse_symbol(neg, pr)) return false;
        return true;
    }
    if (f.kind == FieldKind::FunctionField) {
        std::vector<Value> units = element_units(a);
        Value prod = v_one(a.fid);
        for (const auto& u : units) prod = v_mul(prod, u);
        if (!v_is_zero(prod) && rf_data(prod).num.size() + rf_data(prod).den.size() > 2) {
            for (const Place& v : support_places(prod))
                if (!witt_is_zero(gw_second_residue(a, v))) return false;
        }
        Place g = good_place(a.fid, units);
        return gw_is_zero(gw_specialize(a, g));
    }
    throw CapabilityError("GW equality is not decidable over " + f.name);
}

}  // namespace

GWElement gw_zero(FieldId fid) { return make(fid, {}, ""); }

GWElement gw_gen(const Value& u) {
    if (v_is_zero(u)) throw DomainError("<0> is not a form");
    return make(u.fid, {{1, u}}, "");
}

GWElement gw_diag(FieldId fid, const std::vector<Value>& units) {
    std::vector<std::pair<Int, Value>> t;
    for (const auto& u : units) t.emplace_back(1, u);
    return make(fid, t, "");
}

GWElement gw_int(FieldId fid, const Int& n) { return make(fid, {{n, v_one(fid)}}, ""); }

GWElement gw_h(FieldId fid) {
    return make(fid, {{1, v_one(fid)}, {1, v_int(fid, -1L)}}, "");
}

GWElement gw_eps(FieldId fid) { return make(fid, {{-1, v_int(fid, -1L)}}, ""); }

GWElement gw_pfister(const Value& u) {
    return make(u.fid, {{1, v_one(u.fid)}, {-1, u}}, "");
}

GWElement n_epsilon(FieldId fid, const Int& n) {
    if (n < 0) return gw_neg(gw_mul(gw_gen(v_int(fid, -1L)), n_epsilon(fid, -n)));
    Int m = n / 2;
    GWElement r = gw_scale(m, gw_h(fid));
    if (mpz_odd_p(n.get_mpz_t())) r = gw_add(r, gw_int(fid, 1));
    return r;
}

GWElement gw_add(const GWElement& a, const GWElement& b) {
    if (a.fid != b.fid) throw DomainError("GW sum across fields");
    if (a.twist != b.twist && !a.terms.empty() && !b.terms.empty())
        throw DomainError("GW sum across twists");
    std::vector<std::pair<Int, Value>> t = a.terms;
    for (const auto& p : b.terms) t.push_back(p);
    return make(a.fid, t, a.terms.empty() ? b.twist : a.twist);
}

GWElement gw_neg(const GWElement& a) {
    GWElement r = a;
    for (auto& [n, u] : r.terms) n = -n;
    return r;
}

GWElement gw_sub(const GWElement& a, const GWElement& b) { return gw_add(a, gw_neg(b)); }

GWElement gw_mul(const GWElement& a, const GWElement& b) {
    if (a.fid != b.fid) throw DomainError("GW product across fields");
    std::vector<std::pair<Int, Value>> t;
    for (const auto& [n, u] : a.terms)
        for (const auto& [m, w] : b.terms) t.emplace_back(n * m, v_mul(u, w));
    std::string tw = a.twist.empty() ? b.twist
                     : b.twist.empty() ? a.twist
                                       : a.twist + "*" + b.twist;
    return make(a.fid, t, tw);
}

GWElement gw_scale(const Int& n, const GWElement& a) {
    GWElement r = a;
    for (auto& [m, u] : r.terms) m *= n;
    r.terms = collect(r.terms);
    return r;
}

GWElement gw_twist_unit(const Value& u, const GWElement& a) {
    GWElement r = a;
    for (auto& [n, w] : r.terms) w = v_mul(u, w);
    r.terms = collect(r.terms);
    return r;
}

Int gw_rank(const GWElement& a) {
    Int r = 0;
    for (const auto& [n, u] : a.terms) r += n;
    return r;
}

Value gw_det(const GWElement& a) {
    Value d = v_one(a.fid);
    for (const auto& [n, u] : a.terms)
        if (mpz_odd_p(n.get_mpz_t())) d = v_mul(d, u);
    return square_class_rep(d);
}

Value gw_disc(const GWElement& a) {
    Int r = gw_rank(a);
    Int e = (r * (r - 1)) / 2;
    Value d = gw_det(a);
    if (mpz_odd_p(e.get_mpz_t())) d = v_neg(d);
    return square_class_rep(d);
}

std::pair<Int, Int> gw_signature(const GWElement& a) {
    if (field(a.fid).kind != FieldKind::Rationals)
        throw CapabilityError("signature needs an ordered field (Q)");
    Int p = 0, q = 0;
    for (const auto& [n, u] : a.terms)
        (rat_of(u) > 0 ? p : q) += n;
    return {p, q};
}

int hilbert_symbol(const Rat& a, const Rat& b, const Int& p) {
    if (a == 0 || b == 0) throw DomainError("Hilbert symbol of zero");
    long alpha = val_p(a.get_num(), p) - val_p(a.get_den(), p);
    long beta = val_p(b.get_num(), p) - val_p(b.get_den(), p);
    Rat u = a, w = b;
    Rat pk(p);
    for (long i = 0; i < alpha; ++i) u /= pk;
    for (long i = 0; i > alpha; --i) u *= pk;
    for (long i = 0; i < beta; ++i) w /= pk;
    for (long i = 0; i > beta; --i) w *= pk;
    if (p == 2) {
        long um = mod_pow2(u, 8), wm = mod_pow2(w, 8);
        long eu = (um % 4 == 3) ? 1 : 0;
        long ew = (wm % 4 == 3) ? 1 : 0;
        long ou = (um == 1 || um == 7) ? 0 : 1;
        long ow = (wm == 1 || wm == 7) ? 0 : 1;
        long e = eu * ew + (alpha % 2 + 2) % 2 * ow + (beta % 2 + 2) % 2 * ou;
        return e % 2 == 0 ? 1 : -1;
    }
    long eps = ((p - 1) / 2 % 2 == 0) ? 0 : 1;
    int s = 1;
    if ((alpha % 2) != 0 && (beta % 2) != 0 && eps) s = -s;
    if ((beta % 2) != 0) s *= legendre_rat(u, p);
    if ((alpha % 2) != 0) s *= legendre_rat(w, p);
    return s;
}

int hasse_symbol(const std::vector<Rat>& diag, const Int& p) {
    int s = 1;
    for (size_t i = 0; i < diag.size(); ++i)
        for (size_t j = i + 1; j < diag.size(); ++j)
            s *= hilbert_symbol(diag[i], diag[j], p);
    return s;
}

std::vector<Int> relevant_primes(const GWElement& a) {
    std::vector<Int> out{2};
    auto add_factors = [&](Int n) {
        n = abs(n);
        for (Int d = 2; d * d <= n; ++d) {
            while (n % d == 0) {
                if (std::find(out.begin(), out.end(), d) == out.end()) out.push_back(d);
                n /= d;
            }
            if (d > 100000) {
                if (mpz_probab_prime_p(n.get_mpz_t(), 30)) break;
                throw CapabilityError("entry too large to factor for Hasse symbols");
            }
        }
        if (n > 1 && std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
    };
    for (const auto& [n, u] : a.terms) {
        Rat r = rat_of(u);
        add_factors(r.get_num());
        add_factors(r.get_den());
    }
    std::sort(out.begin(), out.end());
    return out;
}

GWInvariants gw_invariants(const GWElement& a) {
    GWInvariants inv;
    inv.rank = gw_rank(a);
    inv.disc = gw_disc(a);
    const FieldInfo& f = field(a.fid);
    if (f.kind == FieldKind::Rationals) {
        inv.signature = gw_signature(a);
        std::vector<Rat> d = rat_diag(witt_rep(a));
        for (const Int& p : relevant_primes(a)) inv.hasse[p] = hasse_symbol(d, p);
    }
    if (f.kind == FieldKind::FunctionField) {
        Value prod = v_one(a.fid);
        for (const auto& [n, u] : a.terms) prod = v_mul(prod, u);
        if (!v_is_zero(prod)) {
            const RFData& pd = rf_data(prod);
            if (up_deg(pd.num) >= 1 || up_deg(pd.den) >= 1)
                for (const Place& v : support_places(prod))
                    inv.residue_profile.emplace_back(
                        v.label, gw_invariants(gw_second_residue(a, v)));
        }
        Place g = good_place(a.fid, element_units(a));
        inv.residue_profile.emplace_back("s@" + g.label,
                                         gw_invariants(gw_specialize(a, g)));
    }
    return inv;
}

bool gw_equal(const GWElement& a, const GWElement& b) {
    if (a.fid != b.fid) throw DomainError("GW comparison across fields");
    if (a.twist != b.twist && !a.terms.empty() && !b.terms.empty())
        throw DomainError("GW comparison across twists");
    return gw_is_zero(gw_sub(a, b));
}

bool witt_equal(const GWElement& a, const GWElement& b) {
    if (a.fid != b.fid) throw DomainError("Witt comparison across fields");
    return witt_is_zero(gw_sub(a, b));
}

GWElement gw_second_residue(const GWElement& a, const Place& v) {
    Value pi = place_uniformizer(v);
    std::vector<std::pair<Int, Value>> t;
    for (const auto& [n, u] : a.terms) {
        long m = place_val(v, u);
        if (m % 2 == 0) continue;
        Value unit = v_mul(u, v_pow(pi, Int(-m)));
        t.emplace_back(n, place_reduce(v, unit));
    }
    GWElement r = make(v.kappa, t, "");
    r.twist = a.twist.empty() ? "" : a.twist;
    return r;
}

GWElement gw_specialize(const GWElement& a, const Place& v) {
    std::vector<std::pair<Int, Value>> t;
    for (const auto& [n, u] : a.terms) {
        if (place_val(v, u) != 0) throw DomainError("specialization at a ramified entry");
        t.emplace_back(n, place_reduce(v, u));
    }
    GWElement r = make(v.kappa, t, a.twist);
    return r;
}

bool gw_in_In(const GWElement& a, int n) {
    if (n <= 0) return true;
    Int r = gw_rank(a);
    if (mpz_odd_p(r.get_mpz_t())) return false;
    if (n == 1) return true;
    const FieldInfo& f = field(a.fid);
    if (is_decidable_finite(a.fid)) {
        // I^m(F_q) = 0 for m > 1
        return witt_is_zero(a);
    }
    if (witt_is_zero(a)) return true;
    std::vector<Value> rep = witt_rep(a);
    GWElement act = gw_diag(a.fid, rep);
    if (!is_square(gw_disc(act))) return false;
    if (n == 2) {
        if (f.kind == FieldKind::Rationals || f.kind == FieldKind::FunctionField)
            return true;
        throw CapabilityError("I^2 membership over " + f.name);
    }
    if (n == 3 && f.kind == FieldKind::Rationals) {
        auto [p, q] = gw_signature(act);
        Int sig = p - q;
        if (sig % 8 != 0) return false;
        // Hasse invariant relative to the hyperbolic form of equal rank
        std::vector<Rat> d = rat_diag(rep);
        std::vector<Rat> hyp;
        for (size_t i = 0; i * 2 < rep.size(); ++i) {
            hyp.emplace_back(1);
            hyp.emplace_back(-1);
        }
        for (const Int& pr : relevant_primes(act))
            if (hasse_symbol(d, pr) != hasse_symbol(hyp, pr)) return false;
        return true;
    }
    if (f.kind == FieldKind::FunctionField) {
        // residue exactness: residues in I^{n-1}(kappa), specialization in I^n(k)
        Value prod = v_one(a.fid);
        for (const auto& u : rep) prod = v_mul(prod, u);
        const RFData& pd = rf_data(prod);
        if (up_deg(pd.num) >= 1 || up_deg(pd.den) >= 1)
            for (const Place& v : support_places(prod))
                if (!gw_in_In(gw_second_residue(act, v), n - 1)) return false;
        Place g = good_place(a.fid, rep);
        return gw_in_In(gw_specialize(act, g), n);
    }
    throw CapabilityError("I^" + std::to_string(n) + " membership over " + f.name);
}

FundamentalImage fundamental_image(const GWElement& a, int n) {
    if (!gw_in_In(a, n)) throw DomainError("element is not in I^n");
    FundamentalImage out;
    out.in_In = true;
    if (n == 0) {
        Int r = gw_rank(a);
        bool odd = mpz_odd_p(r.get_mpz_t());
        out.image = odd ? "1" : "0";
        out.image_zero = !odd;
        return out;
    }
    if (n == 1) {
        Value d = gw_disc(gw_diag(a.fid, witt_rep(a)));
        out.image_zero = is_square(d);
        out.image = out.image_zero ? "0" : "{" + v_str(square_class_rep(d)) + "}";
        return out;
    }
    out.image_zero = gw_in_In(a, n + 1);
    out.image = out.image_zero ? "0" : "nonzero in gI^" + std::to_string(n);
    return out;
}

GWElement gram_to_gw(const Gram& g0, FieldId fid) {
    size_t n = g0.size();
    Gram m = g0;
    for (size_t i = 0; i < n; ++i) {
        if (m[i].size() != n) throw DomainError("Gram matrix not square");
        for (size_t j = 0; j < i; ++j)
            if (!v_eq(m[i][j], m[j][i])) throw DomainError("Gram matrix not symmetric");
    }
    bool char2 = characteristic(fid) == 2;
    std::vector<Value> diag;
    Int hyps = 0;
    std::vector<size_t> live;
    for (size_t i = 0; i < n; ++i) live.push_back(i);
    auto clear_with_pivot = [&](size_t kpos) {
        size_t k = live[kpos];
        Value piv = m[k][k];
        for (size_t jpos = 0; jpos < live.size(); ++jpos) {
            if (jpos == kpos) continue;
            size_t j = live[jpos];
            if (v_is_zero(m[j][k])) continue;
            Value f = v_div(m[j][k], piv);
            for (size_t x : live) m[j][x] = v_sub(m[j][x], v_mul(f, m[k][x]));
            for (size_t x : live) m[x][j] = v_sub(m[x][j], v_mul(f, m[x][k]));
        }
        diag.push_back(piv);
        live.erase(live.begin() + kpos);
    };
    while (!live.empty()) {
        // prefer a diagonal pivot
        size_t kpos = live.size();
        for (size_t i = 0; i < live.size(); ++i)
            if (!v_is_zero(m[live[i]][live[i]])) {
                kpos = i;
                break;
            }
        if (kpos < live.size()) {
            clear_with_pivot(kpos);
            continue;
        }
        // all-zero diagonal: find an off-diagonal entry
        size_t a = live.size(), b = live.size();
        for (size_t i = 0; i < live.size() && a == live.size(); ++i)
            for (size_t j = i + 1; j < live.size(); ++j)
                if (!v_is_zero(m[live[i]][live[j]])) {
                    a = i;
                    b = j;
                    break;
                }
        if (a == live.size()) throw DomainError("degenerate Gram matrix");
        if (!char2) {
            // make a diagonal entry: row/col a += row/col b gives 2*m[a][b] != 0
            size_t ia = live[a], ib = live[b];
            for (size_t x : live) m[ia][x] = v_add(m[ia][x], m[ib][x]);
            for (size_t x : live) m[x][ia] = v_add(m[x][ia], m[x][ib]);
            continue;
        }
        // char 2 alternating block: split off one hyperbolic plane
        size_t ia = live[a], ib = live[b];
        Value c = m[ia][ib];
        for (size_t jpos = 0; jpos < live.size(); ++jpos) {
            if (jpos == a || jpos == b) continue;
            size_t j = live[jpos];
            Value f1 = v_div(m[j][ib], c);  // phi(e_j, e_b)/c -> subtract f1*e_a
            Value f2 = v_div(m[j][ia], c);  // phi(e_j, e_a)/c -> subtract f2*e_b
            for (size_t x : live) {
                m[j][x] = v_sub(m[j][x], v_add(v_mul(f1, m[ia][x]), v_mul(f2, m[ib][x])));
            }
            for (size_t x : live) {
                m[x][j] = v_sub(m[x][j], v_add(v_mul(f1, m[x][ia]), v_mul(f2, m[x][ib])));
            }
        }
        hyps += 1;
        live.erase(live.begin() + b);
        live.erase(live.begin() + a);
    }
    GWElement r = gw_diag(fid, diag);
    if (hyps > 0) r = gw_add(r, gw_scale(hyps, gw_h(fid)));
    return r;
}

std::string gw_str(const GWElement& a) {
    if (a.terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [n, u] : a.terms) {
        Int m = n;
        if (first) {
            if (m < 0) {
                os << "-";
                m = -m;
            }
        } else {
            os << (m < 0 ? " - " : " + ");
            if (m < 0) m = -m;
        }
        if (m != 1) os << m.get_str() << "*";
        os << "<" << v_str(u) << ">";
        first = false;
    }
    if (!a.twist.empty()) os << " (x) " << a.twist;
    return os.str();
}

}  // namespace mwk
