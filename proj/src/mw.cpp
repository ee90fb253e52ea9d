#include "mwk/mw.hpp"

#include <sstream>

namespace mwk {

namespace {

std::vector<MWWord> collect(std::vector<MWWord> in) {
    std::vector<MWWord> out;
    for (auto& w : in) {
        if (w.c == 0) continue;
        bool trivial = false;
        for (const auto& u : w.u) {
            if (v_is_zero(u)) throw DomainError("zero entry in a Milnor-Witt symbol");
            if (v_is_one(u)) trivial = true;  // [1] = 0
        }
        if (trivial) continue;
        bool merged = false;
        for (auto& x : out) {
            if (x.r != w.r || x.u.size() != w.u.size()) continue;
            bool same = true;
            for (size_t i = 0; same && i < w.u.size(); ++i) same = v_eq(x.u[i], w.u[i]);
            if (same) {
                x.c += w.c;
                merged = true;
                break;
            }
        }
        if (!merged) out.push_back(w);
    }
    std::erase_if(out, [](const MWWord& w) { return w.c == 0; });
    return out;
}

MWElement make(FieldId fid, int n, std::vector<MWWord> t, std::string twist) {
    MWElement a;
    a.fid = fid;
    a.n = n;
    for (const auto& w : t)
        if (static_cast<int>(w.u.size()) - w.r != n)
            throw DomainError("inhomogeneous Milnor-Witt word");
    a.terms = collect(std::move(t));
    a.twist = std::move(twist);
    return a;
}

std::string combine_twists(const std::string& a, const std::string& b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    return a + "*" + b;
}

/**
 * A + xi*B in KMW(kappa)[xi]: xi (the image of [pi], degree 1) eps-commutes
 * past odd degrees (alpha xi = eps^{|alpha|} xi alpha, matching
 * [u][v] = eps [v][u]) and xi^2 = eps [-1] xi; B.n = A.n - 1. With the
 * normal form xi-on-the-left this gives the product below, which reproduces
 * the defining residue formula on words with the pi-carrying unit first and
 * makes Weil reciprocity hold in every degree.
 */
struct ThPair {
    MWElement A, B;
};

ThPair th_one(FieldId kappa) { return {mw_int(kappa, 1), mw_zero(kappa, -1)}; }

MWElement eps_to(int deg, const MWElement& x) {
    if (deg % 2 == 0) return x;
    return mw_mul(mw_eps(x.fid), x);
}

ThPair th_mul(const ThPair& p, const ThPair& q) {
    MWElement A = mw_mul(p.A, q.A);
    MWElement B = mw_add(mw_add(eps_to(p.A.n, mw_mul(p.A, q.B)), mw_mul(p.B, q.A)),
                         eps_to(p.B.n, mw_mul(mw_sym(v_int(p.A.fid, -1L)),
                                              mw_mul(p.B, q.B))));
    return {A, B};
}

ThPair theta_eta(FieldId kappa) { return {mw_eta(kappa), mw_zero(kappa, -2)}; }

ThPair theta_unit(const Place& v, const Value& pi, const Value& u) {
    long m = place_val(v, u);
    Value abar = place_reduce(v, v_mul(u, v_pow(pi, Int(-m))));
    MWElement A = mw_word(v.kappa, 1, 0, {abar});
    MWElement B = mw_mul(mw_n_epsilon(v.kappa, Int(m)), mw_gw_gen(abar));
    return {A, B};
}

ThPair theta_word(const MWWord& w, const Place& v, const Value& pi) {
    ThPair p = th_one(v.kappa);
    for (int i = 0; i < w.r; ++i) p = th_mul(p, theta_eta(v.kappa));
    for (const auto& u : w.u) p = th_mul(p, theta_unit(v, pi, u));
    return p;
}

void check_uniformizer(const Place& v, const Value& pi) {
    if (v_is_zero(pi) || place_val(v, pi) != 1)
        throw DomainError("not a uniformizer for the place");
}

}  // namespace

MWElement mw_zero(FieldId fid, int n) { return make(fid, n, {}, ""); }

MWElement mw_word(FieldId fid, const Int& c, int r, const std::vector<Value>& units) {
    MWWord w;
    w.c = c;
    w.r = r;
    w.u = units;
    return make(fid, static_cast<int>(units.size()) - r, {w}, "");
}

MWElement mw_sym(const Value& u) { return mw_word(u.fid, 1, 0, {u}); }

MWElement mw_eta(FieldId fid) { return mw_word(fid, 1, 1, {}); }

MWElement mw_int(FieldId fid, const Int& c) { return mw_word(fid, c, 0, {}); }

MWElement mw_h(FieldId fid) {
    return mw_add(mw_int(fid, 2), mw_word(fid, 1, 1, {v_int(fid, -1L)}));
}

MWElement mw_gw_gen(const Value& u) {
    return mw_add(mw_int(u.fid, 1), mw_word(u.fid, 1, 1, {u}));
}

MWElement mw_eps(FieldId fid) {
    return mw_neg(mw_gw_gen(v_int(fid, -1L)));
}

MWElement mw_n_epsilon(FieldId fid, const Int& n) {
    if (n < 0) return mw_mul(mw_eps(fid), mw_n_epsilon(fid, -n));
    Int m = n / 2;
    MWElement r = mw_scale(m, mw_h(fid));
    if (mpz_odd_p(n.get_mpz_t())) r = mw_add(r, mw_int(fid, 1));
    return r;
}

MWElement mw_from_gw(const GWElement& a) {
    MWElement r = mw_zero(a.fid, 0);
    for (const auto& [n, u] : a.terms) r = mw_add(r, mw_scale(n, mw_gw_gen(u)));
    r.twist = a.twist;
    return r;
}

MWElement mw_add(const MWElement& a, const MWElement& b) {
    if (a.fid != b.fid || a.n != b.n) throw DomainError("Milnor-Witt sum shape mismatch");
    if (a.twist != b.twist && !a.terms.empty() && !b.terms.empty())
        throw DomainError("Milnor-Witt sum across twists");
    std::vector<MWWord> t = a.terms;
    for (const auto& w : b.terms) t.push_back(w);
    return make(a.fid, a.n, t, a.terms.empty() ? b.twist : a.twist);
}

MWElement mw_neg(const MWElement& a) {
    MWElement r = a;
    for (auto& w : r.terms) w.c = -w.c;
    return r;
}

MWElement mw_sub(const MWElement& a, const MWElement& b) { return mw_add(a, mw_neg(b)); }

MWElement mw_scale(const Int& c, const MWElement& a) {
    MWElement r = a;
    for (auto& w : r.terms) w.c *= c;
    r.terms = collect(r.terms);
    return r;
}

MWElement mw_mul(const MWElement& a, const MWElement& b) {
    if (a.fid != b.fid) throw DomainError("Milnor-Witt product across fields");
    std::vector<MWWord> t;
    for (const auto& x : a.terms)
        for (const auto& y : b.terms) {
            MWWord w;
            w.c = x.c * y.c;
            w.r = x.r + y.r;
            w.u = x.u;
            w.u.insert(w.u.end(), y.u.begin(), y.u.end());
            t.push_back(w);
        }
    return make(a.fid, a.n + b.n, t, combine_twists(a.twist, b.twist));
}

MWElement mw_twist_unit(const Value& u, const MWElement& a) {
    MWElement r = mw_mul(mw_gw_gen(u), a);
    r.twist = a.twist;
    return r;
}

MWElement mw_set_twist(const MWElement& a, const std::string& twist) {
    MWElement r = a;
    r.twist = twist;
    return r;
}

MWElement mw_strip_twist(const MWElement& a) { return mw_set_twist(a, ""); }

GWElement mw_mu_prime(const MWElement& a) {
    GWElement r = gw_zero(a.fid);
    for (const auto& w : a.terms) {
        GWElement g = gw_int(a.fid, 1);
        for (const auto& u : w.u) g = gw_mul(g, gw_pfister(u));
        int sign_exp = a.n >= 0 ? w.r : static_cast<int>(w.u.size());
        Int c = w.c;
        if (sign_exp % 2 != 0) c = -c;
        r = gw_add(r, gw_scale(c, g));
    }
    r.twist = a.twist;
    return r;
}

KMSymbol mw_forget(const MWElement& a) {
    int deg = a.n > 0 ? a.n : 0;
    KMSymbol s = km_zero(a.fid, deg);
    if (a.n < 0) return s;
    for (const auto& w : a.terms) {
        if (w.r > 0) continue;
        if (a.n == 0)
            s = km_add(s, km_int(a.fid, w.c));
        else
            s = km_add(s, km_scale(w.c, km_word(a.fid, w.u)));
    }
    return s;
}

NormalizedPair mw_normalize(const MWElement& a) {
    return {mw_mu_prime(a), mw_forget(a)};
}

MWElement mw_hyperbolic(const KMSymbol& s, const std::string& twist) {
    MWElement r = mw_zero(s.fid, s.n);
    for (const auto& [c, w] : s.terms) r = mw_add(r, mw_word(s.fid, c, 0, w));
    r = mw_mul(mw_h(s.fid), r);
    r.twist = twist;
    return r;
}

bool mw_is_zero(const MWElement& a) {
    if (a.terms.empty()) return true;
    GWElement mu = mw_mu_prime(a);
    if (a.n == 0) return gw_equal(mu, gw_zero(a.fid));
    if (a.n < 0) return witt_equal(mu, gw_zero(a.fid));
    if (!km_is_zero(mw_forget(a))) return false;
    return witt_equal(mu, gw_zero(a.fid));
}

bool mw_equal(const MWElement& a, const MWElement& b) {
    if (a.fid != b.fid || a.n != b.n)
        throw DomainError("Milnor-Witt comparison shape mismatch");
    if (a.twist != b.twist && !a.terms.empty() && !b.terms.empty())
        throw DomainError("Milnor-Witt comparison across twists");
    return mw_is_zero(mw_sub(a, b));
}

MWElement mw_residue_pi(const MWElement& a, const Place& v, const Value& pi) {
    check_uniformizer(v, pi);
    MWElement out = mw_zero(v.kappa, a.n - 1);
    for (const auto& w : a.terms)
        out = mw_add(out, mw_scale(w.c, theta_word(w, v, pi).B));
    out.twist = combine_twists("nu" + v.label, a.twist);
    return out;
}

MWElement mw_residue(const MWElement& a, const Place& v) {
    return mw_residue_pi(a, v, place_uniformizer(v));
}

MWElement mw_specialize_pi(const MWElement& a, const Place& v, const Value& pi) {
    check_uniformizer(v, pi);
    MWElement out = mw_zero(v.kappa, a.n);
    for (const auto& w : a.terms)
        out = mw_add(out, mw_scale(w.c, theta_word(w, v, pi).A));
    out.twist = a.twist;
    return out;
}

MWElement mw_specialize(const MWElement& a, const Place& v) {
    return mw_specialize_pi(a, v, place_uniformizer(v));
}

std::string mw_str(const MWElement& a) {
    if (a.terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& w : a.terms) {
        Int m = w.c;
        if (first) {
            if (m < 0) {
                os << "-";
                m = -m;
            }
        } else {
            os << (m < 0 ? " - " : " + ");
            if (m < 0) m = -m;
        }
        bool printed = false;
        if (m != 1 || (w.r == 0 && w.u.empty())) {
            os << m.get_str();
            printed = true;
        }
        if (w.r > 0) {
            if (printed) os << "*";
            os << "eta";
            if (w.r > 1) os << "^" << w.r;
            printed = true;
        }
        for (const auto& u : w.u) {
            if (printed) os << "*";
            os << "[" << v_str(u) << "]";
            printed = true;
        }
        first = false;
    }
    if (!a.twist.empty()) os << " (x) " << a.twist;
    return os.str();
}

}  // namespace mwk
