#include "mwk/algebra.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>

namespace mwk {

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

namespace {

std::vector<FieldInfo>& registry() {
    static std::vector<FieldInfo> r;
    return r;
}

std::recursive_mutex& registry_mutex() {
    static std::recursive_mutex m;
    return m;
}

// --- F_p[x] helpers on plain coefficient vectors (long, reduced mod p) ---

std::vector<long> fp_trim(std::vector<long> a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
}

std::vector<long> fp_mulmod(const std::vector<long>& a, const std::vector<long>& b, long p,
                            const std::vector<long>& mod) {
    if (a.empty() || b.empty()) return {};
    std::vector<long> r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    // reduce mod the monic polynomial `mod`
    int dm = static_cast<int>(mod.size()) - 1;
    for (int d = static_cast<int>(r.size()) - 1; d >= dm; --d) {
        long c = r[d] % p;
        if (c == 0) continue;
        for (int k = 0; k <= dm; ++k) {
            long& x = r[d - dm + k];
            x = ((x - c * mod[k]) % p + p) % p;
        }
    }
    r.resize(std::min<size_t>(r.size(), dm));
    return fp_trim(r);
}

std::vector<long> fp_powmod(std::vector<long> a, Int n, long p, const std::vector<long>& mod) {
    std::vector<long> r{1};
    while (n > 0) {
        if (mpz_odd_p(n.get_mpz_t())) r = fp_mulmod(r, a, p, mod);
        a = fp_mulmod(a, a, p, mod);
        n >>= 1;
    }
    return r;
}

std::vector<long> fp_gcd(std::vector<long> a, std::vector<long> b, long p) {
    a = fp_trim(std::move(a));
    b = fp_trim(std::move(b));
    while (!b.empty()) {
        // a mod b
        long lb = b.back();
        long ilb = 1;
        for (long k = 1; k < p; ++k)
            if (k * lb % p == 1) { ilb = k; break; }
        std::vector<long> r = a;
        int db = static_cast<int>(b.size()) - 1;
        for (int d = static_cast<int>(r.size()) - 1; d >= db; --d) {
            long c = r[d] % p;
            if (c == 0) continue;
            long f = c * ilb % p;
            for (int k = 0; k <= db; ++k) {
                long& x = r[d - db + k];
                x = ((x - f * b[k]) % p + p) % p;
            }
        }
        r = fp_trim(r);
        a = b;
        b = r;
    }
    return a;
}

bool fp_irreducible(const std::vector<long>& f, long p) {
    // f monic of degree e; distinct-degree style check:
    // f is irreducible iff x^{p^e} = x mod f and gcd(x^{p^{e/l}} - x, f) = 1
    // for every prime l dividing e.
    int e = static_cast<int>(f.size()) - 1;
    if (e <= 0) return false;
    if (e == 1) return true;
    std::vector<long> x{0, 1};
    Int pe = 1;
    for (int i = 0; i < e; ++i) pe *= p;
    std::vector<long> xq = fp_powmod(x, pe, p, f);
    std::vector<long> diff = xq;
    diff.resize(std::max<size_t>(diff.size(), 2), 0);
    diff[1] = ((diff[1] - 1) % p + p) % p;
    if (!fp_trim(diff).empty()) return false;
    for (int l = 2; l <= e; ++l) {
        if (e % l != 0) continue;
        bool prime = true;
        for (int d = 2; d * d <= l; ++d)
            if (l % d == 0) prime = false;
        if (!prime) continue;
        Int q = 1;
        for (int i = 0; i < e / l; ++i) q *= p;
        std::vector<long> xs = fp_powmod(x, q, p, f);
        xs.resize(std::max<size_t>(xs.size(), 2), 0);
        xs[1] = ((xs[1] - 1) % p + p) % p;
        if (!fp_gcd(fp_trim(xs), f, p).empty() &&
            fp_gcd(fp_trim(xs), f, p).size() > 1)
            return false;
    }
    return true;
}

std::vector<long> lowest_lex_irreducible(long p, int e) {
    // Enumerate monic degree-e polynomials by their coefficient vector read as
    // a base-p integer (constant coefficient least significant).
    Int total = 1;
    for (int i = 0; i < e; ++i) total *= p;
    for (Int k = 0; k < total; ++k) {
        std::vector<long> f(e + 1, 0);
        Int t = k;
        for (int i = 0; i < e; ++i) {
            Int digit = t % p;
            f[i] = digit.get_si();
            t /= p;
        }
        f[e] = 1;
        if (fp_irreducible(f, p)) return f;
    }
    throw DomainError("no irreducible polynomial found (impossible)");
}

const FieldInfo& finfo(FieldId fid) {
    std::lock_guard<std::recursive_mutex> lk(registry_mutex());
    if (fid < 0 || fid >= static_cast<FieldId>(registry().size()))
        throw DomainError("unknown field id");
    return registry()[fid];
}

}  // namespace

FieldId register_field(FieldInfo info) {
    std::lock_guard<std::recursive_mutex> lk(registry_mutex());
    auto& r = registry();
    // Deduplicate structurally so repeated declarations share an id.
    for (FieldId i = 0; i < static_cast<FieldId>(r.size()); ++i) {
        const FieldInfo& f = r[i];
        if (f.kind != info.kind) continue;
        switch (info.kind) {
            case FieldKind::Rationals:
                return i;
            case FieldKind::Finite:
                if (f.p == info.p && f.e == info.e && f.defpoly == info.defpoly) return i;
                break;
            case FieldKind::FunctionField:
                if (f.base == info.base && f.var == info.var) return i;
                break;
            case FieldKind::Extension: {
                if (f.base != info.base || f.gens != info.gens ||
                    f.stage_deg != info.stage_deg)
                    break;
                bool same = f.minpolys.size() == info.minpolys.size();
                for (size_t k = 0; same && k < f.minpolys.size(); ++k)
                    same = mp_eq(f.minpolys[k], info.minpolys[k]);
                if (same) return i;
                break;
            }
        }
    }
    r.push_back(std::move(info));
    return static_cast<FieldId>(r.size()) - 1;
}

const FieldInfo& field(FieldId fid) { return finfo(fid); }

FieldId field_Q() {
    FieldInfo f;
    f.kind = FieldKind::Rationals;
    f.name = "QQ";
    return register_field(std::move(f));
}

FieldId field_GF(long p, int e, const std::vector<long>* defpoly) {
    if (p < 2) throw DomainError("characteristic must be a prime >= 2");
    for (long d = 2; d * d <= p; ++d)
        if (p % d == 0) throw DomainError("characteristic must be prime");
    FieldInfo f;
    f.kind = FieldKind::Finite;
    f.p = p;
    f.e = e;
    f.var = "g";
    if (e > 1) {
        f.defpoly = defpoly ? *defpoly : lowest_lex_irreducible(p, e);
        if (static_cast<int>(f.defpoly.size()) != e + 1 || f.defpoly[e] != 1)
            throw DomainError("defining polynomial must be monic of degree e");
        if (!fp_irreducible(f.defpoly, p))
            throw DomainError("defining polynomial is reducible");
    }
    std::ostringstream os;
    os << "GF(" << p;
    if (e > 1) os << "^" << e;
    os << ")";
    f.name = os.str();
    return register_field(std::move(f));
}

FieldId field_ratfunc(FieldId base, const std::string& var) {
    FieldInfo f;
    f.kind = FieldKind::FunctionField;
    f.base = base;
    f.var = var;
    f.name = finfo(base).name + "(" + var + ")";
    return register_field(std::move(f));
}

void register_isomorphism(FieldId src, FieldId target, std::vector<Value> gen_images,
                          std::optional<Value> base_var_image) {
    std::lock_guard<std::recursive_mutex> lk(registry_mutex());
    FieldInfo& f = registry().at(src);
    f.iso_target = target;
    f.iso_gen_images = std::move(gen_images);
    f.iso_base_var_image = std::move(base_var_image);
}

Int characteristic(FieldId fid) {
    const FieldInfo& f = finfo(fid);
    switch (f.kind) {
        case FieldKind::Rationals: return 0;
        case FieldKind::Finite: return f.p;
        default: return characteristic(f.base);
    }
}

std::optional<Int> field_size(FieldId fid) {
    const FieldInfo& f = finfo(fid);
    switch (f.kind) {
        case FieldKind::Rationals:
        case FieldKind::FunctionField:
            return std::nullopt;
        case FieldKind::Finite: {
            Int q = 1;
            for (int i = 0; i < f.e; ++i) q *= f.p;
            return q;
        }
        case FieldKind::Extension: {
            auto b = field_size(f.base);
            if (!b) return std::nullopt;
            Int q = 1;
            for (int i = 0; i < f.degree; ++i) q *= *b;
            return q;
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Extension monomial basis
// ---------------------------------------------------------------------------

std::vector<Monomial> ext_basis(FieldId ext) {
    const FieldInfo& f = finfo(ext);
    if (f.kind != FieldKind::Extension) throw DomainError("not an extension field");
    std::vector<Monomial> basis;
    Monomial cur(f.stage_deg.size(), 0);
    // mixed-radix enumeration, last generator fastest
    int n = static_cast<int>(f.stage_deg.size());
    while (true) {
        basis.push_back(cur);
        int i = n - 1;
        while (i >= 0) {
            if (++cur[i] < f.stage_deg[i]) break;
            cur[i] = 0;
            --i;
        }
        if (i < 0) break;
    }
    return basis;
}

namespace {

size_t basis_index(const FieldInfo& f, const Monomial& m) {
    size_t idx = 0;
    for (size_t i = 0; i < m.size(); ++i) idx = idx * f.stage_deg[i] + m[i];
    return idx;
}

std::vector<std::pair<int, MPoly>> ext_system(const FieldInfo& f) {
    std::vector<std::pair<int, MPoly>> sys;
    for (size_t i = 0; i < f.minpolys.size(); ++i)
        sys.emplace_back(static_cast<int>(i), f.minpolys[i]);
    return sys;
}

MPoly ext_to_mpoly(const FieldInfo& f, const ExtData& d) {
    MPoly p = mp_zero(f.base, static_cast<int>(f.gens.size()));
    auto basis = [&]() {
        std::vector<Monomial> b;
        Monomial cur(f.stage_deg.size(), 0);
        int n = static_cast<int>(f.stage_deg.size());
        while (true) {
            b.push_back(cur);
            int i = n - 1;
            while (i >= 0) {
                if (++cur[i] < f.stage_deg[i]) break;
                cur[i] = 0;
                --i;
            }
            if (i < 0) break;
        }
        return b;
    }();
    for (size_t i = 0; i < d.c.size(); ++i)
        if (!v_is_zero(d.c[i])) mp_add_term(p, basis[i], d.c[i]);
    return p;
}

std::vector<Value> mpoly_to_coords(const FieldInfo& f, const MPoly& p) {
    std::vector<Value> c(f.degree, v_zero(f.base));
    for (const auto& [m, v] : p.terms) {
        c[basis_index(f, m)] = v;
    }
    return c;
}

}  // namespace

// ---------------------------------------------------------------------------
// Value construction
// ---------------------------------------------------------------------------

Value v_zero(FieldId fid) { return v_int(fid, 0L); }
Value v_one(FieldId fid) { return v_int(fid, 1L); }

Value v_int(FieldId fid, long n) { return v_int(fid, Int(n)); }

Value v_int(FieldId fid, const Int& n) {
    const FieldInfo& f = finfo(fid);
    Value v;
    v.fid = fid;
    switch (f.kind) {
        case FieldKind::Rationals:
            v.rep = Rat(n);
            break;
        case FieldKind::Finite: {
            FFData d;
            d.c.assign(f.e, 0);
            Int r = n % f.p;
            if (r < 0) r += f.p;
            d.c[0] = r.get_si();
            v.rep = std::move(d);
            break;
        }
        case FieldKind::FunctionField: {
            auto d = std::make_shared<RFData>();
            Value c = v_int(f.base, n);
            if (!v_is_zero(c)) d->num = {c};
            d->den = {v_one(f.base)};
            v.rep = std::move(d);
            break;
        }
        case FieldKind::Extension: {
            auto d = std::make_shared<ExtData>();
            d->c.assign(f.degree, v_zero(f.base));
            d->c[0] = v_int(f.base, n);
            v.rep = std::move(d);
            break;
        }
    }
    return v;
}

Value v_rat(FieldId fid, const Rat& q) {
    const FieldInfo& f = finfo(fid);
    if (f.kind == FieldKind::Rationals) {
        Value v;
        v.fid = fid;
        Rat c = q;
        c.canonicalize();
        v.rep = c;
        return v;
    }
    Value num = v_int(fid, Int(q.get_num()));
    Value den = v_int(fid, Int(q.get_den()));
    return v_div(num, den);
}

Value rf_make(FieldId kt, UPoly num, UPoly den) {
    const FieldInfo& f = finfo(kt);
    if (f.kind != FieldKind::FunctionField) throw DomainError("not a function field");
    num = up_trim(std::move(num));
    den = up_trim(std::move(den));
    if (den.empty()) throw DomainError("zero denominator");
    UPoly g = up_gcd(num, den);
    if (up_deg(g) > 0) {
        num = up_divmod(num, g).first;
        den = up_divmod(den, g).first;
    }
    Value lc = up_lc(den);
    if (!v_is_one(lc)) {
        Value il = v_inv(lc);
        num = up_scale(il, num);
        den = up_scale(il, den);
    }
    if (num.empty()) den = {v_one(f.base)};
    auto d = std::make_shared<RFData>();
    d->num = std::move(num);
    d->den = std::move(den);
    Value v;
    v.fid = kt;
    v.rep = std::move(d);
    return v;
}

const RFData& rf_data(const Value& a) {
    return *std::get<std::shared_ptr<const RFData>>(a.rep);
}

Value ext_make(FieldId ext, std::vector<Value> coords) {
    const FieldInfo& f = finfo(ext);
    if (f.kind != FieldKind::Extension) throw DomainError("not an extension field");
    if (static_cast<int>(coords.size()) != f.degree)
        throw DomainError("coordinate vector has wrong length");
    auto d = std::make_shared<ExtData>();
    d->c = std::move(coords);
    Value v;
    v.fid = ext;
    v.rep = std::move(d);
    return v;
}

const ExtData& ext_data(const Value& a) {
    return *std::get<std::shared_ptr<const ExtData>>(a.rep);
}

std::vector<Value> ext_coords(const Value& a) { return ext_data(a).c; }

// ---------------------------------------------------------------------------
// Value arithmetic
// ---------------------------------------------------------------------------

namespace {

void check_same_field(const Value& a, const Value& b) {
    if (a.fid != b.fid) throw DomainError("field mismatch in arithmetic");
}

FFData ff_binop(const FFData& a, const FFData& b, long p, bool sub) {
    FFData r;
    size_t n = std::max(a.c.size(), b.c.size());
    r.c.assign(n, 0);
    for (size_t i = 0; i < n; ++i) {
        long x = i < a.c.size() ? a.c[i] : 0;
        long y = i < b.c.size() ? b.c[i] : 0;
        r.c[i] = ((sub ? x - y : x + y) % p + p) % p;
    }
    return r;
}

}  // namespace

Value v_add(const Value& a, const Value& b) {
    check_same_field(a, b);
    const FieldInfo& f = finfo(a.fid);
    Value v;
    v.fid = a.fid;
    switch (f.kind) {
        case FieldKind::Rationals:
            v.rep = Rat(std::get<Rat>(a.rep) + std::get<Rat>(b.rep));
            break;
        case FieldKind::Finite:
            v.rep = ff_binop(std::get<FFData>(a.rep), std::get<FFData>(b.rep), f.p, false);
            break;
        case FieldKind::FunctionField: {
            const RFData& x = rf_data(a);
            const RFData& y = rf_data(b);
            UPoly num = up_add(up_mul(x.num, y.den), up_mul(y.num, x.den));
            UPoly den = up_mul(x.den, y.den);
            return rf_make(a.fid, std::move(num), std::move(den));
        }
        case FieldKind::Extension: {
            const ExtData& x = ext_data(a);
            const ExtData& y = ext_data(b);
            std::vector<Value> c(x.c.size());
            for (size_t i = 0; i < c.size(); ++i) c[i] = v_add(x.c[i], y.c[i]);
            return ext_make(a.fid, std::move(c));
        }
    }
    return v;
}

Value v_neg(const Value& a) {
    const FieldInfo& f = finfo(a.fid);
    Value v;
    v.fid = a.fid;
    switch (f.kind) {
        case FieldKind::Rationals:
            v.rep = Rat(-std::get<Rat>(a.rep));
            break;
        case FieldKind::Finite: {
            FFData d = std::get<FFData>(a.rep);
            for (auto& c : d.c) c = (f.p - c) % f.p;
            v.rep = std::move(d);
            break;
        }
        case FieldKind::FunctionField: {
            const RFData& x = rf_data(a);
            return rf_make(a.fid, up_neg(x.num), x.den);
        }
        case FieldKind::Extension: {
            std::vector<Value> c = ext_data(a).c;
            for (auto& ci : c) ci = v_neg(ci);
            return ext_make(a.fid, std::move(c));
        }
    }
    return v;
}

Value v_sub(const Value& a, const Value& b) { return v_add(a, v_neg(b)); }

Value v_mul(const Value& a, const Value& b) {
    check_same_field(a, b);
    const FieldInfo& f = finfo(a.fid);
    Value v;
    v.fid = a.fid;
    switch (f.kind) {
        case FieldKind::Rationals:
            v.rep = Rat(std::get<Rat>(a.rep) * std::get<Rat>(b.rep));
            break;
        case FieldKind::Finite: {
            const FFData& x = std::get<FFData>(a.rep);
            const FFData& y = std::get<FFData>(b.rep);
            std::vector<long> mod;
            if (f.e > 1) {
                mod = f.defpoly;
            } else {
                mod = {0, 1};  // x, i.e. reduce to constants
            }
            FFData r;
            std::vector<long> prod = fp_mulmod(x.c, y.c, f.p, mod);
            prod.resize(f.e, 0);
            r.c = std::move(prod);
            v.rep = std::move(r);
            break;
        }
        case FieldKind::FunctionField: {
            const RFData& x = rf_data(a);
            const RFData& y = rf_data(b);
            return rf_make(a.fid, up_mul(x.num, y.num), up_mul(x.den, y.den));
        }
        case FieldKind::Extension: {
            MPoly p = mp_mul(ext_to_mpoly(f, ext_data(a)), ext_to_mpoly(f, ext_data(b)));
            p = mp_normal_form(p, ext_system(f));
            return ext_make(a.fid, mpoly_to_coords(f, p));
        }
    }
    return v;
}

Value v_inv(const Value& a) {
    if (v_is_zero(a)) throw DomainError("division by zero");
    const FieldInfo& f = finfo(a.fid);
    Value v;
    v.fid = a.fid;
    switch (f.kind) {
        case FieldKind::Rationals:
            v.rep = Rat(1 / std::get<Rat>(a.rep));
            break;
        case FieldKind::Finite: {
            // extended Euclid in F_p[x] against the defining polynomial
            if (f.e == 1) {
                long x = std::get<FFData>(a.rep).c[0];
                long ix = 0;
                for (long k = 1; k < f.p; ++k)
                    if (k * x % f.p == 1) { ix = k; break; }
                FFData d;
                d.c = {ix};
                v.rep = std::move(d);
                break;
            }
            // invert via Fermat: a^{q-2}
            Int q = *field_size(a.fid);
            return v_pow(a, q - 2);
        }
        case FieldKind::FunctionField: {
            const RFData& x = rf_data(a);
            return rf_make(a.fid, x.den, x.num);
        }
        case FieldKind::Extension: {
            // Solve (mult-by-a) y = 1 over the monomial basis.
            auto basis = ext_basis(a.fid);
            int d = f.degree;
            // columns: coordinates of a * m_j
            std::vector<std::vector<Value>> M(d, std::vector<Value>(d, v_zero(f.base)));
            for (int j = 0; j < d; ++j) {
                std::vector<Value> ej(d, v_zero(f.base));
                ej[j] = v_one(f.base);
                Value mj = ext_make(a.fid, std::move(ej));
                std::vector<Value> col = ext_coords(v_mul(a, mj));
                for (int i = 0; i < d; ++i) M[i][j] = col[i];
            }
            std::vector<Value> rhs(d, v_zero(f.base));
            rhs[0] = v_one(f.base);
            // Gaussian elimination
            std::vector<int> perm(d);
            for (int i = 0; i < d; ++i) perm[i] = i;
            for (int col = 0; col < d; ++col) {
                int piv = -1;
                for (int r = col; r < d; ++r)
                    if (!v_is_zero(M[r][col])) { piv = r; break; }
                if (piv < 0) throw DomainError("non-invertible element (reducible presentation?)");
                std::swap(M[piv], M[col]);
                std::swap(rhs[piv], rhs[col]);
                Value ip = v_inv(M[col][col]);
                for (int c = col; c < d; ++c) M[col][c] = v_mul(M[col][c], ip);
                rhs[col] = v_mul(rhs[col], ip);
                for (int r = 0; r < d; ++r) {
                    if (r == col || v_is_zero(M[r][col])) continue;
                    Value fct = M[r][col];
                    for (int c = col; c < d; ++c)
                        M[r][c] = v_sub(M[r][c], v_mul(fct, M[col][c]));
                    rhs[r] = v_sub(rhs[r], v_mul(fct, rhs[col]));
                }
            }
            return ext_make(a.fid, std::move(rhs));
        }
    }
    return v;
}

Value v_div(const Value& a, const Value& b) { return v_mul(a, v_inv(b)); }

Value v_pow(const Value& a, const Int& n) {
    if (n < 0) return v_pow(v_inv(a), -n);
    Value r = v_one(a.fid);
    Value base = a;
    Int m = n;
    while (m > 0) {
        if (mpz_odd_p(m.get_mpz_t())) r = v_mul(r, base);
        base = v_mul(base, base);
        m >>= 1;
    }
    return r;
}

bool v_is_zero(const Value& a) {
    const FieldInfo& f = finfo(a.fid);
    switch (f.kind) {
        case FieldKind::Rationals: return std::get<Rat>(a.rep) == 0;
        case FieldKind::Finite: {
            for (long c : std::get<FFData>(a.rep).c)
                if (c != 0) return false;
            return true;
        }
        case FieldKind::FunctionField: return rf_data(a).num.empty();
        case FieldKind::Extension: {
            for (const Value& c : ext_data(a).c)
                if (!v_is_zero(c)) return false;
            return true;
        }
    }
    return false;
}

bool v_is_one(const Value& a) { return v_eq(a, v_one(a.fid)); }

bool v_eq(const Value& a, const Value& b) {
    if (a.fid != b.fid) return false;
    const FieldInfo& f = finfo(a.fid);
    switch (f.kind) {
        case FieldKind::Rationals: return std::get<Rat>(a.rep) == std::get<Rat>(b.rep);
        case FieldKind::Finite: return std::get<FFData>(a.rep) == std::get<FFData>(b.rep);
        case FieldKind::FunctionField: {
            const RFData& x = rf_data(a);
            const RFData& y = rf_data(b);
            return up_eq(x.num, y.num) && up_eq(x.den, y.den);
        }
        case FieldKind::Extension: {
            const ExtData& x = ext_data(a);
            const ExtData& y = ext_data(b);
            for (size_t i = 0; i < x.c.size(); ++i)
                if (!v_eq(x.c[i], y.c[i])) return false;
            return true;
        }
    }
    return false;
}

Value embed(const Value& a, FieldId target) {
    if (a.fid == target) return a;
    const FieldInfo& f = finfo(target);
    if (f.kind == FieldKind::FunctionField || f.kind == FieldKind::Extension) {
        Value base = embed(a, f.base);
        if (f.kind == FieldKind::FunctionField) {
            UPoly num;
            if (!v_is_zero(base)) num = {base};
            return rf_make(target, std::move(num), {v_one(f.base)});
        }
        std::vector<Value> c(f.degree, v_zero(f.base));
        c[0] = base;
        return ext_make(target, std::move(c));
    }
    if (f.kind == FieldKind::Finite) {
        const FieldInfo& g = finfo(a.fid);
        if (g.kind == FieldKind::Finite && g.p == f.p && g.e == 1) {
            Value v;
            v.fid = target;
            FFData d;
            d.c.assign(f.e, 0);
            d.c[0] = std::get<FFData>(a.rep).c[0];
            v.rep = std::move(d);
            return v;
        }
    }
    throw DomainError("cannot embed value into target field");
}

std::optional<Value> iso_transport(const Value& a) {
    const FieldInfo& f = finfo(a.fid);
    if (f.kind != FieldKind::Extension || f.iso_target < 0) return std::nullopt;
    FieldId tgt = f.iso_target;
    // Map base values through the base-variable image, then substitute
    // generator images into the monomial expression.
    auto map_base = [&](const Value& b) -> Value {
        const FieldInfo& bf = finfo(b.fid);
        if (bf.kind == FieldKind::FunctionField && f.iso_base_var_image) {
            const RFData& d = rf_data(b);
            Value x = *f.iso_base_var_image;
            auto eval = [&](const UPoly& p) {
                Value r = v_zero(tgt);
                for (int i = up_deg(p); i >= 0; --i)
                    r = v_add(v_mul(r, x), embed(p[i], tgt));
                return r;
            };
            return v_div(eval(d.num), eval(d.den));
        }
        return embed(b, tgt);
    };
    auto basis = ext_basis(a.fid);
    const ExtData& d = ext_data(a);
    Value r = v_zero(tgt);
    for (size_t i = 0; i < basis.size(); ++i) {
        if (v_is_zero(d.c[i])) continue;
        Value term = map_base(d.c[i]);
        for (size_t g = 0; g < basis[i].size(); ++g)
            for (int k = 0; k < basis[i][g]; ++k) term = v_mul(term, f.iso_gen_images[g]);
        r = v_add(r, term);
    }
    return r;
}

std::string v_str(const Value& a) {
    const FieldInfo& f = finfo(a.fid);
    switch (f.kind) {
        case FieldKind::Rationals:
            return std::get<Rat>(a.rep).get_str();
        case FieldKind::Finite: {
            const FFData& d = std::get<FFData>(a.rep);
            std::ostringstream os;
            bool first = true;
            for (int i = static_cast<int>(d.c.size()) - 1; i >= 0; --i) {
                if (d.c[i] == 0) continue;
                if (!first) os << "+";
                first = false;
                if (i == 0 || d.c[i] != 1) os << d.c[i];
                if (i > 0 && d.c[i] != 1) os << "*";
                if (i == 1) os << f.var;
                if (i > 1) os << f.var << "^" << i;
            }
            if (first) os << "0";
            return os.str();
        }
        case FieldKind::FunctionField: {
            const RFData& d = rf_data(a);
            if (d.num.empty()) return "0";
            std::string n = up_str(d.num, f.var);
            if (up_deg(d.den) == 0 && v_is_one(d.den[0])) return n;
            return "(" + n + ")/(" + up_str(d.den, f.var) + ")";
        }
        case FieldKind::Extension: {
            MPoly p = ext_to_mpoly(f, ext_data(a));
            return mp_str(p, f.gens);
        }
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Univariate polynomial helpers
// ---------------------------------------------------------------------------

int up_deg(const UPoly& p) { return static_cast<int>(p.size()) - 1; }

UPoly up_trim(UPoly p) {
    while (!p.empty() && v_is_zero(p.back())) p.pop_back();
    return p;
}

UPoly up_zero() { return {}; }

UPoly up_const(const Value& c) {
    if (v_is_zero(c)) return {};
    return {c};
}

UPoly up_x(FieldId fid) { return {v_zero(fid), v_one(fid)}; }

UPoly up_add(const UPoly& a, const UPoly& b) {
    UPoly r(std::max(a.size(), b.size()));
    for (size_t i = 0; i < r.size(); ++i) {
        if (i < a.size() && i < b.size())
            r[i] = v_add(a[i], b[i]);
        else
            r[i] = i < a.size() ? a[i] : b[i];
    }
    return up_trim(std::move(r));
}

UPoly up_neg(const UPoly& a) {
    UPoly r = a;
    for (auto& c : r) c = v_neg(c);
    return r;
}

UPoly up_sub(const UPoly& a, const UPoly& b) { return up_add(a, up_neg(b)); }

UPoly up_mul(const UPoly& a, const UPoly& b) {
    if (a.empty() || b.empty()) return {};
    FieldId fid = a[0].fid;
    UPoly r(a.size() + b.size() - 1, v_zero(fid));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = v_add(r[i + j], v_mul(a[i], b[j]));
    return up_trim(std::move(r));
}

UPoly up_scale(const Value& c, const UPoly& a) {
    if (v_is_zero(c)) return {};
    UPoly r = a;
    for (auto& x : r) x = v_mul(c, x);
    return up_trim(std::move(r));
}

std::pair<UPoly, UPoly> up_divmod(const UPoly& a, const UPoly& b) {
    if (b.empty()) throw DomainError("polynomial division by zero");
    UPoly r = a;
    int db = up_deg(b);
    Value ilb = v_inv(b.back());
    FieldId fid = b[0].fid;
    if (up_deg(r) < db) return {up_zero(), up_trim(std::move(r))};
    UPoly q(up_deg(r) - db + 1, v_zero(fid));
    for (int d = up_deg(r); d >= db; --d) {
        if (static_cast<int>(r.size()) <= d || v_is_zero(r[d])) continue;
        Value c = v_mul(r[d], ilb);
        q[d - db] = c;
        for (int k = 0; k <= db; ++k) r[d - db + k] = v_sub(r[d - db + k], v_mul(c, b[k]));
    }
    return {up_trim(std::move(q)), up_trim(std::move(r))};
}

UPoly up_gcd(const UPoly& a, const UPoly& b) {
    UPoly x = up_trim(a), y = up_trim(b);
    while (!y.empty()) {
        UPoly r = up_divmod(x, y).second;
        x = std::move(y);
        y = std::move(r);
    }
    return up_monic(x);
}

UPoly up_derivative(const UPoly& a) {
    if (a.size() <= 1) return {};
    FieldId fid = a[0].fid;
    UPoly r(a.size() - 1, v_zero(fid));
    for (size_t i = 1; i < a.size(); ++i) r[i - 1] = v_mul(v_int(fid, static_cast<long>(i)), a[i]);
    return up_trim(std::move(r));
}

Value up_eval(const UPoly& a, const Value& x) {
    Value r = v_zero(x.fid);
    for (int i = up_deg(a); i >= 0; --i) r = v_add(v_mul(r, x), embed(a[i], x.fid));
    return r;
}

bool up_eq(const UPoly& a, const UPoly& b) {
    UPoly x = up_trim(a), y = up_trim(b);
    if (x.size() != y.size()) return false;
    for (size_t i = 0; i < x.size(); ++i)
        if (!v_eq(x[i], y[i])) return false;
    return true;
}

UPoly up_monic(const UPoly& a) {
    UPoly r = up_trim(a);
    if (r.empty()) return r;
    if (v_is_one(r.back())) return r;
    return up_scale(v_inv(r.back()), r);
}

Value up_lc(const UPoly& a) {
    UPoly r = up_trim(a);
    if (r.empty()) throw DomainError("leading coefficient of zero polynomial");
    return r.back();
}

std::string up_str(const UPoly& a, const std::string& var) {
    if (a.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = up_deg(a); i >= 0; --i) {
        if (v_is_zero(a[i])) continue;
        if (!first) os << " + ";
        first = false;
        std::string c = v_str(a[i]);
        bool trivial = v_is_one(a[i]);
        if (i == 0 || !trivial) {
            bool needs_parens = c.find('+') != std::string::npos ||
                                c.find(' ') != std::string::npos ||
                                (c.find('-') != std::string::npos && c.find('-') != 0);
            os << (needs_parens ? "(" + c + ")" : c);
            if (i > 0) os << "*";
        }
        if (i == 1) os << var;
        if (i > 1) os << var << "^" << i;
    }
    if (first) return "0";
    return os.str();
}

// ---------------------------------------------------------------------------
// Multivariate polynomial helpers
// ---------------------------------------------------------------------------

MPoly mp_zero(FieldId coeff, int nvars) {
    MPoly p;
    p.coeff = coeff;
    p.nvars = nvars;
    return p;
}

MPoly mp_const(FieldId coeff, int nvars, const Value& c) {
    MPoly p = mp_zero(coeff, nvars);
    if (!v_is_zero(c)) p.terms[Monomial(nvars, 0)] = c;
    return p;
}

MPoly mp_var(FieldId coeff, int nvars, int i) {
    MPoly p = mp_zero(coeff, nvars);
    Monomial m(nvars, 0);
    m[i] = 1;
    p.terms[m] = v_one(coeff);
    return p;
}

void mp_add_term(MPoly& p, const Monomial& m, const Value& c) {
    if (v_is_zero(c)) return;
    auto it = p.terms.find(m);
    if (it == p.terms.end()) {
        p.terms[m] = c;
    } else {
        Value s = v_add(it->second, c);
        if (v_is_zero(s))
            p.terms.erase(it);
        else
            it->second = s;
    }
}

MPoly mp_add(const MPoly& a, const MPoly& b) {
    MPoly r = a;
    for (const auto& [m, c] : b.terms) mp_add_term(r, m, c);
    return r;
}

MPoly mp_neg(const MPoly& a) {
    MPoly r = a;
    for (auto& [m, c] : r.terms) c = v_neg(c);
    return r;
}

MPoly mp_sub(const MPoly& a, const MPoly& b) { return mp_add(a, mp_neg(b)); }

MPoly mp_mul(const MPoly& a, const MPoly& b) {
    MPoly r = mp_zero(a.coeff, a.nvars);
    for (const auto& [ma, ca] : a.terms)
        for (const auto& [mb, cb] : b.terms) {
            Monomial m(a.nvars);
            for (int i = 0; i < a.nvars; ++i) m[i] = ma[i] + mb[i];
            mp_add_term(r, m, v_mul(ca, cb));
        }
    return r;
}

MPoly mp_scale(const Value& c, const MPoly& a) {
    MPoly r = mp_zero(a.coeff, a.nvars);
    for (const auto& [m, x] : a.terms) mp_add_term(r, m, v_mul(c, x));
    return r;
}

bool mp_is_zero(const MPoly& a) { return a.terms.empty(); }

bool mp_eq(const MPoly& a, const MPoly& b) {
    if (a.nvars != b.nvars || a.terms.size() != b.terms.size()) return false;
    auto ia = a.terms.begin();
    auto ib = b.terms.begin();
    for (; ia != a.terms.end(); ++ia, ++ib) {
        if (ia->first != ib->first || !v_eq(ia->second, ib->second)) return false;
    }
    return true;
}

int mp_deg_in(const MPoly& a, int var) {
    int d = -1;
    for (const auto& [m, c] : a.terms) d = std::max(d, m[var]);
    return d;
}

MPoly mp_coeff_in(const MPoly& a, int var, int d) {
    MPoly r = mp_zero(a.coeff, a.nvars);
    for (const auto& [m, c] : a.terms) {
        if (m[var] != d) continue;
        Monomial mm = m;
        mm[var] = 0;
        mp_add_term(r, mm, c);
    }
    return r;
}

MPoly mp_subst(const MPoly& a, int var, const MPoly& s) {
    // Horner in var
    int d = mp_deg_in(a, var);
    if (d <= 0 && mp_deg_in(a, var) < 1) {
        if (d < 0) return a;
    }
    MPoly r = mp_zero(a.coeff, a.nvars);
    for (int k = d; k >= 0; --k) {
        r = mp_mul(r, s);
        r = mp_add(r, mp_coeff_in(a, var, k));
    }
    return r;
}

MPoly mp_remap(const MPoly& a, int nvars, const std::vector<int>& map) {
    MPoly r = mp_zero(a.coeff, nvars);
    for (const auto& [m, c] : a.terms) {
        Monomial mm(nvars, 0);
        for (int i = 0; i < a.nvars; ++i)
            if (m[i] != 0) mm[map[i]] += m[i];
        mp_add_term(r, mm, c);
    }
    return r;
}

MPoly mp_from_up(const UPoly& a, FieldId coeff, int nvars, int var) {
    MPoly r = mp_zero(coeff, nvars);
    for (size_t i = 0; i < a.size(); ++i) {
        if (v_is_zero(a[i])) continue;
        Monomial m(nvars, 0);
        m[var] = static_cast<int>(i);
        mp_add_term(r, m, a[i]);
    }
    return r;
}

UPoly mp_to_up(const MPoly& a, int var) {
    UPoly r;
    int d = mp_deg_in(a, var);
    if (d < 0) return r;
    r.assign(d + 1, v_zero(a.coeff));
    for (const auto& [m, c] : a.terms) {
        for (int i = 0; i < a.nvars; ++i)
            if (i != var && m[i] != 0)
                throw DomainError("polynomial is not univariate in the requested variable");
        r[m[var]] = c;
    }
    return up_trim(std::move(r));
}

std::string mp_str(const MPoly& a, const std::vector<std::string>& vars) {
    if (a.terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // print highest monomials first
    for (auto it = a.terms.rbegin(); it != a.terms.rend(); ++it) {
        const auto& [m, c] = *it;
        if (!first) os << " + ";
        first = false;
        bool any_var = false;
        for (int x : m) any_var = any_var || x > 0;
        std::string cs = v_str(c);
        bool needs_parens =
            cs.find('+') != std::string::npos || cs.find(' ') != std::string::npos;
        if (!any_var || !v_is_one(c)) {
            os << (needs_parens ? "(" + cs + ")" : cs);
            if (any_var) os << "*";
        }
        bool firstv = true;
        for (size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            if (!firstv) os << "*";
            firstv = false;
            os << vars[i];
            if (m[i] > 1) os << "^" << m[i];
        }
    }
    return os.str();
}

void mp_check_monic(const MPoly& f, int var) {
    int d = mp_deg_in(f, var);
    if (d < 1) throw DomainError("triangular system entry has degree < 1 in its variable");
    MPoly lead = mp_coeff_in(f, var, d);
    Monomial zero(f.nvars, 0);
    if (lead.terms.size() != 1 || lead.terms.begin()->first != zero ||
        !v_is_one(lead.terms.begin()->second))
        throw DomainError("triangular system entry is not monic in its variable");
}

MPoly mp_normal_form(const MPoly& a, const std::vector<std::pair<int, MPoly>>& sys) {
    // Validate and sort stages by main variable, descending: reducing by a
    // later stage only introduces earlier variables.
    std::vector<std::pair<int, MPoly>> s = sys;
    for (auto& [var, f] : s) mp_check_monic(f, var);
    std::sort(s.begin(), s.end(),
              [](const auto& x, const auto& y) { return x.first > y.first; });
    MPoly r = a;
    for (const auto& [var, f] : s) {
        int df = mp_deg_in(f, var);
        int d = mp_deg_in(r, var);
        while (d >= df) {
            MPoly c = mp_coeff_in(r, var, d);
            MPoly shift = mp_zero(r.coeff, r.nvars);
            Monomial m(r.nvars, 0);
            m[var] = d - df;
            shift.terms[m] = v_one(r.coeff);
            r = mp_sub(r, mp_mul(mp_mul(c, shift), f));
            d = mp_deg_in(r, var);
        }
    }
    return r;
}

}  // namespace mwk
