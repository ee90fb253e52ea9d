#include "mwk/script.hpp"

#include <sstream>

#include "json.hpp"
#include "mwk/suite.hpp"

namespace mwk {

namespace {

// ---------------------------------------------------------------------------
// Tokenizer
// ---------------------------------------------------------------------------

enum class Tok { Ident, Int, Sym, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    int col = 0;
};

std::vector<Token> tokenize(const std::string& s, int lineno) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (c == ' ' || c == '\t' || c == '\r') {
            ++i;
            continue;
        }
        if (c == '#') break;
        int col = static_cast<int>(i) + 1;
        if (isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t j = i;
            while (j < s.size() && (isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
                ++j;
            out.push_back({Tok::Ident, s.substr(i, j - i), col});
            i = j;
        } else if (isdigit(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < s.size() && isdigit(static_cast<unsigned char>(s[j]))) ++j;
            out.push_back({Tok::Int, s.substr(i, j - i), col});
            i = j;
        } else if (std::string("=:,()[]{}<>+-*/^").find(c) != std::string::npos) {
            out.push_back({Tok::Sym, std::string(1, c), col});
            ++i;
        } else {
            throw ScriptError(std::string("unexpected character '") + c + "'", lineno, col);
        }
    }
    out.push_back({Tok::End, "", static_cast<int>(s.size()) + 1});
    return out;
}

}  // namespace

struct Interpreter::Binding {
    std::variant<FieldId, Extension, Value, MWElement, GWElement, KMSymbol, QuadraticDivisor> v;
};

namespace {

using Binding = Interpreter::Binding;

std::string render_binding(const Binding& b) {
    struct V {
        std::string operator()(FieldId f) const { return field(f).name; }
        std::string operator()(const Extension& E) const {
            return field(E.ext).name + " / " + field(E.base).name + " (degree " +
                   std::to_string(E.degree) + ")";
        }
        std::string operator()(const Value& a) const { return v_str(a); }
        std::string operator()(const MWElement& a) const { return mw_str(a); }
        std::string operator()(const GWElement& a) const { return gw_str(a); }
        std::string operator()(const KMSymbol& a) const { return km_str(a); }
        std::string operator()(const QuadraticDivisor& D) const { return divisor_json(D); }
    };
    return std::visit(V{}, b.v);
}

}  // namespace

struct ScriptParser {
    std::map<std::string, std::shared_ptr<Binding>>& env;
    std::vector<Token> toks;
    size_t pos = 0;
    int line = 1;

    const Token& peek(int ahead = 0) const {
        size_t i = pos + ahead;
        return i < toks.size() ? toks[i] : toks.back();
    }
    const Token& next() {
        const Token& t = peek();
        if (t.kind != Tok::End) ++pos;
        return t;
    }
    bool accept_sym(const std::string& s) {
        if (peek().kind == Tok::Sym && peek().text == s) {
            ++pos;
            return true;
        }
        return false;
    }
    bool accept_ident(const std::string& s) {
        if (peek().kind == Tok::Ident && peek().text == s) {
            ++pos;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw ScriptError(msg, line, peek().col);
    }
    void expect_sym(const std::string& s) {
        if (!accept_sym(s)) fail("expected '" + s + "'");
    }
    std::string expect_ident(const std::string& what) {
        if (peek().kind != Tok::Ident) fail("expected " + what);
        return next().text;
    }
    long expect_int() {
        bool neg = accept_sym("-");
        if (peek().kind != Tok::Int) fail("expected an integer");
        long n = std::stol(next().text);
        return neg ? -n : n;
    }
    void expect_end() {
        if (peek().kind != Tok::End) fail("unexpected trailing input");
    }

    std::shared_ptr<Binding> lookup(const std::string& name) {
        auto it = env.find(name);
        if (it == env.end()) fail("unbound name '" + name + "'");
        return it->second;
    }
    template <class T>
    T& as(const std::string& name, const char* what) {
        auto b = lookup(name);
        if (!std::holds_alternative<T>(b->v)) fail("'" + name + "' is not " + what);
        return std::get<T>(b->v);
    }
    FieldId field_of(const std::string& name) {
        auto b = lookup(name);
        if (auto* f = std::get_if<FieldId>(&b->v)) return *f;
        if (auto* E = std::get_if<Extension>(&b->v)) return E->ext;
        fail("'" + name + "' is not a field");
    }

    // ------------------------------------------------------------------
    // Field-value expressions (over a fixed field F)
    // ------------------------------------------------------------------

    Value vatom(FieldId F) {
        if (accept_sym("(")) {
            Value v = vexpr(F);
            expect_sym(")");
            return v;
        }
        if (peek().kind == Tok::Int) return v_int(F, Int(next().text));
        if (peek().kind == Tok::Ident) {
            std::string name = next().text;
            const FieldInfo& fi = field(F);
            if (fi.kind == FieldKind::FunctionField && name == fi.var)
                return rf_make(F, up_x(fi.base), {v_one(fi.base)});
            auto it = env.find(name);
            if (it != env.end())
                if (auto* v = std::get_if<Value>(&it->second->v)) return embed(*v, F);
            fail("unbound value '" + name + "'");
        }
        fail("expected a field element");
    }
    Value vfactor(FieldId F) {
        if (accept_sym("-")) return v_neg(vfactor(F));
        Value v = vatom(F);
        while (accept_sym("^")) v = v_pow(v, Int(expect_int()));
        return v;
    }
    Value vterm(FieldId F) {
        Value v = vfactor(F);
        while (true) {
            if (accept_sym("*")) v = v_mul(v, vfactor(F));
            else if (accept_sym("/")) v = v_div(v, vfactor(F));
            else return v;
        }
    }
    Value vexpr(FieldId F) {
        Value v = vterm(F);
        while (true) {
            if (accept_sym("+")) v = v_add(v, vterm(F));
            else if (peek().kind == Tok::Sym && peek().text == "-") {
                ++pos;
                v = v_sub(v, vterm(F));
            } else
                return v;
        }
    }

    // ------------------------------------------------------------------
    // Milnor-Witt expressions
    // ------------------------------------------------------------------

    MWElement mfactor(FieldId F) {
        if (accept_sym("(")) {
            MWElement a = mexpr(F, 0, false);
            expect_sym(")");
            return a;
        }
        if (accept_sym("[")) {
            Value u = vexpr(F);
            expect_sym("]");
            return mw_sym(u);
        }
        if (accept_sym("<")) {
            Value u = vexpr(F);
            expect_sym(">");
            return mw_gw_gen(u);
        }
        if (peek().kind == Tok::Int) return mw_int(F, Int(next().text));
        if (peek().kind == Tok::Ident) {
            std::string name = next().text;
            if (name == "eta") {
                int r = 1;
                if (accept_sym("^")) r = static_cast<int>(expect_int());
                return mw_word(F, 1, r, {});
            }
            if (name == "h") return mw_h(F);
            if (name == "eps") return mw_eps(F);
            if (name == "dt") return mw_int(F, 1);  // the canonical volume form
            auto it = env.find(name);
            if (it != env.end())
                if (auto* a = std::get_if<MWElement>(&it->second->v)) {
                    if (a->fid != F) fail("'" + name + "' lives over another field");
                    return *a;
                }
            fail("unbound element '" + name + "'");
        }
        fail("expected a Milnor-Witt factor");
    }
    MWElement mterm(FieldId F) {
        MWElement a = mfactor(F);
        while (accept_sym("*")) a = mw_mul(a, mfactor(F));
        return a;
    }
    MWElement mexpr(FieldId F, int n, bool check_degree) {
        bool neg = accept_sym("-");
        MWElement a = mterm(F);
        if (neg) a = mw_neg(a);
        while (true) {
            if (accept_sym("+")) a = mw_add(a, mterm(F));
            else if (peek().kind == Tok::Sym && peek().text == "-") {
                ++pos;
                a = mw_sub(a, mterm(F));
            } else
                break;
        }
        if (check_degree) {
            if (a.terms.empty()) return mw_zero(F, n);
            if (a.n != n)
                fail("degree mismatch: expression has degree " + std::to_string(a.n) +
                     ", declared " + std::to_string(n));
        }
        return a;
    }

    // ------------------------------------------------------------------
    // Grothendieck-Witt and Milnor expressions
    // ------------------------------------------------------------------

    GWElement gfactor(FieldId F) {
        if (accept_sym("(")) {
            GWElement a = gexpr(F);
            expect_sym(")");
            return a;
        }
        if (accept_sym("<")) {
            std::vector<Value> units = {vexpr(F)};
            while (accept_sym(",")) units.push_back(vexpr(F));
            expect_sym(">");
            return gw_diag(F, units);
        }
        if (peek().kind == Tok::Int) return gw_int(F, Int(next().text));
        if (peek().kind == Tok::Ident) {
            std::string name = next().text;
            if (name == "h") return gw_h(F);
            if (name == "eps") return gw_eps(F);
            auto it = env.find(name);
            if (it != env.end())
                if (auto* a = std::get_if<GWElement>(&it->second->v)) {
                    if (a->fid != F) fail("'" + name + "' lives over another field");
                    return *a;
                }
            fail("unbound form '" + name + "'");
        }
        fail("expected a form");
    }
    GWElement gexpr(FieldId F) {
        bool neg = accept_sym("-");
        GWElement a = gfactor(F);
        while (accept_sym("*")) a = gw_mul(a, gfactor(F));
        if (neg) a = gw_neg(a);
        while (true) {
            bool minus = false;
            if (accept_sym("+")) minus = false;
            else if (peek().kind == Tok::Sym && peek().text == "-") {
                ++pos;
                minus = true;
            } else
                return a;
            GWElement b = gfactor(F);
            while (accept_sym("*")) b = gw_mul(b, gfactor(F));
            a = minus ? gw_sub(a, b) : gw_add(a, b);
        }
    }

    KMSymbol kfactor(FieldId F) {
        if (accept_sym("(")) {
            KMSymbol a = kexpr(F, 0, false);
            expect_sym(")");
            return a;
        }
        if (accept_sym("{")) {
            std::vector<Value> units = {vexpr(F)};
            while (accept_sym(",")) units.push_back(vexpr(F));
            expect_sym("}");
            return km_word(F, units);
        }
        if (peek().kind == Tok::Int) return km_int(F, Int(next().text));
        if (peek().kind == Tok::Ident) {
            std::string name = next().text;
            auto it = env.find(name);
            if (it != env.end())
                if (auto* a = std::get_if<KMSymbol>(&it->second->v)) {
                    if (a->fid != F) fail("'" + name + "' lives over another field");
                    return *a;
                }
            fail("unbound symbol '" + name + "'");
        }
        fail("expected a Milnor symbol");
    }
    KMSymbol kexpr(FieldId F, int n, bool check_degree) {
        bool neg = accept_sym("-");
        KMSymbol a = kfactor(F);
        while (accept_sym("*")) a = km_mul(a, kfactor(F));
        if (neg) a = km_neg(a);
        while (true) {
            bool minus = false;
            if (accept_sym("+")) minus = false;
            else if (peek().kind == Tok::Sym && peek().text == "-") {
                ++pos;
                minus = true;
            } else
                break;
            KMSymbol b = kfactor(F);
            while (accept_sym("*")) b = km_mul(b, kfactor(F));
            a = minus ? km_sub(a, b) : km_add(a, b);
        }
        if (check_degree) {
            if (a.terms.empty()) return km_zero(F, n);
            if (a.n != n)
                fail("degree mismatch: expression has degree " + std::to_string(a.n) +
                     ", declared " + std::to_string(n));
        }
        return a;
    }

    // ------------------------------------------------------------------
    // Places and curves
    // ------------------------------------------------------------------

    Place parse_place(FieldId kt) {
        if (field(kt).kind != FieldKind::FunctionField)
            fail("places live on a rational function field");
        if (accept_ident("inf")) return place_infinity(kt);
        expect_sym("(");
        Value f = vexpr(kt);
        expect_sym(")");
        const RFData& d = rf_data(f);
        if (up_deg(d.den) != 0) fail("a place is given by a polynomial");
        return make_place(kt, up_monic(d.num));
    }

    Curve parse_curve() {
        std::string kind = expect_ident("a curve (P1, A1, or Spec)");
        expect_sym("(");
        FieldId kt = field_of(expect_ident("a field name"));
        if (kind == "P1") {
            int d = 0;
            if (accept_sym(",")) d = static_cast<int>(expect_int());
            expect_sym(")");
            return curve_P1(kt, d);
        }
        if (kind == "A1") {
            expect_sym(")");
            return curve_A1(kt);
        }
        if (kind == "Spec") {
            expect_sym(",");
            Place v = parse_place(kt);
            expect_sym(")");
            return curve_SpecOv(v);
        }
        fail("unknown curve '" + kind + "'");
    }

    // ------------------------------------------------------------------
    // Statements
    // ------------------------------------------------------------------

    void bind(const std::string& name, Binding b) {
        env[name] = std::make_shared<Binding>(std::move(b));
    }

    std::optional<std::string> accept_as() {
        if (accept_ident("as")) return expect_ident("a name to bind");
        return std::nullopt;
    }

    void decl_field(const std::string& name) {
        if (accept_ident("QQ") || accept_ident("Q")) {
            bind(name, {field_Q()});
            return;
        }
        if (accept_ident("GF")) {
            expect_sym("(");
            long q = expect_int();
            expect_sym(")");
            long p = 2;
            while (p * p <= q && q % p != 0) ++p;
            if (q % p != 0) p = q;
            int e = 0;
            long r = q;
            while (r > 1 && r % p == 0) {
                r /= p;
                ++e;
            }
            if (r != 1 || e == 0) fail("GF(q) needs a prime power q");
            bind(name, {field_GF(p, e)});
            return;
        }
        FieldId base = field_of(expect_ident("a base field"));
        expect_sym("(");
        std::string var = expect_ident("a variable name");
        expect_sym(")");
        bind(name, {field_ratfunc(base, var)});
    }

    MPoly parse_mpoly(FieldId base, const std::vector<std::string>& vars);

    void decl_ext(const std::string& name) {
        FieldId base = field_of(expect_ident("a base field"));
        expect_sym("[");
        std::vector<std::string> vars = {expect_ident("a generator name")};
        while (accept_sym(",")) vars.push_back(expect_ident("a generator name"));
        expect_sym("]");
        expect_sym("/");
        expect_sym("(");
        std::vector<MPoly> polys = {parse_mpoly(base, vars)};
        while (accept_sym(",")) polys.push_back(parse_mpoly(base, vars));
        expect_sym(")");
        Extension E = make_extension(base, polys, vars);
        for (size_t i = 0; i < vars.size(); ++i) bind(vars[i], {gen_value(E, static_cast<int>(i))});
        bind(name, {std::move(E)});
    }

    void decl_elem(const std::string& name) {
        expect_sym(":");
        if (!accept_ident("KMW")) fail("element type must be KMW(n, field)");
        expect_sym("(");
        int n = static_cast<int>(expect_int());
        expect_sym(",");
        FieldId F = field_of(expect_ident("a field name"));
        expect_sym(")");
        expect_sym("=");
        bind(name, {mexpr(F, n, true)});
    }

    void decl_gw(const std::string& name) {
        expect_sym(":");
        FieldId F = field_of(expect_ident("a field name"));
        expect_sym("=");
        bind(name, {gexpr(F)});
    }

    void decl_km(const std::string& name) {
        expect_sym(":");
        if (!accept_ident("KM")) fail("symbol type must be KM(n, field)");
        expect_sym("(");
        int n = static_cast<int>(expect_int());
        expect_sym(",");
        FieldId F = field_of(expect_ident("a field name"));
        expect_sym(")");
        expect_sym("=");
        bind(name, {kexpr(F, n, true)});
    }

    // ------------------------------------------------------------------
    // Commands
    // ------------------------------------------------------------------

    CommandResult cmd_eval() {
        std::string name = expect_ident("a bound name");
        CommandResult r;
        r.command = "eval";
        r.inputs.emplace_back("name", name);
        r.result = render_binding(*lookup(name));
        return r;
    }

    CommandResult cmd_equal() {
        std::string an = expect_ident("a bound name");
        std::string bn = expect_ident("a bound name");
        auto a = lookup(an);
        auto b = lookup(bn);
        CommandResult r;
        r.command = "equal";
        r.inputs.emplace_back("lhs", render_binding(*a));
        r.inputs.emplace_back("rhs", render_binding(*b));
        bool eq = false;
        if (auto* x = std::get_if<MWElement>(&a->v))
            eq = mw_equal(*x, as<MWElement>(bn, "a Milnor-Witt element"));
        else if (auto* x = std::get_if<GWElement>(&a->v))
            eq = gw_equal(*x, as<GWElement>(bn, "a form"));
        else if (auto* x = std::get_if<KMSymbol>(&a->v))
            eq = km_equal(*x, as<KMSymbol>(bn, "a Milnor symbol"));
        else if (auto* x = std::get_if<Value>(&a->v))
            eq = v_eq(*x, as<Value>(bn, "a field element"));
        else
            fail("equal expects elements, forms, or symbols");
        r.result = eq ? "true" : "false";
        return r;
    }

    CommandResult cmd_invariants() {
        std::string name = expect_ident("a bound name");
        auto b = lookup(name);
        CommandResult r;
        r.command = "invariants";
        r.inputs.emplace_back("name", name);
        r.result = render_binding(*b);
        if (auto* g = std::get_if<GWElement>(&b->v)) {
            GWInvariants inv = gw_invariants(*g);
            r.invariants.emplace_back("rank", inv.rank.get_str());
            r.invariants.emplace_back("disc", v_str(inv.disc));
            if (inv.signature)
                r.invariants.emplace_back("signature", "(" + inv.signature->first.get_str() +
                                                           ", " + inv.signature->second.get_str() +
                                                           ")");
            for (const auto& [p, s] : inv.hasse)
                r.invariants.emplace_back("hasse@" + p.get_str(), s > 0 ? "+1" : "-1");
            for (const auto& [label, sub] : inv.residue_profile)
                r.invariants.emplace_back("residue@" + label,
                                          "rank " + sub.rank.get_str() + ", disc " +
                                              v_str(sub.disc));
        } else if (auto* a = std::get_if<MWElement>(&b->v)) {
            NormalizedPair p = mw_normalize(*a);
            r.invariants.emplace_back("wittPart", gw_str(p.wittPart));
            r.invariants.emplace_back("milnorPart", km_str(p.milnorPart));
        } else {
            fail("invariants expects a form or a Milnor-Witt element");
        }
        return r;
    }

    CommandResult cmd_residue(bool specialize) {
        std::string name = expect_ident("a bound name");
        auto b = lookup(name);
        if (!accept_ident("at")) fail("expected 'at'");
        CommandResult r;
        r.command = specialize ? "specialize" : "residue";
        r.inputs.emplace_back("name", name);
        Binding out;
        if (auto* a = std::get_if<MWElement>(&b->v)) {
            Place v = parse_place(a->fid);
            r.inputs.emplace_back("place", v.label);
            out.v = specialize ? mw_specialize(*a, v) : mw_residue(*a, v);
        } else if (auto* a = std::get_if<KMSymbol>(&b->v)) {
            Place v = parse_place(a->fid);
            r.inputs.emplace_back("place", v.label);
            out.v = specialize ? km_specialize(*a, v) : km_residue(*a, v);
        } else if (auto* a = std::get_if<GWElement>(&b->v)) {
            Place v = parse_place(a->fid);
            r.inputs.emplace_back("place", v.label);
            out.v = specialize ? gw_specialize(*a, v) : gw_second_residue(*a, v);
        } else {
            fail("residue/specialize expects an element, form, or symbol");
        }
        r.result = render_binding(out);
        if (auto tgt = accept_as()) bind(*tgt, std::move(out));
        return r;
    }

    CommandResult cmd_transfer() {
        std::string name = expect_ident("a bound name");
        auto b = lookup(name);
        if (!accept_ident("from")) fail("expected 'from'");
        Extension& E = as<Extension>(expect_ident("an extension name"), "an extension");
        bool with_w = false;
        if (accept_ident("with")) {
            if (expect_ident("a twist generator") != "w") fail("only the canonical generator w");
            with_w = true;
        }
        CommandResult r;
        r.command = "transfer";
        r.inputs.emplace_back("name", name);
        r.inputs.emplace_back("extension", field(E.ext).name + " / " + field(E.base).name);
        Binding out;
        if (auto* a = std::get_if<MWElement>(&b->v)) {
            if (a->fid != E.ext) fail("'" + name + "' does not live over the extension");
            out.v = mw_transfer(E, with_w ? mw_set_twist(*a, E.w_label) : *a);
        } else if (auto* a = std::get_if<GWElement>(&b->v)) {
            if (a->fid != E.ext) fail("'" + name + "' does not live over the extension");
            GWElement g = *a;
            if (with_w) g.twist = E.w_label;
            out.v = gw_transfer(E, g);
        } else {
            fail("transfer expects a Milnor-Witt element or a form");
        }
        r.result = render_binding(out);
        if (auto tgt = accept_as()) bind(*tgt, std::move(out));
        return r;
    }

    CommandResult cmd_reciprocity() {
        // reciprocity NAME | reciprocity EXPR over FIELD
        CommandResult r;
        r.command = "reciprocity";
        MWElement sigma;
        if (peek().kind == Tok::Ident && env.count(peek().text) &&
            std::holds_alternative<MWElement>(env[peek().text]->v) && peek(1).kind == Tok::End) {
            std::string name = next().text;
            sigma = std::get<MWElement>(env[name]->v);
            r.inputs.emplace_back("element", mw_str(sigma));
        } else {
            // find the top-level 'over'
            size_t save = pos, depth = 0, over = 0;
            bool found = false;
            for (size_t i = pos; i < toks.size(); ++i) {
                const Token& t = toks[i];
                if (t.kind == Tok::Sym && (t.text == "(" || t.text == "[" || t.text == "{"))
                    ++depth;
                if (t.kind == Tok::Sym && (t.text == ")" || t.text == "]" || t.text == "}"))
                    --depth;
                if (depth == 0 && t.kind == Tok::Ident && t.text == "over") {
                    over = i;
                    found = true;
                    break;
                }
            }
            if (!found) fail("expected 'over <field>'");
            pos = over + 1;
            FieldId k;
            if (accept_ident("GF")) {
                expect_sym("(");
                long q = expect_int();
                expect_sym(")");
                long p = 2;
                while (p * p <= q && q % p != 0) ++p;
                if (q % p != 0) p = q;
                int e = 0;
                long rr = q;
                while (rr > 1 && rr % p == 0) {
                    rr /= p;
                    ++e;
                }
                if (rr != 1 || e == 0) fail("GF(q) needs a prime power q");
                k = field_GF(p, e);
            } else if (accept_ident("QQ") || accept_ident("Q")) {
                k = field_Q();
            } else {
                k = field_of(expect_ident("a field name"));
            }
            size_t after = pos;
            FieldId kt = field(k).kind == FieldKind::FunctionField ? k : field_ratfunc(k, "t");
            pos = save;
            // parse the expression in a view ending at 'over'
            std::vector<Token> slice(toks.begin() + save, toks.begin() + over);
            slice.push_back({Tok::End, "", toks[over].col});
            std::swap(toks, slice);
            pos = 0;
            sigma = mexpr(kt, 0, false);
            expect_end();
            std::swap(toks, slice);
            pos = after;
            r.inputs.emplace_back("element", mw_str(sigma) + " (x) dt");
            r.inputs.emplace_back("field", field(kt).name);
        }
        ReciprocityReport rep = reciprocity_check(sigma);
        r.result = rep.ok ? "0" : mw_str(rep.sum);
        r.invariants.emplace_back("ok", rep.ok ? "true" : "false");
        r.invariants.emplace_back("sum", mw_str(rep.sum));
        for (const auto& pc : rep.perPlace) r.perPlace.emplace_back(pc.label, mw_str(pc.transferred));
        return r;
    }

    CommandResult cmd_tdiv() {
        std::string name = expect_ident("a bound element");
        MWElement& a = as<MWElement>(name, "a Milnor-Witt element");
        if (!accept_ident("on")) fail("expected 'on'");
        Curve C = parse_curve();
        CommandResult r;
        r.command = "tdiv";
        r.inputs.emplace_back("element", mw_str(a));
        QuadraticDivisor D = tdiv(a, C);
        r.result = divisor_json(D);
        if (auto tgt = accept_as()) bind(*tgt, {std::move(D)});
        return r;
    }

    CommandResult cmd_tdeg() {
        std::string name = expect_ident("a bound divisor");
        QuadraticDivisor& D = as<QuadraticDivisor>(name, "a divisor");
        CommandResult r;
        r.command = "tdeg";
        r.inputs.emplace_back("divisor", name);
        PB1Class cls = pb1_class(D);
        if (!cls.even) fail("tdeg needs an even line-bundle degree");
        r.result = mw_str(cls.mw);
        if (auto tgt = accept_as()) bind(*tgt, {cls.mw});
        return r;
    }

    CommandResult cmd_pb1() {
        std::string name = expect_ident("a bound divisor");
        QuadraticDivisor D = as<QuadraticDivisor>(name, "a divisor");
        if (accept_ident("twist")) {
            if (expect_ident("a line bundle O(d)") != "O") fail("expected O(d)");
            expect_sym("(");
            D.curve.bundle_degree = static_cast<int>(expect_int());
            expect_sym(")");
            if (D.curve.kind != CurveKind::P1) fail("line bundles twist P1 divisors");
        }
        CommandResult r;
        r.command = "pb1";
        r.inputs.emplace_back("divisor", name);
        r.inputs.emplace_back("bundle", "O(" + std::to_string(D.curve.bundle_degree) + ")");
        PB1Class cls = pb1_class(D);
        r.invariants.emplace_back("parity", cls.even ? "even" : "odd");
        if (cls.even) {
            r.result = mw_str(cls.mw);
            if (auto tgt = accept_as()) bind(*tgt, {cls.mw});
        } else if (D.q == 0) {
            r.result = cls.degree.get_str();
        } else {
            r.result = km_str(cls.km);
            if (auto tgt = accept_as()) bind(*tgt, {cls.km});
        }
        return r;
    }

    CommandResult cmd_rules_suite() {
        std::string filter = "rules";
        if (peek().kind == Tok::Ident) {
            filter = next().text;
            // criterion names may contain hyphens (e.g. gw-tables)
            while (peek().kind == Tok::Sym && peek().text == "-" &&
                   peek(1).kind == Tok::Ident) {
                ++pos;
                filter += "-" + next().text;
            }
        }
        CommandResult r;
        r.command = "rules-suite";
        r.inputs.emplace_back("filter", filter);
        bool all = true;
        for (const SuiteResult& s : run_suite(filter, /*quick=*/true)) {
            all = all && s.pass;
            r.invariants.emplace_back(s.name, s.pass ? "PASS" : "FAIL: " + s.detail);
        }
        r.result = all ? "pass" : "fail";
        return r;
    }

    std::optional<CommandResult> statement() {
        if (peek().kind == Tok::End) return std::nullopt;
        std::string head = expect_ident("a statement");
        if (head == "field" || head == "ext" || head == "elem" || head == "gw" || head == "km") {
            std::string name = expect_ident("a name");
            if (head == "field") {
                expect_sym("=");
                decl_field(name);
            } else if (head == "ext") {
                expect_sym("=");
                decl_ext(name);
            } else if (head == "elem") {
                decl_elem(name);
            } else if (head == "gw") {
                decl_gw(name);
            } else {
                decl_km(name);
            }
            expect_end();
            return std::nullopt;
        }
        CommandResult r;
        if (head == "eval") r = cmd_eval();
        else if (head == "equal") r = cmd_equal();
        else if (head == "invariants") r = cmd_invariants();
        else if (head == "residue") r = cmd_residue(false);
        else if (head == "specialize") r = cmd_residue(true);
        else if (head == "transfer") r = cmd_transfer();
        else if (head == "reciprocity") r = cmd_reciprocity();
        else if (head == "tdiv") r = cmd_tdiv();
        else if (head == "tdeg") r = cmd_tdeg();
        else if (head == "pb1") r = cmd_pb1();
        else if (head == "rules") {
            expect_sym("-");
            if (expect_ident("suite") != "suite") fail("expected 'rules-suite'");
            r = cmd_rules_suite();
        } else {
            fail("unknown statement '" + head + "'");
        }
        expect_end();
        return r;
    }
};

MPoly ScriptParser::parse_mpoly(FieldId base, const std::vector<std::string>& vars) {
    // Polynomial expression in the generator variables over the base field.
    int nv = static_cast<int>(vars.size());
    struct P {
        ScriptParser& sp;
        FieldId base;
        const std::vector<std::string>& vars;
        int nv;
        MPoly atom() {
            if (sp.accept_sym("(")) {
                MPoly p = expr();
                sp.expect_sym(")");
                return p;
            }
            if (sp.peek().kind == Tok::Int)
                return mp_const(base, nv, v_int(base, Int(sp.next().text)));
            if (sp.peek().kind == Tok::Ident) {
                std::string name = sp.next().text;
                for (int i = 0; i < nv; ++i)
                    if (vars[i] == name) return mp_var(base, nv, i);
                auto it = sp.env.find(name);
                if (it != sp.env.end())
                    if (auto* v = std::get_if<Value>(&it->second->v))
                        return mp_const(base, nv, embed(*v, base));
                sp.fail("unbound coefficient '" + name + "'");
            }
            sp.fail("expected a polynomial atom");
        }
        MPoly factor() {
            if (sp.accept_sym("-")) return mp_neg(factor());
            MPoly p = atom();
            while (sp.accept_sym("^")) {
                long e = sp.expect_int();
                MPoly q = mp_const(base, nv, v_one(base));
                for (long i = 0; i < e; ++i) q = mp_mul(q, p);
                p = q;
            }
            return p;
        }
        MPoly term() {
            MPoly p = factor();
            while (sp.accept_sym("*")) p = mp_mul(p, factor());
            return p;
        }
        MPoly expr() {
            MPoly p = term();
            while (true) {
                if (sp.accept_sym("+")) p = mp_add(p, term());
                else if (sp.peek().kind == Tok::Sym && sp.peek().text == "-") {
                    ++sp.pos;
                    p = mp_sub(p, term());
                } else
                    return p;
            }
        }
    };
    return P{*this, base, vars, nv}.expr();
}

std::optional<CommandResult> Interpreter::execute_line(const std::string& text, int lineno) {
    ScriptParser p{env_, tokenize(text, lineno), 0, lineno};
    return p.statement();
}

RunOutput run_script(const std::string& text) {
    RunOutput out;
    Interpreter interp;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    auto worse = [&](ErrorKind k) {
        if (k == ErrorKind::Capability || out.error == ErrorKind::None) out.error = k;
    };
    while (std::getline(is, line)) {
        ++lineno;
        try {
            if (auto r = interp.execute_line(line, lineno)) out.results.push_back(std::move(*r));
        } catch (const ScriptError& e) {
            out.results.push_back({"error", {{"line", std::to_string(lineno)}},
                                   e.what(), {}, {}, ErrorKind::Syntax});
            worse(ErrorKind::Syntax);
            break;
        } catch (const CapabilityError& e) {
            out.results.push_back({"error", {{"line", std::to_string(lineno)}},
                                   std::string("capability: ") + e.what(), {}, {},
                                   ErrorKind::Capability});
            worse(ErrorKind::Capability);
            break;
        } catch (const DomainError& e) {
            out.results.push_back({"error", {{"line", std::to_string(lineno)}},
                                   std::string("domain: ") + e.what(), {}, {},
                                   ErrorKind::Domain});
            worse(ErrorKind::Domain);
            break;
        }
    }
    return out;
}

std::string render_text(const RunOutput& out) {
    std::ostringstream os;
    for (const CommandResult& r : out.results) {
        os << r.command;
        if (!r.inputs.empty()) {
            os << "(";
            for (size_t i = 0; i < r.inputs.size(); ++i)
                os << (i ? "; " : "") << r.inputs[i].first << " = " << r.inputs[i].second;
            os << ")";
        }
        os << " -> " << r.result << "\n";
        for (const auto& [k, v] : r.invariants) os << "    " << k << ": " << v << "\n";
        for (const auto& [k, v] : r.perPlace) os << "    @" << k << ": " << v << "\n";
    }
    return os.str();
}

std::string render_json(const RunOutput& out) {
    nlohmann::json results = nlohmann::json::array();
    for (const CommandResult& r : out.results) {
        nlohmann::json j;
        j["command"] = r.command;
        nlohmann::json in = nlohmann::json::object();
        for (const auto& [k, v] : r.inputs) in[k] = v;
        j["inputs"] = in;
        j["result"] = r.result;
        if (!r.invariants.empty()) {
            nlohmann::json inv = nlohmann::json::object();
            for (const auto& [k, v] : r.invariants) inv[k] = v;
            j["invariants"] = inv;
        }
        if (!r.perPlace.empty()) {
            nlohmann::json pp = nlohmann::json::array();
            for (const auto& [k, v] : r.perPlace) pp.push_back({{"place", k}, {"value", v}});
            j["perPlace"] = pp;
        }
        results.push_back(j);
    }
    const char* err = out.error == ErrorKind::None        ? "none"
                      : out.error == ErrorKind::Domain    ? "domain"
                      : out.error == ErrorKind::Capability ? "capability"
                                                           : "syntax";
    nlohmann::json top{{"results", results}, {"error", err}};
    return top.dump(2);
}

int exit_code(const RunOutput& out) {
    switch (out.error) {
        case ErrorKind::None: return 0;
        case ErrorKind::Capability: return 2;
        default: return 1;
    }
}

}  // namespace mwk
