#pragma once

#include <gmpxx.h>

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

/**
 * Arithmetic kernel: exact values over a registry of fields.
 *
 * Supported fields:
 *   - Q                          (arbitrary-precision rationals)
 *   - GF(p^e)                    (prime fields and their extensions by a
 *                                 deterministically chosen defining polynomial)
 *   - k(t)                       (rational function fields over a supported k)
 *   - k[t_1..t_n]/(f_1..f_n)     (finite extensions given by a triangular
 *                                 system, each f_i monic in t_i)
 *
 * All values are immutable after construction and normalized eagerly
 * (rationals in lowest terms, rational functions with monic denominator and
 * coprime numerator/denominator, extension elements reduced against the
 * triangular system), so structural equality is semantic equality.
 */
namespace mwk {

using Int = mpz_class;
using Rat = mpq_class;
using FieldId = int;

/** Error in the mathematical domain of an operation (bad input). */
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& m) : std::runtime_error(m) {}
};

/** Input is legal but outside the implemented support matrix. */
struct CapabilityError : std::runtime_error {
    explicit CapabilityError(const std::string& m) : std::runtime_error(m) {}
};

enum class FieldKind { Rationals, Finite, FunctionField, Extension };

struct RFData;
struct ExtData;

/** Element of GF(p^e): coefficients of the generator powers, mod p. */
struct FFData {
    std::vector<long> c;  // length e, c[i] is the coefficient of g^i
    bool operator==(const FFData& o) const { return c == o.c; }
};

/** An exact element of a registered field. */
struct Value {
    FieldId fid = -1;
    std::variant<std::monostate, Rat, FFData, std::shared_ptr<const RFData>,
                 std::shared_ptr<const ExtData>>
        rep;
};

/** Dense univariate polynomial, coefficient of t^i at index i; empty = 0. */
using UPoly = std::vector<Value>;

/** Rational function: num/den over the base field, den monic, gcd = 1. */
struct RFData {
    UPoly num, den;
};

/** Extension element: coordinates over the monomial basis, base-field entries. */
struct ExtData {
    std::vector<Value> c;  // length = extension degree
};

using Monomial = std::vector<int>;

/** Sparse multivariate polynomial with coefficients in a registered field. */
struct MPoly {
    FieldId coeff = -1;
    int nvars = 0;
    std::map<Monomial, Value> terms;  // no zero coefficients stored
};

/** Registry record for one field. */
struct FieldInfo {
    FieldKind kind = FieldKind::Rationals;
    std::string name;

    // Finite
    long p = 0;
    int e = 1;
    std::vector<long> defpoly;  // monic of degree e over F_p (only if e > 1)

    // FunctionField / Extension
    FieldId base = -1;
    std::string var;  // FunctionField variable name

    // Extension (triangular presentation over `base`)
    std::vector<std::string> gens;
    std::vector<MPoly> minpolys;  // f_i in variables t_0..t_i, over base
    std::vector<int> stage_deg;
    int degree = 1;
    std::vector<bool> separable;

    // Optional registered isomorphism onto another field (used to transport
    // equality decisions, e.g. F_p(s)[s^{1/p}] onto F_p(x)).
    FieldId iso_target = -1;
    std::vector<Value> iso_gen_images;
    std::optional<Value> iso_base_var_image;
};

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

FieldId field_Q();
/** GF(p^e); the defining polynomial defaults to the lowest-lex monic irreducible. */
FieldId field_GF(long p, int e = 1, const std::vector<long>* defpoly = nullptr);
FieldId field_ratfunc(FieldId base, const std::string& var);
/** Low-level registration; extension construction/validation lives in extension.hpp. */
FieldId register_field(FieldInfo info);
const FieldInfo& field(FieldId fid);
/** Registers an isomorphism used to transport square/equality decisions. */
void register_isomorphism(FieldId src, FieldId target, std::vector<Value> gen_images,
                          std::optional<Value> base_var_image);

Int characteristic(FieldId fid);
/** Number of elements, when finite (GF and extension towers over GF). */
std::optional<Int> field_size(FieldId fid);

// ---------------------------------------------------------------------------
// Value arithmetic
// ---------------------------------------------------------------------------

Value v_zero(FieldId fid);
Value v_one(FieldId fid);
Value v_int(FieldId fid, const Int& n);
Value v_int(FieldId fid, long n);
Value v_rat(FieldId fid, const Rat& q);

Value v_add(const Value& a, const Value& b);
Value v_sub(const Value& a, const Value& b);
Value v_neg(const Value& a);
Value v_mul(const Value& a, const Value& b);
Value v_inv(const Value& a);
Value v_div(const Value& a, const Value& b);
Value v_pow(const Value& a, const Int& n);

bool v_is_zero(const Value& a);
bool v_is_one(const Value& a);
bool v_eq(const Value& a, const Value& b);

/** Embeds a into the target field (a's field must be an iterated base of it). */
Value embed(const Value& a, FieldId target);

/** Canonical display form ("2*t+1", "x1*x0", ...). */
std::string v_str(const Value& a);

/** Builds a function-field element from numerator/denominator over the base. */
Value rf_make(FieldId kt, UPoly num, UPoly den);
/** Numerator/denominator (canonical) of a function-field element. */
const RFData& rf_data(const Value& a);
/** Builds an extension element from monomial-basis coordinates. */
Value ext_make(FieldId ext, std::vector<Value> coords);
const ExtData& ext_data(const Value& a);
/** Coordinates of a relative to the monomial basis of its extension field. */
std::vector<Value> ext_coords(const Value& a);

/** Monomial basis exponents of an extension, in coordinate order. */
std::vector<Monomial> ext_basis(FieldId ext);

/** Applies the registered isomorphism of a's field, if any. */
std::optional<Value> iso_transport(const Value& a);

// ---------------------------------------------------------------------------
// Univariate polynomial helpers (coefficients in one field)
// ---------------------------------------------------------------------------

int up_deg(const UPoly& p);  // -1 for 0
UPoly up_trim(UPoly p);
UPoly up_zero();
UPoly up_const(const Value& c);
UPoly up_x(FieldId fid);  // the variable t
UPoly up_add(const UPoly& a, const UPoly& b);
UPoly up_sub(const UPoly& a, const UPoly& b);
UPoly up_neg(const UPoly& a);
UPoly up_mul(const UPoly& a, const UPoly& b);
UPoly up_scale(const Value& c, const UPoly& a);
/** Quotient and remainder; requires invertible leading coefficient of b. */
std::pair<UPoly, UPoly> up_divmod(const UPoly& a, const UPoly& b);
UPoly up_gcd(const UPoly& a, const UPoly& b);  // monic gcd
UPoly up_derivative(const UPoly& a);
Value up_eval(const UPoly& a, const Value& x);
bool up_eq(const UPoly& a, const UPoly& b);
UPoly up_monic(const UPoly& a);
Value up_lc(const UPoly& a);
std::string up_str(const UPoly& a, const std::string& var);

// ---------------------------------------------------------------------------
// Multivariate polynomial helpers
// ---------------------------------------------------------------------------

MPoly mp_zero(FieldId coeff, int nvars);
MPoly mp_const(FieldId coeff, int nvars, const Value& c);
MPoly mp_var(FieldId coeff, int nvars, int i);
void mp_add_term(MPoly& p, const Monomial& m, const Value& c);
MPoly mp_add(const MPoly& a, const MPoly& b);
MPoly mp_sub(const MPoly& a, const MPoly& b);
MPoly mp_neg(const MPoly& a);
MPoly mp_mul(const MPoly& a, const MPoly& b);
MPoly mp_scale(const Value& c, const MPoly& a);
bool mp_is_zero(const MPoly& a);
bool mp_eq(const MPoly& a, const MPoly& b);
int mp_deg_in(const MPoly& a, int var);
/** Coefficient of var^d, as an MPoly in the same variable set (var-degree 0). */
MPoly mp_coeff_in(const MPoly& a, int var, int d);
/** Substitutes polynomial s for variable var. */
MPoly mp_subst(const MPoly& a, int var, const MPoly& s);
/** Widens the variable set; old variable i becomes variable map[i]. */
MPoly mp_remap(const MPoly& a, int nvars, const std::vector<int>& map);
MPoly mp_from_up(const UPoly& a, FieldId coeff, int nvars, int var);
/** Conversion to univariate in `var`; fails if other variables occur. */
UPoly mp_to_up(const MPoly& a, int var);
std::string mp_str(const MPoly& a, const std::vector<std::string>& vars);

/**
 * Reduction modulo a triangular system: each entry is (main variable, f) with
 * f monic in its main variable. Reduces the degree in every main variable
 * below deg(f); a ring homomorphism onto the reduced representatives.
 */
MPoly mp_normal_form(const MPoly& a, const std::vector<std::pair<int, MPoly>>& sys);

/** Validates that f is monic in its main variable; throws DomainError if not. */
void mp_check_monic(const MPoly& f, int var);

}  // namespace mwk
