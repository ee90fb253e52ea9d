#pragma once

#include "mwk/algebra.hpp"
#include "mwk/extension.hpp"
#include "mwk/place.hpp"

/**
 * Milnor K-theory symbol calculus: Z-linear combinations of words
 * {u_1,...,u_n}, residues at places of k(t) (and at primes of Q),
 * specializations, decidable equality, and the transfers needed by the
 * glued Milnor-Witt transfer.
 *
 * Equality support: degree 0 and 1 over any field with exact arithmetic;
 * finite fields at degree >= 2 (everything is 0); Q at degree 2 (tame
 * symbols at odd primes plus the 2-adic Hilbert symbol); k(t) over a
 * decidable k at any degree (residues at all support places plus a
 * specialization). Anything else raises CapabilityError.
 */
namespace mwk {

struct KMSymbol {
    FieldId fid = -1;
    int n = 0;  // degree; words have uniform length n (empty word at n = 0)
    std::vector<std::pair<Int, std::vector<Value>>> terms;
};

KMSymbol km_zero(FieldId fid, int n);
/** Degree-0 element (an integer). */
KMSymbol km_int(FieldId fid, const Int& c);
/** The word {u_1,...,u_n}; DomainError on a zero entry. */
KMSymbol km_word(FieldId fid, const std::vector<Value>& units);

KMSymbol km_add(const KMSymbol& a, const KMSymbol& b);
KMSymbol km_neg(const KMSymbol& a);
KMSymbol km_sub(const KMSymbol& a, const KMSymbol& b);
KMSymbol km_scale(const Int& c, const KMSymbol& a);
/** Word concatenation, extended bilinearly; degrees add. */
KMSymbol km_mul(const KMSymbol& a, const KMSymbol& b);

/** The degree-0 value of a degree-0 symbol. */
Int km_constant(const KMSymbol& a);

bool km_equal(const KMSymbol& a, const KMSymbol& b);
bool km_is_zero(const KMSymbol& a);

/** Residue at a place of k(t): degree n-1 symbol over kappa_v (n >= 1). */
KMSymbol km_residue(const KMSymbol& a, const Place& v);
/** Tame residue of a symbol over Q at the prime p; lands over GF(p). */
KMSymbol km_residue_Q(const KMSymbol& a, const Int& p);
/** Specialization s_pi(a) = residue of {pi} * a; a ring homomorphism. */
KMSymbol km_specialize(const KMSymbol& a, const Place& v);

/**
 * Transfer along a finite extension: degree 0 multiplies by [E:k];
 * degree 1 takes the norm (determinant of multiplication); degree >= 2
 * returns 0 over finite fields and raises CapabilityError otherwise.
 */
KMSymbol km_transfer(const KMSymbol& a, const Extension& E);

/** Field norm N_{E/k}(u) = det of multiplication-by-u. */
Value ext_norm(const Extension& E, const Value& u);

std::string km_str(const KMSymbol& a);

}  // namespace mwk
