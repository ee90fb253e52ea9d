#pragma once

#include <map>

#include "mwk/algebra.hpp"
#include "mwk/place.hpp"

/**
 * Grothendieck-Witt and Witt ring arithmetic: Z-linear combinations of
 * one-dimensional forms <u>, canonical invariants (rank, discriminant,
 * signature, Hasse symbols), decidable equality over supported fields,
 * the fundamental-ideal filtration, and Gram-matrix classification.
 *
 * Decidable equality: GF(q) odd (rank + discriminant), GF(q) even (rank),
 * Q (rank + signature + discriminant + Hasse symbols at the primes dividing
 * 2 times the entries), and k(t) for decidable k (rank + second residues at
 * all support places + specialization at a good place). Other fields raise
 * CapabilityError.
 */
namespace mwk {

struct GWElement {
    FieldId fid = -1;
    /** n_i * <u_i>, collected over representatives modulo squares. */
    std::vector<std::pair<Int, Value>> terms;
    /** Twist-line label; "" means untwisted. */
    std::string twist;
};

GWElement gw_zero(FieldId fid);
/** <u>; DomainError on u = 0. */
GWElement gw_gen(const Value& u);
GWElement gw_diag(FieldId fid, const std::vector<Value>& units);
/** n * <1>. */
GWElement gw_int(FieldId fid, const Int& n);
/** h = <1,-1>. */
GWElement gw_h(FieldId fid);
/** eps = -<-1>. */
GWElement gw_eps(FieldId fid);
/** <<u>> = 1 - <u> (so its discriminant class at n = 1 is u). */
GWElement gw_pfister(const Value& u);
/** n_eps: m*h for n = 2m >= 0, m*h + 1 for n = 2m+1, eps*(-n)_eps for n < 0. */
GWElement n_epsilon(FieldId fid, const Int& n);

GWElement gw_add(const GWElement& a, const GWElement& b);
GWElement gw_sub(const GWElement& a, const GWElement& b);
GWElement gw_neg(const GWElement& a);
GWElement gw_mul(const GWElement& a, const GWElement& b);
GWElement gw_scale(const Int& n, const GWElement& a);
/** Multiplies by <u> (fixing the twist). */
GWElement gw_twist_unit(const Value& u, const GWElement& a);

Int gw_rank(const GWElement& a);
/** det = prod u_i^{n_i} as a square class. */
Value gw_det(const GWElement& a);
/** disc = (-1)^{r(r-1)/2} * det. */
Value gw_disc(const GWElement& a);
/** Signature over Q: (sum over positive entries, sum over negative entries). */
std::pair<Int, Int> gw_signature(const GWElement& a);

/** Hilbert symbol (a,b)_p over Q, p prime (p = 2 allowed); returns +-1. */
int hilbert_symbol(const Rat& a, const Rat& b, const Int& p);
/** Hasse symbol s_p = prod_{i<j} (a_i,a_j)_p of an actual diagonal form. */
int hasse_symbol(const std::vector<Rat>& diag, const Int& p);
/** Primes dividing 2 * prod(entries) of a (the only relevant local places). */
std::vector<Int> relevant_primes(const GWElement& a);

struct GWInvariants {
    Int rank;
    Value disc;
    std::optional<std::pair<Int, Int>> signature;  // Q only
    std::map<Int, int> hasse;                      // Q only; prime -> +-1
    /** Function fields: (place label, invariants of the second residue). */
    std::vector<std::pair<std::string, GWInvariants>> residue_profile;
};

GWInvariants gw_invariants(const GWElement& a);

bool gw_equal(const GWElement& a, const GWElement& b);
/** Equality in W(K) = GW(K)/(h). */
bool witt_equal(const GWElement& a, const GWElement& b);

/**
 * Second residue at a finite place: sum over odd-valuation entries of
 * <reduce(u * pi^{-v(u)})>, a Witt class over kappa_v (depends on pi only
 * up to Witt-irrelevant units; computed with the canonical uniformizer).
 */
GWElement gw_second_residue(const GWElement& a, const Place& v);
/** Specialization <u> -> <u bar> at a place where all entries are units. */
GWElement gw_specialize(const GWElement& a, const Place& v);

/** Membership a (mod h) in I^n(K); CapabilityError outside the matrix. */
bool gw_in_In(const GWElement& a, int n);

struct FundamentalImage {
    bool in_In = false;
    /** Canonical description of the class in gI^n = I^n/I^{n+1}. */
    std::string image;
    bool image_zero = false;
};

/** Image of a in gI^n; DomainError if a is not in I^n. */
FundamentalImage fundamental_image(const GWElement& a, int n);

/** Symmetric invertible matrix over a field; DomainError if degenerate. */
using Gram = std::vector<std::vector<Value>>;
GWElement gram_to_gw(const Gram& g, FieldId fid);

std::string gw_str(const GWElement& a);

}  // namespace mwk
