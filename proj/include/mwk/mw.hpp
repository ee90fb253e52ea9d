#pragma once

#include "mwk/gw.hpp"
#include "mwk/km.hpp"
#include "mwk/place.hpp"

/**
 * Milnor-Witt K-theory: Z-linear combinations of words eta^r [u_1]...[u_m]
 * of homogeneous degree n = m - r, with products, the pair normal form
 * (Witt part via mu', Milnor part via the forgetful map), twists as labels
 * with units folded into the symbol, residues via the Theta_pi pair algebra
 * (xi^2 = eps [-1] xi, xi eps-commuting past odd degrees), and
 * specializations.
 *
 * Degree <= 0 round-trips through GW/W: <u> = 1 + eta [u]; equality in
 * degree 0 is GW-equality of the mu'-image, in negative degrees
 * Witt-equality, and in positive degrees the pair (Witt part, Milnor part)
 * decides.
 */
namespace mwk {

struct MWWord {
    Int c;
    int r = 0;              // eta exponent
    std::vector<Value> u;   // unit entries
};

struct MWElement {
    FieldId fid = -1;
    int n = 0;  // homogeneous degree m - r
    std::vector<MWWord> terms;
    std::string twist;  // "" = untwisted; units are always folded into terms
};

MWElement mw_zero(FieldId fid, int n);
/** c * eta^r [u_1]...[u_m]. */
MWElement mw_word(FieldId fid, const Int& c, int r, const std::vector<Value>& units);
/** [u]. */
MWElement mw_sym(const Value& u);
MWElement mw_eta(FieldId fid);
/** Degree-0 integer c (c copies of the empty word). */
MWElement mw_int(FieldId fid, const Int& c);
/** h = 2 + eta[-1]. */
MWElement mw_h(FieldId fid);
/** <u> = 1 + eta[u]. */
MWElement mw_gw_gen(const Value& u);
/** eps = -<-1>. */
MWElement mw_eps(FieldId fid);
/** n_eps as a degree-0 element. */
MWElement mw_n_epsilon(FieldId fid, const Int& n);
/** Degree-0 image of a GW element (sum of <u_i> spellings). */
MWElement mw_from_gw(const GWElement& a);

MWElement mw_add(const MWElement& a, const MWElement& b);
MWElement mw_neg(const MWElement& a);
MWElement mw_sub(const MWElement& a, const MWElement& b);
MWElement mw_scale(const Int& c, const MWElement& a);
MWElement mw_mul(const MWElement& a, const MWElement& b);
/** Multiplies by <u>, keeping the twist label (fold discipline). */
MWElement mw_twist_unit(const Value& u, const MWElement& a);

/** Relabels the twist (units must already be folded). */
MWElement mw_set_twist(const MWElement& a, const std::string& twist);
/** ev at the distinguished generator: strips the twist label. */
MWElement mw_strip_twist(const MWElement& a);

struct NormalizedPair {
    /** mu'(a): in I^n (n >= 0) or W (n < 0); exact GW image when n = 0. */
    GWElement wittPart;
    /** F(a): Milnor part of degree max(n,0); zero symbol when n < 0. */
    KMSymbol milnorPart;
};

/** mu': [u] -> <<u>>, eta -> <1>, with the degreewise sign convention. */
GWElement mw_mu_prime(const MWElement& a);
/** Forgetful map F: eta -> 0, [u] -> {u}. */
KMSymbol mw_forget(const MWElement& a);
NormalizedPair mw_normalize(const MWElement& a);
/** Hyperbolic map H(s) = h * [word lift of s], with an optional twist label. */
MWElement mw_hyperbolic(const KMSymbol& s, const std::string& twist = "");

bool mw_equal(const MWElement& a, const MWElement& b);
bool mw_is_zero(const MWElement& a);

/**
 * Residue at a place of k(t): Theta_pi with the canonical uniformizer;
 * degree drops by one; the result's twist label gains the nu_v factor.
 * Twisted inputs are handled by the fold discipline (units are already in
 * the symbol), so the same computation applies.
 */
MWElement mw_residue(const MWElement& a, const Place& v);
/** Residue with an explicit uniformizer pi (v(pi) must be 1). */
MWElement mw_residue_pi(const MWElement& a, const Place& v, const Value& pi);
/** Specialization: constant coefficient of Theta_pi; a ring homomorphism. */
MWElement mw_specialize(const MWElement& a, const Place& v);
MWElement mw_specialize_pi(const MWElement& a, const Place& v, const Value& pi);

std::string mw_str(const MWElement& a);

}  // namespace mwk
