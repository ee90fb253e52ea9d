#pragma once

#include "mwk/algebra.hpp"
#include "mwk/extension.hpp"

/**
 * Places of a rational function field k(t): the finite places given by monic
 * irreducible polynomials pi, and the place at infinity with uniformizer 1/t.
 * Each place carries its residue field kappa (k itself when deg pi = 1,
 * otherwise k[x]/(pi)), a reduction map, and a normalized valuation.
 */
namespace mwk {

struct Place {
    FieldId kt = -1;          // the function field
    bool infinite = false;
    UPoly pi;                 // monic irreducible over k (finite places)
    FieldId kappa = -1;       // residue field
    int degree = 1;           // residue degree [kappa : k]
    /** Extension presentation kappa/k when degree > 1 (for transfers). */
    std::optional<Extension> kappa_ext;
    std::string label;        // "(t^2+1)", "(t-3)", "inf"
};

/** Finite place of k(t) at a monic irreducible pi (validated). */
Place make_place(FieldId kt, UPoly pi);
/** The place at infinity of k(t). */
Place place_infinity(FieldId kt);

/** Normalized valuation v(a); DomainError on a = 0. */
long place_val(const Place& v, const Value& a);

/** The canonical uniformizer as an element of k(t): pi itself, or 1/t. */
Value place_uniformizer(const Place& v);

/**
 * Reduction of a to kappa; requires v(a) >= 0 (DomainError otherwise).
 * At infinity, a unit num/den of equal degree reduces to the ratio of
 * leading coefficients.
 */
Value place_reduce(const Place& v, const Value& a);

/** Lifts an element of kappa to k(t) (polynomial representative). */
Value place_lift(const Place& v, const Value& r);

/** Finite places in the support of a (poles and zeros), by factorization. */
std::vector<Place> support_places(const Value& a);

/**
 * A finite place of k(t) where every listed element is a unit, found by
 * scanning monic irreducibles of increasing degree. Used to pick
 * specialization points.
 */
Place good_place(FieldId kt, const std::vector<Value>& units_needed);

/** Monic irreducibles over a finite k, enumerated by (degree, lex) order. */
std::vector<UPoly> monic_irreducibles(FieldId k, int degree);

}  // namespace mwk
