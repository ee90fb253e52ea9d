#pragma once

#include "mwk/transfer.hpp"

/**
 * Chow-Witt groups of curves in Rost-Schmid style: quadratic divisors on
 * A^1, P^1, and spectra of discrete valuation rings, the quadratic divisor
 * class map, localization residues, the homotopy-invariance decomposition
 * over A^1, and complete class invariants on P^1 twisted by a line bundle.
 *
 * Twist bookkeeping follows the fold discipline of the Milnor-Witt layer:
 * a line bundle O(d) on P^1 is carried by its distinguished generators u on
 * the t-chart and v on the s-chart (s = 1/t), glued by u = s^{-d} v, so a
 * section over the generic point is stored trivialized by u and the only
 * conversions happen at infinity (<t^d> for the bundle, <-1> for
 * dt = -s^{-2} ds). At a finite point with monic uniformizer pi the
 * canonical generator (pi bar)^* (x) dt matches the residue twist with
 * conversion unit 1, so divisor coefficients keep the residue twist label.
 */
namespace mwk {

enum class CurveKind { A1, P1, SpecOv };

struct Curve {
    CurveKind kind = CurveKind::A1;
    FieldId kt = -1;          // the function field k(t)
    int bundle_degree = 0;    // deg L on P^1; the bundle is trivial otherwise
    std::optional<Place> v;   // the closed point of Spec(O_v)
};

Curve curve_A1(FieldId kt);
Curve curve_P1(FieldId kt, int bundle_degree = 0);
Curve curve_SpecOv(const Place& v);

/**
 * A quadratic divisor: a finite family of coefficients at closed points.
 * Finite coefficients live over kappa_x with the residue twist label
 * "nu(pi)" (possibly combined with an extra bundle label); the coefficient
 * at infinity is stored over k in the canonical (ds, v)-trivialization,
 * untwisted.
 */
struct QuadraticDivisor {
    Curve curve;
    int q = 0;  // GG-degree of the coefficients
    std::vector<PlacedCoefficient> finite;
    std::optional<MWElement> at_infinity;  // P^1 only
};

/**
 * Quadratic divisor class map: the sum of the twisted residues of sigma over
 * the (finite) support, plus the converted residue at infinity on P^1.
 * sigma lives over k(t), untwisted (= trivialized by u when the curve is P^1
 * with a bundle). Zero coefficients are dropped, so supports stay finite.
 */
QuadraticDivisor tdiv(const MWElement& sigma, const Curve& C);

struct A1Decomposition {
    MWElement constant;       // over k: the specialization s_v^pi(sigma)
    Place at;                 // the k-rational place used
    QuadraticDivisor divisor; // tdiv(sigma) on A^1
};

/**
 * Homotopy-invariance decomposition over A^1: specialization at a k-rational
 * place avoiding the support, together with the quadratic divisor. The pair
 * determines sigma; CapabilityError when no rational specialization point is
 * found.
 */
A1Decomposition a1_decompose(const MWElement& sigma);

/**
 * Residues of sigma along a closed subset Z (restriction of tdiv to Z,
 * including zero coefficients). An infinite place in Z requires a P^1 curve
 * and applies the conversions at infinity.
 */
std::vector<PlacedCoefficient> localization_residue(const MWElement& sigma,
                                                    const std::vector<Place>& Z,
                                                    const Curve& C);

/**
 * The complete rational-equivalence invariant of a quadratic divisor on P^1
 * with bundle O(d). For d even the class group is the Milnor-Witt K-theory
 * of k twisted at infinity and the invariant is the quadratic degree: the
 * sum of the transfers of the finite coefficients plus the coefficient at
 * infinity (so the pushforward from infinity is split by construction). For
 * d odd multiplication by eta is absorbed and only the Milnor part
 * survives; at GG-degree 0 it is the integer sum of deg(x) * rank.
 */
struct PB1Class {
    bool even = true;
    MWElement mw;   // d even: over k, canonical trivialization at infinity
    KMSymbol km;    // d odd, q >= 0 (zero when q < 0)
    Int degree = 0; // d odd, q = 0: sum of deg(x) * rk(coeff)
};

PB1Class pb1_class(const QuadraticDivisor& D);
bool pb1_equal(const PB1Class& a, const PB1Class& b);

struct CyclePoint {
    Place v;
    Int mult;
};

/** A classical 0-cycle on the curve. */
struct ZeroCycle {
    Curve curve;
    std::vector<CyclePoint> finite;
    Int at_infinity = 0;
};

/** Forgetful map at GG-degree 0: pointwise rank. */
ZeroCycle forget_divisor(const QuadraticDivisor& D);
/** Hyperbolic map: pointwise multiple of h with the canonical twist. */
QuadraticDivisor hyper_divisor(const ZeroCycle& z);
/** Classical degree: sum of mult * deg(x). */
Int cycle_degree(const ZeroCycle& z);

/**
 * Principality over Spec(O_v): a Milnor-Witt element sigma over k(t), unit
 * away from v, with residue at v equal to the given coefficient (words are
 * lifted entrywise and multiplied by [pi]).
 */
MWElement dvr_lift(const Place& v, const MWElement& coeff);

/** JSON serialization: [{point: monic coefficient list | "inf", coefficient, twist}]. */
std::string divisor_json(const QuadraticDivisor& D);

}  // namespace mwk
