#pragma once

#include <cstdint>
#include <random>

#include "mwk/algebra.hpp"

/**
 * Univariate polynomial factorization and square-class utilities.
 *
 * Over finite fields (including extension towers over a finite field):
 * squarefree decomposition + distinct-degree + equal-degree splitting
 * (Cantor-Zassenhaus, randomized with a fixed, settable seed so output is
 * reproducible).
 *
 * Over Q only rational-root extraction is implemented; an unresolved
 * nonlinear part of degree > 3 raises a CapabilityError (inputs that need
 * more are supplied pre-factored upstream).
 */
namespace mwk {

struct Factorization {
    Value unit;                               // leading unit
    std::vector<std::pair<UPoly, int>> factors;  // monic irreducible, multiplicity
};

/** Seed used by the equal-degree splitting; fixed default, settable. */
void set_factor_seed(std::uint64_t seed);
std::uint64_t factor_seed();

Factorization factor(const UPoly& p, FieldId coeff_fid);
bool up_irreducible(const UPoly& p, FieldId coeff_fid);

/** a^e mod m over the coefficient field of m (m monic). */
UPoly up_powmod(const UPoly& a, const Int& e, const UPoly& m);

/** Uniform random element / nonzero element of a field with samplable model. */
Value rand_elem(FieldId fid, std::mt19937_64& rng);
Value rand_unit(FieldId fid, std::mt19937_64& rng);

/** Exact square test; CapabilityError where no decision procedure exists. */
bool is_square(const Value& a);
/**
 * Canonical representative of a modulo squares: 1 or a fixed non-square over
 * finite fields, the squarefree integer over Q; other fields are returned
 * unchanged (no normalization available).
 */
Value square_class_rep(const Value& a);
/** p-th power test in characteristic p; writes the root when asked. */
bool is_pth_power(const Value& a, long p, Value* root = nullptr);

}  // namespace mwk
