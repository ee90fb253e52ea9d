#pragma once

#include <optional>

#include "mwk/mw.hpp"
#include "mwk/sstrace.hpp"

/**
 * Milnor-Witt transfers along finite extensions.
 *
 * The glued (fiber-product) transfer is the primary definition: normalize the
 * element to its (Witt part, Milnor part) pair, transfer the Witt part by the
 * differential GW-transfer and the Milnor part by the Milnor K-theory norm,
 * and reconstruct a Milnor-Witt element realizing both. The Bass-Tate route
 * chains monogenic steps of a generator tower, each step evaluated as a glued
 * transfer, with the canonical-module comparison units folded in; agreement
 * of the two routes (including independence of the generator chain) is a
 * theorem that the test suite exercises rather than an assumption.
 *
 * The module also houses base change along field homomorphisms, transfers
 * from residue fields of places of k(t) under the canonical
 * (pi bar)^* (x) dt identification, the quadratic degree of a divisor on P^1,
 * and Weil quadratic reciprocity as an executable check.
 */
namespace mwk {

enum class TransferMethod { FiberProduct, BassTate };

struct TransferRequest {
    Extension E;                 // E/k with its presentation
    MWElement element;           // over E.ext, twisted by omega_{E/k} (x) extra
    TransferMethod method = TransferMethod::FiberProduct;
    std::vector<Value> chain;    // Bass-Tate generator chain (defaults to E's gens)
};

/**
 * Glued transfer Tr^{MW}_{E/k}. The element's twist must be "", E.w_label, or
 * E.w_label combined with an extra label (which is carried to the result).
 * Raises CapabilityError when the Milnor part is outside km_transfer's
 * support, or when a nonzero I^{n+1} correction arises in degree >= 2.
 */
MWElement mw_transfer(const Extension& E, const MWElement& a);

/**
 * Bass-Tate transfer along a generator chain (elements of E.ext; defaults to
 * the presentation's own generators). Builds the chain's tower presentation,
 * moves the element across with the canonical-module comparison units, and
 * transfers one monogenic step at a time. Chains other than the
 * presentation's generators require E/k separable (the comparison unit is
 * computed through the trace normalization of the canonical module).
 */
MWElement mw_transfer_bass_tate(const Extension& E, const MWElement& a,
                                const std::vector<Value>& chain = {});

MWElement mw_transfer_request(const TransferRequest& req);

/** Base change phi_*: entrywise image of the units, same word shape. */
MWElement mw_base_change(const FieldHom& phi, const MWElement& a);
KMSymbol km_base_change(const FieldHom& phi, const KMSymbol& a);
GWElement gw_base_change(const FieldHom& phi, const GWElement& a);

/**
 * Unit e of E with tau_f(x) = Tr_{E/k}(x / e) for a separable presentation
 * (product of the stage derivatives at the generators); DomainError if some
 * stage is inseparable.
 */
Value tower_etale_unit(const Extension& E);

/**
 * Transfer Tr^{MW}_{kappa_v/k} of a coefficient at a place of k(t), under the
 * canonical identification of the w-basis of omega_{kappa_v/k} with
 * (pi bar)^* (x) dt. The coefficient's twist must be "" or the kappa
 * presentation's w_label; at a degree-1 place (and at infinity) the transfer
 * is the identity.
 */
MWElement place_transfer(const Place& v, const MWElement& a);

/** A coefficient on P^1_k: at a finite place, or at infinity (over k). */
struct PlacedCoefficient {
    Place v;
    MWElement coeff;  // over kappa_v, twisted by omega_{kappa_v/k}
};

struct P1Divisor {
    FieldId kt = -1;
    int q = 0;  // GG-degree (used when the divisor is empty)
    std::vector<PlacedCoefficient> finite;
    std::optional<MWElement> at_infinity;  // over k, untwisted
};

/**
 * Quadratic degree: sum of the place transfers plus the coefficient at
 * infinity (normalization: the transfer at infinity is the identity).
 */
MWElement quadratic_degree(const P1Divisor& D);

struct PlaceContribution {
    std::string label;
    MWElement residue;      // over kappa_v, before transfer
    MWElement transferred;  // over k
};

struct ReciprocityReport {
    std::vector<PlaceContribution> perPlace;
    MWElement sum;  // over k
    bool ok = false;
};

/**
 * Weil quadratic reciprocity: computes Tr^{omega} of the residue of
 * sigma (x) dt at every place in the support (with the dt = -s^{-2} ds
 * renormalization at infinity) and checks that the sum vanishes.
 */
ReciprocityReport reciprocity_check(const MWElement& sigma);
/** The same for sigma = [f], f a nonzero element of k(t). */
ReciprocityReport reciprocity_check(const Value& f);

}  // namespace mwk
