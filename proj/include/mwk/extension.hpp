#pragma once

#include "mwk/algebra.hpp"

/**
 * Finite field extensions presented triangularly, their canonical-module
 * basis bookkeeping, and field homomorphisms.
 *
 * An extension E/k is given by polynomials f_1..f_n, f_i monic in t_i after
 * normalization and involving only t_1..t_i, each irreducible over the stage
 * below. The canonical module omega_{E/k} has the distinguished basis
 * w = (fbar_1 ^ ... ^ fbar_n)^* (x) (dt_1 ^ ... ^ dt_n); a presentation whose
 * stage polynomials carry leading units a_i denotes the basis
 * (prod a_i^{-1}) * w_monic, recorded in w_unit.
 */
namespace mwk {

struct Extension {
    FieldId base = -1;
    FieldId ext = -1;
    std::vector<std::string> gens;
    std::vector<MPoly> minpolys;  // monic normal forms
    std::vector<int> stage_deg;
    int degree = 1;
    std::vector<bool> sep_stage;
    bool separable = true;
    /** Unit u of E with w_presentation = u * w_monic (1 unless stages were scaled). */
    Value w_unit;
    /** Twist-line label identifying omega_{E/k} with this distinguished basis. */
    std::string w_label;
};

/**
 * Validates and registers a triangular extension. Stage polynomials may carry
 * unit leading coefficients (in the subfield below); these are divided out
 * and folded into w_unit. Reducible stages raise DomainError with the
 * offending factor; irreducibility tests unavailable over the coefficient
 * field raise CapabilityError.
 */
Extension make_extension(FieldId base, std::vector<MPoly> minpolys,
                         std::vector<std::string> gens = {});

/** The degree-1 extension k[t]/(t), used for identity transfers. */
Extension trivial_extension(FieldId k);

/** Value of the i-th generator inside E. */
Value gen_value(const Extension& E, int i);

/** Evaluates a polynomial over the base at the generators of E. */
Value eval_at_gens(const MPoly& f, const Extension& E);

/** f'(alpha) of a monogenic separable extension (DomainError otherwise). */
Value etale_unit(const Extension& E);

/**
 * Comparison unit c of L with w_{L/k} = c * (w_{L/E} (x) w_{E/k}), for a
 * tower whose L/k presentation stacks the two stage presentations up to
 * leading units. DomainError if the presentations are not concatenable.
 */
Value compose_canonical(const Extension& L_over_E, const Extension& E_over_k,
                        const Extension& L_over_k);

/** A homomorphism of supported fields, determined by generator images. */
struct FieldHom {
    FieldId src = -1;
    FieldId dst = -1;
    std::optional<Value> var_image;           // FunctionField variable image
    std::vector<Value> gen_images;            // Extension generator images
    std::shared_ptr<const FieldHom> base_hom; // null: embed base into dst
};

FieldHom identity_hom(FieldId fid);
Value hom_apply(const FieldHom& h, const Value& a);

/** Monogenic steps of a flat tower plus the map onto the top nested field. */
struct NestedTower {
    std::vector<Extension> steps;  // steps[i] is E_{i+1}/E_i with E_0 = k
    FieldHom flat_to_top;
};

NestedTower nested_tower(const Extension& E);

}  // namespace mwk
