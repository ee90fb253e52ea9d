#pragma once

#include "mwk/extension.hpp"
#include "mwk/gw.hpp"

/**
 * Bezoutians, Scheja-Storch trace forms, Grothendieck residue symbols, the
 * usual trace with the etale criterion, and differential GW-transfers.
 *
 * A presentation is a triangular-monic system f_1..f_n over a field A; the
 * quotient B = A[t_1..t_n]/(f) is a free A-module on the monomial basis
 * (not necessarily a field: squarefree products are allowed). The
 * Scheja-Storch form tau_f is the unique A-linear form with
 * Phi(Delta_f)(tau_f) = 1, where Delta_f = det(c_ij) is the Bezoutian built
 * from divided differences; the Grothendieck residue Res[lambda dt; f] is
 * tau_f(lambda bar), and this *is* the differential trace against the
 * distinguished basis w: Tr^w(b*w) = tau_f(b).
 */
namespace mwk {

struct Presentation {
    FieldId A = -1;
    int n = 0;
    std::vector<MPoly> f;           // monic triangular, nvars = n
    std::vector<int> stage_deg;
    std::vector<Monomial> basis;    // monomial basis, ext_basis-compatible order
    int rank = 1;
    std::vector<std::pair<int, MPoly>> sys;
};

Presentation make_presentation(FieldId A, std::vector<MPoly> f);
Presentation presentation_of(const Extension& E);

/** Normal form of g in B. */
MPoly pres_reduce(const Presentation& P, const MPoly& g);
/** Coordinates of g over the monomial basis. */
std::vector<Value> pres_coords(const Presentation& P, const MPoly& g);

/** Polynomial form of an element of an extension field (monomial basis). */
MPoly ext_value_poly(const Value& a);

/**
 * The Bezoutian Delta_f in B (x) B: a polynomial in 2n variables
 * (x_1..x_n, y_1..y_n), reduced on both sides. DomainError if a divided
 * difference fails to divide exactly.
 */
MPoly bezoutian(const Presentation& P);

/** tau_f over the monomial basis; DomainError if the system is singular. */
std::vector<Value> ss_trace(const Presentation& P);

/** tau applied to an element of B. */
Value tau_apply(const Presentation& P, const std::vector<Value>& tau, const MPoly& b);

/** Grothendieck residue Res[lambda dt_1...dt_n ; f_1..f_n] = tau_f(lambda bar). */
Value residue_symbol(const MPoly& lambda, const Presentation& P);

/** Gram matrix G_ij = tau(m_i m_j) of a linear form over the monomial basis. */
Gram form_gram(const Presentation& P, const std::vector<Value>& tau);

/** Trace of multiplication-by-b. */
Value usual_trace(const Presentation& P, const MPoly& b);
/** Non-degeneracy of the usual trace form. */
bool is_etale(const Presentation& P);

/**
 * Differential GW-transfer: sends sum <u_i> (x) w (twist label must match
 * E.w_label, or be empty for the canonical w) to the sum of the classes of
 * the Gram matrices (x,y) -> tau_f(u_i * w_unit * x * y) over k.
 */
GWElement gw_transfer(const Extension& E, const GWElement& a);

/**
 * Solves b * tau_f = phi for b in E (phi given over the monomial basis);
 * the returned pair (b, w) satisfies psi_{b*w} = phi.
 */
Value linear_form_to_omega(const Extension& E, const std::vector<Value>& phi);

}  // namespace mwk
