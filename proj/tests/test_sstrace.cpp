#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mwk/sstrace.hpp"

using namespace mwk;

TEST_CASE("Bezoutian of a monogenic presentation") {
    FieldId F5 = field_GF(5);
    MPoly f1 = mp_zero(F5, 1);
    mp_add_term(f1, {2}, v_one(F5));
    mp_add_term(f1, {0}, v_int(F5, -2));  // t^2 - 2
    Presentation P1 = make_presentation(F5, {f1});
    MPoly d1 = bezoutian(P1);
    MPoly want = mp_add(mp_var(F5, 2, 0), mp_var(F5, 2, 1));  // x + y
    CHECK(mp_eq(d1, want));
    auto tau1 = ss_trace(P1);
    CHECK(v_is_zero(tau1[0]));
    CHECK(v_is_one(tau1[1]));  // dual basis vector of alpha^{d-1}

    CHECK(v_is_one(residue_symbol(mp_var(F5, 1, 0), P1)));
    CHECK(v_is_zero(residue_symbol(mp_const(F5, 1, v_one(F5)), P1)));
    CHECK(v_is_zero(residue_symbol(mp_mul(f1, mp_var(F5, 1, 0)), P1)));

    MPoly lin = mp_zero(F5, 1);
    mp_add_term(lin, {1}, v_one(F5));
    mp_add_term(lin, {0}, v_int(F5, -3));
    CHECK(v_is_one(ss_trace(make_presentation(F5, {lin}))[0]));
}

TEST_CASE("Bezoutian of a block presentation factors") {
    FieldId F5 = field_GF(5);
    MPoly g1 = mp_zero(F5, 2);
    mp_add_term(g1, {2, 0}, v_one(F5));
    mp_add_term(g1, {0, 0}, v_int(F5, -2));
    MPoly g2 = mp_zero(F5, 2);
    mp_add_term(g2, {0, 2}, v_one(F5));
    mp_add_term(g2, {0, 0}, v_int(F5, -3));
    Presentation P2 = make_presentation(F5, {g1, g2});
    MPoly bl = bezoutian(P2);
    MPoly wx = mp_add(mp_var(F5, 4, 0), mp_var(F5, 4, 2));
    MPoly wy = mp_add(mp_var(F5, 4, 1), mp_var(F5, 4, 3));
    CHECK(mp_eq(bl, mp_mul(wx, wy)));
}

TEST_CASE("trace form of GF(9)/GF(3)") {
    FieldId F3 = field_GF(3);
    MPoly q9 = mp_zero(F3, 1);
    mp_add_term(q9, {2}, v_one(F3));
    mp_add_term(q9, {0}, v_one(F3));
    Extension F9 = make_extension(F3, {q9}, {"x"});
    Presentation P9 = presentation_of(F9);
    auto tau9 = ss_trace(P9);
    Gram G9 = form_gram(P9, tau9);
    CHECK(v_is_zero(G9[0][0]));
    CHECK(v_is_one(G9[0][1]));
    CHECK(v_is_zero(G9[1][1]));
    CHECK(v_eq(usual_trace(P9, mp_const(F3, 1, v_one(F3))), v_int(F3, 2)));
    CHECK(is_etale(P9));

    // Euler characterization: tr(f'(a)^{-1} a^i) = delta_{i, d-1}
    Value ie = v_inv(etale_unit(F9));
    Value alpha = gen_value(F9, 0);
    CHECK(v_is_zero(usual_trace(P9, ext_value_poly(ie))));
    CHECK(v_is_one(usual_trace(P9, ext_value_poly(v_mul(ie, alpha)))));

    Value b1 = linear_form_to_omega(F9, tau9);
    CHECK(v_is_one(b1));
    Value bc = linear_form_to_omega(F9, {v_int(F3, 2), v_zero(F3)});
    CHECK(v_eq(tau_apply(P9, tau9, ext_value_poly(bc)), v_int(F3, 2)));

    GWElement t2 = gw_transfer(F9, gw_gen(v_add(alpha, v_one(F9.ext))));
    CHECK(gw_rank(t2) == 2);
}

TEST_CASE("degree formula for small finite extensions") {
    FieldId F3 = field_GF(3);
    MPoly q9 = mp_zero(F3, 1);
    mp_add_term(q9, {2}, v_one(F3));
    mp_add_term(q9, {0}, v_one(F3));
    Extension F9 = make_extension(F3, {q9}, {"x"});
    CHECK(gw_equal(gw_transfer(F9, gw_gen(v_one(F9.ext))), gw_h(F3)));
    MPoly c27 = mp_zero(F3, 1);
    mp_add_term(c27, {3}, v_one(F3));
    mp_add_term(c27, {1}, v_int(F3, -1));
    mp_add_term(c27, {0}, v_int(F3, 1));  // t^3 - t + 1
    Extension F27 = make_extension(F3, {c27}, {"y"});
    CHECK(gw_equal(gw_transfer(F27, gw_gen(v_one(F27.ext))),
                   gw_add(gw_h(F3), gw_int(F3, 1))));
}

TEST_CASE("inseparable quadratic extension of GF(2)(s)") {
    FieldId F2 = field_GF(2);
    FieldId K2 = field_ratfunc(F2, "s");
    Value s = rf_make(K2, up_x(F2), up_const(v_one(F2)));
    MPoly fi = mp_zero(K2, 1);
    mp_add_term(fi, {2}, v_one(K2));
    mp_add_term(fi, {0}, v_neg(s));
    Extension Ei = make_extension(K2, {fi}, {"r"});
    Presentation Pi = presentation_of(Ei);
    CHECK(v_is_zero(usual_trace(Pi, mp_var(K2, 1, 0))));
    CHECK(v_is_zero(usual_trace(Pi, mp_const(K2, 1, v_one(K2)))));
    CHECK(!is_etale(Pi));
    CHECK(gw_equal(gw_transfer(Ei, gw_gen(v_one(Ei.ext))), gw_h(K2)));
}
