#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mwk/mw.hpp"

using namespace mwk;

static FieldId F5 = field_GF(5);
static FieldId F7 = field_GF(7);
static Value i5(long x) { return v_int(F5, x); }
static Value i7(long x) { return v_int(F7, x); }

TEST_CASE("presentation relations") {
    for (long u = 2; u < 5; ++u)
        CHECK(mw_is_zero(mw_mul(mw_sym(i5(u)), mw_sym(i5(1 - u)))));
    for (long u = 1; u < 5; ++u)
        for (long v = 1; v < 5; ++v)
            CHECK(mw_equal(mw_sym(i5(u * v)),
                           mw_add(mw_add(mw_sym(i5(u)), mw_sym(i5(v))),
                                  mw_word(F5, 1, 1, {i5(u), i5(v)}))));
    CHECK(mw_is_zero(mw_mul(mw_eta(F5), mw_h(F5))));
    CHECK(mw_is_zero(mw_mul(mw_mul(mw_eta(F7), mw_h(F7)), mw_sym(i7(3)))));
    CHECK(mw_equal(mw_add(mw_sym(i5(2)), mw_sym(i5(3))),
                   mw_sub(mw_sym(i5(6)), mw_word(F5, 1, 1, {i5(2), i5(3)}))));
    for (long u = 1; u < 7; ++u)
        for (long v = 1; v < 7; ++v)
            CHECK(mw_equal(mw_mul(mw_gw_gen(i7(u)), mw_gw_gen(i7(v))),
                           mw_gw_gen(i7(u * v))));
    CHECK(mw_equal(mw_mul(mw_sym(i5(2)), mw_sym(i5(3))),
                   mw_mul(mw_eps(F5), mw_mul(mw_sym(i5(3)), mw_sym(i5(2))))));
}

TEST_CASE("normal form pair") {
    auto np = mw_normalize(mw_sym(i5(2)));
    CHECK(gw_equal(np.wittPart, gw_pfister(i5(2))));
    CHECK(km_equal(np.milnorPart, km_word(F5, {i5(2)})));
    auto nh = mw_normalize(mw_h(F5));
    CHECK(witt_equal(nh.wittPart, gw_zero(F5)));
    CHECK(km_constant(nh.milnorPart) == 2);
    CHECK(gw_equal(mw_mu_prime(mw_eta(F5)), gw_int(F5, 1)));
}

TEST_CASE("forgetful and hyperbolic maps") {
    KMSymbol s = km_word(F5, {i5(2), i5(3)});
    CHECK(km_equal(mw_forget(mw_hyperbolic(s)), km_scale(2, s)));
    MWElement x = mw_mul(mw_sym(i5(2)), mw_sym(i5(3)));
    CHECK(mw_equal(mw_hyperbolic(mw_forget(x)), mw_mul(mw_h(F5), x)));
    CHECK(gw_equal(mw_mu_prime(mw_mul(mw_gw_gen(i5(2)), x)),
                   gw_mul(gw_gen(i5(2)), mw_mu_prime(x))));
}

TEST_CASE("residues over GF(5)(t)") {
    FieldId K = field_ratfunc(F5, "t");
    Value t = rf_make(K, up_x(F5), up_const(v_one(F5)));
    Place pt = make_place(K, up_x(F5));

    MWElement r1 = mw_residue(mw_mul(mw_sym(t), mw_sym(v_int(K, 2))), pt);
    CHECK(mw_equal(mw_strip_twist(r1), mw_sym(i5(2))));
    CHECK(mw_is_zero(mw_residue(mw_sym(v_int(K, 3)), pt)));

    // second residues of rank-one forms
    MWElement r2 = mw_residue(mw_gw_gen(v_mul(v_int(K, 2), t)), pt);
    CHECK(mw_equal(mw_strip_twist(r2), mw_mul(mw_eta(F5), mw_gw_gen(i5(2)))));
    CHECK(mw_is_zero(mw_residue(mw_gw_gen(v_mul(t, t)), pt)));
    MWElement r3 = mw_residue(mw_gw_gen(v_mul(v_int(K, 2), v_pow(t, 3))), pt);
    CHECK(mw_equal(mw_strip_twist(r3), mw_mul(mw_eta(F5), mw_gw_gen(i5(2)))));

    // uniformizer change scales by the reduced unit
    Value pi2 = v_mul(v_int(K, 3), t);
    MWElement lhs = mw_residue_pi(mw_mul(mw_sym(t), mw_sym(v_int(K, 2))), pt, pi2);
    MWElement rhs = mw_twist_unit(v_inv(i5(3)), r1);
    CHECK(mw_equal(mw_strip_twist(lhs), mw_strip_twist(rhs)));
}

TEST_CASE("specialization over GF(5)(t)") {
    FieldId K = field_ratfunc(F5, "t");
    Value t = rf_make(K, up_x(F5), up_const(v_one(F5)));
    Place pt = make_place(K, up_x(F5));
    CHECK(mw_equal(mw_specialize(mw_sym(v_add(t, v_int(K, 2))), pt), mw_sym(i5(2))));
    CHECK(mw_equal(mw_specialize(mw_gw_gen(v_int(K, 3)), pt), mw_gw_gen(i5(3))));
    // s = -eps * d([-pi] sigma)
    MWElement sig = mw_mul(mw_sym(v_add(t, v_int(K, 1))), mw_sym(v_add(t, v_int(K, 3))));
    MWElement viaS = mw_specialize(sig, pt);
    MWElement viaD =
        mw_mul(mw_neg(mw_eps(F5)),
               mw_strip_twist(mw_residue(mw_mul(mw_sym(v_neg(t)), sig), pt)));
    CHECK(mw_equal(viaS, viaD));
}

TEST_CASE("residue commutes with the hyperbolic map") {
    FieldId K = field_ratfunc(F5, "t");
    Value t = rf_make(K, up_x(F5), up_const(v_one(F5)));
    Place pt = make_place(K, up_x(F5));
    KMSymbol sk = km_word(K, {t, v_int(K, 2)});
    CHECK(mw_equal(mw_strip_twist(mw_residue(mw_hyperbolic(sk), pt)),
                   mw_hyperbolic(km_residue(sk, pt))));
}
