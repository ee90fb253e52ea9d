#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mwk/extension.hpp"
#include "mwk/km.hpp"

using namespace mwk;

TEST_CASE("symbol relations") {
    FieldId F5 = field_GF(5), F7 = field_GF(7), Q = field_Q();
    CHECK(km_is_zero(km_word(F7, {v_int(F7, 3), v_int(F7, -2)})));  // {u, 1-u}
    CHECK(km_equal(km_word(Q, {v_int(Q, 4)}), km_scale(2, km_word(Q, {v_int(Q, 2)}))));
    CHECK(km_is_zero(km_word(F5, {v_int(F5, 2), v_int(F5, 3)})));  // degree 2 over F_q
    CHECK(km_is_zero(km_word(Q, {v_int(Q, 3), v_int(Q, -2)})));
    CHECK(km_is_zero(km_add(km_word(Q, {v_int(Q, 2), v_int(Q, 3)}),
                            km_word(Q, {v_int(Q, 3), v_int(Q, 2)}))));
    CHECK(!km_is_zero(km_word(Q, {v_int(Q, 2), v_int(Q, 3)})));
    CHECK(!km_is_zero(km_word(Q, {v_int(Q, -1), v_int(Q, -1)})));
}

TEST_CASE("tame residues over GF(5)(t)") {
    FieldId F5 = field_GF(5);
    FieldId K = field_ratfunc(F5, "t");
    Value t = rf_make(K, up_x(F5), up_const(v_one(F5)));
    Place pt = make_place(K, up_x(F5));
    CHECK(km_equal(km_residue(km_word(K, {t, v_int(K, 2)}), pt),
                   km_word(F5, {v_int(F5, 2)})));
    CHECK(km_is_zero(km_residue(km_word(K, {v_int(K, 2)}), pt)));
    CHECK(km_equal(km_residue(km_word(K, {v_mul(t, t)}), pt), km_int(F5, 2)));
    Value u2 = v_int(K, 2);
    CHECK(km_equal(km_residue(km_word(K, {u2, t}), pt),
                   km_neg(km_residue(km_word(K, {t, u2}), pt))));
    CHECK(km_equal(km_residue(km_word(K, {t, t}), pt), km_word(F5, {v_int(F5, -1)})));
    Value onemt = v_sub(v_int(K, 1), t);
    CHECK(km_is_zero(km_word(K, {t, onemt})));
}

TEST_CASE("specialization is a ring map on good symbols") {
    FieldId F5 = field_GF(5);
    FieldId K = field_ratfunc(F5, "t");
    Value t = rf_make(K, up_x(F5), up_const(v_one(F5)));
    Place p1 = make_place(K, up_trim(UPoly{v_int(F5, -1), v_one(F5)}));
    CHECK(km_equal(km_specialize(km_word(K, {v_add(t, v_int(K, 1))}), p1),
                   km_word(F5, {v_int(F5, 2)})));
    CHECK(km_equal(km_specialize(km_int(K, 3), p1), km_int(F5, 3)));
}

TEST_CASE("transfer is the norm in degree one") {
    FieldId F3 = field_GF(3);
    MPoly q9 = mp_zero(F3, 1);
    mp_add_term(q9, {2}, v_one(F3));
    mp_add_term(q9, {0}, v_one(F3));
    Extension F9 = make_extension(F3, {q9}, {"x"});
    CHECK(km_constant(km_transfer(km_int(F9.ext, 1), F9)) == 2);
    Value alpha = gen_value(F9, 0);  // alpha^2 = -1, N(alpha) = 1
    CHECK(km_is_zero(km_transfer(km_word(F9.ext, {alpha}), F9)));
    CHECK(km_is_zero(
        km_transfer(km_word(F9.ext, {alpha, v_add(alpha, v_one(F9.ext))}), F9)));
    CHECK(v_eq(ext_norm(F9, v_add(alpha, v_one(F9.ext))), v_int(F3, 2)));
}
