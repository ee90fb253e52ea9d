#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mwk/gw.hpp"

using namespace mwk;

TEST_CASE("diagonal form oracles over finite fields") {
    FieldId F5 = field_GF(5), F7 = field_GF(7);
    CHECK(gw_equal(gw_diag(F5, {v_int(F5, 2), v_int(F5, 2)}),
                   gw_diag(F5, {v_int(F5, 1), v_int(F5, 1)})));
    CHECK(!gw_equal(gw_diag(F7, {v_int(F7, 3), v_int(F7, 3)}), gw_h(F7)));
}

TEST_CASE("generator relations exhaustively over GF(7)") {
    FieldId F7 = field_GF(7);
    for (long u = 1; u < 7; ++u) {
        for (long v = 1; v < 7; ++v) {
            CHECK(gw_equal(gw_gen(v_int(F7, u * v * v)), gw_gen(v_int(F7, u))));
            if ((u + v) % 7 != 0)
                CHECK(gw_equal(
                    gw_diag(F7, {v_int(F7, u), v_int(F7, v)}),
                    gw_diag(F7, {v_int(F7, u + v), v_int(F7, (u + v) * u * v)})));
            CHECK(gw_equal(gw_diag(F7, {v_int(F7, u), v_int(F7, -u)}), gw_h(F7)));
            CHECK(gw_equal(gw_mul(gw_gen(v_int(F7, u)), gw_h(F7)), gw_h(F7)));
        }
    }
}

TEST_CASE("hyperbolic and epsilon identities") {
    FieldId F5 = field_GF(5), F7 = field_GF(7), Q = field_Q();
    CHECK(gw_equal(gw_mul(gw_h(F5), gw_h(F5)), gw_scale(2, gw_h(F5))));
    CHECK(gw_equal(n_epsilon(F7, 2), gw_h(F7)));
    CHECK(gw_equal(n_epsilon(F7, 3), gw_add(gw_h(F7), gw_int(F7, 1))));
    CHECK(!gw_equal(gw_int(F7, 2), n_epsilon(F7, 2)));
    for (FieldId k : {field_GF(3), F5, Q})
        for (long n = -6; n <= 6; ++n)
            for (long m = -6; m <= 6; ++m)
                CHECK(gw_equal(n_epsilon(k, Int(n) * Int(m)),
                               gw_mul(n_epsilon(k, n), n_epsilon(k, m))));
    CHECK(gw_equal(gw_mul(gw_eps(Q), gw_eps(Q)), gw_int(Q, 1)));
    CHECK(gw_equal(gw_mul(gw_eps(Q), gw_h(Q)), gw_neg(gw_h(Q))));
    CHECK(witt_equal(n_epsilon(F5, 7), gw_int(F5, 1)));
    CHECK(witt_equal(n_epsilon(F5, 6), gw_zero(F5)));
}

TEST_CASE("invariants over Q") {
    FieldId Q = field_Q();
    auto inv = gw_invariants(
        gw_diag(Q, {v_int(Q, 1), v_int(Q, 1), v_int(Q, 1), v_int(Q, 1)}));
    CHECK(inv.rank == 4);
    REQUIRE(inv.signature.has_value());
    CHECK(inv.signature->first == 4);
    CHECK(v_is_one(inv.disc));
    CHECK(!gw_equal(gw_diag(Q, {v_int(Q, 3), v_int(Q, 3)}),
                    gw_diag(Q, {v_int(Q, 1), v_int(Q, 1)})));
    CHECK(gw_equal(gw_diag(Q, {v_int(Q, 2), v_int(Q, 2)}),
                   gw_diag(Q, {v_int(Q, 1), v_int(Q, 1)})));
}

TEST_CASE("generator relations over a function field") {
    FieldId F5 = field_GF(5);
    FieldId K = field_ratfunc(F5, "t");
    Value t = rf_make(K, up_x(F5), up_const(v_one(F5)));
    CHECK(!gw_equal(gw_gen(t), gw_int(K, 1)));
    CHECK(gw_equal(gw_gen(v_mul(t, v_mul(t, t))), gw_gen(t)));
    Value one = v_int(K, 1);
    Value tp1 = v_add(t, one);
    CHECK(gw_equal(gw_diag(K, {t, one}), gw_diag(K, {tp1, v_mul(tp1, t)})));
    CHECK(gw_equal(gw_diag(K, {t, v_neg(t)}), gw_h(K)));
}

TEST_CASE("gram matrix classification") {
    FieldId F3 = field_GF(3), F2 = field_GF(2), F5 = field_GF(5);
    Gram g = {{v_int(F3, 0), v_int(F3, 1)}, {v_int(F3, 1), v_int(F3, 0)}};
    CHECK(gw_equal(gram_to_gw(g, F3), gw_h(F3)));
    Gram g2 = {{v_int(F2, 0), v_int(F2, 1)}, {v_int(F2, 1), v_int(F2, 0)}};
    CHECK(gw_equal(gram_to_gw(g2, F2), gw_h(F2)));
    CHECK(gw_equal(gram_to_gw({{v_int(F5, 2)}}, F5), gw_gen(v_int(F5, 2))));
}

TEST_CASE("fundamental ideal filtration") {
    FieldId F5 = field_GF(5), Q = field_Q();
    GWElement p23 = gw_mul(gw_pfister(v_int(F5, 2)), gw_pfister(v_int(F5, 3)));
    CHECK(gw_in_In(p23, 2));
    CHECK(fundamental_image(p23, 2).image_zero);
    CHECK(fundamental_image(gw_pfister(v_int(F5, 2)), 1).image == "{2}");
    CHECK(gw_in_In(gw_h(Q), 5));
    GWElement p35 = gw_mul(gw_pfister(v_int(Q, 3)), gw_pfister(v_int(Q, 5)));
    CHECK(gw_in_In(p35, 2));
    CHECK(!gw_in_In(p35, 3));
    GWElement p8 = gw_mul(gw_mul(gw_pfister(v_int(Q, -1)), gw_pfister(v_int(Q, -1))),
                          gw_pfister(v_int(Q, -1)));
    CHECK(gw_in_In(p8, 3));
}

TEST_CASE("Pfister form addition identity") {
    FieldId Q = field_Q();
    for (long a = 2; a <= 5; ++a)
        for (long b = 2; b <= 5; ++b)
            CHECK(gw_equal(
                gw_add(gw_pfister(v_int(Q, a)), gw_pfister(v_int(Q, b))),
                gw_add(gw_pfister(v_int(Q, a * b)),
                       gw_mul(gw_pfister(v_int(Q, a)), gw_pfister(v_int(Q, b))))));
}
