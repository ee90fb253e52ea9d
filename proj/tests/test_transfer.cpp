#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mwk/factor.hpp"
#include "mwk/transfer.hpp"

using namespace mwk;

static MWElement omega_one(const Extension& E) {
    return mw_set_twist(mw_int(E.ext, 1), E.w_label);
}

TEST_CASE("degree formula in Milnor-Witt K-theory") {
    FieldId F5 = field_GF(5);
    MPoly f = mp_zero(F5, 1);
    mp_add_term(f, {2}, v_one(F5));
    mp_add_term(f, {0}, v_int(F5, -2L));
    Extension E = make_extension(F5, {f});
    CHECK(mw_equal(mw_transfer(E, omega_one(E)), mw_h(F5)));

    FieldId F7 = field_GF(7);
    MPoly g = mp_zero(F7, 1);
    mp_add_term(g, {3}, v_one(F7));
    mp_add_term(g, {0}, v_int(F7, -2L));
    Extension E3 = make_extension(F7, {g});
    CHECK(mw_equal(mw_transfer(E3, omega_one(E3)), mw_n_epsilon(F7, 3)));
}

TEST_CASE("norm formula for the dual-to-one twist over GF(9)/GF(3)") {
    FieldId F3 = field_GF(3);
    MPoly f = mp_zero(F3, 1);
    mp_add_term(f, {2}, v_one(F3));
    mp_add_term(f, {0}, v_one(F3));  // x^2 + 1
    Extension E = make_extension(F3, {f});
    std::vector<Value> phi = {v_one(F3), v_zero(F3)};
    Value b = linear_form_to_omega(E, phi);
    for (Value u : {gen_value(E, 0), v_add(gen_value(E, 0), v_one(E.ext)),
                    v_add(v_mul(gen_value(E, 0), v_int(E.ext, 2L)), v_one(E.ext))}) {
        MWElement a = mw_set_twist(mw_twist_unit(b, mw_sym(u)), E.w_label);
        MWElement tr = mw_transfer(E, a);
        Value nu = ext_norm(E, u);
        MWElement expect = v_is_one(nu) ? mw_zero(F3, 1) : mw_sym(nu);
        CHECK(mw_equal(tr, expect));
    }
}

TEST_CASE("inseparable Tate forms over GF(p)(s)") {
    for (long p : {2L, 3L}) {
        FieldId k = field_ratfunc(field_GF(p), "s");
        Value s = rf_make(k, up_x(field_GF(p)), {v_one(field_GF(p))});
        MPoly f = mp_zero(k, 1);
        mp_add_term(f, {static_cast<int>(p)}, v_one(k));
        mp_add_term(f, {0}, v_neg(s));  // t^p - s
        Extension E = make_extension(k, {f});
        CHECK(!E.separable);
        CHECK(mw_equal(mw_transfer(E, omega_one(E)), mw_n_epsilon(k, Int(p))));
        // unit-scaled transfer matches the scaled Tate Gram class
        Value u = v_add(gen_value(E, 0), v_one(E.ext));
        MWElement tru = mw_transfer(E, mw_set_twist(mw_gw_gen(u), E.w_label));
        Presentation P = presentation_of(E);
        auto tau = ss_trace(P);
        Gram g(E.degree, std::vector<Value>(E.degree, v_zero(k)));
        auto basis = ext_basis(E.ext);
        for (int i = 0; i < E.degree; ++i)
            for (int j = 0; j < E.degree; ++j) {
                MPoly mij = mp_const(k, 1, v_one(k));
                for (int x = 0; x < basis[i][0] + basis[j][0]; ++x)
                    mij = mp_mul(mij, mp_var(k, 1, 0));
                g[i][j] = tau_apply(P, tau, mp_mul(mij, ext_value_poly(u)));
            }
        CHECK(mw_equal(tru, mw_from_gw(gram_to_gw(g, k))));
    }
}

TEST_CASE("Bass-Tate chains agree on the GF(81)/GF(3) tower") {
    FieldId F3 = field_GF(3);
    MPoly f1 = mp_zero(F3, 2);
    mp_add_term(f1, {2, 0}, v_one(F3));
    mp_add_term(f1, {0, 0}, v_one(F3));
    MPoly f2 = mp_zero(F3, 2);
    mp_add_term(f2, {0, 2}, v_one(F3));
    mp_add_term(f2, {1, 0}, v_neg(v_one(F3)));
    mp_add_term(f2, {0, 0}, v_neg(v_one(F3)));
    Extension L = make_extension(F3, {f1, f2});
    REQUIRE(L.degree == 4);
    set_factor_seed(42);
    std::mt19937_64 rng(42);
    for (int it = 0; it < 12; ++it) {
        Value u1 = rand_unit(L.ext, rng);
        Value u2 = rand_unit(L.ext, rng);
        int n = it % 3 - 1;
        MWElement a;
        if (n == -1)
            a = mw_add(mw_mul(mw_eta(L.ext), mw_sym(u1)),
                       mw_mul(mw_mul(mw_eta(L.ext), mw_eta(L.ext)),
                              mw_mul(mw_sym(u1), mw_sym(u2))));
        else if (n == 0)
            a = mw_add(mw_gw_gen(u1), mw_scale(2, mw_gw_gen(u2)));
        else
            a = mw_add(mw_sym(u1), mw_mul(mw_eta(L.ext), mw_mul(mw_sym(u1), mw_sym(u2))));
        a = mw_set_twist(a, L.w_label);
        MWElement t1 = mw_transfer(L, a);
        CHECK(mw_equal(t1, mw_transfer_bass_tate(L, a)));
        CHECK(mw_equal(t1, mw_transfer_bass_tate(L, a, {gen_value(L, 1)})));
        CHECK(mw_equal(t1, mw_transfer_bass_tate(
                               L, a,
                               {v_add(gen_value(L, 0), gen_value(L, 1)),
                                gen_value(L, 1)})));
    }
}

TEST_CASE("identity extension transfers trivially") {
    FieldId F5 = field_GF(5);
    Extension E = trivial_extension(F5);
    MWElement a = mw_set_twist(
        mw_add(mw_sym(embed(v_int(F5, 2L), E.ext)),
               mw_mul(mw_eta(E.ext), mw_mul(mw_sym(embed(v_int(F5, 2L), E.ext)),
                                            mw_sym(embed(v_int(F5, 3L), E.ext))))),
        E.w_label);
    MWElement expect =
        mw_add(mw_sym(v_int(F5, 2L)),
               mw_mul(mw_eta(F5), mw_mul(mw_sym(v_int(F5, 2L)), mw_sym(v_int(F5, 3L)))));
    CHECK(mw_equal(mw_transfer(E, a), expect));
}

TEST_CASE("projection formula") {
    FieldId F3 = field_GF(3);
    MPoly f = mp_zero(F3, 1);
    mp_add_term(f, {2}, v_one(F3));
    mp_add_term(f, {0}, v_one(F3));
    Extension E = make_extension(F3, {f});
    FieldHom up;
    up.src = F3;
    up.dst = E.ext;
    set_factor_seed(7);
    std::mt19937_64 rng(7);
    for (int it = 0; it < 8; ++it) {
        MWElement sigma = mw_gw_gen(rand_unit(F3, rng));
        MWElement beta = mw_set_twist(mw_add(mw_gw_gen(rand_unit(E.ext, rng)),
                                             mw_gw_gen(rand_unit(E.ext, rng))),
                                      E.w_label);
        CHECK(mw_equal(mw_transfer(E, mw_mul(mw_base_change(up, sigma), beta)),
                       mw_mul(sigma, mw_transfer(E, beta))));
    }
}

TEST_CASE("reciprocity over GF(5)(t)") {
    FieldId F5 = field_GF(5);
    FieldId K = field_ratfunc(F5, "t");
    Value t = rf_make(K, up_x(F5), {v_one(F5)});
    CHECK(reciprocity_check(t).ok);
    Value f2 = v_sub(v_mul(t, t), v_int(K, 2L));
    auto r2 = reciprocity_check(f2);
    CHECK(r2.ok);
    REQUIRE(r2.perPlace.size() == 2);
    CHECK(mw_equal(r2.perPlace[0].transferred, mw_h(F5)));
    CHECK(mw_equal(r2.perPlace[1].transferred, mw_neg(mw_h(F5))));
    CHECK(reciprocity_check(v_int(K, 3L)).ok);
    set_factor_seed(11);
    std::mt19937_64 rng(11);
    for (int it = 0; it < 25; ++it) {
        UPoly num, den;
        for (int d = 0; d <= 2 + it % 3; ++d) num.push_back(rand_elem(F5, rng));
        for (int d = 0; d <= 1 + it % 2; ++d) den.push_back(rand_elem(F5, rng));
        num.push_back(v_one(F5));
        den.push_back(v_one(F5));
        Value f = rf_make(K, num, den);
        if (v_is_zero(f)) continue;
        CHECK(reciprocity_check(f).ok);
    }
}

TEST_CASE("reciprocity over Q(t) on factored inputs") {
    FieldId Q = field_Q();
    FieldId K = field_ratfunc(Q, "t");
    Value t = rf_make(K, up_x(Q), {v_one(Q)});
    Value f = v_sub(v_mul(t, t), v_int(K, 2L));
    CHECK(reciprocity_check(f).ok);
    CHECK(reciprocity_check(v_mul(f, v_add(t, v_int(K, 3L)))).ok);
}

TEST_CASE("quadratic degree normalizations") {
    FieldId F5 = field_GF(5);
    FieldId K = field_ratfunc(F5, "t");
    MWElement sigma = mw_gw_gen(v_int(F5, 2L));
    P1Divisor D;
    D.kt = K;
    D.at_infinity = sigma;
    CHECK(mw_equal(quadratic_degree(D), sigma));
    UPoly pi = {v_int(F5, -2L), v_zero(F5), v_one(F5)};
    Place x = make_place(K, pi);
    P1Divisor D2;
    D2.kt = K;
    D2.finite.push_back({x, mw_set_twist(mw_int(x.kappa, 1), x.kappa_ext->w_label)});
    CHECK(mw_equal(quadratic_degree(D2), mw_h(F5)));
}
