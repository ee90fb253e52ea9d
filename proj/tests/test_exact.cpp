#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mwk/factor.hpp"

using namespace mwk;

TEST_CASE("finite field arithmetic") {
    FieldId F5 = field_GF(5);
    CHECK(v_eq(v_add(v_int(F5, 3), v_int(F5, 4)), v_int(F5, 2)));
    CHECK(v_eq(v_mul(v_int(F5, 2), v_int(F5, 3)), v_int(F5, 1)));
    CHECK(v_eq(v_inv(v_int(F5, 2)), v_int(F5, 3)));
    CHECK(v_is_zero(v_sub(v_int(F5, 7), v_int(F5, 2))));
    CHECK(v_eq(v_pow(v_int(F5, 2), 4), v_one(F5)));

    FieldId F9 = field_GF(3, 2);
    CHECK(field(F9).p == 3);
    CHECK(field(F9).e == 2);
    // Fermat: every unit has order dividing 8
    std::mt19937_64 rng(1);
    for (int i = 0; i < 10; ++i) CHECK(v_is_one(v_pow(rand_unit(F9, rng), 8)));
}

TEST_CASE("rational arithmetic normalizes immediately") {
    FieldId Q = field_Q();
    Value a = v_rat(Q, Rat(2, 4));
    Value b = v_rat(Q, Rat(1, 2));
    CHECK(v_eq(a, b));
    CHECK(v_eq(v_add(a, b), v_one(Q)));
    CHECK(v_eq(v_div(v_int(Q, 3), v_int(Q, -6)), v_rat(Q, Rat(-1, 2))));
    CHECK(v_str(v_rat(Q, Rat(-1, 2))) == v_str(v_rat(Q, Rat(2, -4))));
}

TEST_CASE("rational function field arithmetic") {
    FieldId F5 = field_GF(5);
    FieldId K = field_ratfunc(F5, "t");
    Value t = rf_make(K, up_x(F5), up_const(v_one(F5)));
    Value r = v_div(v_add(t, v_one(K)), t);
    Value back = v_mul(r, t);
    CHECK(v_eq(back, v_add(t, v_one(K))));
    CHECK(v_is_one(v_div(t, t)));
    CHECK(v_is_zero(v_sub(v_mul(t, t), v_mul(t, t))));
}

TEST_CASE("univariate factorization over small finite fields") {
    FieldId F5 = field_GF(5);
    UPoly f = {v_int(F5, -1), v_zero(F5), v_one(F5)};  // t^2 - 1
    Factorization fac = factor(f, F5);
    CHECK(fac.factors.size() == 2);
    for (const auto& [p, m] : fac.factors) {
        CHECK(up_deg(p) == 1);
        CHECK(m == 1);
    }
    UPoly g = {v_int(F5, -2), v_zero(F5), v_one(F5)};  // t^2 - 2
    CHECK(up_irreducible(g, F5));

    FieldId F2 = field_GF(2);
    UPoly h = {v_zero(F2), v_one(F2), v_zero(F2), v_zero(F2), v_one(F2)};  // t^4+t
    Factorization fh = factor(h, F2);
    // t(t+1)(t^2+t+1)
    CHECK(fh.factors.size() == 3);
    UPoly rebuilt = up_const(fh.unit);
    for (const auto& [p, m] : fh.factors)
        for (int i = 0; i < m; ++i) rebuilt = up_mul(rebuilt, p);
    CHECK(up_deg(rebuilt) == 4);
    for (int i = 0; i <= 4; ++i) CHECK(v_eq(rebuilt[i], h[i]));
}

TEST_CASE("factorization is deterministic under a fixed seed") {
    FieldId F7 = field_GF(7);
    UPoly f = {v_int(F7, 3), v_int(F7, 1), v_int(F7, 2), v_one(F7)};
    set_factor_seed(1234);
    Factorization a = factor(f, F7);
    set_factor_seed(1234);
    Factorization b = factor(f, F7);
    REQUIRE(a.factors.size() == b.factors.size());
    for (size_t i = 0; i < a.factors.size(); ++i) {
        CHECK(a.factors[i].second == b.factors[i].second);
        CHECK(up_str(a.factors[i].first, "t") == up_str(b.factors[i].first, "t"));
    }
}

TEST_CASE("square detection") {
    FieldId F5 = field_GF(5);
    CHECK(!is_square(v_int(F5, 2)));
    CHECK(is_square(v_int(F5, 4)));
    FieldId Q = field_Q();
    CHECK(is_square(v_rat(Q, Rat(4, 9))));
    CHECK(!is_square(v_int(Q, 2)));
    CHECK(!is_square(v_int(Q, -4)));
    FieldId K = field_ratfunc(F5, "t");
    Value t = rf_make(K, up_x(F5), up_const(v_one(F5)));
    CHECK(is_square(v_mul(v_mul(t, t), v_int(K, 4))));
    CHECK(!is_square(t));
}

TEST_CASE("rational-root factorization over Q") {
    FieldId Q = field_Q();
    // (t-1)(t+2)(t^2+1) = t^4 + t^3 - t^2 + t - 2
    UPoly f = {v_int(Q, -2), v_int(Q, 1), v_int(Q, -1), v_int(Q, 1), v_one(Q)};
    Factorization fac = factor(f, Q);
    int lin = 0, quad = 0;
    for (const auto& [p, m] : fac.factors) {
        CHECK(m == 1);
        if (up_deg(p) == 1) ++lin;
        if (up_deg(p) == 2) ++quad;
    }
    CHECK(lin == 2);
    CHECK(quad == 1);
}
