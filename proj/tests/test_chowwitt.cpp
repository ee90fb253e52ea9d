#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mwk/chowwitt.hpp"
#include "mwk/factor.hpp"

using namespace mwk;

static MWElement embed_mw(const MWElement& a, FieldId kt) {
    MWElement out = mw_zero(kt, a.n);
    for (const auto& w : a.terms) {
        std::vector<Value> u;
        for (const auto& x : w.u) u.push_back(embed(x, kt));
        out = mw_add(out, mw_word(kt, w.c, w.r, u));
    }
    return out;
}

static FieldId F5 = field_GF(5);
static FieldId K = field_ratfunc(F5, "t");
static Value tvar() { return rf_make(K, up_x(F5), {v_one(F5)}); }

TEST_CASE("quadratic divisor of a symbol") {
    Curve C = curve_P1(K, 0);
    Value t = tvar();
    Value f = v_mul(t, v_sub(t, v_one(K)));
    QuadraticDivisor D = tdiv(mw_sym(f), C);
    CHECK(D.q == 0);
    REQUIRE(D.finite.size() == 2);
    for (const auto& pc : D.finite) {
        CHECK(pc.v.degree == 1);
        CHECK(mw_equal(pc.coeff, mw_set_twist(mw_int(F5, 1), "nu" + pc.v.label)));
    }
    REQUIRE(D.at_infinity.has_value());
    CHECK(mw_equal(*D.at_infinity, mw_neg(mw_h(F5))));
    CHECK(mw_is_zero(pb1_class(D).mw));

    QuadraticDivisor D0 = tdiv(mw_sym(v_int(K, 2L)), C);
    CHECK(D0.finite.empty());
    CHECK(!D0.at_infinity);

    QuadraticDivisor D2 = tdiv(mw_sym(v_mul(f, f)), C);
    for (const auto& pc : D2.finite) CHECK(gw_rank(mw_mu_prime(pc.coeff)) == 2);
}

TEST_CASE("projective line invariant: normalization and principal vanishing") {
    Value t = tvar();
    MWElement sigma = mw_add(mw_sym(v_int(F5, 2L)),
                             mw_mul(mw_eta(F5), mw_mul(mw_sym(v_int(F5, 2L)),
                                                       mw_sym(v_int(F5, 3L)))));
    QuadraticDivisor D;
    D.curve = curve_P1(K, -2);
    D.q = 1;
    D.at_infinity = sigma;
    CHECK(mw_equal(pb1_class(D).mw, sigma));

    set_factor_seed(5);
    std::mt19937_64 rng(5);
    for (int d = -2; d <= 2; ++d) {
        Curve C = curve_P1(K, d);
        for (int it = 0; it < 6; ++it) {
            UPoly num = {rand_elem(F5, rng), rand_elem(F5, rng), v_one(F5)};
            UPoly den = {rand_elem(F5, rng), v_one(F5)};
            Value fv = rf_make(K, num, den);
            if (v_is_zero(fv)) continue;
            Value g = v_add(t, v_int(K, 1L + it % 3));
            for (MWElement tau : {mw_sym(fv), mw_mul(mw_sym(fv), mw_sym(g)),
                                  mw_mul(mw_eta(K), mw_sym(fv))}) {
                PB1Class cls = pb1_class(tdiv(tau, C));
                if (cls.even) {
                    CHECK(mw_is_zero(cls.mw));
                } else {
                    CHECK(km_is_zero(cls.km));
                    CHECK(cls.degree == 0);
                }
            }
        }
    }
}

TEST_CASE("odd twist degree: the invariant is an integer degree") {
    QuadraticDivisor D;
    D.curve = curve_P1(K, -1);
    D.q = 0;
    Place x = make_place(K, {v_zero(F5), v_one(F5)});
    D.finite.push_back({x, mw_set_twist(mw_gw_gen(v_int(F5, 2L)), "nu" + x.label)});
    PB1Class cls = pb1_class(D);
    CHECK(!cls.even);
    CHECK(cls.degree == 1);
}

TEST_CASE("affine decomposition") {
    Value t = tvar();
    auto d1 = a1_decompose(mw_sym(v_int(K, 2L)));
    CHECK(mw_equal(d1.constant, mw_sym(v_int(F5, 2L))));
    CHECK(d1.divisor.finite.empty());

    MWElement tau = mw_add(mw_sym(v_int(F5, 3L)),
                           mw_mul(mw_eta(F5), mw_mul(mw_sym(v_int(F5, 2L)),
                                                     mw_sym(v_int(F5, 2L)))));
    auto d2 = a1_decompose(embed_mw(tau, K));
    CHECK(mw_equal(d2.constant, tau));
    CHECK(d2.divisor.finite.empty());

    Place pt = make_place(K, {v_zero(F5), v_one(F5)});
    CHECK(mw_is_zero(mw_specialize_pi(mw_sym(t), pt, t)));

    set_factor_seed(9);
    std::mt19937_64 rng(9);
    for (int it = 0; it < 10; ++it) {
        UPoly num = {rand_elem(F5, rng), rand_elem(F5, rng), v_one(F5)};
        Value fv = rf_make(K, num, {v_one(F5)});
        MWElement sigma = mw_add(mw_sym(fv), mw_scale(2, mw_sym(v_add(t, v_one(K)))));
        auto dec = a1_decompose(sigma);
        MWElement red = mw_sub(sigma, embed_mw(dec.constant, K));
        CHECK(mw_is_zero(mw_specialize(red, dec.at)));
        QuadraticDivisor Dred = tdiv(red, curve_A1(K));
        REQUIRE(Dred.finite.size() == dec.divisor.finite.size());
        for (size_t i = 0; i < Dred.finite.size(); ++i)
            CHECK(mw_equal(Dred.finite[i].coeff, dec.divisor.finite[i].coeff));
    }
}

TEST_CASE("localization residues restrict the divisor") {
    Curve C = curve_P1(K, 0);
    Value t = tvar();
    Value f = v_sub(v_mul(t, t), v_int(K, 2L));
    MWElement sigma = mw_sym(f);
    Place vinf = place_infinity(K);
    Place p0 = make_place(K, {v_zero(F5), v_one(F5)});
    auto res = localization_residue(sigma, {vinf, p0}, C);
    QuadraticDivisor D = tdiv(sigma, C);
    REQUIRE(res.size() == 2);
    CHECK(mw_equal(res[0].coeff, *D.at_infinity));
    CHECK(mw_is_zero(res[1].coeff));
}

TEST_CASE("forgetful and hyperbolic divisor maps") {
    ZeroCycle z;
    z.curve = curve_P1(K, -2);
    z.finite.push_back({make_place(K, {v_int(F5, -2L), v_zero(F5), v_one(F5)}), 3});
    z.at_infinity = 1;
    QuadraticDivisor H = hyper_divisor(z);
    ZeroCycle z2 = forget_divisor(H);
    REQUIRE(z2.finite.size() == 1);
    CHECK(z2.finite[0].mult == 6);
    CHECK(z2.at_infinity == 2);
    CHECK(cycle_degree(z2) == 2 * cycle_degree(z));

    QuadraticDivisor D = H;
    Place x = make_place(K, {v_int(F5, 2L), v_one(F5)});
    D.finite.push_back({x, mw_set_twist(mw_gw_gen(v_int(F5, 2L)), "nu" + x.label)});
    PB1Class cls = pb1_class(D);
    CHECK(gw_rank(mw_mu_prime(cls.mw)) == cycle_degree(forget_divisor(D)));
}

TEST_CASE("divisors on a discrete valuation ring are principal") {
    Place v = make_place(K, {v_int(F5, -2L), v_zero(F5), v_one(F5)});
    Curve C = curve_SpecOv(v);
    set_factor_seed(3);
    std::mt19937_64 rng(3);
    for (int it = 0; it < 8; ++it) {
        Value u1 = rand_unit(v.kappa, rng);
        Value u2 = rand_unit(v.kappa, rng);
        MWElement c = mw_add(mw_sym(u1),
                             mw_mul(mw_eta(v.kappa), mw_mul(mw_sym(u1), mw_sym(u2))));
        c = mw_set_twist(c, "nu" + v.label);
        MWElement sigma = dvr_lift(v, c);
        QuadraticDivisor D = tdiv(sigma, C);
        REQUIRE(D.finite.size() == 1);
        CHECK(mw_equal(D.finite[0].coeff, c));
    }
}

TEST_CASE("divisor serialization shape") {
    Curve C = curve_P1(K, 0);
    Value t = tvar();
    Value f = v_mul(t, v_sub(t, v_one(K)));
    std::string js = divisor_json(tdiv(mw_sym(f), C));
    CHECK(js.find("\"inf\"") != std::string::npos);
    CHECK(js.find("twist") != std::string::npos);
    CHECK(js.find("coefficient") != std::string::npos);
}
