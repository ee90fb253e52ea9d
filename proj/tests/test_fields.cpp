#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mwk/extension.hpp"
#include "mwk/factor.hpp"
#include "mwk/place.hpp"

using namespace mwk;

TEST_CASE("triangular extension towers") {
    FieldId F5 = field_GF(5);
    // F5[a,b]/(a^2-2, b^2-a), degree 4
    MPoly f1 = mp_zero(F5, 2);
    mp_add_term(f1, {2, 0}, v_one(F5));
    mp_add_term(f1, {0, 0}, v_int(F5, -2));
    MPoly f2 = mp_zero(F5, 2);
    mp_add_term(f2, {0, 2}, v_one(F5));
    mp_add_term(f2, {1, 0}, v_int(F5, -1));
    Extension E = make_extension(F5, {f1, f2}, {"a", "b"});
    CHECK(E.degree == 4);
    CHECK(E.separable);
    Value b = gen_value(E, 1);
    // b^4 = a^2 = 2
    CHECK(v_eq(v_pow(b, 4), v_int(E.ext, 2)));

    // scaling a defining polynomial changes the distinguished unit, not the field
    MPoly s1 = mp_scale(v_int(F5, 3), f1);
    Extension Es = make_extension(F5, {s1, f2}, {"a", "b"});
    CHECK(Es.degree == 4);
    CHECK(!v_eq(Es.w_unit, E.w_unit));
}

TEST_CASE("etale unit and nested towers") {
    FieldId F3 = field_GF(3);
    MPoly q = mp_zero(F3, 1);
    mp_add_term(q, {2}, v_one(F3));
    mp_add_term(q, {0}, v_one(F3));  // x^2 + 1
    Extension F9 = make_extension(F3, {q}, {"x"});
    // f'(x) = 2x
    CHECK(v_eq(etale_unit(F9), v_mul(v_int(F9.ext, 2), gen_value(F9, 0))));

    MPoly f1 = mp_zero(F3, 2);
    mp_add_term(f1, {2, 0}, v_one(F3));
    mp_add_term(f1, {0, 0}, v_one(F3));
    MPoly f2 = mp_zero(F3, 2);
    mp_add_term(f2, {0, 2}, v_one(F3));
    mp_add_term(f2, {1, 0}, v_int(F3, -1));
    mp_add_term(f2, {0, 0}, v_int(F3, -1));
    Extension E = make_extension(F3, {f1, f2}, {"x", "y"});
    NestedTower nt = nested_tower(E);
    CHECK(nt.steps.size() == 2);
    // the flat-to-top map is a field isomorphism on arithmetic expressions
    Value y = gen_value(E, 1);
    Value img = hom_apply(nt.flat_to_top, v_pow(y, 4));
    Value img2 = v_pow(hom_apply(nt.flat_to_top, y), 4);
    CHECK(v_eq(img, img2));
}

TEST_CASE("homomorphisms compose and embed") {
    FieldId F3 = field_GF(3);
    FieldId F9 = field_GF(3, 2);
    FieldHom emb{F3, F9, std::nullopt, {}, nullptr};
    CHECK(v_eq(hom_apply(emb, v_int(F3, 2)), v_int(F9, 2)));

    FieldId Ks = field_ratfunc(F3, "s");
    FieldId Kt = field_ratfunc(F3, "t");
    Value t = rf_make(Kt, up_x(F3), up_const(v_one(F3)));
    FieldHom sub{Ks, Kt, v_mul(t, t), {}, nullptr};
    Value s = rf_make(Ks, up_x(F3), up_const(v_one(F3)));
    CHECK(v_eq(hom_apply(sub, v_add(s, v_one(Ks))),
               v_add(v_mul(t, t), v_one(Kt))));
}

TEST_CASE("places of a rational function field") {
    FieldId F5 = field_GF(5);
    FieldId K = field_ratfunc(F5, "t");
    Value a = rf_make(K, UPoly{v_int(F5, -2), v_zero(F5), v_one(F5)},
                      up_const(v_one(F5)));  // t^2 - 2
    auto sup = support_places(a);
    REQUIRE(sup.size() >= 1);
    bool found = false;
    for (const auto& v : sup)
        if (!v.infinite && v.degree == 2 && place_val(v, a) == 1) found = true;
    CHECK(found);

    Place pinf = place_infinity(K);
    CHECK(place_val(pinf, a) == -2);
    Value r = rf_make(K, UPoly{v_int(F5, 1), v_int(F5, 2)},
                      UPoly{v_int(F5, 3), v_int(F5, 1)});  // (2t+1)/(t+3)
    CHECK(v_eq(place_reduce(pinf, r), v_int(F5, 2)));

    Place p2 = make_place(K, UPoly{v_int(F5, -2), v_zero(F5), v_one(F5)});
    Value red = place_reduce(
        p2, rf_make(K, UPoly{v_int(F5, 1), v_int(F5, 1)}, up_const(v_one(F5))));
    CHECK(v_eq(place_reduce(p2, place_lift(p2, red)), red));

    // a degree-1 place avoiding given units
    Value tt = rf_make(K, up_x(F5), up_const(v_one(F5)));
    Value t1 = rf_make(K, UPoly{v_int(F5, -1), v_one(F5)}, up_const(v_one(F5)));
    Place gp = good_place(K, {tt, t1});
    CHECK(place_val(gp, tt) == 0);
    CHECK(place_val(gp, t1) == 0);
}

TEST_CASE("monic irreducible enumeration") {
    FieldId F3 = field_GF(3);
    CHECK(monic_irreducibles(F3, 1).size() == 3);
    CHECK(monic_irreducibles(F3, 2).size() == 3);  // (9 - 3) / 2
    for (const auto& p : monic_irreducibles(F3, 2)) CHECK(up_irreducible(p, F3));
}

TEST_CASE("canonical comparison unit for stacked extensions") {
    FieldId F5 = field_GF(5);
    MPoly f1 = mp_zero(F5, 2);
    mp_add_term(f1, {2, 0}, v_one(F5));
    mp_add_term(f1, {0, 0}, v_int(F5, -2));
    MPoly f2 = mp_zero(F5, 2);
    mp_add_term(f2, {0, 2}, v_one(F5));
    mp_add_term(f2, {1, 0}, v_int(F5, -1));
    Extension E = make_extension(F5, {f1, f2}, {"a", "b"});
    Extension Ek = make_extension(F5, {mp_from_up(mp_to_up(f1, 0), F5, 1, 0)}, {"a"});
    MPoly g2 = mp_zero(Ek.ext, 1);
    mp_add_term(g2, {2}, v_one(Ek.ext));
    mp_add_term(g2, {0}, v_neg(gen_value(Ek, 0)));
    Extension LE = make_extension(Ek.ext, {g2}, {"b"});
    Value u = compose_canonical(LE, Ek, E);
    CHECK(!v_is_zero(u));
}
