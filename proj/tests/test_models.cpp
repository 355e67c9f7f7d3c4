#include <catch2/catch_amalgamated.hpp>

#include <bps/models.hpp>
#include <bps/stability.hpp>

#include "random_inputs.hpp"

using namespace bps;

TEST_CASE("Cartan data validation") {
    CHECK_THROWS_AS(CartanData({{2, -1}, {-1, 2}, {0, 0, 0}}, {1, 1}), validation_error);
    CHECK_THROWS_AS(CartanData({{2, 0}, {0, 3}}, {1, 1}), validation_error);
    CHECK_THROWS_AS(CartanData({{2, -1}, {-2, 2}}, {1, 1}), validation_error);
    CHECK_THROWS_AS(CartanData({{2, -2}, {-2, 2}}, {1, 2}), validation_error);
    CHECK_THROWS_AS(CartanData({{2, -1}, {-1, 2}}, {1, 1}), validation_error);
    CHECK_NOTHROW(CartanData({{2, -2}, {-2, 2}}, {1, 1}));
    CHECK_NOTHROW(CartanData({{2, -2}, {-2, 2}}, {2, 2}));
}

TEST_CASE("cyclic Cartan matrices") {
    CartanData two = affine_a_cartan(2);
    CHECK(two.matrix == std::vector<std::vector<std::int64_t>>{{2, -2}, {-2, 2}});
    CHECK(two.delta == Class{1, 1});

    CartanData three = affine_a_cartan(3);
    CHECK(three.matrix ==
          std::vector<std::vector<std::int64_t>>{{2, -1, -1}, {-1, 2, -1}, {-1, -1, 2}});

    CHECK_THROWS_AS(affine_a_cartan(1), validation_error);
}

TEST_CASE("Tits form values") {
    CartanData three = affine_a_cartan(3);
    CHECK(tits_form(three, {1, 0, 0}) == 1);
    CHECK(tits_form(three, {1, 1, 0}) == 1);
    CHECK(tits_form(three, {2, 1, 1}) == 1);
    CHECK(tits_form(three, {1, 1, 1}) == 0);
    CHECK(tits_form(three, {2, 2, 2}) == 0);
    CHECK(tits_form(three, {2, 0, 0}) == 4);
    CHECK_THROWS_AS(tits_form(three, {1, -1, 0}), validation_error);
    CHECK_THROWS_AS(tits_form(three, {1, 0}), validation_error);
}

TEST_CASE("real root enumeration matches a cone scan") {
    CartanData two = affine_a_cartan(2);
    CHECK(real_roots(two, 6) ==
          std::vector<Class>{{0, 1}, {1, 0}, {1, 2}, {2, 1}, {2, 3}, {3, 2}});

    CartanData three = affine_a_cartan(3);
    std::vector<Class> roots = real_roots(three, 6);
    std::vector<Class> scan;
    for (const Class& a : enumerate_cone(Lattice::with_unit_weights(3), 6))
        if (tits_form(three, a) == 1) scan.push_back(a);
    CHECK(roots == scan);

    // Adding the isotropic generator preserves the root property.
    Lattice lat = Lattice::with_unit_weights(3);
    for (const Class& a : roots) {
        Class shifted = add_classes(a, three.delta);
        if (lat.ell(shifted) > 6) continue;
        CHECK(std::binary_search(roots.begin(), roots.end(), shifted, ClassLess{}));
    }

    CHECK_THROWS_AS(real_roots(three, 20, 100), enumeration_limit);
}

TEST_CASE("sign words") {
    SigmaWord w = SigmaWord::parse("++-");
    CHECK(w.length() == 3);
    CHECK(w.assignment() == std::vector<int>{1, 1, -1});
    CHECK(w.plus_count() == 2);
    CHECK(w.loop_vertices() == std::vector<bool>{false, true, false});

    CHECK(SigmaWord::parse("++").loop_vertices() == std::vector<bool>{true, true});
    CHECK(SigmaWord::parse("+-").loop_vertices() == std::vector<bool>{false, false});

    CHECK_THROWS_AS(SigmaWord::parse("+x"), validation_error);
    CHECK_THROWS_AS(SigmaWord::parse("+"), validation_error);
    CHECK_THROWS_AS(SigmaWord(std::vector<int>{1, 2}), validation_error);
}

TEST_CASE("framed cyclic initial spectrum") {
    Spectrum loops = affineA_initial(SigmaWord::parse("++"), 4);
    CHECK(loops.value({1, 0, 0}) == 1);
    CHECK(loops.value({0, 1, 1}) == -2);
    CHECK(loops.value({0, 2, 2}) == -2);
    CHECK(loops.value({0, 1, 0}) == 1);
    CHECK(loops.value({0, 2, 1}) == 1);
    CHECK(loops.size() == 7);

    // Without loop vertices every real root has odd total dimension, so the
    // sign flips on all of them.
    Spectrum flipped = affineA_initial(SigmaWord::parse("+-"), 4);
    CHECK(flipped.value({0, 1, 0}) == -1);
    CHECK(flipped.value({0, 2, 1}) == -1);
    CHECK(flipped.value({0, 1, 1}) == -2);
    CHECK(flipped.value({1, 0, 0}) == 1);

    Spectrum mixed = affineA_initial(SigmaWord::parse("++-"), 4);
    CHECK(mixed.value({0, 0, 1, 0}) == 1);
    CHECK(mixed.value({0, 1, 1, 0}) == -1);
    CHECK(mixed.value({0, 1, 0, 0}) == -1);
    CHECK(mixed.value({0, 1, 1, 1}) == -3);
}

TEST_CASE("framed McKay initial spectrum") {
    CartanData three = affine_a_cartan(3);
    Spectrum s = mckay_initial(three, 4);
    CHECK(s.value({1, 0, 0, 0}) == 1);
    CHECK(s.value({0, 1, 1, 1}) == -3);
    CHECK(s.value({0, 1, 0, 0}) == -1);
    CHECK(s.value({0, 1, 1, 0}) == -1);
    CHECK(s.value({0, 2, 1, 1}) == -1);
    CHECK(s.size() == 11);
}

TEST_CASE("potential-point initial spectrum") {
    Spectrum s = zero_minus_two_initial(2, 5);
    CHECK(s.value({1, 0, 0}) == 1);
    CHECK(s.value({0, 1, 1}) == -2);
    CHECK(s.value({0, 2, 2}) == -2);
    CHECK(s.value({0, 0, 1}) == 2);
    CHECK(s.value({0, 1, 0}) == 2);
    CHECK(s.value({0, 2, 3}) == 2);
    CHECK(s.value({0, 3, 2}) == 2);
    CHECK(s.size() == 9);
    CHECK_THROWS_AS(zero_minus_two_initial(1, 5), validation_error);

    // The conifold spectrum has the same support with the off-diagonal
    // values replaced by 1.
    ConifoldModel model = conifold_center(5);
    CHECK(model.omega_minus.support() == s.support());
    for (const auto& [g, v] : model.omega_minus.entries())
        CHECK(v == (g[0] == 1 ? Rational(1) : (g[1] == g[2] ? Rational(-2) : Rational(1))));
}

TEST_CASE("conifold chamber data") {
    ConifoldModel model = conifold_center(6);
    CHECK(model.omega_minus.value({1, 0, 0}) == 1);
    CHECK(model.omega_minus.value({0, 1, 1}) == -2);
    CHECK(model.omega_minus.value({0, 0, 1}) == 1);
    CHECK(model.omega_minus.value({0, 1, 0}) == 1);
    CHECK(model.omega_minus.value({0, 3, 2}) == 1);
    CHECK(model.omega_minus.size() == 10);

    RationalComplex z = model.center.evaluate({1, 1, 1});
    CHECK(z.re == 1);
    CHECK(z.im == 3);

    CHECK(validate_generic(model.center, model.pairing,
                           model.omega_minus.support()).empty());
    CHECK(validate_generic(conifold_plus_charge(), model.pairing,
                           model.omega_minus.support()).empty());
}

TEST_CASE("rank-2 chamber data") {
    Spectrum s = d0d6_minus(2, 4);
    CHECK(s.value({1, 0}) == 1);
    CHECK(s.value({0, 1}) == -2);
    CHECK(s.value({0, 4}) == -2);
    CHECK(s.size() == 5);

    CHECK(d0d6_minus(0, 4).size() == 1);

    Spectrum negative = d0d6_minus(-1, 3);
    CHECK(negative.value({0, 2}) == 1);

    CHECK(x_charge_minus().evaluate({1, 0}).re == 1);
    CHECK(x_charge_plus().evaluate({1, 0}).re == -1);
    CHECK(validate_generic(x_charge_minus(), x_pairing(), s.support()).empty());
}

TEST_CASE("framed quiver chamber data") {
    Spectrum s = quiver_minus(1, 3, 3);
    StandardQuiver sq = build_standard(1, 3);
    CHECK(s.value(sq.lattice.basis(0)) == 1);
    CHECK(s.value(sq.lattice.basis(1)) == -1);
    CHECK(s.value(sq.lattice.basis(3)) == -1);
    CHECK(s.size() == 4);

    Spectrum neg = quiver_minus(-2, 2);
    CHECK(neg.value(neg.lattice().basis(1)) == 1);
    CHECK(neg.value(neg.lattice().basis(4)) == 1);
    CHECK(neg.size() == 5);

    CHECK(quiver_minus(0, 3).size() == 1);
}

TEST_CASE("reflections square to the identity") {
    testing::Rng rng(51);
    std::uniform_int_distribution<std::int64_t> coord(-5, 5);

    auto involutes = [&](const std::vector<std::vector<std::int64_t>>& m, std::size_t rank) {
        for (int trial = 0; trial < 20; ++trial) {
            Class g(rank);
            for (auto& v : g) v = coord(rng);
            CHECK(apply_integer_matrix(m, apply_integer_matrix(m, g)) == g);
        }
    };

    involutes(x_involution(), 2);
    involutes(conifold_involution(), 3);
    involutes(standard_involution(build_standard(2, 3)), 7);

    CHECK(apply_integer_matrix(x_involution(), {1, 3}) == Class{2, 3});
    CHECK(apply_integer_matrix(conifold_involution(), {1, 2, 5}) == Class{1, 2, 5});
    CHECK(apply_integer_matrix(standard_involution(build_standard(1, 2)), {1, 1, 1}) ==
          Class{2, 1, 1});
}
