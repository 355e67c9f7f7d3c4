#include <catch2/catch_amalgamated.hpp>

#include <bps/models.hpp>
#include <bps/quiver.hpp>

#include "random_inputs.hpp"

using namespace bps;

TEST_CASE("quiver construction and counting") {
    Quiver q({"a", "b"}, {{1, 1}, {0, 1}, {0, 1}});
    CHECK(q.vertex_count() == 2);
    CHECK(q.arrow_count() == 3);
    CHECK(q.loop_count() == 1);
    CHECK(q.multiplicity(0, 1) == 2);
    CHECK(q.multiplicity(1, 0) == 0);
    CHECK(q.find_vertex("b") == 1);
    CHECK_THROWS_AS(q.find_vertex("c"), validation_error);
    CHECK_THROWS_AS(Quiver({"a"}, {{0, 1}}), validation_error);

    Quiver reordered({"a", "b"}, {{0, 1}, {1, 1}, {0, 1}});
    CHECK(q == reordered);
}

TEST_CASE("framed quiver family counts") {
    StandardQuiver q23 = build_standard(2, 3);
    CHECK(q23.quiver.vertex_count() == 7);
    CHECK(q23.quiver.arrow_count() == 18);
    CHECK(q23.quiver.loop_count() == 6);
    CHECK(q23.quiver.multiplicity(0, 3) == 3);
    CHECK(q23.quiver.label(0) == "0");
    CHECK(q23.quiver.label(4) == "(2,1)");
    CHECK(q23.lattice.weight(0) == 1);
    CHECK(q23.lattice.weight(3) == 3);
    CHECK(q23.lattice.weight(4) == 1);
    REQUIRE(q23.projection.has_value());

    StandardQuiver neg = build_standard(-2, 3);
    CHECK(neg.quiver.vertex_count() == 7);
    CHECK(neg.quiver.arrow_count() == 12);
    CHECK(neg.quiver.loop_count() == 0);

    StandardQuiver trivial = build_standard(0, 5);
    CHECK(trivial.quiver.vertex_count() == 1);
    CHECK(trivial.quiver.arrow_count() == 0);
    CHECK_FALSE(trivial.projection.has_value());

    CHECK_THROWS_AS(build_standard(1, 0), validation_error);
}

TEST_CASE("Euler form and its antisymmetrization") {
    StandardQuiver q12 = build_standard(1, 2);
    const Quiver& q = q12.quiver;
    CHECK(euler_form(q, {1, 0, 0}, {0, 1, 0}) == -1);
    CHECK(euler_form(q, {0, 1, 0}, {1, 0, 0}) == 0);
    CHECK(euler_form(q, {0, 1, 0}, {0, 1, 0}) == 0);
    CHECK(euler_form(q, {1, 0, 0}, {0, 0, 1}) == -2);
    CHECK_THROWS_AS(euler_form(q, {1, 0}, {0, 1, 0}), validation_error);

    testing::Rng rng(41);
    std::uniform_int_distribution<std::int64_t> coord(0, 3);
    for (int trial = 0; trial < 30; ++trial) {
        Class a{coord(rng), coord(rng), coord(rng)};
        Class b{coord(rng), coord(rng), coord(rng)};
        CHECK(q12.pairing.pair(a, b) == euler_form(q, b, a) - euler_form(q, a, b));
    }
}

TEST_CASE("conifold quiver pairing keeps only the framing arrow") {
    ConifoldModel model = conifold_center(4);
    CHECK(model.quiver.multiplicity(1, 2) == 2);
    CHECK(model.quiver.multiplicity(2, 1) == 2);
    CHECK(model.pairing.pair({1, 0, 0}, {0, 1, 0}) == 1);
    CHECK(model.pairing.pair({0, 1, 0}, {0, 0, 1}) == 0);
    CHECK(model.pairing.pair({1, 0, 0}, {0, 0, 1}) == 0);
    CHECK(model.pairing.is_invisible({0, 0, 2}));
    CHECK_FALSE(model.pairing.is_invisible({0, 1, 0}));
}

TEST_CASE("opposite quiver transposes the Euler form") {
    StandardQuiver q22 = build_standard(2, 2);
    Quiver op = opposite(q22.quiver);
    CHECK(opposite(op) == q22.quiver);
    CHECK(op.loop_count() == q22.quiver.loop_count());
    testing::Rng rng(42);
    std::uniform_int_distribution<std::int64_t> coord(0, 2);
    for (int trial = 0; trial < 20; ++trial) {
        Class a(5), b(5);
        for (auto& v : a) v = coord(rng);
        for (auto& v : b) v = coord(rng);
        CHECK(euler_form(op, a, b) == euler_form(q22.quiver, b, a));
    }
}

TEST_CASE("vertex restriction") {
    StandardQuiver q23 = build_standard(2, 3);
    RestrictedQuiver all = restrict_quiver(q23.quiver, {0, 1, 2, 3, 4, 5, 6});
    CHECK(all.quiver == q23.quiver);
    CHECK(all.embed({1, 2, 3, 4, 5, 6, 7}) == Class{1, 2, 3, 4, 5, 6, 7});

    RestrictedQuiver part = restrict_quiver(q23.quiver, {1, 0, 1});
    CHECK(part.quiver.vertex_count() == 2);
    CHECK(part.quiver.arrow_count() == 2);
    CHECK(part.quiver.loop_count() == 1);
    CHECK(part.quiver.label(1) == "(1,1)");
    CHECK(part.embed({2, 5}) == Class{2, 5, 0, 0, 0, 0, 0});
    CHECK_THROWS_AS(part.embed({1, 2, 3}), validation_error);

    RestrictedQuiver none = restrict_quiver(q23.quiver, {});
    CHECK(none.quiver.vertex_count() == 0);

    CHECK_THROWS_AS(restrict_quiver(q23.quiver, {7}), validation_error);
}

TEST_CASE("support classes below a target") {
    Spectrum base = d0d6_minus(1, 3);
    auto supp = gamma_support(base, {1, 2});
    CHECK(supp == std::vector<Class>{{0, 1}, {0, 2}, {1, 0}});

    // A candidate below the target is dropped when the complement is not a
    // sum of support classes.
    Lattice lat = x_lattice();
    Spectrum gapped(lat, SpectrumKind::omega, 4);
    gapped.set({1, 0}, 1);
    gapped.set({0, 2}, -1);
    CHECK(gamma_support(gapped, {1, 1}).empty());
    CHECK(gamma_support(gapped, {1, 2}) == std::vector<Class>{{0, 2}, {1, 0}});

    ConifoldModel model = conifold_center(6);
    auto conifold_supp = gamma_support(model.omega_minus, {1, 1, 1});
    CHECK(conifold_supp ==
          std::vector<Class>{{0, 0, 1}, {0, 1, 0}, {0, 1, 1}, {1, 0, 0}});

    CHECK_THROWS_AS(gamma_support(base, {1, -1}), validation_error);
    CHECK_THROWS_AS(gamma_support(base, {3, 3}, 10), enumeration_limit);
}

TEST_CASE("framed spectra rebuild the framed quiver") {
    for (int chi : {2, -2}) {
        Spectrum omega = d0d6_minus(chi, 3);
        BpsQuiver bq = build_bps_quiver(omega, x_pairing(), {1, 3});
        StandardQuiver sq = build_standard(chi, 3);
        CHECK(bq.quiver.vertex_count() == sq.quiver.vertex_count());
        CHECK(canonical_form(bq.quiver, bq.vertex_class, bq.vertex_copy) ==
              canonical_form(sq));
    }
}

TEST_CASE("single-class target gives a one-vertex quiver") {
    Spectrum omega = d0d6_minus(1, 3);
    BpsQuiver bq = build_bps_quiver(omega, x_pairing(), {1, 0});
    CHECK(bq.quiver.vertex_count() == 1);
    CHECK(bq.quiver.arrow_count() == 0);
    CHECK(bq.quiver.label(0) == "(1,0)#1");
    CHECK(bq.support == std::vector<Class>{{1, 0}});
}

TEST_CASE("quiver extraction rejects bad spectra") {
    Lattice lat = x_lattice();
    Spectrum fractional(lat, SpectrumKind::omega, 3);
    fractional.set({1, 1}, Rational(1, 2));
    CHECK_THROWS_AS(build_bps_quiver(fractional, x_pairing(), {1, 1}), validation_error);

    Spectrum wrong_kind(lat, SpectrumKind::dtbar, 3);
    wrong_kind.set({1, 0}, 1);
    CHECK_THROWS_AS(build_bps_quiver(wrong_kind, x_pairing(), {1, 0}), validation_error);
}

TEST_CASE("canonical form separates loop and loop-free families") {
    CHECK(canonical_form(build_standard(1, 2)) != canonical_form(build_standard(-1, 2)));
    CHECK(canonical_form(build_standard(2, 2)) != canonical_form(build_standard(2, 3)));
    CHECK_THROWS_AS(canonical_form(build_standard(0, 1)), validation_error);
}

TEST_CASE("DOT output is sorted and stable") {
    Quiver q({"b", "a"}, {{0, 0}, {1, 0}, {1, 0}});
    CHECK(export_dot(q) ==
          "digraph {\n"
          "  \"a\";\n"
          "  \"b\";\n"
          "  \"a\" -> \"b\";\n"
          "  \"a\" -> \"b\";\n"
          "  \"b\" -> \"b\";\n"
          "}\n");
    CHECK(export_dot(q) == export_dot(q));
}

TEST_CASE("projection intertwines pairings, charges, and reflections") {
    testing::Rng rng(43);
    for (int chi : {-2, -1, 1, 2}) {
        for (int n = 1; n <= 4; ++n) {
            StandardQuiver sq = build_standard(chi, n);
            REQUIRE(sq.projection.has_value());
            const LatticeMap& proj = *sq.projection;
            PairingForm xp = x_pairing();

            std::uniform_int_distribution<std::int64_t> coord(0, 2);
            for (int trial = 0; trial < 10; ++trial) {
                Class a(static_cast<std::size_t>(sq.lattice.rank()));
                Class b(static_cast<std::size_t>(sq.lattice.rank()));
                for (auto& v : a) v = coord(rng);
                for (auto& v : b) v = coord(rng);
                CHECK(sq.pairing.pair(a, b) == xp.pair(proj.apply(a), proj.apply(b)));
            }

            CentralCharge zq = standard_charge(sq, {1, 1}, {Rational(1, 3), 1});
            CentralCharge zx(x_lattice(), {{1, 1}, {Rational(1, 3), 1}});
            for (int i = 0; i < sq.lattice.rank(); ++i) {
                Class e = sq.lattice.basis(i);
                CHECK(zq.evaluate(e) == zx.evaluate(proj.apply(e)));
            }

            auto iq = standard_involution(sq);
            auto ix = x_involution();
            for (int i = 0; i < sq.lattice.rank(); ++i) {
                Class e = sq.lattice.basis(i);
                CHECK(apply_integer_matrix(proj.matrix(), apply_integer_matrix(iq, e)) ==
                      apply_integer_matrix(ix, proj.apply(e)));
            }
        }
    }
}
