#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include <bps/engine.hpp>
#include <bps/models.hpp>
#include <bps/oracle.hpp>
#include <bps/quiver.hpp>

#include "random_inputs.hpp"

using namespace bps;

namespace {

using Clock = std::chrono::steady_clock;

struct Gate {
    bool all_pass = true;

    // limit < 0 means the criterion carries no time budget of its own.
    void report(int index, const std::string& name, bool pass, double seconds, double limit) {
        bool ok = pass && (limit < 0 || seconds < limit);
        if (!ok) all_pass = false;
        std::string budget = limit < 0 ? "" : " (limit " + format_seconds(limit) + ")";
        std::printf("criterion %2d: %s  %7.3fs%s  %s\n", index, ok ? "PASS" : "FAIL", seconds,
                    budget.c_str(), name.c_str());
        std::fflush(stdout);
    }

    static std::string format_seconds(double s) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%gs", s);
        return buf;
    }
};

double elapsed(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

Spectrum cross_d0d6(std::int64_t chi, std::int64_t level) {
    return wall_cross(d0d6_minus(chi, level), x_charge_minus(), x_charge_plus(), x_pairing(),
                      level);
}

bool symmetric_under(const Spectrum& s, const std::vector<std::vector<std::int64_t>>& m) {
    return check_symmetry(s, [&m](const Class& g) { return apply_integer_matrix(m, g); }).ok;
}

} // namespace

int main() {
    Gate gate;

    // 1: vertex, arrow, and loop counts of the framed quiver family.
    {
        auto t = Clock::now();
        StandardQuiver plus = build_standard(2, 3);
        StandardQuiver minus = build_standard(-2, 3);
        bool pass = plus.quiver.vertex_count() == 7 &&
                    plus.quiver.arrow_count() - plus.quiver.loop_count() == 12 &&
                    plus.quiver.loop_count() == 6 && minus.quiver.vertex_count() == 7 &&
                    minus.quiver.arrow_count() == 12 && minus.quiver.loop_count() == 0;
        gate.report(1, "framed quiver vertex/arrow/loop counts", pass, elapsed(t), 1.0);
    }

    // 2: the projection intertwines pairings and both chamber charges.
    {
        auto t = Clock::now();
        bool pass = true;
        for (int chi : {-2, -1, 1, 2}) {
            for (int n = 1; n <= 4; ++n) {
                StandardQuiver sq = build_standard(chi, n);
                if (!sq.projection) {
                    pass = false;
                    continue;
                }
                const LatticeMap& proj = *sq.projection;
                PairingForm xp = x_pairing();
                CentralCharge zq_minus = standard_charge(sq, {1, 1}, {0, 1});
                CentralCharge zq_plus = standard_charge(sq, {-1, 1}, {0, 1});
                CentralCharge zx_minus = x_charge_minus();
                CentralCharge zx_plus = x_charge_plus();
                for (int i = 0; i < sq.lattice.rank(); ++i) {
                    Class ei = sq.lattice.basis(i);
                    Class pi = proj.apply(ei);
                    pass = pass && zq_minus.evaluate(ei) == zx_minus.evaluate(pi) &&
                           zq_plus.evaluate(ei) == zx_plus.evaluate(pi);
                    for (int j = 0; j < sq.lattice.rank(); ++j)
                        pass = pass && sq.pairing.pair(ei, sq.lattice.basis(j)) ==
                                           xp.pair(pi, proj.apply(sq.lattice.basis(j)));
                }
            }
        }
        gate.report(2, "projection intertwines pairings and charges", pass, elapsed(t), 1.0);
    }

    // 3: the rank-one row of the crossed spectrum equals the signed plane
    // partition series coefficients.
    std::vector<Spectrum> crossed_rank2;
    {
        auto t = Clock::now();
        bool pass = true;
        for (std::int64_t chi : {std::int64_t(-1), std::int64_t(1), std::int64_t(2)}) {
            Spectrum plus = cross_d0d6(chi, 5);
            std::vector<Rational> row = macmahon(chi, 4);
            for (std::int64_t n = 0; n <= 4; ++n)
                pass = pass && plus.value({1, n}) == row[static_cast<std::size_t>(n)];
            crossed_rank2.push_back(std::move(plus));
        }
        gate.report(3, "rank-one crossing row matches the series", pass, elapsed(t), 30.0);
    }

    // 4: crossing commutes with the fiber-summing projection, and the
    // rank-one invariants upstairs match the closed-form count.
    Spectrum quiver_plus(Lattice::with_unit_weights(1), SpectrumKind::omega, 0);
    Spectrum projected_plus(Lattice::with_unit_weights(1), SpectrumKind::omega, 0);
    {
        auto t = Clock::now();
        StandardQuiver sq = build_standard(1, 3);
        const LatticeMap& proj = *sq.projection;
        Spectrum omega_q = quiver_minus(1, 3, 3);
        quiver_plus = wall_cross(omega_q, standard_charge(sq, {1, 1}, {0, 1}),
                                 standard_charge(sq, {-1, 1}, {0, 1}), sq.pairing, 3);
        projected_plus = wall_cross(pushforward(omega_q, proj), x_charge_minus(),
                                    x_charge_plus(), x_pairing(), 3);
        bool pass = pushforward(quiver_plus, proj) == projected_plus;

        Lattice fiber(3, {1, 2, 3});
        std::vector<Class> counts = enumerate_cone(fiber, 2);
        counts.push_back({0, 0, 0});
        for (const Class& n : counts) {
            Class g = {1, n[0], n[1], n[2]};
            pass = pass && quiver_plus.value(g) == Rational(framed_rank1(1, 3, n));
        }
        gate.report(4, "crossing commutes with fiber summing; rank-one counts match", pass,
                    elapsed(t), 60.0);
    }

    // The conifold crossing feeds criteria 5, 6, and 7; its runtime is
    // charged to criterion 7.
    ConifoldModel conifold = conifold_center(6);
    auto conifold_timer = Clock::now();
    Spectrum conifold_plus = wall_cross(conifold.omega_minus, conifold.center,
                                        conifold_plus_charge(), conifold.pairing, 6);
    double conifold_seconds = elapsed(conifold_timer);

    // 5: every crossed invariant above is an integer.
    {
        auto t = Clock::now();
        bool pass = true;
        for (const Spectrum& s : crossed_rank2) pass = pass && check_integrality(s).ok;
        pass = pass && check_integrality(quiver_plus).ok;
        pass = pass && check_integrality(projected_plus).ok;
        pass = pass && check_integrality(conifold_plus).ok;
        gate.report(5, "all crossed invariants are integers", pass, elapsed(t), -1.0);
    }

    // 6: reflection symmetry of the crossed spectra on all testable classes.
    {
        auto t = Clock::now();
        bool pass = true;
        for (const Spectrum& s : crossed_rank2) pass = pass && symmetric_under(s, x_involution());
        pass = pass && symmetric_under(conifold_plus, conifold_involution());
        gate.report(6, "crossed spectra respect the reflection symmetry", pass, elapsed(t),
                    60.0);
    }

    // 7: the conifold run is generic, integral, and symmetric.
    {
        auto t = Clock::now();
        bool pass =
            validate_generic(conifold.center, conifold.pairing,
                             conifold.omega_minus.support())
                .empty() &&
            validate_generic(conifold_plus_charge(), conifold.pairing, conifold_plus.support())
                .empty() &&
            check_integrality(conifold_plus).ok &&
            symmetric_under(conifold_plus, conifold_involution());
        gate.report(7, "conifold crossing is generic, integral, symmetric", pass,
                    conifold_seconds + elapsed(t), 60.0);
    }

    // 8: two-class splitting plus factorization roundtrips on random data.
    {
        auto t = Clock::now();
        Spectrum pentagon(x_lattice(), SpectrumKind::omega, 6);
        pentagon.set({1, 0}, 1);
        pentagon.set({0, 1}, 1);
        Spectrum pentagon_plus =
            wall_cross(pentagon, x_charge_minus(), x_charge_plus(), x_pairing(), 6);
        Spectrum expected(x_lattice(), SpectrumKind::omega, 6);
        expected.set({1, 0}, 1);
        expected.set({1, 1}, 1);
        expected.set({0, 1}, 1);
        bool pass = pentagon_plus == expected;

        testing::Rng rng(88);
        int done = 0;
        while (done < 20) {
            int rank = 1 + static_cast<int>(rng() % 3);
            std::int64_t level = 1 + static_cast<std::int64_t>(rng() % 6);
            Lattice lat = Lattice::with_unit_weights(rank);
            PairingForm pairing(lat, testing::random_antisym_matrix(rng, rank, 3));
            Spectrum dt =
                testing::random_spectrum(rng, lat, SpectrumKind::dtbar, level, 6, 3, true);
            CentralCharge z = testing::random_generic_charge(rng, pairing, level);
            SeriesAlgebra algebra(pairing, level + carrier_pad(lat, pairing, level));
            GradedAutomorphism b = ordered_product(algebra, z, dt);
            pass = pass && factorize(b, z, level, dt) == dt;
            ++done;
        }
        gate.report(8, "two-class splitting and factorization roundtrips", pass, elapsed(t),
                    60.0);
    }

    // 9: multi-cover transforms invert each other and commute with fiber
    // summing on random spectra.
    {
        auto t = Clock::now();
        StandardQuiver sq = build_standard(1, 3);
        const LatticeMap& proj = *sq.projection;
        testing::Rng rng(99);
        bool pass = true;
        for (int trial = 0; trial < 50; ++trial) {
            std::int64_t level = 3 + static_cast<std::int64_t>(rng() % 3);
            Spectrum omega = testing::random_spectrum(rng, sq.lattice, SpectrumKind::omega,
                                                      level, 8, 5, false);
            Spectrum dt = omega_to_dtbar(omega);
            pass = pass && dtbar_to_omega(dt) == omega;
            pass = pass && omega_to_dtbar(pushforward(omega, proj)) == pushforward(dt, proj);

            Spectrum dt_direct = testing::random_spectrum(rng, sq.lattice, SpectrumKind::dtbar,
                                                          level, 8, 5, false);
            pass = pass && omega_to_dtbar(dtbar_to_omega(dt_direct)) == dt_direct;
        }
        gate.report(9, "multi-cover transforms invert and push forward", pass, elapsed(t),
                    10.0);
    }

    // 10: the one-loop series identity holds through order 12.
    {
        auto t = Clock::now();
        OneLoopReport report = one_loop_identity(12);
        gate.report(10, "one-loop series identity to order 12", report.pass, elapsed(t), 1.0);
    }

    // 11: breadth-first real roots agree with an exhaustive quadratic-form
    // scan; the counts are part of the record.
    {
        auto t = Clock::now();
        bool pass = true;
        std::string counts;
        for (int l : {2, 3}) {
            CartanData cartan = affine_a_cartan(l);
            std::vector<Class> roots = real_roots(cartan, 9);
            std::vector<Class> scan;
            for (const Class& a : enumerate_cone(Lattice::with_unit_weights(l), 9))
                if (tits_form(cartan, a) == 1) scan.push_back(a);
            pass = pass && roots == scan && !roots.empty();
            if (!counts.empty()) counts += ", ";
            counts += std::to_string(l) + "-cycle: " + std::to_string(roots.size()) + " roots";
        }
        gate.report(11, "real roots match the scan (" + counts + ")", pass, elapsed(t), 5.0);
    }

    // 12: the quiver rebuilt from the crossed-side spectrum is the framed
    // quiver itself.
    {
        auto t = Clock::now();
        bool pass = true;
        for (int chi : {1, 2, -2}) {
            for (int n = 1; n <= 3; ++n) {
                BpsQuiver bq =
                    build_bps_quiver(d0d6_minus(chi, n), x_pairing(), {1, static_cast<std::int64_t>(n)});
                pass = pass && canonical_form(bq.quiver, bq.vertex_class, bq.vertex_copy) ==
                                   canonical_form(build_standard(chi, n));
            }
        }
        gate.report(12, "spectrum-derived quivers match the framed family", pass, elapsed(t),
                    5.0);
    }

    std::printf("%s\n", gate.all_pass ? "ACCEPTANCE: PASS (12/12)" : "ACCEPTANCE: FAIL");
    return gate.all_pass ? 0 : 1;
}
