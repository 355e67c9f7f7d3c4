#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bps/automorphism.hpp"
#include "bps/errors.hpp"
#include "bps/lattice.hpp"
#include "bps/rational.hpp"
#include "bps/series.hpp"
#include "bps/stability.hpp"

namespace bps {

/**
 * The ray-ordered product of Hamiltonian flows of a dtbar spectrum:
 *   A = flow(h_{R_1}) after ... after flow(h_{R_k})
 * with rays R_1..R_k in strictly decreasing phase, so the highest-phase ray
 * acts last.  h_R sums S(g) x^g over the members of R.
 */
inline GradedAutomorphism ordered_product(const SeriesAlgebra& algebra, const CentralCharge& z,
                                          const Spectrum& s) {
    if (s.kind() != SpectrumKind::dtbar)
        throw validation_error("ordered_product expects a dtbar spectrum");
    if (s.lattice() != algebra.lattice() || z.lattice() != algebra.lattice())
        throw validation_error("ordered_product: lattice mismatch");
    if (s.level() > algebra.level())
        throw validation_error("ordered_product: spectrum level exceeds algebra level");
    std::vector<Class> supp = s.support();
    auto violations = validate_generic(z, algebra.pairing(), supp);
    if (!violations.empty())
        throw non_generic_stability("equal-phase classes " + to_string(violations[0].first) +
                                    " and " + to_string(violations[0].second) +
                                    " have nonzero pairing");
    GradedAutomorphism total = GradedAutomorphism::identity(algebra);
    for (const Ray& ray : rays(algebra.lattice(), z, supp)) {
        TruncatedSeries h = algebra.series();
        for (const Class& g : ray.members) h.set(g, s.value(g));
        total = compose(total, flow(algebra, h));
    }
    return total;
}

/**
 * Extra graded room the operator algebra needs beyond the spectrum level:
 * reading the coefficient of class g from generator e_i uses the monomial
 * x^{g+e_i}, so every visible in-truncation class must have a witnessing
 * generator within level + pad.
 */
inline std::int64_t carrier_pad(const Lattice& lat, const PairingForm& pairing,
                                std::int64_t level) {
    std::int64_t pad = 1;
    for (const Class& g : enumerate_cone(lat, level)) {
        if (pairing.is_invisible(g)) continue;
        std::int64_t best = 0;
        for (int i = 0; i < lat.rank(); ++i) {
            Class e = lat.basis(i);
            if (pairing.pair(g, e) == 0) continue;
            if (best == 0 || lat.weight(i) < best) best = lat.weight(i);
        }
        if (best > pad) pad = best;
    }
    return pad;
}

/**
 * Degree-by-degree factorization: finds the unique dtbar spectrum whose
 * ray-ordered product under z_target equals b, up to level_out.  Classes
 * invisible to the pairing carry no flow at all, so their entries are copied
 * from `fallback` unchanged.
 */
inline Spectrum factorize(const GradedAutomorphism& b, const CentralCharge& z_target,
                          std::int64_t level_out, const Spectrum& fallback) {
    const SeriesAlgebra& algebra = b.algebra();
    const Lattice& lat = algebra.lattice();
    if (fallback.kind() != SpectrumKind::dtbar)
        throw validation_error("factorize fallback must be a dtbar spectrum");
    if (fallback.lattice() != lat || z_target.lattice() != lat)
        throw validation_error("factorize: lattice mismatch");
    if (level_out < 0 || level_out > algebra.level())
        throw validation_error("factorize output level must lie within the operator level");

    std::vector<Class> cone = enumerate_cone(lat, level_out);
    auto violations =
        validate_generic(z_target, algebra.pairing(), cone, GenericityMode::equal_phase_isotropy);
    if (!violations.empty())
        throw non_generic_stability("target charge is not generic: classes " +
                                    to_string(violations[0].first) + " and " +
                                    to_string(violations[0].second) +
                                    " share a phase with nonzero pairing");
    std::map<std::int64_t, std::vector<Class>> by_degree;
    for (const Class& g : cone) by_degree[lat.ell(g)].push_back(g);

    Spectrum known(lat, SpectrumKind::dtbar, level_out);
    for (std::int64_t d = 1; d <= level_out; ++d) {
        GradedAutomorphism partial = ordered_product(algebra, z_target, known);
        GradedAutomorphism residual = compose(invert(partial), b);
        if (residual_order(residual) < d)
            throw truncation_too_small("factorization residual of degree " +
                                       std::to_string(residual_order(residual)) +
                                       " below current degree " + std::to_string(d));
        auto it = by_degree.find(d);
        if (it == by_degree.end()) continue;
        LogDegreeResult extracted = detail::log_derivation_on(residual, d, it->second);
        for (const auto& [g, c] : extracted.coefficients) known.set(g, c);
    }

    GradedAutomorphism full = ordered_product(algebra, z_target, known);
    GradedAutomorphism residual = compose(invert(full), b);
    if (residual_order(residual) <= level_out)
        throw internal_error("factorization left an unexplained residual at degree " +
                             std::to_string(residual_order(residual)));

    for (const Class& g : cone)
        if (algebra.pairing().is_invisible(g) && fallback.value(g) != 0)
            known.set(g, fallback.value(g));
    return known;
}

/** Spectra and operator data produced by one wall-crossing run. */
struct WallCrossResult {
    Spectrum dtbar_minus;
    Spectrum dtbar_plus;
    Spectrum omega_plus;
};

/**
 * Full pipeline: multi-cover transform, ordered product in the source
 * chamber, factorization in the target chamber, inverse transform.  The
 * operator algebra carries `level + carrier_pad` graded room so that
 * top-degree coefficients stay readable.
 */
inline WallCrossResult wall_cross_full(const Spectrum& s_minus, const CentralCharge& z_minus,
                                       const CentralCharge& z_plus, const PairingForm& pairing,
                                       std::int64_t level) {
    if (s_minus.kind() != SpectrumKind::omega)
        throw validation_error("wall_cross expects an omega spectrum");
    if (s_minus.lattice() != pairing.lattice())
        throw validation_error("wall_cross: spectrum and pairing lattices differ");
    Spectrum dtbar_minus = omega_to_dtbar(s_minus.truncated(level));
    std::int64_t pad = carrier_pad(pairing.lattice(), pairing, level);
    SeriesAlgebra algebra(pairing, level + pad);
    GradedAutomorphism b = ordered_product(algebra, z_minus, dtbar_minus);
    Spectrum dtbar_plus = factorize(b, z_plus, level, dtbar_minus);
    Spectrum omega_plus = dtbar_to_omega(dtbar_plus);
    return WallCrossResult{std::move(dtbar_minus), std::move(dtbar_plus), std::move(omega_plus)};
}

inline Spectrum wall_cross(const Spectrum& s_minus, const CentralCharge& z_minus,
                           const CentralCharge& z_plus, const PairingForm& pairing,
                           std::int64_t level) {
    return wall_cross_full(s_minus, z_minus, z_plus, pairing, level).omega_plus;
}

} // namespace bps
