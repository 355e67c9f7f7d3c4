#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bps/config.hpp"
#include "bps/engine.hpp"
#include "bps/errors.hpp"
#include "bps/lattice.hpp"
#include "bps/oracle.hpp"
#include "bps/rational.hpp"
#include "bps/stability.hpp"

namespace bps {

using Json = nlohmann::ordered_json;

inline Json class_json(const Class& g) {
    Json out = Json::array();
    for (auto c : g) out.push_back(c);
    return out;
}

inline Json spectrum_json(const Spectrum& s) {
    Json out = Json::array();
    for (const auto& [g, v] : s.entries()) {
        Json entry;
        entry["class"] = class_json(g);
        entry["value"] = to_string(v);
        out.push_back(entry);
    }
    return out;
}

inline Json lattice_json(const Lattice& lat) {
    Json out;
    out["rank"] = lat.rank();
    Json weights = Json::array();
    for (auto w : lat.weights()) weights.push_back(w);
    out["weights"] = weights;
    return out;
}

inline Json matrix_json(const std::vector<std::vector<std::int64_t>>& m) {
    Json out = Json::array();
    for (const auto& row : m) {
        Json r = Json::array();
        for (auto v : row) r.push_back(v);
        out.push_back(r);
    }
    return out;
}

namespace detail {

/** Exact inverse of a square rational matrix by Gauss-Jordan elimination. */
inline std::vector<std::vector<Rational>> invert_rational_matrix(
    std::vector<std::vector<Rational>> m) {
    std::size_t n = m.size();
    std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && m[pivot][col] == 0) ++pivot;
        if (pivot == n) throw validation_error("matrix is singular");
        std::swap(m[pivot], m[col]);
        std::swap(inv[pivot], inv[col]);
        Rational lead = m[col][col];
        for (std::size_t j = 0; j < n; ++j) {
            m[col][j] /= lead;
            inv[col][j] /= lead;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || m[r][col] == 0) continue;
            Rational f = m[r][col];
            for (std::size_t j = 0; j < n; ++j) {
                m[r][j] -= f * m[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

} // namespace detail

/** The unique target charge with Z_target(map(e_i)) = Z_source(e_i); exists
 *  iff the source charge factors through the map. */
inline CentralCharge pushforward_charge(const CentralCharge& z, const LatticeMap& map) {
    if (z.lattice() != map.source())
        throw validation_error("pushforward_charge: lattice mismatch");
    auto d_s = static_cast<std::size_t>(map.source().rank());
    auto d_t = static_cast<std::size_t>(map.target().rank());
    // Solve the overdetermined rational system column-by-column; the map is
    // surjective, so the solution is unique when it exists.
    std::vector<std::vector<Rational>> rows(d_s, std::vector<Rational>(d_t + 2, Rational(0)));
    for (std::size_t i = 0; i < d_s; ++i) {
        for (std::size_t a = 0; a < d_t; ++a) rows[i][a] = map.matrix()[a][i];
        rows[i][d_t] = z.basis_values()[i].re;
        rows[i][d_t + 1] = z.basis_values()[i].im;
    }
    std::size_t rank = 0;
    for (std::size_t col = 0; col < d_t && rank < d_s; ++col) {
        std::size_t pivot = rank;
        while (pivot < d_s && rows[pivot][col] == 0) ++pivot;
        if (pivot == d_s) continue;
        std::swap(rows[pivot], rows[rank]);
        Rational lead = rows[rank][col];
        for (auto& v : rows[rank]) v /= lead;
        for (std::size_t r = 0; r < d_s; ++r) {
            if (r == rank || rows[r][col] == 0) continue;
            Rational f = rows[r][col];
            for (std::size_t j = 0; j < rows[r].size(); ++j) rows[r][j] -= f * rows[rank][j];
        }
        ++rank;
    }
    if (rank != d_t)
        throw validation_error("pushforward_charge: map matrix is rank deficient");
    for (std::size_t r = rank; r < d_s; ++r)
        if (rows[r][d_t] != 0 || rows[r][d_t + 1] != 0)
            throw validation_error("central charge does not factor through the pushforward");
    std::vector<RationalComplex> values(d_t);
    for (std::size_t r = 0; r < rank; ++r) {
        std::size_t lead = 0;
        while (lead < d_t && rows[r][lead] == 0) ++lead;
        values[lead] = RationalComplex{rows[r][d_t], rows[r][d_t + 1]};
    }
    return CentralCharge(map.target(), std::move(values));
}

/** The unique target pairing pulled back to the source pairing along the
 *  map; exists iff the source pairing factors through the map. */
inline PairingForm pushforward_pairing(const PairingForm& p, const LatticeMap& map) {
    if (p.lattice() != map.source())
        throw validation_error("pushforward_pairing: lattice mismatch");
    auto d_s = static_cast<std::size_t>(map.source().rank());
    auto d_t = static_cast<std::size_t>(map.target().rank());
    const auto& m = map.matrix();
    // T = G^{-1} (M P M^T) G^{-1} with G = M M^T solves M^T T M = P when a
    // solution exists; verify the factorization afterwards.
    std::vector<std::vector<Rational>> gram(d_t, std::vector<Rational>(d_t, Rational(0)));
    for (std::size_t a = 0; a < d_t; ++a)
        for (std::size_t b = 0; b < d_t; ++b)
            for (std::size_t i = 0; i < d_s; ++i)
                gram[a][b] += Rational(m[a][i]) * Rational(m[b][i]);
    auto ginv = detail::invert_rational_matrix(std::move(gram));
    std::vector<std::vector<Rational>> mpmt(d_t, std::vector<Rational>(d_t, Rational(0)));
    for (std::size_t a = 0; a < d_t; ++a)
        for (std::size_t b = 0; b < d_t; ++b)
            for (std::size_t i = 0; i < d_s; ++i)
                for (std::size_t j = 0; j < d_s; ++j)
                    mpmt[a][b] += Rational(m[a][i]) * Rational(p.matrix()[i][j]) *
                                  Rational(m[b][j]);
    std::vector<std::vector<std::int64_t>> target(d_t, std::vector<std::int64_t>(d_t, 0));
    for (std::size_t a = 0; a < d_t; ++a) {
        for (std::size_t b = 0; b < d_t; ++b) {
            Rational entry = 0;
            for (std::size_t u = 0; u < d_t; ++u)
                for (std::size_t v = 0; v < d_t; ++v)
                    entry += ginv[a][u] * mpmt[u][v] * ginv[b][v];
            if (!is_integer(entry))
                throw validation_error("pairing does not factor through the pushforward");
            Integer n = numerator(entry);
            if (n > std::numeric_limits<std::int64_t>::max() ||
                n < std::numeric_limits<std::int64_t>::min())
                throw validation_error("pushforward pairing entry out of range");
            target[a][b] = static_cast<std::int64_t>(n);
        }
    }
    PairingForm result(map.target(), std::move(target));
    for (std::size_t i = 0; i < d_s; ++i)
        for (std::size_t j = 0; j < d_s; ++j) {
            Class ei = map.source().basis(static_cast<int>(i));
            Class ej = map.source().basis(static_cast<int>(j));
            if (result.pair(map.apply(ei), map.apply(ej)) != p.pair(ei, ej))
                throw validation_error("pairing does not factor through the pushforward");
        }
    return result;
}

inline Json integrality_json(const IntegralityReport& report) {
    Json out;
    out["pass"] = report.ok;
    Json violations = Json::array();
    for (const auto& [g, v] : report.violations) {
        Json entry;
        entry["class"] = class_json(g);
        entry["value"] = to_string(v);
        violations.push_back(entry);
    }
    out["violations"] = violations;
    return out;
}

inline Json symmetry_json(const SymmetryReport& report) {
    Json out;
    out["pass"] = report.ok;
    out["tested"] = report.tested;
    Json violations = Json::array();
    for (const auto& g : report.violations) violations.push_back(class_json(g));
    out["violations"] = violations;
    Json untested = Json::array();
    for (const auto& g : report.untested) untested.push_back(class_json(g));
    out["untested"] = untested;
    return out;
}

inline Json genericity_json(const std::vector<GenericityViolation>& violations) {
    Json out;
    out["pass"] = violations.empty();
    Json list = Json::array();
    for (const auto& [a, b] : violations) {
        Json pair = Json::array();
        pair.push_back(class_json(a));
        pair.push_back(class_json(b));
        list.push_back(pair);
    }
    out["violations"] = list;
    return out;
}

/** Runs the full wall-crossing pipeline for a decoded config and assembles
 *  the deterministic JSON report. */
inline Json wallcross_report(const RunSpec& spec) {
    Spectrum omega_minus = spec.omega_minus.truncated(spec.level);
    WallCrossResult result =
        wall_cross_full(omega_minus, spec.z_minus, spec.z_plus, spec.pairing, spec.level);

    Json out;
    out["level"] = spec.level;
    out["lattice"] = lattice_json(spec.lattice);
    out["omega_minus"] = spectrum_json(omega_minus);
    out["dtbar_minus"] = spectrum_json(result.dtbar_minus);
    out["omega_plus"] = spectrum_json(result.omega_plus);
    out["dtbar_plus"] = spectrum_json(result.dtbar_plus);

    Json checks;
    checks["integrality"] = integrality_json(check_integrality(result.omega_plus));
    if (spec.involution) {
        const auto& m = *spec.involution;
        checks["symmetry"] = symmetry_json(check_symmetry(
            result.omega_plus, [&m](const Class& g) { return apply_integer_matrix(m, g); }));
    }
    if (spec.pushforward) {
        const LatticeMap& map = *spec.pushforward;
        CentralCharge zt_minus = pushforward_charge(spec.z_minus, map);
        CentralCharge zt_plus = pushforward_charge(spec.z_plus, map);
        PairingForm target_pairing = pushforward_pairing(spec.pairing, map);
        Spectrum pushed_minus = pushforward(omega_minus, map);
        Spectrum target_plus =
            wall_cross(pushed_minus, zt_minus, zt_plus, target_pairing, spec.level);
        Spectrum pushed_plus = pushforward(result.omega_plus, map);
        Json push;
        push["pass"] = (target_plus == pushed_plus);
        push["target_lattice"] = lattice_json(map.target());
        push["target_omega_plus"] = spectrum_json(target_plus);
        push["pushed_omega_plus"] = spectrum_json(pushed_plus);
        checks["pushforward"] = push;
    }
    out["checks"] = checks;
    return out;
}

/** Validates a config's inputs without crossing the wall, checking each
 *  charge on the domain the crossing will use it on: the source charge must
 *  be generic on the ray support of the input (its multi-cover closure), the
 *  target charge on the full in-truncation cone where new classes can
 *  appear.  Also reports integrality and symmetry of the initial spectrum. */
inline Json check_report(const RunSpec& spec) {
    Spectrum omega_minus = spec.omega_minus.truncated(spec.level);
    std::vector<Class> cone = enumerate_cone(spec.lattice, spec.level);
    Json out;
    out["level"] = spec.level;
    out["lattice"] = lattice_json(spec.lattice);
    Json checks;
    checks["genericity_minus"] = genericity_json(
        validate_generic(spec.z_minus, spec.pairing, omega_to_dtbar(omega_minus).support()));
    checks["genericity_plus"] =
        genericity_json(validate_generic(spec.z_plus, spec.pairing, cone));
    checks["integrality"] = integrality_json(check_integrality(omega_minus));
    if (spec.involution) {
        const auto& m = *spec.involution;
        checks["symmetry"] = symmetry_json(check_symmetry(
            omega_minus, [&m](const Class& g) { return apply_integer_matrix(m, g); }));
    }
    out["checks"] = checks;
    return out;
}

} // namespace bps
