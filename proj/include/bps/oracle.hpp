#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "bps/errors.hpp"
#include "bps/lattice.hpp"
#include "bps/rational.hpp"

namespace bps {

namespace detail {

/** Dense univariate series truncated at a fixed order (index = power). */
using Poly = std::vector<Rational>;

inline Poly poly_one(std::size_t order) {
    Poly p(order + 1, Rational(0));
    p[0] = 1;
    return p;
}

inline Poly poly_mul(const Poly& a, const Poly& b) {
    Poly out(a.size(), Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; i + j < a.size() && j < b.size(); ++j)
            out[i + j] += a[i] * b[j];
    }
    return out;
}

inline Poly poly_inverse(const Poly& a) {
    if (a.empty() || a[0] == 0)
        throw validation_error("series inverse needs a unit constant term");
    Poly out(a.size(), Rational(0));
    out[0] = Rational(1) / a[0];
    for (std::size_t n = 1; n < a.size(); ++n) {
        Rational acc = 0;
        for (std::size_t k = 1; k <= n && k < a.size(); ++k) acc += a[k] * out[n - k];
        out[n] = -acc / a[0];
    }
    return out;
}

inline Poly poly_exp(const Poly& a) {
    if (a.empty() || a[0] != 0)
        throw validation_error("series exp needs a vanishing constant term");
    Poly out = poly_one(a.size() - 1);
    Poly term = poly_one(a.size() - 1);
    for (std::size_t k = 1; k < a.size(); ++k) {
        term = poly_mul(term, a);
        for (std::size_t i = 0; i < term.size(); ++i) term[i] /= Rational(k);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += term[i];
    }
    return out;
}

} // namespace detail

/** Coefficients 0..n_max of prod_{k>=1} (1 - (-q)^k)^{-k*chi}; factors with
 *  k > n_max cannot reach the truncation order. */
inline std::vector<Rational> macmahon(std::int64_t chi, std::int64_t n_max) {
    if (n_max < 0) throw validation_error("macmahon needs a nonnegative order");
    auto order = static_cast<std::size_t>(n_max);
    detail::Poly result = detail::poly_one(order);
    for (std::int64_t k = 1; k <= n_max; ++k) {
        detail::Poly base = detail::poly_one(order);
        if (static_cast<std::size_t>(k) <= order)
            base[static_cast<std::size_t>(k)] = (k % 2 != 0) ? 1 : -1; // -(-1)^k
        std::int64_t e = -k * chi;
        detail::Poly factor = e >= 0 ? base : detail::poly_inverse(base);
        std::int64_t reps = e >= 0 ? e : -e;
        for (std::int64_t r = 0; r < reps; ++r) result = detail::poly_mul(result, factor);
    }
    return result;
}

/** Localization count for rank-one framed classes on the chi > 0 quiver:
 *  (-1)^{d(n)} * prod_{(j,k)} binom(n_{j,k} + k - 1, k - 1) with
 *  d(n) = sum k * n_{j,k}.  The vector is laid out j-major: entry
 *  (j-1)*N + (k-1) is n_{j,k}. */
inline Integer framed_rank1(int chi, int n, const Class& counts) {
    if (chi <= 0)
        throw validation_error("framed_rank1 needs chi > 0 (the construction uses the loops)");
    if (n <= 0) throw validation_error("framed_rank1 needs N >= 1");
    if (counts.size() != static_cast<std::size_t>(chi * n))
        throw validation_error("framed_rank1: count vector must have chi*N entries");
    std::int64_t d = 0;
    Integer product = 1;
    for (std::size_t idx = 0; idx < counts.size(); ++idx) {
        if (counts[idx] < 0)
            throw validation_error("framed_rank1: counts must be nonnegative");
        std::int64_t k = static_cast<std::int64_t>(idx % static_cast<std::size_t>(n)) + 1;
        d += k * counts[idx];
        product *= binomial(counts[idx] + k - 1, k - 1);
    }
    return (d % 2 != 0) ? Integer(-product) : product;
}

struct OneLoopReport {
    bool pass;
    std::int64_t first_failure; // -1 when passing
};

/** Compares 1 + sum_n (-1)^n q^n against exp(-sum_n (-1)^n n dtbar_n q^n)
 *  for caller-supplied dtbar values (index 1..n_max). */
inline OneLoopReport pair_invariant_check(const std::vector<Rational>& dtbar,
                                          std::int64_t n_max) {
    if (n_max < 1) throw validation_error("pair_invariant_check needs n_max >= 1");
    if (dtbar.size() < static_cast<std::size_t>(n_max) + 1)
        throw validation_error("pair_invariant_check: missing dtbar values");
    auto order = static_cast<std::size_t>(n_max);
    detail::Poly lhs = detail::poly_one(order);
    for (std::size_t k = 1; k <= order; ++k) lhs[k] = (k % 2 != 0) ? -1 : 1;
    detail::Poly exponent(order + 1, Rational(0));
    for (std::size_t k = 1; k <= order; ++k) {
        Rational sign = (k % 2 != 0) ? -1 : 1;
        exponent[k] = -sign * Rational(k) * dtbar[k];
    }
    detail::Poly rhs = detail::poly_exp(exponent);
    for (std::size_t k = 0; k <= order; ++k)
        if (lhs[k] != rhs[k]) return {false, static_cast<std::int64_t>(k)};
    return {true, -1};
}

/** The one-loop quiver identity with its exact values dtbar(n) = -1/n^2. */
inline OneLoopReport one_loop_identity(std::int64_t n_max) {
    std::vector<Rational> dtbar(static_cast<std::size_t>(n_max) + 1, Rational(0));
    for (std::int64_t k = 1; k <= n_max; ++k)
        dtbar[static_cast<std::size_t>(k)] = Rational(-1) / Rational(k * k);
    return pair_invariant_check(dtbar, n_max);
}

struct IntegralityReport {
    bool ok;
    std::vector<std::pair<Class, Rational>> violations;
};

inline IntegralityReport check_integrality(const Spectrum& s) {
    if (s.kind() != SpectrumKind::omega)
        throw validation_error("check_integrality expects an omega spectrum");
    IntegralityReport report{true, {}};
    for (const auto& [g, v] : s.entries()) {
        if (!is_integer(v)) {
            report.ok = false;
            report.violations.emplace_back(g, v);
        }
    }
    return report;
}

struct SymmetryReport {
    bool ok;
    std::vector<Class> violations; // classes with S(g) != S(involution(g))
    std::vector<Class> untested;   // support classes mapped outside the truncation
    std::int64_t tested;
};

inline SymmetryReport check_symmetry(const Spectrum& s,
                                     const std::function<Class(const Class&)>& involution) {
    if (s.kind() != SpectrumKind::omega)
        throw validation_error("check_symmetry expects an omega spectrum");
    SymmetryReport report{true, {}, {}, 0};
    for (const auto& [g, v] : s.entries()) {
        Class image = involution(g);
        if (image.size() != g.size() || !is_positive_class(image) ||
            s.lattice().ell(image) > s.level()) {
            report.untested.push_back(g);
            continue;
        }
        ++report.tested;
        if (s.value(image) != v) {
            report.ok = false;
            report.violations.push_back(g);
        }
    }
    return report;
}

} // namespace bps
