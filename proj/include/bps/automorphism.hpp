#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "bps/errors.hpp"
#include "bps/lattice.hpp"
#include "bps/rational.hpp"
#include "bps/series.hpp"

namespace bps {

/**
 * Unipotent algebra automorphism of a truncated series algebra, stored by
 * its generator images: the image of x^{e_i} is x^{e_i}(1 + higher order).
 * When the operator was assembled from Hamiltonian flows, `provenance`
 * keeps the Hamiltonians in application order (first applied first), which
 * makes exact inversion cheap.
 */
class GradedAutomorphism {
public:
    GradedAutomorphism(SeriesAlgebra algebra, std::vector<TruncatedSeries> images,
                       std::vector<TruncatedSeries> provenance, bool has_provenance)
        : algebra_(std::move(algebra)),
          images_(std::move(images)),
          provenance_(std::move(provenance)),
          has_provenance_(has_provenance) {
        auto rank = static_cast<std::size_t>(algebra_.lattice().rank());
        if (images_.size() != rank)
            throw validation_error("automorphism needs one image per generator");
        for (std::size_t i = 0; i < rank; ++i) {
            algebra_.check_element(images_[i]);
            Class e = algebra_.lattice().basis(static_cast<int>(i));
            if (images_[i].coefficient(e) != 1)
                throw validation_error("automorphism is not unipotent on generator " +
                                       std::to_string(i));
            for (const auto& [g, c] : images_[i].terms())
                for (std::size_t j = 0; j < g.size(); ++j)
                    if (g[j] < e[j])
                        throw validation_error(
                            "generator image contains a term not divisible by the generator");
        }
    }

    static GradedAutomorphism identity(const SeriesAlgebra& algebra) {
        std::vector<TruncatedSeries> images;
        int rank = algebra.lattice().rank();
        images.reserve(static_cast<std::size_t>(rank));
        for (int i = 0; i < rank; ++i)
            images.push_back(algebra.monomial(algebra.lattice().basis(i)));
        return GradedAutomorphism(algebra, std::move(images), {}, true);
    }

    const SeriesAlgebra& algebra() const { return algebra_; }
    const TruncatedSeries& image(int i) const {
        return images_.at(static_cast<std::size_t>(i));
    }
    const std::vector<TruncatedSeries>& images() const { return images_; }
    bool has_provenance() const { return has_provenance_; }
    const std::vector<TruncatedSeries>& provenance() const { return provenance_; }

    GradedAutomorphism without_provenance() const {
        return GradedAutomorphism(algebra_, images_, {}, false);
    }

    bool is_identity() const {
        for (int i = 0; i < algebra_.lattice().rank(); ++i) {
            if (images_[static_cast<std::size_t>(i)].terms().size() != 1) return false;
        }
        return true;
    }

    bool operator==(const GradedAutomorphism& other) const {
        return algebra_ == other.algebra_ && images_ == other.images_;
    }
    bool operator!=(const GradedAutomorphism& other) const { return !(*this == other); }

private:
    SeriesAlgebra algebra_;
    std::vector<TruncatedSeries> images_;
    std::vector<TruncatedSeries> provenance_;
    bool has_provenance_;
};

/** Smallest ell(v) over all non-unit deviations x^{e_i + v} in the generator
 *  images; identity reports level + 1. */
inline std::int64_t residual_order(const GradedAutomorphism& a) {
    const Lattice& lat = a.algebra().lattice();
    std::int64_t best = a.algebra().level() + 1;
    for (int i = 0; i < lat.rank(); ++i) {
        Class e = lat.basis(i);
        std::int64_t we = lat.ell(e);
        for (const auto& [g, c] : a.image(i).terms()) {
            std::int64_t d = lat.ell(g) - we;
            if (d > 0 && d < best) best = d;
        }
    }
    return best;
}

/**
 * Exponential of the Hamiltonian derivation of h:
 *   delta_h(x^m) = sum_g h_g * bracket(g, m) * x^{g+m},
 * computed as the finite sum sum_k delta_h^k / k! (nilpotent under
 * truncation).  The support of h must be pairwise isotropic, which makes
 * delta_h a derivation of the twisted product and the result an algebra
 * automorphism.
 */
inline GradedAutomorphism flow(const SeriesAlgebra& algebra, const TruncatedSeries& h) {
    algebra.check_element(h);
    std::vector<Class> supp;
    for (const auto& [g, c] : h.terms()) {
        if (!is_positive_class(g))
            throw validation_error("flow Hamiltonian must be supported on positive classes");
        supp.push_back(g);
    }
    for (std::size_t i = 0; i < supp.size(); ++i)
        for (std::size_t j = i + 1; j < supp.size(); ++j)
            if (algebra.pair(supp[i], supp[j]) != 0)
                throw validation_error("flow support is not isotropic: " +
                                       bps::to_string(supp[i]) + " pairs with " +
                                       bps::to_string(supp[j]));

    const Lattice& lat = algebra.lattice();
    std::vector<TruncatedSeries> images;
    images.reserve(static_cast<std::size_t>(lat.rank()));
    for (int i = 0; i < lat.rank(); ++i) {
        TruncatedSeries total = algebra.monomial(lat.basis(i));
        TruncatedSeries current = total;
        for (std::int64_t k = 1; !current.is_zero(); ++k) {
            TruncatedSeries next = algebra.series();
            for (const auto& [m, cm] : current.terms()) {
                for (const auto& [g, cg] : h.terms()) {
                    std::int64_t br = algebra.bracket(g, m);
                    if (br == 0) continue;
                    Class sum = add_classes(g, m);
                    if (lat.ell(sum) > algebra.level()) continue;
                    next.add(sum, cm * cg * Rational(br) / Rational(k));
                }
            }
            current = next;
            for (const auto& [g, c] : current.terms()) total.add(g, c);
        }
        images.push_back(std::move(total));
    }
    return GradedAutomorphism(algebra, std::move(images), {h}, true);
}

namespace detail {

/** Per-operator cache of generator image powers, shared across apply calls. */
class PowerCache {
public:
    explicit PowerCache(const GradedAutomorphism& a) : a_(a) {
        pows_.resize(static_cast<std::size_t>(a.algebra().lattice().rank()));
        for (int i = 0; i < a.algebra().lattice().rank(); ++i)
            pows_[static_cast<std::size_t>(i)].push_back(a.algebra().unit());
    }

    const TruncatedSeries& get(int i, std::int64_t k) {
        auto& row = pows_[static_cast<std::size_t>(i)];
        while (row.size() <= static_cast<std::size_t>(k))
            row.push_back(a_.algebra().multiply(row.back(), a_.image(i)));
        return row[static_cast<std::size_t>(k)];
    }

private:
    const GradedAutomorphism& a_;
    std::vector<std::vector<TruncatedSeries>> pows_;
};

inline TruncatedSeries apply_with_cache(const GradedAutomorphism& a, const TruncatedSeries& s,
                                        PowerCache& cache) {
    const SeriesAlgebra& algebra = a.algebra();
    algebra.check_element(s);
    TruncatedSeries out = algebra.series();
    for (const auto& [g, c] : s.terms()) {
        TruncatedSeries prod = algebra.unit();
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (g[i] == 0) continue;
            prod = algebra.multiply(prod, cache.get(static_cast<int>(i), g[i]));
        }
        // The twisted product of the generator powers differs from the plain
        // monomial x^g by the accumulated cocycle sign; divide it back out so
        // that apply(identity) = identity.
        Rational scaled = c * Rational(algebra.generator_product_sign(g));
        for (const auto& [gp, cp] : prod.terms()) out.add(gp, scaled * cp);
    }
    return out;
}

} // namespace detail

/** Extends the generator images multiplicatively (over the twisted product)
 *  to the whole truncated algebra. */
inline TruncatedSeries apply(const GradedAutomorphism& a, const TruncatedSeries& s) {
    detail::PowerCache cache(a);
    return detail::apply_with_cache(a, s, cache);
}

/** compose(A, B) = A after B. */
inline GradedAutomorphism compose(const GradedAutomorphism& a, const GradedAutomorphism& b) {
    if (a.algebra() != b.algebra())
        throw validation_error("compose: operators live on different algebras");
    detail::PowerCache cache(a);
    std::vector<TruncatedSeries> images;
    int rank = a.algebra().lattice().rank();
    images.reserve(static_cast<std::size_t>(rank));
    for (int i = 0; i < rank; ++i)
        images.push_back(detail::apply_with_cache(a, b.image(i), cache));
    std::vector<TruncatedSeries> provenance;
    bool has = a.has_provenance() && b.has_provenance();
    if (has) {
        provenance = b.provenance();
        provenance.insert(provenance.end(), a.provenance().begin(), a.provenance().end());
    }
    return GradedAutomorphism(a.algebra(), std::move(images), std::move(provenance), has);
}

namespace detail {

inline TruncatedSeries negate_series(const SeriesAlgebra& algebra, const TruncatedSeries& h) {
    TruncatedSeries out = algebra.series();
    for (const auto& [g, c] : h.terms()) out.set(g, -c);
    return out;
}

} // namespace detail

/**
 * Exact group inverse.  With provenance the factor list is reversed with
 * negated Hamiltonians; without it a residual-halving iteration solves for
 * the inverse degree by degree and verifies exactness.
 */
inline GradedAutomorphism invert(const GradedAutomorphism& a) {
    const SeriesAlgebra& algebra = a.algebra();
    if (a.has_provenance()) {
        GradedAutomorphism total = GradedAutomorphism::identity(algebra);
        for (const auto& h : a.provenance())
            total = compose(total, flow(algebra, detail::negate_series(algebra, h)));
        return total;
    }
    const Lattice& lat = algebra.lattice();
    GradedAutomorphism inv = GradedAutomorphism::identity(algebra).without_provenance();
    for (int iterations = 0; iterations < 64; ++iterations) {
        GradedAutomorphism err = compose(inv, a);
        if (err.is_identity()) return inv;
        // Kill the lowest-order deviation: correct by the first-order inverse
        // of the error, doubling the residual order each round.
        std::vector<TruncatedSeries> images;
        images.reserve(static_cast<std::size_t>(lat.rank()));
        for (int i = 0; i < lat.rank(); ++i) {
            TruncatedSeries img = algebra.monomial(lat.basis(i));
            Class e = lat.basis(i);
            for (const auto& [g, c] : err.image(i).terms()) {
                if (g == e) continue;
                img.add(g, -c);
            }
            images.push_back(std::move(img));
        }
        GradedAutomorphism correction(algebra, std::move(images), {}, false);
        inv = compose(correction, inv);
    }
    throw internal_error("invert: residual iteration did not converge");
}

/** Result of reading one graded degree of log(A). */
struct LogDegreeResult {
    std::map<Class, Rational, ClassLess> coefficients;
    std::vector<Class> invisible; // classes the operator algebra cannot see
};

namespace detail {

/** Degree-d Hamiltonian extraction over a caller-supplied list of candidate
 *  classes of weighted length exactly d. */
inline LogDegreeResult log_derivation_on(const GradedAutomorphism& a, std::int64_t d,
                                         const std::vector<Class>& degree_classes) {
    const SeriesAlgebra& algebra = a.algebra();
    const Lattice& lat = algebra.lattice();
    if (d <= 0) throw validation_error("log_derivation degree must be positive");
    if (residual_order(a) < d)
        throw validation_error("log_derivation: operator is not the identity below degree " +
                               std::to_string(d));
    // Below twice the residual order, log(A) agrees with A - id as a graded
    // operator, so degree-d coefficients are read directly from the images.
    LogDegreeResult out;
    for (const Class& g : degree_classes) {
        if (lat.ell(g) != d)
            throw validation_error("log_derivation candidate " + bps::to_string(g) +
                                   " does not have degree " + std::to_string(d));
        if (algebra.pairing().is_invisible(g)) {
            out.invisible.push_back(g);
            for (int i = 0; i < lat.rank(); ++i) {
                if (d + lat.weight(i) > algebra.level()) continue;
                Class target = add_classes(g, lat.basis(i));
                if (a.image(i).coefficient(target) != 0)
                    throw non_hamiltonian_residual(
                        "residual at invisible class " + bps::to_string(g) +
                        " cannot come from a Hamiltonian flow");
            }
            continue;
        }
        bool have = false;
        Rational c = 0;
        for (int i = 0; i < lat.rank(); ++i) {
            if (d + lat.weight(i) > algebra.level()) continue;
            Class e = lat.basis(i);
            std::int64_t br = algebra.bracket(g, e);
            Rational observed = a.image(i).coefficient(add_classes(g, e));
            if (br == 0) {
                if (observed != 0)
                    throw non_hamiltonian_residual("residual at " + bps::to_string(g) +
                                                   " hits generator " + std::to_string(i) +
                                                   " with zero bracket");
                continue;
            }
            Rational candidate = observed / Rational(br);
            if (!have) {
                c = candidate;
                have = true;
            } else if (candidate != c) {
                throw non_hamiltonian_residual("extraction of " + bps::to_string(g) +
                                               " is inconsistent across generators");
            }
        }
        if (!have)
            throw truncation_too_small("no generator has room to read class " +
                                       bps::to_string(g) + " at level " +
                                       std::to_string(algebra.level()));
        if (c != 0) out.coefficients[g] = c;
    }
    return out;
}

} // namespace detail

/** Reads the degree-d part of log(A) as Hamiltonian coefficients, scanning
 *  every positive class of weighted length d. */
inline LogDegreeResult log_derivation(const GradedAutomorphism& a, std::int64_t d) {
    std::vector<Class> degree_classes;
    for (const Class& g : enumerate_cone(a.algebra().lattice(), d))
        if (a.algebra().lattice().ell(g) == d) degree_classes.push_back(g);
    return detail::log_derivation_on(a, d, degree_classes);
}

} // namespace bps
