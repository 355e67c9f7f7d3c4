#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bps/errors.hpp"
#include "bps/lattice.hpp"
#include "bps/rational.hpp"

namespace bps {

/** Complex number with exact rational real and imaginary parts. */
struct RationalComplex {
    Rational re;
    Rational im;

    bool operator==(const RationalComplex& other) const {
        return re == other.re && im == other.im;
    }
};

inline RationalComplex operator+(const RationalComplex& a, const RationalComplex& b) {
    return {a.re + b.re, a.im + b.im};
}

inline std::string to_string(const RationalComplex& z) {
    return to_string(z.re) + (z.im < 0 ? "-" : "+") +
           to_string(z.im < 0 ? Rational(-z.im) : z.im) + "i";
}

/**
 * Linear central charge on a lattice, determined by its values on basis
 * vectors.  Every basis value must lie in the open upper half plane, so the
 * whole positive cone maps there and phases of positive classes are
 * well defined.
 */
class CentralCharge {
public:
    CentralCharge(Lattice lattice, std::vector<RationalComplex> basis_values)
        : lattice_(std::move(lattice)), basis_values_(std::move(basis_values)) {
        if (basis_values_.size() != static_cast<std::size_t>(lattice_.rank()))
            throw validation_error("central charge needs one value per basis vector");
        for (const auto& z : basis_values_)
            if (z.im <= 0)
                throw validation_error("central charge value " + bps::to_string(z) +
                                       " is not in the upper half plane");
    }

    const Lattice& lattice() const { return lattice_; }
    const std::vector<RationalComplex>& basis_values() const { return basis_values_; }

    RationalComplex evaluate(const Class& g) const {
        if (!is_positive_class(g))
            throw validation_error("central charge evaluated on non-positive class " +
                                   bps::to_string(g));
        lattice_.check_rank(g);
        RationalComplex total{0, 0};
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (g[i] == 0) continue;
            total.re += Rational(g[i]) * basis_values_[i].re;
            total.im += Rational(g[i]) * basis_values_[i].im;
        }
        return total;
    }

private:
    Lattice lattice_;
    std::vector<RationalComplex> basis_values_;
};

enum class PhaseOrder { less, equal, greater };

/** Exact comparison of arguments in (0, pi) via the cross product
 *  Re Z(a) Im Z(b) - Re Z(b) Im Z(a); positive means arg Z(a) < arg Z(b). */
inline PhaseOrder phase_compare(const CentralCharge& z, const Class& a, const Class& b) {
    RationalComplex za = z.evaluate(a);
    RationalComplex zb = z.evaluate(b);
    Rational cross = za.re * zb.im - zb.re * za.im;
    if (cross > 0) return PhaseOrder::less;
    if (cross < 0) return PhaseOrder::greater;
    return PhaseOrder::equal;
}

/** One phase ray: all input classes sharing a common phase, listed by
 *  weighted length then lexicographically.  `witness` is the first member. */
struct Ray {
    Class witness;
    std::vector<Class> members;
};

/** Groups classes into rays of equal phase, ordered by strictly decreasing
 *  phase.  Duplicate input classes collapse to one member. */
inline std::vector<Ray> rays(const Lattice& lat, const CentralCharge& z,
                             const std::vector<Class>& classes) {
    std::vector<Class> sorted;
    sorted.reserve(classes.size());
    for (const auto& g : classes) {
        lat.check_rank(g);
        if (!is_positive_class(g))
            throw validation_error("ray grouping needs positive classes, got " +
                                   bps::to_string(g));
        sorted.push_back(g);
    }
    auto member_less = [&](const Class& a, const Class& b) {
        std::int64_t la = lat.ell(a), lb = lat.ell(b);
        if (la != lb) return la < lb;
        return ClassLess{}(a, b);
    };
    std::sort(sorted.begin(), sorted.end(), member_less);
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    std::vector<Ray> out;
    for (const auto& g : sorted) {
        bool placed = false;
        for (auto& ray : out) {
            if (phase_compare(z, g, ray.witness) == PhaseOrder::equal) {
                ray.members.push_back(g);
                placed = true;
                break;
            }
        }
        if (!placed) out.push_back(Ray{g, {g}});
    }
    std::sort(out.begin(), out.end(), [&](const Ray& a, const Ray& b) {
        return phase_compare(z, a.witness, b.witness) == PhaseOrder::greater;
    });
    return out;
}

enum class GenericityMode {
    equal_phase_isotropy,    // equal phase forces zero pairing
    positive_pairing_order,  // positive pairing forces strictly smaller phase
};

/** A genericity violation: a pair of classes witnessing the failure. */
using GenericityViolation = std::pair<Class, Class>;

/** Checks the central charge against every unordered pair from `classes`.
 *  Returns all violating pairs; an empty result means generic. */
inline std::vector<GenericityViolation> validate_generic(
    const CentralCharge& z, const PairingForm& pairing, const std::vector<Class>& classes,
    GenericityMode mode = GenericityMode::equal_phase_isotropy) {
    std::vector<GenericityViolation> out;
    for (std::size_t i = 0; i < classes.size(); ++i) {
        for (std::size_t j = i + 1; j < classes.size(); ++j) {
            const Class& a = classes[i];
            const Class& b = classes[j];
            PhaseOrder order = phase_compare(z, a, b);
            std::int64_t p = pairing.pair(a, b);
            bool bad = false;
            if (mode == GenericityMode::equal_phase_isotropy) {
                bad = (order == PhaseOrder::equal && p != 0);
            } else {
                if (p > 0) bad = (order != PhaseOrder::less);
                else if (p < 0) bad = (order != PhaseOrder::greater);
            }
            if (bad) out.emplace_back(a, b);
        }
    }
    return out;
}

} // namespace bps
