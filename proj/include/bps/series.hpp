#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "bps/errors.hpp"
#include "bps/lattice.hpp"
#include "bps/rational.hpp"

namespace bps {

/**
 * Signed structure constant of the bracket on monomials:
 * [x^g, x^m] = bracket(g, m) * x^{g+m} with bracket = (-1)^{pair} * pair.
 * The twist is symmetric, so the bracket stays antisymmetric.
 */
inline std::int64_t bracket(const PairingForm& pairing, const Class& g, const Class& m) {
    std::int64_t p = pairing.pair(g, m);
    return (p % 2 != 0) ? -p : p;
}

/**
 * Element of the truncated monomial algebra: a finite rational combination
 * of monomials x^g with g >= 0 and ell(g) <= level.  The zero exponent is
 * the unit.  Zero coefficients are never stored.
 */
class TruncatedSeries {
public:
    TruncatedSeries(Lattice lattice, std::int64_t level)
        : lattice_(std::move(lattice)), level_(level) {
        if (level_ < 0) throw validation_error("series level must be nonnegative");
    }

    const Lattice& lattice() const { return lattice_; }
    std::int64_t level() const { return level_; }
    const std::map<Class, Rational, ClassLess>& terms() const { return terms_; }

    Rational coefficient(const Class& g) const {
        auto it = terms_.find(g);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    void set(const Class& g, const Rational& value) {
        lattice_.check_rank(g);
        for (auto c : g)
            if (c < 0) throw validation_error("series exponent " + bps::to_string(g) +
                                              " has a negative coordinate");
        if (lattice_.ell(g) > level_)
            throw validation_error("series exponent " + bps::to_string(g) +
                                   " exceeds level " + std::to_string(level_));
        if (value == 0)
            terms_.erase(g);
        else
            terms_[g] = value;
    }

    void add(const Class& g, const Rational& value) { set(g, coefficient(g) + value); }

    bool is_zero() const { return terms_.empty(); }

    bool operator==(const TruncatedSeries& other) const {
        return lattice_ == other.lattice_ && level_ == other.level_ && terms_ == other.terms_;
    }
    bool operator!=(const TruncatedSeries& other) const { return !(*this == other); }

private:
    Lattice lattice_;
    std::int64_t level_;
    std::map<Class, Rational, ClassLess> terms_;
};

/**
 * The truncated graded algebra the engine works in: a lattice with pairing
 * and a truncation level.  The product is the sign-twisted monomial product
 *   x^a * x^b = (-1)^{pair(a,b)} x^{a+b},
 * which is commutative and associative since the sign is symmetric and
 * bimultiplicative; Hamiltonian flows are automorphisms of exactly this
 * product (not of the untwisted one).
 */
class SeriesAlgebra {
public:
    SeriesAlgebra(PairingForm pairing, std::int64_t level)
        : pairing_(std::move(pairing)), level_(level) {
        if (level_ < 0) throw validation_error("algebra level must be nonnegative");
    }

    const Lattice& lattice() const { return pairing_.lattice(); }
    const PairingForm& pairing() const { return pairing_; }
    std::int64_t level() const { return level_; }

    std::int64_t pair(const Class& a, const Class& b) const { return pairing_.pair(a, b); }
    std::int64_t bracket(const Class& g, const Class& m) const {
        return bps::bracket(pairing_, g, m);
    }

    int twist_sign(const Class& a, const Class& b) const {
        return (pairing_.pair(a, b) % 2 != 0) ? -1 : 1;
    }

    TruncatedSeries series() const { return TruncatedSeries(lattice(), level_); }

    TruncatedSeries unit() const {
        TruncatedSeries s = series();
        s.set(Class(static_cast<std::size_t>(lattice().rank()), 0), 1);
        return s;
    }

    TruncatedSeries monomial(const Class& g, const Rational& c = Rational(1)) const {
        TruncatedSeries s = series();
        s.set(g, c);
        return s;
    }

    TruncatedSeries multiply(const TruncatedSeries& a, const TruncatedSeries& b) const {
        check_element(a);
        check_element(b);
        TruncatedSeries out = series();
        for (const auto& [ga, ca] : a.terms()) {
            for (const auto& [gb, cb] : b.terms()) {
                Class g = add_classes(ga, gb);
                if (lattice().ell(g) > level_) continue;
                out.add(g, ca * cb * Rational(twist_sign(ga, gb)));
            }
        }
        return out;
    }

    TruncatedSeries power(const TruncatedSeries& a, std::int64_t k) const {
        if (k < 0) throw validation_error("series power needs a nonnegative exponent");
        TruncatedSeries out = unit();
        for (std::int64_t i = 0; i < k; ++i) out = multiply(out, a);
        return out;
    }

    /** Sign relating the ordered product of generator powers to the plain
     *  monomial: x^{e_0}^{n_0} * x^{e_1}^{n_1} * ... = sign * x^n.  Closed
     *  form of the accumulated twist signs, by bilinearity of the pairing. */
    int generator_product_sign(const Class& exponents) const {
        lattice().check_rank(exponents);
        const auto& m = pairing_.matrix();
        std::int64_t total = 0;
        for (std::size_t i = 0; i < exponents.size(); ++i) {
            if (exponents[i] == 0) continue;
            for (std::size_t j = i + 1; j < exponents.size(); ++j)
                total += exponents[i] * exponents[j] * m[i][j];
        }
        return (total % 2 != 0) ? -1 : 1;
    }

    void check_element(const TruncatedSeries& s) const {
        if (s.lattice() != lattice() || s.level() != level_)
            throw validation_error("series does not belong to this algebra");
    }

    bool operator==(const SeriesAlgebra& other) const {
        return pairing_ == other.pairing_ && level_ == other.level_;
    }
    bool operator!=(const SeriesAlgebra& other) const { return !(*this == other); }

private:
    PairingForm pairing_;
    std::int64_t level_;
};

} // namespace bps
