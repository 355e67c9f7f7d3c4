#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "bps/errors.hpp"
#include "bps/rational.hpp"

namespace bps {

/** A charge class: an integer coordinate vector in a fixed basis. */
using Class = std::vector<std::int64_t>;

/** Lexicographic order on classes; ties broken by length (shorter first). */
struct ClassLess {
    bool operator()(const Class& a, const Class& b) const {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end()) ||
               (std::equal(a.begin(), a.end(), b.begin(), b.end()) && a.size() < b.size());
    }
};

inline std::string to_string(const Class& g) {
    std::string out = "(";
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(g[i]);
    }
    return out + ")";
}

/** Nonzero with all coordinates >= 0. */
inline bool is_positive_class(const Class& g) {
    bool nonzero = false;
    for (auto c : g) {
        if (c < 0) return false;
        if (c != 0) nonzero = true;
    }
    return nonzero;
}

inline Class add_classes(const Class& a, const Class& b) {
    Class out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

inline Class subtract_classes(const Class& a, const Class& b) {
    Class out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

inline Class scale_class(std::int64_t m, const Class& g) {
    Class out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = m * g[i];
    return out;
}

/** gcd of the coordinates; zero only for the zero class. */
inline std::int64_t class_gcd(const Class& g) {
    std::int64_t d = 0;
    for (auto c : g) d = std::gcd(d, c < 0 ? -c : c);
    return d;
}

/** Ascending list of the positive integers m with g/m integral. */
inline std::vector<std::int64_t> divisors(const Class& g) {
    std::int64_t d = class_gcd(g);
    if (d == 0) throw validation_error("the zero class has no divisors");
    std::vector<std::int64_t> out;
    for (std::int64_t m = 1; m <= d; ++m)
        if (d % m == 0) out.push_back(m);
    return out;
}

/**
 * Free abelian lattice of finite rank with a positive weight per basis
 * vector.  The weighted length ell is the grading every truncation in the
 * library is measured against.
 */
class Lattice {
public:
    Lattice(int rank, std::vector<std::int64_t> weights)
        : rank_(rank), weights_(std::move(weights)) {
        if (rank_ <= 0) throw validation_error("lattice rank must be positive");
        if (weights_.size() != static_cast<std::size_t>(rank_))
            throw validation_error("lattice weight count does not match rank");
        for (auto w : weights_)
            if (w <= 0) throw validation_error("lattice weights must be positive");
    }

    static Lattice with_unit_weights(int rank) {
        return Lattice(rank, std::vector<std::int64_t>(static_cast<std::size_t>(rank), 1));
    }

    int rank() const { return rank_; }
    const std::vector<std::int64_t>& weights() const { return weights_; }
    std::int64_t weight(int i) const { return weights_.at(static_cast<std::size_t>(i)); }

    std::int64_t ell(const Class& g) const {
        check_rank(g);
        std::int64_t total = 0;
        for (std::size_t i = 0; i < g.size(); ++i) total += weights_[i] * g[i];
        return total;
    }

    Class basis(int i) const {
        Class e(static_cast<std::size_t>(rank_), 0);
        e.at(static_cast<std::size_t>(i)) = 1;
        return e;
    }

    void check_rank(const Class& g) const {
        if (g.size() != static_cast<std::size_t>(rank_))
            throw validation_error("class " + bps::to_string(g) + " does not live in rank " +
                                   std::to_string(rank_) + " lattice");
    }

    bool operator==(const Lattice& other) const {
        return rank_ == other.rank_ && weights_ == other.weights_;
    }
    bool operator!=(const Lattice& other) const { return !(*this == other); }

private:
    int rank_;
    std::vector<std::int64_t> weights_;
};

/** Enumerates all positive classes with ell <= bound, in lexicographic order.
 *  Throws enumeration_limit when more than cap classes would be produced. */
inline std::vector<Class> enumerate_cone(const Lattice& lat, std::int64_t bound,
                                         std::size_t cap = 2'000'000) {
    std::vector<Class> out;
    Class current(static_cast<std::size_t>(lat.rank()), 0);
    auto recurse = [&](auto&& self, int coord, std::int64_t remaining) -> void {
        if (coord == lat.rank()) {
            if (is_positive_class(current)) {
                if (out.size() >= cap)
                    throw enumeration_limit("cone enumeration exceeded cap of " +
                                            std::to_string(cap) + " classes");
                out.push_back(current);
            }
            return;
        }
        std::int64_t w = lat.weight(coord);
        for (std::int64_t v = 0; v * w <= remaining; ++v) {
            current[static_cast<std::size_t>(coord)] = v;
            self(self, coord + 1, remaining - v * w);
        }
        current[static_cast<std::size_t>(coord)] = 0;
    };
    recurse(recurse, 0, bound);
    return out;
}

/**
 * Antisymmetric integer bilinear form on a lattice, stored as a full matrix.
 */
class PairingForm {
public:
    PairingForm(Lattice lattice, std::vector<std::vector<std::int64_t>> matrix)
        : lattice_(std::move(lattice)), matrix_(std::move(matrix)) {
        auto n = static_cast<std::size_t>(lattice_.rank());
        if (matrix_.size() != n)
            throw validation_error("pairing matrix row count does not match lattice rank");
        for (const auto& row : matrix_)
            if (row.size() != n)
                throw validation_error("pairing matrix is not square");
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (matrix_[i][j] != -matrix_[j][i])
                    throw validation_error("pairing matrix is not antisymmetric");
    }

    const Lattice& lattice() const { return lattice_; }
    const std::vector<std::vector<std::int64_t>>& matrix() const { return matrix_; }

    std::int64_t pair(const Class& a, const Class& b) const {
        lattice_.check_rank(a);
        lattice_.check_rank(b);
        std::int64_t total = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i] == 0) continue;
            std::int64_t row = 0;
            for (std::size_t j = 0; j < b.size(); ++j) row += matrix_[i][j] * b[j];
            total += a[i] * row;
        }
        return total;
    }

    /** True when pair(g, -) vanishes identically on the whole lattice. */
    bool is_invisible(const Class& g) const {
        lattice_.check_rank(g);
        auto n = static_cast<std::size_t>(lattice_.rank());
        for (std::size_t j = 0; j < n; ++j) {
            std::int64_t entry = 0;
            for (std::size_t i = 0; i < n; ++i) entry += g[i] * matrix_[i][j];
            if (entry != 0) return false;
        }
        return true;
    }

    bool operator==(const PairingForm& other) const {
        return lattice_ == other.lattice_ && matrix_ == other.matrix_;
    }

private:
    Lattice lattice_;
    std::vector<std::vector<std::int64_t>> matrix_;
};

namespace detail {

/** True when the integer columns of `m` (rows x cols) span all of Z^rows.
 *  Uses unimodular column operations, so the column span is preserved. */
inline bool columns_span_lattice(std::vector<std::vector<Integer>> m) {
    if (m.empty()) return false;
    std::size_t rows = m.size();
    std::size_t cols = m[0].size();
    std::size_t lead = 0;
    for (std::size_t r = 0; r < rows; ++r) {
        if (lead >= cols) return false;
        // Euclid across columns lead..cols-1 until row r has a single nonzero entry.
        while (true) {
            std::size_t best = cols;
            for (std::size_t c = lead; c < cols; ++c) {
                if (m[r][c] == 0) continue;
                if (best == cols || abs(m[r][c]) < abs(m[r][best])) best = c;
            }
            if (best == cols) return false; // row of zeros: rank deficient
            if (best != lead)
                for (std::size_t i = 0; i < rows; ++i) std::swap(m[i][best], m[i][lead]);
            bool clean = true;
            for (std::size_t c = lead + 1; c < cols; ++c) {
                if (m[r][c] == 0) continue;
                Integer q = m[r][c] / m[r][lead];
                for (std::size_t i = 0; i < rows; ++i) m[i][c] -= q * m[i][lead];
                if (m[r][c] != 0) clean = false;
            }
            if (clean) break;
        }
        if (abs(m[r][lead]) != 1) return false;
        ++lead;
    }
    return true;
}

} // namespace detail

/**
 * Cone-preserving surjective homomorphism between lattices, given by its
 * integer matrix (columns are images of source basis vectors).
 */
class LatticeMap {
public:
    LatticeMap(Lattice source, Lattice target, std::vector<std::vector<std::int64_t>> matrix)
        : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
        auto rows = static_cast<std::size_t>(target_.rank());
        auto cols = static_cast<std::size_t>(source_.rank());
        if (matrix_.size() != rows)
            throw validation_error("lattice map matrix row count does not match target rank");
        for (const auto& row : matrix_)
            if (row.size() != cols)
                throw validation_error("lattice map matrix column count does not match source rank");
        for (std::size_t c = 0; c < cols; ++c) {
            bool nonzero = false;
            for (std::size_t r = 0; r < rows; ++r) {
                if (matrix_[r][c] < 0)
                    throw validation_error("lattice map does not preserve the positive cone");
                if (matrix_[r][c] != 0) nonzero = true;
            }
            if (!nonzero)
                throw validation_error("lattice map sends a basis vector to zero");
        }
        std::vector<std::vector<Integer>> big(rows, std::vector<Integer>(cols));
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c) big[r][c] = matrix_[r][c];
        if (!detail::columns_span_lattice(std::move(big)))
            throw validation_error("lattice map is not surjective");
    }

    const Lattice& source() const { return source_; }
    const Lattice& target() const { return target_; }
    const std::vector<std::vector<std::int64_t>>& matrix() const { return matrix_; }

    Class apply(const Class& g) const {
        source_.check_rank(g);
        Class out(static_cast<std::size_t>(target_.rank()), 0);
        for (std::size_t r = 0; r < out.size(); ++r)
            for (std::size_t c = 0; c < g.size(); ++c) out[r] += matrix_[r][c] * g[c];
        return out;
    }

private:
    Lattice source_;
    Lattice target_;
    std::vector<std::vector<std::int64_t>> matrix_;
};

/** Applies a square integer matrix (rows of coefficients) to a class. */
inline Class apply_integer_matrix(const std::vector<std::vector<std::int64_t>>& m,
                                  const Class& g) {
    Class out(m.size(), 0);
    for (std::size_t r = 0; r < m.size(); ++r) {
        if (m[r].size() != g.size())
            throw validation_error("matrix row size does not match class rank");
        for (std::size_t c = 0; c < g.size(); ++c) out[r] += m[r][c] * g[c];
    }
    return out;
}

enum class SpectrumKind { omega, dtbar };

inline const char* kind_name(SpectrumKind k) {
    return k == SpectrumKind::omega ? "omega" : "dtbar";
}

/**
 * Finitely supported table of invariants on positive classes of weighted
 * length at most `level`.  Zero values are never stored.
 */
class Spectrum {
public:
    Spectrum(Lattice lattice, SpectrumKind kind, std::int64_t level)
        : lattice_(std::move(lattice)), kind_(kind), level_(level) {
        if (level_ < 0) throw validation_error("spectrum level must be nonnegative");
    }

    const Lattice& lattice() const { return lattice_; }
    SpectrumKind kind() const { return kind_; }
    std::int64_t level() const { return level_; }

    void set(const Class& g, const Rational& value) {
        if (!is_positive_class(g))
            throw validation_error("spectrum class " + bps::to_string(g) + " is not positive");
        if (lattice_.ell(g) > level_)
            throw validation_error("spectrum class " + bps::to_string(g) +
                                   " exceeds level " + std::to_string(level_));
        if (value == 0)
            entries_.erase(g);
        else
            entries_[g] = value;
    }

    Rational value(const Class& g) const {
        auto it = entries_.find(g);
        return it == entries_.end() ? Rational(0) : it->second;
    }

    bool contains(const Class& g) const { return entries_.count(g) != 0; }
    std::size_t size() const { return entries_.size(); }

    const std::map<Class, Rational, ClassLess>& entries() const { return entries_; }

    std::vector<Class> support() const {
        std::vector<Class> out;
        out.reserve(entries_.size());
        for (const auto& [g, v] : entries_) out.push_back(g);
        return out;
    }

    /** Copy with a lower level; entries above the new level are dropped. */
    Spectrum truncated(std::int64_t new_level) const {
        Spectrum out(lattice_, kind_, new_level);
        for (const auto& [g, v] : entries_)
            if (lattice_.ell(g) <= new_level) out.set(g, v);
        return out;
    }

    bool operator==(const Spectrum& other) const {
        return lattice_ == other.lattice_ && kind_ == other.kind_ &&
               level_ == other.level_ && entries_ == other.entries_;
    }
    bool operator!=(const Spectrum& other) const { return !(*this == other); }

private:
    Lattice lattice_;
    SpectrumKind kind_;
    std::int64_t level_;
    std::map<Class, Rational, ClassLess> entries_;
};

/** Multi-cover sum: dtbar(b) = sum over m>=1 of omega(b/m)/m^2.
 *  Iterates support times multiples, so sparsity is preserved. */
inline Spectrum omega_to_dtbar(const Spectrum& s) {
    if (s.kind() != SpectrumKind::omega)
        throw validation_error("omega_to_dtbar expects an omega spectrum");
    Spectrum out(s.lattice(), SpectrumKind::dtbar, s.level());
    std::map<Class, Rational, ClassLess> acc;
    for (const auto& [g, v] : s.entries()) {
        for (std::int64_t m = 1; m * s.lattice().ell(g) <= s.level(); ++m)
            acc[scale_class(m, g)] += v / Rational(m * m);
    }
    for (const auto& [g, v] : acc) out.set(g, v);
    return out;
}

/** Moebius inversion of the multi-cover sum:
 *  omega(b) = sum over m dividing gcd(b) of mu(m) * dtbar(b/m) / m^2. */
inline Spectrum dtbar_to_omega(const Spectrum& s) {
    if (s.kind() != SpectrumKind::dtbar)
        throw validation_error("dtbar_to_omega expects a dtbar spectrum");
    Spectrum out(s.lattice(), SpectrumKind::omega, s.level());
    // Candidates are all in-level multiples of support classes: a class with a
    // vanishing stored value can still invert to a nonzero invariant.
    std::map<Class, bool, ClassLess> candidates;
    for (const auto& [g, v] : s.entries())
        for (std::int64_t m = 1; m * s.lattice().ell(g) <= s.level(); ++m)
            candidates[scale_class(m, g)] = true;
    for (const auto& [g, unused] : candidates) {
        Rational total = 0;
        for (std::int64_t m : divisors(g)) {
            int mu = mobius(m);
            if (mu == 0) continue;
            Class reduced(g.size());
            for (std::size_t i = 0; i < g.size(); ++i) reduced[i] = g[i] / m;
            total += Rational(mu) * s.value(reduced) / Rational(m * m);
        }
        if (total != 0) out.set(g, total);
    }
    return out;
}

/** Fiber sum along a lattice map: (push s)(a) = sum of s over the preimage of
 *  a inside the truncation.  The map must not increase weighted length, so
 *  pushed classes stay within the level. */
inline Spectrum pushforward(const Spectrum& s, const LatticeMap& map) {
    if (s.lattice() != map.source())
        throw validation_error("pushforward: spectrum does not live on the map's source");
    for (int i = 0; i < map.source().rank(); ++i)
        if (map.target().ell(map.apply(map.source().basis(i))) > map.source().weight(i))
            throw validation_error("pushforward: map increases weighted length");
    Spectrum out(map.target(), s.kind(), s.level());
    std::map<Class, Rational, ClassLess> acc;
    for (const auto& [g, v] : s.entries()) acc[map.apply(g)] += v;
    for (const auto& [g, v] : acc) out.set(g, v);
    return out;
}

} // namespace bps
