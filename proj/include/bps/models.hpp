#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bps/errors.hpp"
#include "bps/lattice.hpp"
#include "bps/quiver.hpp"
#include "bps/rational.hpp"
#include "bps/stability.hpp"

namespace bps {

/** Affine Cartan matrix with its minimal imaginary root delta. */
struct CartanData {
    std::vector<std::vector<std::int64_t>> matrix;
    Class delta;

    CartanData(std::vector<std::vector<std::int64_t>> m, Class d)
        : matrix(std::move(m)), delta(std::move(d)) {
        std::size_t n = matrix.size();
        if (n == 0) throw validation_error("Cartan matrix must be nonempty");
        for (const auto& row : matrix)
            if (row.size() != n) throw validation_error("Cartan matrix is not square");
        for (std::size_t i = 0; i < n; ++i) {
            if (matrix[i][i] != 2)
                throw validation_error("Cartan matrix diagonal entries must be 2");
            for (std::size_t j = 0; j < n; ++j)
                if (matrix[i][j] != matrix[j][i])
                    throw validation_error("Cartan matrix is not symmetric");
        }
        if (delta.size() != n) throw validation_error("delta rank does not match Cartan matrix");
        if (!is_positive_class(delta)) throw validation_error("delta must be positive");
        for (std::size_t i = 0; i < n; ++i) {
            std::int64_t row = 0;
            for (std::size_t j = 0; j < n; ++j) row += matrix[i][j] * delta[j];
            if (row != 0) throw validation_error("delta is not in the Cartan kernel");
        }
    }

    int rank() const { return static_cast<int>(matrix.size()); }
};

/** Cyclic affine A Cartan matrix on l vertices (l >= 2); both wraparound
 *  adjacencies of the 2-cycle land on the same entry, giving -2 there. */
inline CartanData affine_a_cartan(int l) {
    if (l < 2) throw validation_error("affine A Cartan matrix needs at least 2 vertices");
    auto n = static_cast<std::size_t>(l);
    std::vector<std::vector<std::int64_t>> m(n, std::vector<std::int64_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 2;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = (i + 1) % n;
        m[i][j] -= 1;
        m[j][i] -= 1;
    }
    return CartanData(std::move(m), Class(n, 1));
}

/** Tits form q(a) = a^T C a / 2; integer because diagonal entries are even. */
inline std::int64_t tits_form(const CartanData& c, const Class& a) {
    if (a.size() != static_cast<std::size_t>(c.rank()))
        throw validation_error("tits_form: class rank mismatch");
    for (auto v : a)
        if (v < 0) throw validation_error("tits_form expects a nonnegative class");
    std::int64_t total = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) total += a[i] * c.matrix[i][j] * a[j];
    return total / 2;
}

/** Positive real roots {a > 0 : q(a) = 1, ell(a) <= bound}, found by
 *  breadth-first search over the positive cone with unit weights. */
inline std::vector<Class> real_roots(const CartanData& c, std::int64_t bound,
                                     std::size_t cap = 2'000'000) {
    Lattice lat = Lattice::with_unit_weights(c.rank());
    std::set<Class, ClassLess> visited;
    std::deque<Class> queue;
    for (int i = 0; i < c.rank(); ++i) {
        if (bound < 1) break;
        Class e = lat.basis(i);
        visited.insert(e);
        queue.push_back(e);
    }
    std::vector<Class> out;
    while (!queue.empty()) {
        Class a = queue.front();
        queue.pop_front();
        if (tits_form(c, a) == 1) out.push_back(a);
        if (lat.ell(a) >= bound) continue;
        for (int i = 0; i < c.rank(); ++i) {
            Class next = add_classes(a, lat.basis(i));
            if (visited.count(next)) continue;
            if (visited.size() >= cap)
                throw enumeration_limit("real_roots enumeration exceeded cap of " +
                                        std::to_string(cap));
            visited.insert(next);
            queue.push_back(next);
        }
    }
    std::sort(out.begin(), out.end(), ClassLess{});
    return out;
}

/** Sign word on the cyclic arrows of an affine A quiver; entry k is the sign
 *  of the half-edge between vertices k and k+1 (mod l). */
class SigmaWord {
public:
    explicit SigmaWord(std::vector<int> assignment) : assignment_(std::move(assignment)) {
        if (assignment_.size() < 2)
            throw validation_error("sigma word needs length at least 2");
        for (int s : assignment_)
            if (s != 1 && s != -1) throw validation_error("sigma word entries must be +1 or -1");
    }

    static SigmaWord parse(const std::string& text) {
        std::vector<int> signs;
        for (char ch : text) {
            if (ch == '+') signs.push_back(1);
            else if (ch == '-') signs.push_back(-1);
            else throw validation_error("sigma word may only contain '+' and '-'");
        }
        return SigmaWord(std::move(signs));
    }

    int length() const { return static_cast<int>(assignment_.size()); }
    const std::vector<int>& assignment() const { return assignment_; }

    /** Vertices whose two adjacent half-edges carry equal signs (these are
     *  the loop-carrying vertices). */
    std::vector<bool> loop_vertices() const {
        auto l = static_cast<std::size_t>(length());
        std::vector<bool> out(l, false);
        for (std::size_t k = 0; k < l; ++k)
            out[k] = assignment_[(k + l - 1) % l] == assignment_[k];
        return out;
    }

    int plus_count() const {
        int n = 0;
        for (int s : assignment_)
            if (s == 1) ++n;
        return n;
    }

private:
    std::vector<int> assignment_;
};

namespace detail {

inline Class adjoin_rank(std::int64_t r, const Class& a) {
    Class out;
    out.reserve(a.size() + 1);
    out.push_back(r);
    out.insert(out.end(), a.begin(), a.end());
    return out;
}

} // namespace detail

/** Framed affine A initial spectrum: rank-one class 1; imaginary classes
 *  n*delta carry -l; real roots a carry (-1)^{eps(a)} with eps summing the
 *  coordinates of a over loop-free vertices. */
inline Spectrum affineA_initial(const SigmaWord& sigma, std::int64_t bound) {
    int l = sigma.length();
    CartanData cartan = affine_a_cartan(l);
    Lattice lat = Lattice::with_unit_weights(1 + l);
    Spectrum s(lat, SpectrumKind::omega, bound);
    Class rank_one = detail::adjoin_rank(1, Class(static_cast<std::size_t>(l), 0));
    if (lat.ell(rank_one) <= bound) s.set(rank_one, 1);
    for (std::int64_t n = 1; n * l <= bound; ++n)
        s.set(detail::adjoin_rank(0, scale_class(n, cartan.delta)), Rational(-l));
    std::vector<bool> loops = sigma.loop_vertices();
    for (const Class& a : real_roots(cartan, bound)) {
        std::int64_t eps = 0;
        for (std::size_t k = 0; k < a.size(); ++k)
            if (!loops[k]) eps += a[k];
        s.set(detail::adjoin_rank(0, a), Rational(eps % 2 != 0 ? -1 : 1));
    }
    return s;
}

/** Framed McKay initial spectrum for an affine ADE Cartan datum:
 *  n*delta carries -(number of vertices); real roots carry -1. */
inline Spectrum mckay_initial(const CartanData& cartan, std::int64_t bound) {
    int n_vertices = cartan.rank();
    Lattice lat = Lattice::with_unit_weights(1 + n_vertices);
    Spectrum s(lat, SpectrumKind::omega, bound);
    Class rank_one = detail::adjoin_rank(1, Class(static_cast<std::size_t>(n_vertices), 0));
    if (lat.ell(rank_one) <= bound) s.set(rank_one, 1);
    std::int64_t delta_ell = 0;
    for (auto v : cartan.delta) delta_ell += v;
    for (std::int64_t n = 1; n * delta_ell <= bound; ++n)
        s.set(detail::adjoin_rank(0, scale_class(n, cartan.delta)), Rational(-n_vertices));
    for (const Class& a : real_roots(cartan, bound))
        s.set(detail::adjoin_rank(0, a), Rational(-1));
    return s;
}

/** Initial spectrum of the (0,-2)-curve model with N_pot > 1 potential
 *  points: diagonal classes carry -2, off-by-one classes carry N_pot. */
inline Spectrum zero_minus_two_initial(std::int64_t n_pot, std::int64_t bound) {
    if (n_pot <= 1)
        throw validation_error("zero_minus_two_initial needs N_pot > 1");
    Lattice lat = Lattice::with_unit_weights(3);
    Spectrum s(lat, SpectrumKind::omega, bound);
    if (bound >= 1) s.set({1, 0, 0}, 1);
    for (std::int64_t n = 1; 2 * n <= bound; ++n) s.set({0, n, n}, -2);
    for (std::int64_t n = 0; 2 * n + 1 <= bound; ++n) {
        s.set({0, n, n + 1}, Rational(n_pot));
        s.set({0, n + 1, n}, Rational(n_pot));
    }
    return s;
}

/** Resolved conifold data: framed quiver, its antisymmetrized pairing (only
 *  the framing arrow survives), the central chamber charge, and the initial
 *  spectrum. */
struct ConifoldModel {
    Quiver quiver;
    Lattice lattice;
    PairingForm pairing;
    CentralCharge center;
    Spectrum omega_minus;
};

inline ConifoldModel conifold_center(std::int64_t bound) {
    Quiver q({"inf", "0", "1"}, {{0, 1}, {1, 2}, {1, 2}, {2, 1}, {2, 1}});
    Lattice lat = Lattice::with_unit_weights(3);
    PairingForm pairing = antisym_pairing(q, lat);
    CentralCharge center(lat, {{1, 1}, {0, 1}, {0, 1}});
    Spectrum s(lat, SpectrumKind::omega, bound);
    if (bound >= 1) s.set({1, 0, 0}, 1);
    for (std::int64_t n = 1; 2 * n <= bound; ++n) s.set({0, n, n}, -2);
    for (std::int64_t n = 0; 2 * n + 1 <= bound; ++n) {
        s.set({0, n, n + 1}, 1);
        s.set({0, n + 1, n}, 1);
    }
    return ConifoldModel{std::move(q), std::move(lat), std::move(pairing), std::move(center),
                         std::move(s)};
}

/** A generic chamber charge with the framing phase maximal (D6-dominant);
 *  the real parts are chosen so no two in-truncation classes up to level 6
 *  share a phase unless their pairing vanishes. */
inline CentralCharge conifold_plus_charge() {
    return CentralCharge(Lattice::with_unit_weights(3),
                         {{-1, 1}, {Rational(1, 5), 1}, {Rational(1, 7), 1}});
}

/** Conifold symmetry (v_inf, v_0, v_1) -> (v_0 - v_inf, v_0, v_1). */
inline std::vector<std::vector<std::int64_t>> conifold_involution() {
    return {{-1, 1, 0}, {0, 1, 0}, {0, 0, 1}};
}

/** Rank-2 initial spectrum: one rank-one class and point classes (0,n)
 *  weighted by -chi. */
inline Spectrum d0d6_minus(std::int64_t chi, std::int64_t bound) {
    Lattice lat = x_lattice();
    Spectrum s(lat, SpectrumKind::omega, bound);
    if (bound >= 1) s.set({1, 0}, 1);
    if (chi != 0)
        for (std::int64_t n = 1; n <= bound; ++n) s.set({0, n}, Rational(-chi));
    return s;
}

inline CentralCharge x_charge_minus() {
    return CentralCharge(x_lattice(), {{1, 1}, {0, 1}});
}

inline CentralCharge x_charge_plus() {
    return CentralCharge(x_lattice(), {{-1, 1}, {0, 1}});
}

/** Rank-2 symmetry (r, n) -> (n - r, n). */
inline std::vector<std::vector<std::int64_t>> x_involution() {
    return {{-1, 1}, {0, 1}};
}

/** Initial spectrum on the framed quiver lattice: 1 at the framing class,
 *  -sgn(chi) at each basis class e_{j,k}. */
inline Spectrum quiver_minus(int chi, int n, std::int64_t bound) {
    StandardQuiver sq = build_standard(chi, n);
    Spectrum s(sq.lattice, SpectrumKind::omega, bound);
    if (bound >= 1) s.set(sq.lattice.basis(0), 1);
    int sign = chi > 0 ? -1 : (chi < 0 ? 1 : 0);
    if (sign != 0) {
        int copies = chi < 0 ? -chi : chi;
        for (int j = 1; j <= copies; ++j)
            for (int k = 1; k <= n; ++k)
                if (k <= bound)
                    s.set(sq.lattice.basis(1 + (j - 1) * n + (k - 1)), Rational(sign));
    }
    return s;
}

inline Spectrum quiver_minus(int chi, int n) { return quiver_minus(chi, n, n); }

/** Central charge on the framed quiver lattice with Z(e_0) = theta_r and
 *  Z(e_{j,k}) = k * theta_n; equals the rank-2 charge pulled back along the
 *  projection. */
inline CentralCharge standard_charge(const StandardQuiver& sq, const RationalComplex& theta_r,
                                     const RationalComplex& theta_n) {
    std::vector<RationalComplex> values;
    values.push_back(theta_r);
    int copies = sq.chi < 0 ? -sq.chi : sq.chi;
    for (int j = 1; j <= copies; ++j)
        for (int k = 1; k <= sq.n; ++k)
            values.push_back({Rational(k) * theta_n.re, Rational(k) * theta_n.im});
    return CentralCharge(sq.lattice, std::move(values));
}

/** Framed-lattice symmetry (r, n_vec) -> (sum k n_{j,k} - r, n_vec). */
inline std::vector<std::vector<std::int64_t>> standard_involution(const StandardQuiver& sq) {
    auto rank = static_cast<std::size_t>(sq.lattice.rank());
    std::vector<std::vector<std::int64_t>> m(rank, std::vector<std::int64_t>(rank, 0));
    m[0][0] = -1;
    for (std::size_t i = 1; i < rank; ++i) {
        m[0][i] = sq.lattice.weight(static_cast<int>(i));
        m[i][i] = 1;
    }
    return m;
}

} // namespace bps
