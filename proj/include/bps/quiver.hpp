#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bps/errors.hpp"
#include "bps/lattice.hpp"
#include "bps/rational.hpp"

namespace bps {

/** Directed multigraph with labeled vertices; parallel arrows and loops are
 *  stored as repeated (source, target) pairs, kept sorted. */
class Quiver {
public:
    Quiver(std::vector<std::string> labels, std::vector<std::pair<int, int>> arrows)
        : labels_(std::move(labels)), arrows_(std::move(arrows)) {
        for (const auto& [s, t] : arrows_) {
            if (s < 0 || t < 0 || s >= vertex_count() || t >= vertex_count())
                throw validation_error("quiver arrow endpoint out of range");
        }
        std::sort(arrows_.begin(), arrows_.end());
    }

    int vertex_count() const { return static_cast<int>(labels_.size()); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(int v) const { return labels_.at(static_cast<std::size_t>(v)); }
    const std::vector<std::pair<int, int>>& arrows() const { return arrows_; }

    int arrow_count() const { return static_cast<int>(arrows_.size()); }

    int loop_count() const {
        int n = 0;
        for (const auto& [s, t] : arrows_)
            if (s == t) ++n;
        return n;
    }

    int multiplicity(int s, int t) const {
        int n = 0;
        for (const auto& [a, b] : arrows_)
            if (a == s && b == t) ++n;
        return n;
    }

    int find_vertex(const std::string& label) const {
        for (int v = 0; v < vertex_count(); ++v)
            if (labels_[static_cast<std::size_t>(v)] == label) return v;
        throw validation_error("quiver has no vertex labeled '" + label + "'");
    }

    bool operator==(const Quiver& other) const {
        return labels_ == other.labels_ && arrows_ == other.arrows_;
    }

private:
    std::vector<std::string> labels_;
    std::vector<std::pair<int, int>> arrows_;
};

/** Euler form of the quiver: sum_v a_v b_v - sum_{arrows s->t} a_s b_t. */
inline std::int64_t euler_form(const Quiver& q, const Class& a, const Class& b) {
    if (a.size() != static_cast<std::size_t>(q.vertex_count()) ||
        b.size() != static_cast<std::size_t>(q.vertex_count()))
        throw validation_error("euler_form: dimension vector size mismatch");
    std::int64_t total = 0;
    for (std::size_t v = 0; v < a.size(); ++v) total += a[v] * b[v];
    for (const auto& [s, t] : q.arrows()) total -= a[static_cast<std::size_t>(s)] * b[static_cast<std::size_t>(t)];
    return total;
}

/** Antisymmetrized Euler form <a,b> = euler(b,a) - euler(a,b); parallel
 *  arrow pairs in opposite directions cancel. */
inline PairingForm antisym_pairing(const Quiver& q, const Lattice& lattice) {
    if (lattice.rank() != q.vertex_count())
        throw validation_error("antisym_pairing: lattice rank must match vertex count");
    auto n = static_cast<std::size_t>(q.vertex_count());
    std::vector<std::vector<std::int64_t>> m(n, std::vector<std::int64_t>(n, 0));
    for (const auto& [s, t] : q.arrows()) {
        if (s == t) continue;
        m[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)] += 1;
        m[static_cast<std::size_t>(t)][static_cast<std::size_t>(s)] -= 1;
    }
    return PairingForm(lattice, std::move(m));
}

inline PairingForm antisym_pairing(const Quiver& q) {
    return antisym_pairing(q, Lattice::with_unit_weights(q.vertex_count()));
}

inline Quiver opposite(const Quiver& q) {
    std::vector<std::pair<int, int>> arrows;
    arrows.reserve(q.arrows().size());
    for (const auto& [s, t] : q.arrows()) arrows.emplace_back(t, s);
    return Quiver(q.labels(), std::move(arrows));
}

/**
 * The framed quiver family indexed by (chi, N): one framing vertex plus
 * |chi| * N cyclic-fiber vertices (j,k), j <= |chi|, k <= N; k parallel
 * arrows from the framing vertex to (j,k); one loop at each (j,k) when
 * chi > 0.  The charge lattice weights (j,k) by k, and the projection sends
 * the framing vertex to (1,0) and (j,k) to (0,k) in the rank-2 lattice.
 */
struct StandardQuiver {
    int chi;
    int n;
    Quiver quiver;
    Lattice lattice;
    PairingForm pairing;
    std::optional<LatticeMap> projection; // absent for chi = 0 (rank-1 image)
};

inline Lattice x_lattice() { return Lattice::with_unit_weights(2); }

inline PairingForm x_pairing() {
    return PairingForm(x_lattice(), {{0, 1}, {-1, 0}});
}

inline StandardQuiver build_standard(int chi, int n) {
    if (n <= 0 && chi != 0)
        throw validation_error("build_standard needs N >= 1 when chi is nonzero");
    int copies = chi < 0 ? -chi : chi;
    std::vector<std::string> labels;
    std::vector<std::int64_t> weights;
    labels.emplace_back("0");
    weights.push_back(1);
    for (int j = 1; j <= copies; ++j) {
        for (int k = 1; k <= n; ++k) {
            labels.push_back("(" + std::to_string(j) + "," + std::to_string(k) + ")");
            weights.push_back(k);
        }
    }
    std::vector<std::pair<int, int>> arrows;
    for (int j = 1; j <= copies; ++j) {
        for (int k = 1; k <= n; ++k) {
            int v = 1 + (j - 1) * n + (k - 1);
            for (int a = 0; a < k; ++a) arrows.emplace_back(0, v);
            if (chi > 0) arrows.emplace_back(v, v);
        }
    }
    Quiver q(std::move(labels), std::move(arrows));
    Lattice lat(q.vertex_count(), weights);
    PairingForm pairing = antisym_pairing(q, lat);
    std::optional<LatticeMap> projection;
    if (chi != 0) {
        std::vector<std::vector<std::int64_t>> m(2,
            std::vector<std::int64_t>(static_cast<std::size_t>(q.vertex_count()), 0));
        m[0][0] = 1;
        for (int j = 1; j <= copies; ++j)
            for (int k = 1; k <= n; ++k)
                m[1][static_cast<std::size_t>(1 + (j - 1) * n + (k - 1))] = k;
        projection.emplace(lat, x_lattice(), std::move(m));
    }
    return StandardQuiver{chi, n, std::move(q), std::move(lat), std::move(pairing),
                          std::move(projection)};
}

/** Restriction to a vertex subset, with the zero-extension embedding of
 *  dimension vectors back into the full lattice. */
struct RestrictedQuiver {
    Quiver quiver;
    std::vector<int> kept; // original vertex index per restricted vertex
    int full_rank;

    Class embed(const Class& g) const {
        if (g.size() != kept.size())
            throw validation_error("embed: dimension vector size mismatch");
        Class out(static_cast<std::size_t>(full_rank), 0);
        for (std::size_t i = 0; i < kept.size(); ++i)
            out[static_cast<std::size_t>(kept[i])] = g[i];
        return out;
    }
};

inline RestrictedQuiver restrict_quiver(const Quiver& q, std::vector<int> keep) {
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    std::map<int, int> index;
    std::vector<std::string> labels;
    for (int v : keep) {
        if (v < 0 || v >= q.vertex_count())
            throw validation_error("restrict: vertex index out of range");
        index[v] = static_cast<int>(labels.size());
        labels.push_back(q.label(v));
    }
    std::vector<std::pair<int, int>> arrows;
    for (const auto& [s, t] : q.arrows()) {
        auto is = index.find(s);
        auto it = index.find(t);
        if (is != index.end() && it != index.end()) arrows.emplace_back(is->second, it->second);
    }
    return RestrictedQuiver{Quiver(std::move(labels), std::move(arrows)), std::move(keep),
                            q.vertex_count()};
}

/**
 * Support classes relevant to a total class g: members m of the spectrum
 * support with m <= g coordinatewise such that g - m is a nonnegative sum of
 * support classes.  Decided by dynamic programming over the coordinate box
 * below g; the box size is capped.
 */
inline std::vector<Class> gamma_support(const Spectrum& s, const Class& g,
                                        std::size_t cap = 5'000'000) {
    s.lattice().check_rank(g);
    if (!is_positive_class(g))
        throw validation_error("gamma_support target class must be positive");
    std::size_t box = 1;
    for (auto c : g) {
        box *= static_cast<std::size_t>(c + 1);
        if (box > cap)
            throw enumeration_limit("gamma_support box exceeds cap of " + std::to_string(cap));
    }
    std::vector<Class> supp;
    for (const Class& m : s.support()) {
        bool inside = true;
        for (std::size_t i = 0; i < g.size(); ++i)
            if (m[i] > g[i]) inside = false;
        if (inside) supp.push_back(m);
    }
    // reachable[p] = p is a sum of support classes (the empty sum included);
    // lexicographic iteration sees p - m before p since m >= 0.
    std::vector<char> reachable(box, 0);
    auto flatten = [&](const Class& p) {
        std::size_t idx = 0;
        for (std::size_t i = 0; i < p.size(); ++i)
            idx = idx * static_cast<std::size_t>(g[i] + 1) + static_cast<std::size_t>(p[i]);
        return idx;
    };
    Class p(g.size(), 0);
    for (std::size_t idx = 0; idx < box; ++idx) {
        bool ok = (idx == 0);
        for (const Class& m : supp) {
            if (ok) break;
            bool fits = true;
            for (std::size_t i = 0; i < p.size(); ++i)
                if (p[i] < m[i]) fits = false;
            if (fits && reachable[flatten(subtract_classes(p, m))]) ok = true;
        }
        reachable[idx] = ok ? 1 : 0;
        for (std::size_t i = p.size(); i-- > 0;) {
            if (++p[i] <= g[i]) break;
            p[i] = 0;
        }
    }
    std::vector<Class> out;
    for (const Class& m : supp)
        if (reachable[flatten(subtract_classes(g, m))]) out.push_back(m);
    return out;
}

/** BPS quiver built from an integer omega spectrum at a total class:
 *  |omega(m)| vertex copies per relevant class m, pair(m,m') arrows between
 *  copies when positive, one loop per copy when omega(m) < 0. */
struct BpsQuiver {
    Quiver quiver;
    std::vector<Class> vertex_class;
    std::vector<int> vertex_copy;
    std::vector<Class> support;
};

inline BpsQuiver build_bps_quiver(const Spectrum& s, const PairingForm& pairing, const Class& g,
                                  std::size_t cap = 5'000'000) {
    if (s.kind() != SpectrumKind::omega)
        throw validation_error("build_bps_quiver expects an omega spectrum");
    if (pairing.lattice() != s.lattice())
        throw validation_error("build_bps_quiver: pairing lattice mismatch");
    std::vector<Class> supp = gamma_support(s, g, cap);
    std::vector<std::string> labels;
    std::vector<Class> vertex_class;
    std::vector<int> vertex_copy;
    for (const Class& m : supp) {
        Rational v = s.value(m);
        if (!is_integer(v))
            throw validation_error("build_bps_quiver: non-integer invariant " + to_string(v) +
                                   " at class " + to_string(m));
        Integer count = numerator(v) < 0 ? Integer(-numerator(v)) : numerator(v);
        for (Integer j = 1; j <= count; ++j) {
            labels.push_back(to_string(m) + "#" + j.str());
            vertex_class.push_back(m);
            vertex_copy.push_back(static_cast<int>(j));
        }
    }
    std::vector<std::pair<int, int>> arrows;
    int total = static_cast<int>(labels.size());
    for (int u = 0; u < total; ++u) {
        const Class& mu = vertex_class[static_cast<std::size_t>(u)];
        if (numerator(s.value(mu)) < 0) arrows.emplace_back(u, u);
        for (int w = 0; w < total; ++w) {
            std::int64_t p = pairing.pair(mu, vertex_class[static_cast<std::size_t>(w)]);
            for (std::int64_t a = 0; a < p; ++a) arrows.emplace_back(u, w);
        }
    }
    return BpsQuiver{Quiver(std::move(labels), std::move(arrows)), std::move(vertex_class),
                     std::move(vertex_copy), std::move(supp)};
}

/**
 * Canonical text form of a quiver whose vertices carry (class, copy) tags
 * and whose structure is uniform across copies of a class: vertices sorted
 * by (class, copy), arrows rendered through that order and sorted.  Two such
 * quivers are isomorphic (respecting classes) iff their forms are equal.
 */
inline std::string canonical_form(const Quiver& q, const std::vector<Class>& vertex_class,
                                  const std::vector<int>& vertex_copy) {
    if (vertex_class.size() != static_cast<std::size_t>(q.vertex_count()) ||
        vertex_copy.size() != static_cast<std::size_t>(q.vertex_count()))
        throw validation_error("canonical_form: tag count mismatch");
    auto tag = [&](int v) {
        return to_string(vertex_class[static_cast<std::size_t>(v)]) + "#" +
               std::to_string(vertex_copy[static_cast<std::size_t>(v)]);
    };
    std::vector<std::string> vertex_lines;
    for (int v = 0; v < q.vertex_count(); ++v) vertex_lines.push_back(tag(v));
    std::sort(vertex_lines.begin(), vertex_lines.end());
    std::vector<std::string> arrow_lines;
    for (const auto& [s, t] : q.arrows()) arrow_lines.push_back(tag(s) + " -> " + tag(t));
    std::sort(arrow_lines.begin(), arrow_lines.end());
    std::string out;
    for (const auto& line : vertex_lines) out += "vertex " + line + "\n";
    for (const auto& line : arrow_lines) out += "arrow " + line + "\n";
    return out;
}

/** Canonical form of a standard quiver, tagging vertices by their projected
 *  rank-2 class and fiber copy index; requires chi != 0. */
inline std::string canonical_form(const StandardQuiver& sq) {
    if (!sq.projection)
        throw validation_error("canonical_form needs the rank-2 projection (chi != 0)");
    std::vector<Class> vertex_class;
    std::vector<int> vertex_copy;
    vertex_class.push_back(sq.projection->apply(sq.lattice.basis(0)));
    vertex_copy.push_back(1);
    int copies = sq.chi < 0 ? -sq.chi : sq.chi;
    for (int j = 1; j <= copies; ++j) {
        for (int k = 1; k <= sq.n; ++k) {
            int v = 1 + (j - 1) * sq.n + (k - 1);
            vertex_class.push_back(sq.projection->apply(sq.lattice.basis(v)));
            vertex_copy.push_back(j);
        }
    }
    return canonical_form(sq.quiver, vertex_class, vertex_copy);
}

/** Deterministic DOT output: vertices sorted by label, arrows sorted by
 *  (source, target) labels, one line per parallel arrow. */
inline std::string export_dot(const Quiver& q) {
    std::vector<std::string> vertices = q.labels();
    std::sort(vertices.begin(), vertices.end());
    std::vector<std::pair<std::string, std::string>> arrows;
    for (const auto& [s, t] : q.arrows()) arrows.emplace_back(q.label(s), q.label(t));
    std::sort(arrows.begin(), arrows.end());
    std::string out = "digraph {\n";
    for (const auto& v : vertices) out += "  \"" + v + "\";\n";
    for (const auto& [s, t] : arrows) out += "  \"" + s + "\" -> \"" + t + "\";\n";
    out += "}\n";
    return out;
}

} // namespace bps
