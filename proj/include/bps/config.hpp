#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bps/errors.hpp"
#include "bps/lattice.hpp"
#include "bps/models.hpp"
#include "bps/quiver.hpp"
#include "bps/rational.hpp"
#include "bps/stability.hpp"

namespace bps {

/** Parsed sectioned key-value file: '#' starts a comment, '[name]' opens a
 *  section, 'key = value' adds an entry; keys may repeat within a section. */
struct ConfigDoc {
    std::map<std::string, std::vector<std::pair<std::string, std::string>>> sections;

    bool has(const std::string& section) const { return sections.count(section) != 0; }

    std::vector<std::string> values(const std::string& section, const std::string& key) const {
        std::vector<std::string> out;
        auto it = sections.find(section);
        if (it == sections.end()) return out;
        for (const auto& [k, v] : it->second)
            if (k == key) out.push_back(v);
        return out;
    }

    std::optional<std::string> single(const std::string& section, const std::string& key) const {
        auto all = values(section, key);
        if (all.empty()) return std::nullopt;
        if (all.size() > 1)
            throw validation_error("config key '" + key + "' in [" + section +
                                   "] may appear only once");
        return all[0];
    }

    std::string required(const std::string& section, const std::string& key) const {
        auto v = single(section, key);
        if (!v)
            throw validation_error("config is missing '" + key + "' in [" + section + "]");
        return *v;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(trim(s.substr(start)));
            break;
        }
        out.push_back(trim(s.substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

inline std::int64_t parse_integer(const std::string& s) {
    Rational r = parse_rational(s);
    if (!is_integer(r))
        throw validation_error("expected an integer, got '" + s + "'");
    Integer n = numerator(r);
    if (n > std::numeric_limits<std::int64_t>::max() ||
        n < std::numeric_limits<std::int64_t>::min())
        throw validation_error("integer out of range: '" + s + "'");
    return static_cast<std::int64_t>(n);
}

inline std::vector<std::int64_t> parse_integer_list(const std::string& s) {
    std::vector<std::int64_t> out;
    for (const auto& part : split(s, ',')) out.push_back(parse_integer(part));
    return out;
}

inline std::vector<std::vector<std::int64_t>> parse_integer_matrix(const std::string& s) {
    std::vector<std::vector<std::int64_t>> out;
    for (const auto& row : split(s, ';')) out.push_back(parse_integer_list(row));
    return out;
}

inline RationalComplex parse_complex(const std::string& s) {
    auto parts = split(s, ',');
    if (parts.size() != 2)
        throw validation_error("expected 're,im' complex value, got '" + s + "'");
    return RationalComplex{parse_rational(parts[0]), parse_rational(parts[1])};
}

} // namespace detail

inline ConfigDoc parse_config_text(const std::string& text) {
    ConfigDoc doc;
    std::string section;
    std::size_t line_number = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        std::string line = end == std::string::npos ? text.substr(start)
                                                    : text.substr(start, end - start);
        start = end == std::string::npos ? text.size() + 1 : end + 1;
        ++line_number;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw validation_error("config line " + std::to_string(line_number) +
                                       ": unterminated section header");
            section = detail::trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw validation_error("config line " + std::to_string(line_number) +
                                       ": empty section name");
            doc.sections[section]; // sections may legitimately be empty
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw validation_error("config line " + std::to_string(line_number) +
                                   ": expected 'key = value'");
        if (section.empty())
            throw validation_error("config line " + std::to_string(line_number) +
                                   ": entry outside any section");
        std::string key = detail::trim(line.substr(0, eq));
        std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty())
            throw validation_error("config line " + std::to_string(line_number) +
                                   ": empty key");
        doc.sections[section].emplace_back(key, value);
    }
    return doc;
}

/** Everything one wall-crossing run needs, decoded and validated. */
struct RunSpec {
    Lattice lattice;
    PairingForm pairing;
    CentralCharge z_minus;
    CentralCharge z_plus;
    Spectrum omega_minus;
    std::int64_t level;
    std::optional<std::vector<std::vector<std::int64_t>>> involution;
    std::optional<LatticeMap> pushforward;
};

namespace detail {

struct GeneratedModel {
    Lattice lattice;
    PairingForm pairing;
    Spectrum omega_minus;
};

inline PairingForm framing_pairing(int rank) {
    std::vector<std::vector<std::int64_t>> m(static_cast<std::size_t>(rank),
                                             std::vector<std::int64_t>(static_cast<std::size_t>(rank), 0));
    m[0][1] = 1;
    m[1][0] = -1;
    return PairingForm(Lattice::with_unit_weights(rank), std::move(m));
}

inline int parse_small_int(const std::string& s) {
    std::int64_t v = parse_integer(s);
    if (v > 1'000'000 || v < -1'000'000)
        throw validation_error("integer parameter out of range: '" + s + "'");
    return static_cast<int>(v);
}

inline void check_keys(const ConfigDoc& doc, const std::string& section,
                       const std::set<std::string>& allowed) {
    auto it = doc.sections.find(section);
    if (it == doc.sections.end()) return;
    for (const auto& [k, v] : it->second)
        if (!allowed.count(k))
            throw validation_error("config: unknown key '" + k + "' in [" + section + "]");
}

inline GeneratedModel generated_spectrum(const ConfigDoc& doc, const std::string& name,
                                         std::int64_t bound) {
    if (name == "d0d6") {
        check_keys(doc, "spectrum", {"generator", "bound", "chi"});
        std::int64_t chi = parse_integer(doc.required("spectrum", "chi"));
        return GeneratedModel{x_lattice(), x_pairing(), d0d6_minus(chi, bound)};
    }
    if (name == "quiver") {
        check_keys(doc, "spectrum", {"generator", "bound", "chi", "N"});
        int chi = parse_small_int(doc.required("spectrum", "chi"));
        int n = parse_small_int(doc.required("spectrum", "N"));
        StandardQuiver sq = build_standard(chi, n);
        return GeneratedModel{sq.lattice, sq.pairing, quiver_minus(chi, n, bound)};
    }
    if (name == "conifold") {
        check_keys(doc, "spectrum", {"generator", "bound"});
        ConifoldModel model = conifold_center(bound);
        return GeneratedModel{model.lattice, model.pairing, model.omega_minus};
    }
    if (name == "zero_minus_two") {
        check_keys(doc, "spectrum", {"generator", "bound", "npot"});
        std::int64_t npot = parse_integer(doc.required("spectrum", "npot"));
        return GeneratedModel{Lattice::with_unit_weights(3), framing_pairing(3),
                              zero_minus_two_initial(npot, bound)};
    }
    if (name == "affine_a") {
        check_keys(doc, "spectrum", {"generator", "bound", "sigma"});
        SigmaWord sigma = SigmaWord::parse(doc.required("spectrum", "sigma"));
        return GeneratedModel{Lattice::with_unit_weights(1 + sigma.length()),
                              framing_pairing(1 + sigma.length()),
                              affineA_initial(sigma, bound)};
    }
    if (name == "mckay") {
        check_keys(doc, "spectrum", {"generator", "bound", "cycle"});
        int cycle = parse_small_int(doc.required("spectrum", "cycle"));
        CartanData cartan = affine_a_cartan(cycle);
        return GeneratedModel{Lattice::with_unit_weights(1 + cartan.rank()),
                              framing_pairing(1 + cartan.rank()),
                              mckay_initial(cartan, bound)};
    }
    throw validation_error("config: unknown spectrum generator '" + name + "'");
}

inline CentralCharge parse_charge(const ConfigDoc& doc, const std::string& section,
                                  const Lattice& lattice) {
    check_keys(doc, section, {"value"});
    auto raw = doc.values(section, "value");
    if (raw.size() != static_cast<std::size_t>(lattice.rank()))
        throw validation_error("config: [" + section + "] needs exactly " +
                               std::to_string(lattice.rank()) + " value entries");
    std::vector<RationalComplex> values;
    values.reserve(raw.size());
    for (const auto& s : raw) values.push_back(parse_complex(s));
    return CentralCharge(lattice, std::move(values));
}

} // namespace detail

inline RunSpec build_run_spec(const ConfigDoc& doc) {
    for (const auto& [name, entries] : doc.sections) {
        static const std::set<std::string> known = {"lattice", "pairing", "charge.minus",
                                                    "charge.plus", "spectrum", "run"};
        if (!known.count(name))
            throw validation_error("config: unknown section [" + name + "]");
    }
    detail::check_keys(doc, "lattice", {"rank", "weights"});
    detail::check_keys(doc, "pairing", {"row"});
    detail::check_keys(doc, "run", {"level", "involution", "pushforward", "pushforward_weights"});

    std::int64_t level = detail::parse_integer(doc.required("run", "level"));
    if (level < 0) throw validation_error("config: level must be nonnegative");

    std::optional<Lattice> declared_lattice;
    if (doc.has("lattice")) {
        int rank = detail::parse_small_int(doc.required("lattice", "rank"));
        std::vector<std::int64_t> weights;
        if (auto w = doc.single("lattice", "weights"))
            weights = detail::parse_integer_list(*w);
        else
            weights.assign(static_cast<std::size_t>(rank > 0 ? rank : 0), 1);
        declared_lattice.emplace(rank, std::move(weights));
    }
    std::optional<PairingForm> declared_pairing;
    if (doc.has("pairing")) {
        if (!declared_lattice)
            throw validation_error("config: [pairing] needs a [lattice] section");
        std::vector<std::vector<std::int64_t>> rows;
        for (const auto& r : doc.values("pairing", "row"))
            rows.push_back(detail::parse_integer_list(r));
        declared_pairing.emplace(*declared_lattice, std::move(rows));
    }

    std::int64_t bound = level;
    if (auto b = doc.single("spectrum", "bound")) bound = detail::parse_integer(*b);

    std::optional<detail::GeneratedModel> model;
    if (auto generator = doc.single("spectrum", "generator")) {
        model = detail::generated_spectrum(doc, *generator, bound);
        if (declared_lattice && *declared_lattice != model->lattice)
            throw validation_error("config: [lattice] conflicts with the generator's lattice");
        if (declared_pairing && !(*declared_pairing == model->pairing))
            throw validation_error("config: [pairing] conflicts with the generator's pairing");
    } else {
        if (!declared_lattice || !declared_pairing)
            throw validation_error(
                "config: explicit spectra need [lattice] and [pairing] sections");
        detail::check_keys(doc, "spectrum", {"class", "value", "bound"});
        Spectrum s(*declared_lattice, SpectrumKind::omega, bound);
        auto it = doc.sections.find("spectrum");
        if (it == doc.sections.end())
            throw validation_error("config: missing [spectrum] section");
        std::optional<Class> pending;
        for (const auto& [key, value] : it->second) {
            if (key == "bound") continue;
            if (key == "class") {
                if (pending)
                    throw validation_error("config: 'class' entry without a following 'value'");
                pending = detail::parse_integer_list(value);
            } else if (key == "value") {
                if (!pending)
                    throw validation_error("config: 'value' entry without a preceding 'class'");
                s.set(*pending, parse_rational(value));
                pending.reset();
            }
        }
        if (pending)
            throw validation_error("config: trailing 'class' entry without a 'value'");
        model = detail::GeneratedModel{*declared_lattice, *declared_pairing, std::move(s)};
    }

    CentralCharge z_minus = detail::parse_charge(doc, "charge.minus", model->lattice);
    CentralCharge z_plus = detail::parse_charge(doc, "charge.plus", model->lattice);

    std::optional<std::vector<std::vector<std::int64_t>>> involution;
    if (auto inv = doc.single("run", "involution")) {
        auto m = detail::parse_integer_matrix(*inv);
        auto rank = static_cast<std::size_t>(model->lattice.rank());
        if (m.size() != rank)
            throw validation_error("config: involution matrix must be square of the lattice rank");
        for (const auto& row : m)
            if (row.size() != rank)
                throw validation_error("config: involution matrix must be square of the lattice rank");
        involution = std::move(m);
    }

    std::optional<LatticeMap> pushforward;
    if (auto push = doc.single("run", "pushforward")) {
        auto m = detail::parse_integer_matrix(*push);
        std::vector<std::int64_t> target_weights;
        if (auto w = doc.single("run", "pushforward_weights"))
            target_weights = detail::parse_integer_list(*w);
        else
            target_weights.assign(m.size(), 1);
        Lattice target(static_cast<int>(m.size()), std::move(target_weights));
        LatticeMap map(model->lattice, target, std::move(m));
        // Fiber sums are complete only when the map preserves weighted length.
        for (int i = 0; i < model->lattice.rank(); ++i)
            if (target.ell(map.apply(model->lattice.basis(i))) != model->lattice.weight(i))
                throw validation_error("config: pushforward must preserve weighted length");
        pushforward = std::move(map);
    } else if (doc.single("run", "pushforward_weights")) {
        throw validation_error("config: pushforward_weights needs a pushforward matrix");
    }

    return RunSpec{model->lattice,           model->pairing, z_minus, z_plus,
                   std::move(model->omega_minus), level,     std::move(involution),
                   std::move(pushforward)};
}

inline RunSpec parse_run_spec(const std::string& text) {
    return build_run_spec(parse_config_text(text));
}

} // namespace bps
