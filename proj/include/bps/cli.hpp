#pragma once

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bps/config.hpp"
#include "bps/engine.hpp"
#include "bps/errors.hpp"
#include "bps/models.hpp"
#include "bps/oracle.hpp"
#include "bps/quiver.hpp"
#include "bps/runner.hpp"

namespace bps {

namespace detail {

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw validation_error("cannot read config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline std::string matrix_text(const std::vector<std::vector<std::int64_t>>& m) {
    std::string out;
    for (std::size_t r = 0; r < m.size(); ++r) {
        if (r) out += "; ";
        for (std::size_t c = 0; c < m[r].size(); ++c) {
            if (c) out += ",";
            out += std::to_string(m[r][c]);
        }
    }
    return out;
}

inline void cmd_quiver(int chi, int n, const std::string& emit, std::ostream& out) {
    StandardQuiver sq = build_standard(chi, n);
    if (emit == "dot") {
        out << export_dot(sq.quiver);
        std::string weights;
        for (std::size_t i = 0; i < sq.lattice.weights().size(); ++i) {
            if (i) weights += ",";
            weights += std::to_string(sq.lattice.weights()[i]);
        }
        out << "// weights: " << weights << "\n";
        out << "// pairing: " << matrix_text(sq.pairing.matrix()) << "\n";
        if (sq.projection)
            out << "// projection: " << matrix_text(sq.projection->matrix()) << "\n";
        return;
    }
    Json doc;
    doc["chi"] = chi;
    doc["N"] = n;
    doc["lattice"] = lattice_json(sq.lattice);
    Json vertices = Json::array();
    for (const auto& label : sq.quiver.labels()) vertices.push_back(label);
    doc["vertices"] = vertices;
    Json arrows = Json::array();
    for (const auto& [s, t] : sq.quiver.arrows()) {
        Json a = Json::array();
        a.push_back(s);
        a.push_back(t);
        arrows.push_back(a);
    }
    doc["arrows"] = arrows;
    doc["pairing"] = matrix_json(sq.pairing.matrix());
    doc["projection"] = sq.projection ? matrix_json(sq.projection->matrix()) : Json(nullptr);
    out << doc.dump(2) << "\n";
}

struct BpsQuiverInput {
    Spectrum spectrum;
    PairingForm pairing;
};

inline BpsQuiverInput bps_quiver_input(const std::string& model, std::optional<int> chi,
                                       std::optional<int> n, std::optional<std::int64_t> npot,
                                       std::int64_t bound) {
    if (model == "d0d6") {
        if (!chi) throw validation_error("model d0d6 needs --chi");
        return BpsQuiverInput{d0d6_minus(*chi, bound), x_pairing()};
    }
    if (model == "quiver") {
        if (!chi || !n) throw validation_error("model quiver needs --chi and --N");
        StandardQuiver sq = build_standard(*chi, *n);
        return BpsQuiverInput{quiver_minus(*chi, *n, bound), sq.pairing};
    }
    if (model == "conifold") {
        ConifoldModel m = conifold_center(bound);
        return BpsQuiverInput{std::move(m.omega_minus), std::move(m.pairing)};
    }
    if (model == "zero_minus_two") {
        if (!npot) throw validation_error("model zero_minus_two needs --npot");
        std::vector<std::vector<std::int64_t>> m = {{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}};
        return BpsQuiverInput{zero_minus_two_initial(*npot, bound),
                              PairingForm(Lattice::with_unit_weights(3), std::move(m))};
    }
    throw validation_error("unknown model '" + model + "'");
}

inline void cmd_bps_quiver(const std::string& model, std::optional<int> chi,
                           std::optional<int> n, std::optional<std::int64_t> npot,
                           const std::string& gamma_text, std::optional<std::int64_t> bound,
                           const std::string& emit, std::ostream& out) {
    Class gamma = parse_integer_list(gamma_text);
    if (!is_positive_class(gamma))
        throw validation_error("--gamma must be a positive class");
    // The spectrum only needs classes under gamma, so its own weighted
    // length bounds the generator level.
    std::int64_t total = 0;
    for (auto c : gamma) total += c;
    std::int64_t level = bound.value_or(total);
    BpsQuiverInput input = bps_quiver_input(model, chi, n, npot, level);
    BpsQuiver bq = build_bps_quiver(input.spectrum, input.pairing, gamma);
    if (emit == "dot") {
        out << export_dot(bq.quiver);
        return;
    }
    Json doc;
    doc["gamma"] = class_json(gamma);
    Json vertices = Json::array();
    for (int v = 0; v < bq.quiver.vertex_count(); ++v) {
        Json entry;
        entry["label"] = bq.quiver.label(v);
        entry["class"] = class_json(bq.vertex_class[static_cast<std::size_t>(v)]);
        entry["copy"] = bq.vertex_copy[static_cast<std::size_t>(v)];
        vertices.push_back(entry);
    }
    doc["vertices"] = vertices;
    Json arrows = Json::array();
    for (const auto& [s, t] : bq.quiver.arrows()) {
        Json a = Json::array();
        a.push_back(s);
        a.push_back(t);
        arrows.push_back(a);
    }
    doc["arrows"] = arrows;
    Json support = Json::array();
    for (const auto& m : bq.support) support.push_back(class_json(m));
    doc["support"] = support;
    out << doc.dump(2) << "\n";
}

inline void cmd_wallcross(const std::string& path, std::ostream& out) {
    RunSpec spec = parse_run_spec(read_text_file(path));
    out << wallcross_report(spec).dump(2) << "\n";
}

inline void cmd_check(const std::string& path, std::ostream& out) {
    RunSpec spec = parse_run_spec(read_text_file(path));
    out << check_report(spec).dump(2) << "\n";
}

inline void cmd_oracle_macmahon(std::int64_t chi, std::int64_t n_max, std::ostream& out) {
    auto coeffs = macmahon(chi, n_max);
    out << "n,coefficient\n";
    for (std::size_t n = 0; n < coeffs.size(); ++n)
        out << n << "," << to_string(coeffs[n]) << "\n";
}

inline void cmd_oracle_oneloop(std::int64_t n_max, std::ostream& out) {
    OneLoopReport report = one_loop_identity(n_max);
    out << "status,first_failure\n";
    out << (report.pass ? "PASS" : "FAIL") << "," << report.first_failure << "\n";
}

inline void cmd_oracle_framed(int chi, int n, const std::string& counts_text,
                              std::ostream& out) {
    Class counts = parse_integer_list(counts_text);
    out << "value\n" << framed_rank1(chi, n, counts).str() << "\n";
}

} // namespace detail

/** Full command-line entry point; returns the process exit code.
 *  0 = success, 2 = input validation failure, 3 = internal failure. */
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact wall-crossing for framed BPS and DT invariants"};
    app.require_subcommand(1);

    int chi = 0;
    int n = 1;
    std::string emit = "dot";
    auto* quiver_cmd = app.add_subcommand("quiver", "Print a framed quiver with its pairing");
    quiver_cmd->add_option("--chi", chi, "Euler characteristic parameter")->required();
    quiver_cmd->add_option("--N", n, "Fiber depth");
    quiver_cmd->add_option("--emit", emit, "Output format")
        ->check(CLI::IsMember({"dot", "json"}));

    std::string model;
    int bps_chi = 0;
    int bps_n = 0;
    std::int64_t bps_npot = 0;
    std::string gamma_text;
    std::int64_t bps_bound = -1;
    std::string bps_emit = "dot";
    auto* bps_cmd =
        app.add_subcommand("bps-quiver", "Build the BPS quiver of a model spectrum at a class");
    bps_cmd->add_option("--model", model, "Spectrum model")
        ->required()
        ->check(CLI::IsMember({"d0d6", "quiver", "conifold", "zero_minus_two"}));
    auto* bps_chi_opt = bps_cmd->add_option("--chi", bps_chi, "Model parameter chi");
    auto* bps_n_opt = bps_cmd->add_option("--N", bps_n, "Model parameter N");
    auto* bps_npot_opt = bps_cmd->add_option("--npot", bps_npot, "Potential point count");
    bps_cmd->add_option("--gamma", gamma_text, "Total class, comma-separated")->required();
    auto* bps_bound_opt = bps_cmd->add_option("--bound", bps_bound, "Spectrum level");
    bps_cmd->add_option("--emit", bps_emit, "Output format")
        ->check(CLI::IsMember({"dot", "json"}));

    std::string wallcross_path;
    auto* wallcross_cmd = app.add_subcommand("wallcross", "Run a wall-crossing config");
    wallcross_cmd->add_option("--config", wallcross_path, "Config file path")->required();

    std::string check_path;
    auto* check_cmd = app.add_subcommand("check", "Validate a config's inputs");
    check_cmd->add_option("--config", check_path, "Config file path")->required();

    auto* oracle_cmd = app.add_subcommand("oracle", "Closed-form reference values");
    oracle_cmd->require_subcommand(1);
    std::int64_t mac_chi = 0;
    std::int64_t mac_nmax = 0;
    auto* mac_cmd = oracle_cmd->add_subcommand("macmahon", "MacMahon series coefficients");
    mac_cmd->add_option("--chi", mac_chi, "Exponent")->required();
    mac_cmd->add_option("--nmax", mac_nmax, "Truncation order")->required();
    std::int64_t loop_nmax = 0;
    auto* loop_cmd = oracle_cmd->add_subcommand("oneloop", "One-loop series identity");
    loop_cmd->add_option("--nmax", loop_nmax, "Truncation order")->required();
    int framed_chi = 0;
    int framed_n = 0;
    std::string framed_counts;
    auto* framed_cmd = oracle_cmd->add_subcommand("framed", "Rank-one localization count");
    framed_cmd->add_option("--chi", framed_chi, "Quiver parameter chi > 0")->required();
    framed_cmd->add_option("--N", framed_n, "Quiver parameter N")->required();
    framed_cmd->add_option("--n", framed_counts, "Counts, comma-separated")->required();

    quiver_cmd->callback([&] { detail::cmd_quiver(chi, n, emit, out); });
    bps_cmd->callback([&] {
        detail::cmd_bps_quiver(
            model, *bps_chi_opt ? std::optional<int>(bps_chi) : std::nullopt,
            *bps_n_opt ? std::optional<int>(bps_n) : std::nullopt,
            *bps_npot_opt ? std::optional<std::int64_t>(bps_npot) : std::nullopt, gamma_text,
            *bps_bound_opt ? std::optional<std::int64_t>(bps_bound) : std::nullopt, bps_emit,
            out);
    });
    wallcross_cmd->callback([&] { detail::cmd_wallcross(wallcross_path, out); });
    check_cmd->callback([&] { detail::cmd_check(check_path, out); });
    mac_cmd->callback([&] { detail::cmd_oracle_macmahon(mac_chi, mac_nmax, out); });
    loop_cmd->callback([&] { detail::cmd_oracle_oneloop(loop_nmax, out); });
    framed_cmd->callback(
        [&] { detail::cmd_oracle_framed(framed_chi, framed_n, framed_counts, out); });

    std::vector<std::string> argv_storage;
    argv_storage.push_back("bpstool");
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    argv.reserve(argv_storage.size());
    for (auto& s : argv_storage) argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
        return 0;
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const internal_error& e) {
        err << "internal error: " << e.what() << "\n";
        return 3;
    } catch (const validation_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 3;
    }
}

} // namespace bps
