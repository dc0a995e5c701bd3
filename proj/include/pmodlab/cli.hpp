#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pmodlab/capacity.hpp"
#include "pmodlab/distortion.hpp"
#include "pmodlab/theorems.hpp"
#include "pmodlab/weight.hpp"

namespace pmodlab::cli {

using nlohmann::json;

/// Configuration problem with the offending JSON pointer in the message.
/// The CLI maps these to exit status 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline const json* find(const json& config, const std::string& pointer) {
    const json::json_pointer jp(pointer);
    if (!config.contains(jp)) return nullptr;
    return &config.at(jp);
}

inline const json& require(const json& config, const std::string& pointer) {
    const json* node = find(config, pointer);
    if (node == nullptr) throw ConfigError("config " + pointer + ": missing required field");
    return *node;
}

inline double require_number(const json& config, const std::string& pointer) {
    const json& node = require(config, pointer);
    if (!node.is_number()) throw ConfigError("config " + pointer + ": expected a number");
    return node.get<double>();
}

inline int require_int(const json& config, const std::string& pointer) {
    const json& node = require(config, pointer);
    if (!node.is_number_integer()) throw ConfigError("config " + pointer + ": expected an integer");
    return node.get<int>();
}

inline double number_or(const json& config, const std::string& pointer, double fallback) {
    const json* node = find(config, pointer);
    if (node == nullptr) return fallback;
    if (!node->is_number()) throw ConfigError("config " + pointer + ": expected a number");
    return node->get<double>();
}

inline int int_or(const json& config, const std::string& pointer, int fallback) {
    const json* node = find(config, pointer);
    if (node == nullptr) return fallback;
    if (!node->is_number_integer()) throw ConfigError("config " + pointer + ": expected an integer");
    return node->get<int>();
}

inline std::string string_at(const json& config, const std::string& pointer) {
    const json& node = require(config, pointer);
    if (!node.is_string()) throw ConfigError("config " + pointer + ": expected a string");
    return node.get<std::string>();
}

inline std::vector<double> number_array(const json& node, const std::string& pointer) {
    if (!node.is_array() || node.empty()) {
        throw ConfigError("config " + pointer + ": expected a non-empty array of numbers");
    }
    std::vector<double> values;
    values.reserve(node.size());
    for (const auto& item : node) {
        if (!item.is_number()) throw ConfigError("config " + pointer + ": expected numbers");
        values.push_back(item.get<double>());
    }
    return values;
}

}  // namespace detail

inline SpaceParams parse_space(const json& config) {
    const int n = detail::require_int(config, "/space/n");
    const double p = detail::require_number(config, "/space/p");
    try {
        return SpaceParams(n, p);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config /space: ") + e.what());
    }
}

inline RadialMap parse_map(const json& config, const SpaceParams& space) {
    const std::string kind = detail::string_at(config, "/map/kind");
    try {
        if (kind == "identity") return RadialMap(space, RadialProfile::identity());
        if (kind == "power") {
            const double theta = detail::require_number(config, "/map/theta");
            const double scale = detail::number_or(config, "/map/scale", 1.0);
            return RadialMap(space, RadialProfile::power(theta, scale));
        }
        if (kind == "theorem3") {
            const double alpha = detail::require_number(config, "/map/alpha");
            const double eps = detail::require_number(config, "/map/eps");
            return RadialMap(space, RadialProfile::power(theorem3_exponent(space, alpha, eps)));
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config /map: ") + e.what());
    }
    throw ConfigError("config /map/kind: expected one of identity|power|theorem3, got \"" + kind +
                      "\"");
}

inline WeightField parse_weight(const json& config, const SpaceParams& space) {
    const std::string kind = detail::string_at(config, "/weight/kind");
    try {
        if (kind == "constant") {
            return WeightField::constant(detail::require_number(config, "/weight/value"));
        }
        if (kind == "radial_power") {
            return WeightField::radial_power(detail::require_number(config, "/weight/coeff"),
                                             detail::require_number(config, "/weight/exp"));
        }
        if (kind == "from_map") {
            return WeightField::from_map(parse_map(config, space));
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config /weight: ") + e.what());
    }
    throw ConfigError("config /weight/kind: expected one of constant|radial_power|from_map, got \"" +
                      kind + "\"");
}

inline EpsLadder parse_ladder(const json& config) {
    const json* node = detail::find(config, "/ladder");
    try {
        if (node == nullptr) return EpsLadder::geometric(0.1, 0.5, 4);
        if (node->is_array()) return EpsLadder(detail::number_array(*node, "/ladder"));
        if (node->is_object()) {
            return EpsLadder::geometric(detail::require_number(config, "/ladder/start"),
                                        detail::require_number(config, "/ladder/ratio"),
                                        detail::require_int(config, "/ladder/count"));
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config /ladder: ") + e.what());
    }
    throw ConfigError("config /ladder: expected an array of radii or {start, ratio, count}");
}

inline SphericalCondenser parse_ring(const json& config) {
    try {
        return SphericalCondenser(detail::require_number(config, "/ring/r1"),
                                  detail::require_number(config, "/ring/r2"));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config /ring: ") + e.what());
    }
}

inline AnnulusProbe parse_annulus(const json& config, double default_eps0 = 0.5) {
    AnnulusProbe probe;
    probe.eps0 = detail::number_or(config, "/annulus/eps0", default_eps0);
    if (const json* deltas = detail::find(config, "/annulus/deltas")) {
        probe.deltas = detail::number_array(*deltas, "/annulus/deltas");
    } else if (const json* delta = detail::find(config, "/annulus/delta")) {
        if (!delta->is_number()) throw ConfigError("config /annulus/delta: expected a number");
        probe.deltas = {delta->get<double>()};
    }
    for (std::size_t i = 0; i < probe.deltas.size(); ++i) {
        if (!(probe.deltas[i] > 0.0 && probe.deltas[i] < probe.eps0)) {
            throw ConfigError("config /annulus: deltas must satisfy 0 < delta < eps0");
        }
        if (i > 0 && !(probe.deltas[i] < probe.deltas[i - 1])) {
            throw ConfigError("config /annulus/deltas: must be strictly decreasing");
        }
    }
    return probe;
}

// ---------------------------------------------------------------------------
// Output assembly
// ---------------------------------------------------------------------------

inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

inline json json_number(double v) {
    if (std::isfinite(v)) return v;
    return format_double(v);
}

inline std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string quoted = "\"";
    for (char c : field) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

/// A small column-ordered table; rows render to CSV with a header line.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::string to_csv() const {
        std::ostringstream out;
        for (std::size_t i = 0; i < columns.size(); ++i) {
            out << (i ? "," : "") << csv_escape(columns[i]);
        }
        out << '\n';
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                out << (i ? "," : "") << csv_escape(row[i]);
            }
            out << '\n';
        }
        return out.str();
    }

    json to_json() const {
        json rows_json = json::array();
        for (const auto& row : rows) rows_json.push_back(row);
        return json{{"columns", columns}, {"rows", rows_json}};
    }
};

inline json report_to_json(const CheckReport& report) {
    json quantities = json::array();
    for (const auto& [label, value] : report.quantities) {
        quantities.push_back(json{{"label", label}, {"value", json_number(value)}});
    }
    return json{{"name", report.name},
                {"verdict", verdict_label(report.verdict)},
                {"vacuous", report.vacuous},
                {"deferred_to", report.deferred_to},
                {"quantities", quantities},
                {"notes", report.notes}};
}

struct CommandOutput {
    int exit_code = 0;
    Table table;
    json report;  // full JSON artifact; embeds the input config
};

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

inline CommandOutput run_constants(const json& config) {
    const SpaceParams space = parse_space(config);
    const ConstantChain chain = constant_chain(space);
    CommandOutput out;
    out.table.columns = {"n", "p", "c", "c1", "c0"};
    out.table.rows.push_back({std::to_string(space.n()), format_double(space.p()),
                              format_double(chain.c), format_double(chain.c1),
                              format_double(chain.c0)});
    out.report = json{{"command", "constants"},
                      {"config", config},
                      {"values", json{{"c", json_number(chain.c)},
                                      {"c1", json_number(chain.c1)},
                                      {"c0", json_number(chain.c0)}}},
                      {"derivation",
                       json::array({"c = n^{1/(1-p)} Omega_n^{p/(n(1-p))} (p-1)/(p-n)",
                                    "c1 = (2^n Omega_n)^{p/(n-p)} c^{n/(p-n)}",
                                    "c0 = c1^{1/n}"})}};
    return out;
}

inline CommandOutput run_capacity(const json& config) {
    const SpaceParams space = parse_space(config);
    const SphericalCondenser cond = parse_ring(config);
    const WeightField weight = detail::find(config, "/weight") != nullptr
                                   ? parse_weight(config, space)
                                   : WeightField::constant(1.0);
    const int grid = detail::int_or(config, "/grid_points", 4096);
    const CapacityBounds bounds = capacity_bounds(space, cond, weight, grid);
    CommandOutput out;
    out.table.columns = {"n", "p", "r1", "r2", "lower_mazya", "exact", "variational",
                         "upper_lemma1"};
    out.table.rows.push_back({std::to_string(space.n()), format_double(space.p()),
                              format_double(cond.r_inner), format_double(cond.r_outer),
                              format_double(bounds.lower_mazya),
                              format_double(*bounds.exact_spherical),
                              format_double(bounds.variational->energy),
                              format_double(bounds.upper_lemma1)});
    out.report = json{{"command", "capacity"},
                      {"config", config},
                      {"grid_points", grid},
                      {"variational_converged", bounds.variational->converged},
                      {"table", out.table.to_json()}};
    return out;
}

inline CommandOutput run_modulus(const json& config) {
    const SpaceParams space = parse_space(config);
    const SphericalCondenser cond = parse_ring(config);
    const WeightField weight = parse_weight(config, space);
    const double ring = weighted_ring_integral(weight, space, cond.r_inner, cond.r_outer);
    double eta0_integral = 0.0;
    if (std::isfinite(ring) && ring > 0.0) {
        eta0_integral = integrate(
            [&](double r) { return eta0(weight, space, cond.r_inner, cond.r_outer, r); },
            cond.r_inner, cond.r_outer);
    }
    const double upper = lemma1_cap_upper(weight, space, cond);
    // The box-density bound lives on doubled annuli (eps, 2 eps).
    const bool doubled = std::abs(cond.r_outer - 2.0 * cond.r_inner) <= 1e-12 * cond.r_outer;
    const std::string box =
        doubled && cond.r_inner < 0.5 ? format_double(ring_box_bound(weight, space, cond.r_inner))
                                      : std::string();
    CommandOutput out;
    out.table.columns = {"n", "p", "r1", "r2", "ring_integral", "eta0_integral",
                         "upper_lemma1", "ring_box_bound"};
    out.table.rows.push_back({std::to_string(space.n()), format_double(space.p()),
                              format_double(cond.r_inner), format_double(cond.r_outer),
                              format_double(ring), format_double(eta0_integral),
                              format_double(upper), box});
    out.report = json{{"command", "modulus"}, {"config", config}, {"table", out.table.to_json()}};
    return out;
}

inline CommandOutput run_distortion(const json& config) {
    const SpaceParams space = parse_space(config);
    const RadialMap map = parse_map(config, space);
    std::vector<double> radii;
    if (const json* node = detail::find(config, "/radii")) {
        radii = detail::number_array(*node, "/radii");
    } else {
        const EpsLadder ladder = parse_ladder(config);
        radii.assign(ladder.values().begin(), ladder.values().end());
    }
    CommandOutput out;
    out.table.columns = {"r", "lambda_r", "lambda_tau", "jac", "min_stretch", "k_ip"};
    for (double r : radii) {
        if (!(r > 0.0 && r < 1.0)) throw ConfigError("config /radii: radii must lie in (0,1)");
        const StretchData s = stretches(map, r);
        out.table.rows.push_back({format_double(r), format_double(s.lambda_r),
                                  format_double(s.lambda_tau), format_double(s.jacobian_abs),
                                  format_double(s.min_stretch), format_double(k_ip(map, r))});
    }
    out.report = json{{"command", "distortion"}, {"config", config}, {"table", out.table.to_json()}};
    return out;
}

inline CheckReport run_verify_report(const std::string& target, const json& config) {
    const SpaceParams space = parse_space(config);
    if (target == "thm1") {
        const RadialMap map = parse_map(config, space);
        const WeightField weight = parse_weight(config, space);
        return theorem1_check(map, weight, space, parse_ladder(config));
    }
    if (target == "cor1") {
        const RadialMap map = parse_map(config, space);
        return corollary1_check(map, space, parse_ladder(config));
    }
    if (target == "cor2") {
        const RadialMap map = parse_map(config, space);
        const WeightField weight = parse_weight(config, space);
        const double rescale = detail::number_or(config, "/rescale", 0.5);
        if (!(rescale > 0.0 && rescale < 1.0)) {
            throw ConfigError("config /rescale: must lie in (0,1)");
        }
        return corollary2_check(map, weight, space, rescale, parse_ladder(config));
    }
    if (target == "thm2") {
        const RadialMap map = parse_map(config, space);
        const double alpha = detail::require_number(config, "/alpha");
        if (!(alpha > 1.0)) throw ConfigError("config /alpha: must exceed 1");
        const double compact_radius = detail::number_or(config, "/compact_radius", 0.5);
        if (!(compact_radius > 0.0 && compact_radius < 1.0)) {
            throw ConfigError("config /compact_radius: must lie in (0,1)");
        }
        return theorem2_check(map, space, alpha, parse_ladder(config), compact_radius, {},
                              parse_annulus(config, compact_radius));
    }
    if (target == "thm3") {
        const double alpha = detail::require_number(config, "/alpha");
        if (!(alpha > 1.0)) throw ConfigError("config /alpha: must exceed 1");
        const double eps = detail::require_number(config, "/eps");
        if (!(eps > 0.0)) throw ConfigError("config /eps: must be positive");
        return theorem3_counterexample(space, alpha, eps, parse_annulus(config)).report;
    }
    throw ConfigError("verify: unknown target \"" + target +
                      "\" (expected thm1|cor1|cor2|thm2|thm3)");
}

inline CommandOutput run_verify(const std::string& target, const json& config) {
    const SpaceParams space = parse_space(config);
    const CheckReport report = run_verify_report(target, config);
    CommandOutput out;
    out.table.columns = {"check", "n", "p", "verdict", "vacuous", "deferred_to"};
    std::vector<std::string> row = {report.name,
                                    std::to_string(space.n()),
                                    format_double(space.p()),
                                    verdict_label(report.verdict),
                                    report.vacuous ? "1" : "0",
                                    report.deferred_to};
    for (const auto& [label, value] : report.quantities) {
        out.table.columns.push_back(label);
        row.push_back(format_double(value));
    }
    out.table.rows.push_back(std::move(row));
    out.report = json{{"command", "verify"},
                      {"target", target},
                      {"config", config},
                      {"report", report_to_json(report)}};
    out.exit_code = report.verdict == Verdict::Fail ? 1 : 0;
    return out;
}

/// Runs the configured sub-command once per sweep value, substituting the
/// value at the JSON-pointer axis. A failing grid point becomes a row with
/// its error message; the sweep carries on.
inline CommandOutput run_sweep(const json& config);

inline CommandOutput run_command(const std::string& command, const std::string& target,
                                 const json& config) {
    if (command == "constants") return run_constants(config);
    if (command == "capacity") return run_capacity(config);
    if (command == "modulus") return run_modulus(config);
    if (command == "distortion") return run_distortion(config);
    if (command == "verify") return run_verify(target, config);
    if (command == "sweep") return run_sweep(config);
    throw ConfigError("unknown command \"" + command +
                      "\" (expected constants|capacity|modulus|distortion|verify|sweep)");
}

inline CommandOutput run_sweep(const json& config) {
    const std::string param = detail::string_at(config, "/sweep/param");
    if (param.empty() || param.front() != '/') {
        throw ConfigError("config /sweep/param: expected a JSON pointer like /map/theta");
    }
    const std::vector<double> values =
        detail::number_array(detail::require(config, "/sweep/values"), "/sweep/values");
    const std::string command = detail::string_at(config, "/sweep/command");
    if (command == "sweep") throw ConfigError("config /sweep/command: sweeps do not nest");
    std::string target;
    if (command == "verify") target = detail::string_at(config, "/sweep/target");

    CommandOutput out;
    json runs = json::array();
    bool any_fail = false;
    for (double value : values) {
        json point_config = config;
        point_config.erase("sweep");
        const json::json_pointer axis(param);
        if (!point_config.contains(axis)) {
            throw ConfigError("config /sweep/param: \"" + param +
                              "\" does not name an existing config field");
        }
        point_config[axis] = value;
        std::vector<std::string> prefix = {param, format_double(value)};
        try {
            CommandOutput point = run_command(command, target, point_config);
            if (out.table.columns.empty()) {
                out.table.columns = {"param", "value"};
                out.table.columns.insert(out.table.columns.end(), point.table.columns.begin(),
                                         point.table.columns.end());
                out.table.columns.push_back("status");
            }
            for (const auto& row : point.table.rows) {
                std::vector<std::string> merged = prefix;
                merged.insert(merged.end(), row.begin(), row.end());
                merged.push_back("ok");
                out.table.rows.push_back(std::move(merged));
            }
            if (point.exit_code != 0) any_fail = true;
            runs.push_back(json{{"value", value}, {"report", point.report}});
        } catch (const std::exception& e) {
            if (out.table.columns.empty()) {
                out.table.columns = {"param", "value", "status"};
            }
            std::vector<std::string> merged = prefix;
            merged.resize(out.table.columns.size() - 1);
            merged.push_back(std::string("error: ") + e.what());
            out.table.rows.push_back(std::move(merged));
            runs.push_back(json{{"value", value}, {"error", e.what()}});
            any_fail = true;
        }
    }
    out.report = json{{"command", "sweep"}, {"config", config}, {"runs", runs}};
    out.exit_code = any_fail ? 1 : 0;
    return out;
}

// ---------------------------------------------------------------------------
// Artifact emission
// ---------------------------------------------------------------------------

inline void write_file(const std::string& path, const std::string& contents) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output file: " + path);
    file << contents;
}

/// Writes <base>.csv and <base>.json next to each other.
inline void write_artifacts(const CommandOutput& out, const std::string& base_path) {
    write_file(base_path + ".csv", out.table.to_csv());
    write_file(base_path + ".json", out.report.dump(2) + "\n");
}

}  // namespace pmodlab::cli
