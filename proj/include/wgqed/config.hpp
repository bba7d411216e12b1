#pragma once

// Run configuration documents.
//
// A configuration is a JSON object with flat keys; mode lists and the sweep
// block are the only nested values. See README.md for the full key table.
//
//   {
//     "preset": "fig2b",
//     "delta": "2g1",
//     "format": "csv",
//     "output": "out/fig2b.csv",
//     "sweep": {"parameter": "delta", "values": ["0", "g1", "2g1", "5g1"]}
//   }

#include <algorithm>
#include <cstddef>
#include <cstdio>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "wgqed/errors.hpp"
#include "wgqed/presets.hpp"

namespace wgqed {

enum class OutputFormat { csv, json };

inline std::string to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

inline OutputFormat parse_format(const std::string& s) {
    if (s == "csv") return OutputFormat::csv;
    if (s == "json") return OutputFormat::json;
    throw ValidationError("format", "expected csv or json, got '" + s + "'");
}

struct SweepSpec {
    std::string parameter;  ///< delta, n, dt or t_max
    std::vector<std::string> values;
};

struct RunConfig {
    std::optional<std::string> preset;
    ScenarioInputs inputs;
    std::string output;
    OutputFormat format = OutputFormat::csv;
    std::size_t stride = 1;
    std::optional<SweepSpec> sweep;
};

inline const std::vector<std::string>& sweep_parameters() {
    static const std::vector<std::string> names{"delta", "n", "dt", "t_max"};
    return names;
}

/// Applies one sweep value (an expression, or a number for n) to the inputs.
inline void apply_parameter(ScenarioInputs& in, const std::string& parameter, const std::string& value) {
    if (parameter == "delta") {
        in.delta_expr = value;
    } else if (parameter == "n") {
        in.n = evaluate_expression(value);
        in.d.reset();
    } else if (parameter == "dt") {
        in.dt_expr = value;
    } else if (parameter == "t_max") {
        in.t_max_expr = value;
    } else {
        throw ValidationError("sweep.parameter", "unsupported sweep parameter '" + parameter + "'");
    }
}

namespace detail {

using json = nlohmann::json;

inline int line_of(std::string_view text, std::size_t byte) {
    byte = std::min(byte, text.size());
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

inline double number_field(const json& doc, const std::string& key) {
    const auto& v = doc.at(key);
    if (!v.is_number()) throw ValidationError(key, "expected a number");
    return v.get<double>();
}

/// Numbers are taken literally; strings are kept as expressions.
inline std::string expression_field(const json& doc, const std::string& key) {
    const auto& v = doc.at(key);
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number()) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
        return buf;
    }
    throw ValidationError(key, "expected a number or an expression string");
}

inline std::string string_field(const json& doc, const std::string& key) {
    const auto& v = doc.at(key);
    if (!v.is_string()) throw ValidationError(key, "expected a string");
    return v.get<std::string>();
}

inline TransverseModeIndex mode_field(const json& v, const std::string& key) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer()) {
        throw ValidationError(key, "expected a mode as [m, n]");
    }
    const int m = v[0].get<int>();
    const int n = v[1].get<int>();
    if (m < 1 || n < 1) throw ValidationError(key, "mode indices must be positive");
    return {m, n, 0};
}

inline cplx complex_field(const json& doc, const std::string& key) {
    const auto& v = doc.at(key);
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
        return {v[0].get<double>(), v[1].get<double>()};
    }
    throw ValidationError(key, "expected a number or [re, im]");
}

}  // namespace detail

/// Parses and validates a configuration document. Unknown keys are rejected.
inline RunConfig parse_config(std::string_view text) {
    using detail::json;
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError(e.what(), detail::line_of(text, e.byte > 0 ? e.byte - 1 : 0));
    }
    if (!doc.is_object()) throw ParseError("configuration must be a JSON object", 1);

    static const std::set<std::string> scenario_keys{
        "a", "b", "c", "omega_A", "omega_A_between", "modes", "gamma1_lambda1_over_v1",
        "gamma1", "mu", "mu1", "mu2", "d"};
    static const std::set<std::string> override_keys{
        "preset", "delta", "n", "t_max", "dt", "tol", "initial", "B1", "B2", "basis",
        "samples", "stride", "format", "output", "sweep", "label"};
    for (const auto& [key, value] : doc.items()) {
        if (!scenario_keys.count(key) && !override_keys.count(key)) {
            throw ValidationError(key, "unknown key");
        }
    }

    RunConfig cfg;
    ScenarioInputs& in = cfg.inputs;
    if (doc.contains("preset")) {
        cfg.preset = detail::string_field(doc, "preset");
        for (const auto& key : scenario_keys) {
            if (doc.contains(key)) {
                throw MutualExclusionError("key '" + key + "' cannot be combined with a preset");
            }
        }
        in = preset_inputs(*cfg.preset);
    } else {
        if (doc.contains("a")) in.guide.a = detail::number_field(doc, "a");
        if (doc.contains("b")) in.guide.b = detail::number_field(doc, "b");
        if (doc.contains("c")) in.guide.c = detail::number_field(doc, "c");
        if (!(in.guide.a > 0.0) || !(in.guide.b > 0.0) || !(in.guide.c > 0.0)) {
            throw ValidationError("a", "waveguide dimensions must be positive");
        }
        if (doc.contains("omega_A")) in.omega_A = detail::number_field(doc, "omega_A");
        if (doc.contains("omega_A_between")) {
            const auto& v = doc.at("omega_A_between");
            if (!v.is_array() || v.size() != 2) {
                throw ValidationError("omega_A_between", "expected [[m, n], [m, n]]");
            }
            in.omega_between = {detail::mode_field(v[0], "omega_A_between"),
                                detail::mode_field(v[1], "omega_A_between")};
        }
        if (in.omega_A.has_value() == in.omega_between.has_value()) {
            throw ValidationError("omega_A", "give exactly one of omega_A and omega_A_between");
        }
        if (doc.contains("modes")) {
            const auto& v = doc.at("modes");
            if (!v.is_array() || v.empty()) throw ValidationError("modes", "expected a nonempty list of [m, n]");
            for (const auto& m : v) in.modes.push_back(detail::mode_field(m, "modes"));
        }
        if (doc.contains("gamma1_lambda1_over_v1")) {
            in.gamma_ratio = detail::number_field(doc, "gamma1_lambda1_over_v1");
        }
        if (doc.contains("gamma1")) in.gamma1 = detail::number_field(doc, "gamma1");
        if (doc.contains("mu")) in.mu1 = in.mu2 = detail::number_field(doc, "mu");
        if (doc.contains("mu1")) in.mu1 = detail::number_field(doc, "mu1");
        if (doc.contains("mu2")) in.mu2 = detail::number_field(doc, "mu2");
        if (doc.contains("d")) in.d = detail::number_field(doc, "d");
        const int couplings = int(in.gamma_ratio.has_value()) + int(in.gamma1.has_value()) +
                              int(in.mu1.has_value() || in.mu2.has_value());
        if (couplings != 1) {
            throw ValidationError("gamma1_lambda1_over_v1",
                                  "give exactly one of gamma1_lambda1_over_v1, gamma1, mu/mu1/mu2");
        }
        in.initial = InitialState::named("a");
    }

    if (doc.contains("label")) in.label = detail::string_field(doc, "label");
    if (doc.contains("delta")) in.delta_expr = detail::expression_field(doc, "delta");
    if (doc.contains("n")) {
        if (in.d) throw MutualExclusionError("keys 'n' and 'd' are mutually exclusive");
        in.n = detail::number_field(doc, "n");
        if (*in.n < 0.0) throw ValidationError("n", "must be nonnegative");
    }
    if (doc.contains("t_max")) in.t_max_expr = detail::expression_field(doc, "t_max");
    if (doc.contains("dt")) in.dt_expr = detail::expression_field(doc, "dt");
    if (doc.contains("tol")) {
        in.tol = detail::number_field(doc, "tol");
        if (!(*in.tol > 0.0)) throw ValidationError("tol", "must be positive");
    }
    if (doc.contains("basis")) {
        const auto b = detail::string_field(doc, "basis");
        if (b != "bare" && b != "sa") throw ValidationError("basis", "expected bare or sa");
        in.basis = b == "bare" ? Basis::bare : Basis::sa;
    }
    if (doc.contains("initial")) {
        const auto name = detail::string_field(doc, "initial");
        if (name == "custom") {
            if (!doc.contains("B1") || !doc.contains("B2")) {
                throw ValidationError("initial", "custom initial state needs B1 and B2");
            }
            try {
                in.initial = InitialState::amplitudes(detail::complex_field(doc, "B1"),
                                                      detail::complex_field(doc, "B2"));
            } catch (const DomainError& e) {
                throw ValidationError("B1", e.what());
            }
        } else {
            try {
                in.initial = InitialState::named(name);
            } catch (const DomainError& e) {
                throw ValidationError("initial", e.what());
            }
        }
    } else if (doc.contains("B1") || doc.contains("B2")) {
        throw ValidationError("B1", "amplitudes require \"initial\": \"custom\"");
    }
    if (doc.contains("samples")) {
        const auto& v = doc.at("samples");
        if (!v.is_number_integer() || v.get<long long>() < 2) {
            throw ValidationError("samples", "expected an integer >= 2");
        }
        in.samples = v.get<std::size_t>();
    }
    if (doc.contains("stride")) {
        const auto& v = doc.at("stride");
        if (!v.is_number_integer() || v.get<long long>() < 1) {
            throw ValidationError("stride", "expected an integer >= 1");
        }
        cfg.stride = v.get<std::size_t>();
    }
    if (doc.contains("format")) cfg.format = parse_format(detail::string_field(doc, "format"));
    if (doc.contains("output")) cfg.output = detail::string_field(doc, "output");
    if (doc.contains("sweep")) {
        const auto& v = doc.at("sweep");
        if (!v.is_object()) throw ValidationError("sweep", "expected an object");
        for (const auto& [key, value] : v.items()) {
            if (key != "parameter" && key != "values") throw ValidationError("sweep." + key, "unknown key");
        }
        if (!v.contains("parameter") || !v.contains("values") || !v.at("values").is_array()) {
            throw ValidationError("sweep", "needs 'parameter' and a 'values' list");
        }
        SweepSpec sweep;
        sweep.parameter = detail::string_field(v, "parameter");
        const auto& params = sweep_parameters();
        if (std::find(params.begin(), params.end(), sweep.parameter) == params.end()) {
            throw ValidationError("sweep.parameter", "expected one of delta, n, dt, t_max");
        }
        for (const auto& item : v.at("values")) {
            if (item.is_string()) {
                sweep.values.push_back(item.get<std::string>());
            } else if (item.is_number()) {
                char buf[40];
                std::snprintf(buf, sizeof buf, "%.17g", item.get<double>());
                sweep.values.emplace_back(buf);
            } else {
                throw ValidationError("sweep.values", "expected numbers or expression strings");
            }
        }
        cfg.sweep = std::move(sweep);
    }
    return cfg;
}

}  // namespace wgqed
