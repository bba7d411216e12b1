#pragma once

// Unresolved scenario descriptions (geometry, coupling, separation and
// expressions for delta / t_max / dt), their resolution into a ScenarioSpec,
// and the registry of figure presets.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wgqed/errors.hpp"
#include "wgqed/expr.hpp"
#include "wgqed/scenarios.hpp"
#include "wgqed/waveguide.hpp"

namespace wgqed {

struct ScenarioInputs {
    std::string label;
    WaveguideSpec guide;

    // Transition frequency: absolute, or the midpoint of two cutoffs.
    std::optional<double> omega_A;
    std::optional<std::pair<TransverseModeIndex, TransverseModeIndex>> omega_between;

    std::vector<TransverseModeIndex> modes;  ///< empty: every propagating odd-odd mode

    // Coupling, exactly one of: gamma_1 lambda_1 / v_1, gamma_1, or dipoles.
    std::optional<double> gamma_ratio;
    std::optional<double> gamma1;
    std::optional<double> mu1, mu2;

    // Separation, exactly one of: n with phi_1 = 2 n pi, or d.
    std::optional<double> n;
    std::optional<double> d;

    std::string delta_expr = "0";
    std::optional<std::string> t_max_expr;  ///< default: 6tau1, or 30/G when tau1 = 0
    std::optional<std::string> dt_expr;
    std::optional<double> tol;
    InitialState initial;
    Basis basis = Basis::bare;
    std::size_t samples = 2000;

    std::vector<std::string> delta_sweep;  ///< values shown in the figure legend
    std::string notes;
};

/// Expression variables: g1, g2 (cross rates), G (total rate of emitter 1),
/// tau1, tau2, pi. Missing modes read as zero.
inline Variables scenario_variables(const std::vector<ModeParams>& modes) {
    Variables v;
    v["pi"] = kPi;
    v["g1"] = v["gamma1"] = modes.size() > 0 ? modes[0].gamma : 0.0;
    v["g2"] = v["gamma2"] = modes.size() > 1 ? modes[1].gamma : 0.0;
    v["tau1"] = modes.size() > 0 ? modes[0].tau : 0.0;
    v["tau2"] = modes.size() > 1 ? modes[1].tau : 0.0;
    v["G"] = v["Gamma"] = total_rate(modes, 1);
    return v;
}

inline double resolve_omega_A(const ScenarioInputs& in) {
    if (in.omega_A && in.omega_between) {
        throw ValidationError("omega_A", "give either omega_A or omega_A_between");
    }
    if (in.omega_A) return *in.omega_A;
    if (in.omega_between) return band_between(in.guide, in.omega_between->first, in.omega_between->second).midpoint();
    throw ValidationError("omega_A", "transition frequency is not specified");
}

inline std::vector<ModeParams> resolve_modes(const ScenarioInputs& in, double omega_A) {
    const auto modes = in.modes.empty() ? guided_modes(in.guide, omega_A) : in.modes;
    if (modes.empty()) throw NoCoupledModesError("no guided mode propagates at omega_A");

    const int couplings = int(in.gamma_ratio.has_value()) + int(in.gamma1.has_value()) +
                          int(in.mu1.has_value() || in.mu2.has_value());
    if (couplings != 1) {
        throw ValidationError("coupling", "give exactly one of gamma1_lambda1_over_v1, gamma1, mu");
    }
    if (in.n && in.d) throw ValidationError("n", "give either n or d, not both");

    const double Omega1 = cutoff_frequency(in.guide, modes[0].m, modes[0].n);
    const double k10 = resonant_wavenumber(Omega1, omega_A, in.guide.c);
    const double turns = in.n ? *in.n : in.d.value_or(0.0) * k10 / (2.0 * kPi);
    if (turns < 0.0) throw ValidationError(in.n ? "n" : "d", "separation must be nonnegative");

    if (in.mu1 || in.mu2) {
        TLSPair tls;
        tls.omega_A = omega_A;
        tls.mu1 = in.mu1.value_or(in.mu2.value_or(1.0));
        tls.mu2 = in.mu2.value_or(tls.mu1);
        tls.z2 = turns * 2.0 * kPi / k10;
        return mode_interaction_params(in.guide, tls, modes);
    }
    const double g1 = in.gamma1 ? *in.gamma1 : gamma1_from_ratio(in.guide, omega_A, modes[0], *in.gamma_ratio);
    if (!(g1 > 0.0)) throw ValidationError("gamma1", "rate must be positive");
    return mode_interaction_params_by_rate(in.guide, omega_A, modes, g1, turns);
}

inline ScenarioSpec resolve(const ScenarioInputs& in) {
    in.guide.validate();
    const double omega_A = resolve_omega_A(in);
    ScenarioSpec spec;
    spec.label = in.label;
    spec.modes = resolve_modes(in, omega_A);
    spec.derive_rates();
    spec.basis = in.basis;
    spec.initial = in.initial;
    spec.samples = in.samples;
    spec.tol = in.tol;

    const Variables vars = scenario_variables(spec.modes);
    spec.delta = evaluate_expression(in.delta_expr, vars);
    const std::string t_max_expr =
        in.t_max_expr.value_or(spec.modes.front().tau > 0.0 ? "6tau1" : "30/G");
    spec.t_max = evaluate_expression(t_max_expr, vars);
    if (!(spec.t_max > 0.0) || !std::isfinite(spec.t_max)) {
        throw ValidationError("t_max", "'" + t_max_expr + "' does not evaluate to a positive time");
    }
    if (in.dt_expr) {
        const double dt = evaluate_expression(*in.dt_expr, vars);
        if (!(dt > 0.0) || !std::isfinite(dt)) {
            throw ValidationError("dt", "'" + *in.dt_expr + "' does not evaluate to a positive step");
        }
        spec.dt = dt;
    }
    return spec;
}

namespace detail {

inline ScenarioInputs single_mode_base() {
    ScenarioInputs in;
    in.omega_between = {{1, 1, 0}, {3, 1, 0}};
    in.modes = {{1, 1, 1}};
    in.gamma_ratio = 1.5e-10;
    in.delta_sweep = {"0", "g1", "2g1", "5g1"};
    in.notes = "delta legend multiples of gamma read as multiples of gamma_1";
    return in;
}

inline ScenarioInputs two_mode_base() {
    ScenarioInputs in;
    in.omega_between = {{3, 1, 0}, {5, 1, 0}};
    in.modes = {{1, 1, 1}, {3, 1, 2}};
    in.gamma_ratio = 1.1e-11;
    in.delta_sweep = {"0", "1.5g1+2g2", "5(g1+g2)"};
    return in;
}

struct PresetEntry {
    const char* name;
    const char* summary;
};

inline constexpr PresetEntry kPresets[] = {
    {"fig2a", "single mode, initial |a>, n = 1e9 (gamma1 tau1 = 0.15)"},
    {"fig2b", "single mode, initial |a>, n = 8e9 (gamma1 tau1 = 1.2)"},
    {"fig2c", "single mode, initial |a>, n = 8e10 (gamma1 tau1 = 12)"},
    {"fig3a", "single mode, initial |s>, n = 1e9 (gamma1 tau1 = 0.15)"},
    {"fig3b", "single mode, initial |s>, n = 8e9 (gamma1 tau1 = 1.2)"},
    {"fig4a", "TM11 + TM31, initial |a>, d = 0"},
    {"fig4b", "TM11 + TM31, initial |a>, n = 3.1e9 (gamma1 tau1 = 0.0341)"},
    {"fig4c", "TM11 + TM31, initial |a>, n = 2.3e10 (gamma1 tau1 = 0.253)"},
    {"fig4d", "TM11 + TM31, initial |a>, n = 1.8e12 (gamma1 tau1 = 19.8)"},
    {"fig5", "populations on [0, tau1] for the fig4c parameters (panels a, b)"},
    {"fig5cd", "populations on [0, tau1] for the fig4d parameters (panels c, d)"},
};

}  // namespace detail

inline std::vector<std::string> preset_names() {
    std::vector<std::string> out;
    for (const auto& p : detail::kPresets) out.emplace_back(p.name);
    return out;
}

inline std::string preset_summary(const std::string& name) {
    for (const auto& p : detail::kPresets) {
        if (name == p.name) return p.summary;
    }
    return {};
}

namespace detail {

inline std::optional<ScenarioInputs> find_preset(const std::string& name) {
    struct Row {
        const char* name;
        bool two_mode;
        const char* initial;
        double n;
        const char* t_max;
    };
    static constexpr Row rows[] = {
        {"fig2a", false, "a", 1.0e9, "30/G"},   {"fig2b", false, "a", 8.0e9, "6tau1"},
        {"fig2c", false, "a", 8.0e10, "6tau1"}, {"fig3a", false, "s", 1.0e9, "30/G"},
        {"fig3b", false, "s", 8.0e9, "6tau1"},  {"fig4a", true, "a", 0.0, "30/G"},
        {"fig4b", true, "a", 3.1e9, "30/G"},    {"fig4c", true, "a", 2.3e10, "6tau1"},
        {"fig4d", true, "a", 1.8e12, "6tau1"},  {"fig5", true, "a", 2.3e10, "tau1"},
        {"fig5cd", true, "a", 1.8e12, "tau1"},
    };
    for (const auto& row : rows) {
        if (name != row.name) continue;
        ScenarioInputs in = row.two_mode ? two_mode_base() : single_mode_base();
        in.label = row.name;
        in.initial = InitialState::named(row.initial);
        in.n = row.n;
        in.t_max_expr = row.t_max;
        if (name == "fig4a") in.delta_sweep = {"0", "2g2", "2(g1+g2)", "5(g1+g2)"};
        in.delta_expr = in.delta_sweep.front();
        return in;
    }
    return std::nullopt;
}

}  // namespace detail

/// Unresolved inputs of a preset; overrides are applied before resolve().
inline ScenarioInputs preset_inputs(const std::string& name) {
    if (auto in = detail::find_preset(name)) return *in;
    std::string valid;
    for (const auto& p : detail::kPresets) valid += std::string(valid.empty() ? "" : ", ") + p.name;
    throw UnknownPresetError("unknown preset '" + name + "'; valid presets: " + valid);
}

/// Resolved scenario of a preset with its first legend value of delta.
inline ScenarioSpec preset(const std::string& name) { return resolve(preset_inputs(name)); }

}  // namespace wgqed
