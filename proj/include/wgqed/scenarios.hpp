#pragma once

// Physical scenarios as delay systems: bare amplitudes (B1, B2) coupled through
// every guided mode, or the symmetric/antisymmetric pair (C_s, C_a) for equal
// dipoles, plus the run driver that attaches observables.

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wgqed/dde.hpp"
#include "wgqed/errors.hpp"
#include "wgqed/linalg.hpp"
#include "wgqed/observables.hpp"
#include "wgqed/waveguide.hpp"

namespace wgqed {

enum class Basis { bare, sa };

inline std::string to_string(Basis b) { return b == Basis::bare ? "bare" : "sa"; }

inline Vec2 bare_to_sa(const Vec2& x) {
    const double r = 1.0 / std::sqrt(2.0);
    return {r * (x[0] + x[1]), r * (x[0] - x[1])};
}

inline Vec2 sa_to_bare(const Vec2& x) {
    const double r = 1.0 / std::sqrt(2.0);
    return {r * (x[0] + x[1]), r * (x[0] - x[1])};
}

struct InitialState {
    enum class Kind { antisym, sym, eg, ge, custom };

    Kind kind = Kind::antisym;
    Vec2 custom{};  ///< bare amplitudes when kind == custom

    static InitialState named(const std::string& name) {
        if (name == "a" || name == "antisym") return {Kind::antisym, {}};
        if (name == "s" || name == "sym") return {Kind::sym, {}};
        if (name == "eg") return {Kind::eg, {}};
        if (name == "ge") return {Kind::ge, {}};
        throw DomainError("unknown initial state '" + name + "' (expected a, s, eg, ge)");
    }

    /// Custom bare amplitudes; must be normalized to 1e-9.
    static InitialState amplitudes(cplx b1, cplx b2) {
        const double n = std::norm(b1) + std::norm(b2);
        if (std::abs(n - 1.0) > 1e-9) throw DomainError("initial amplitudes are not normalized");
        return {Kind::custom, {b1, b2}};
    }

    std::string name() const {
        switch (kind) {
            case Kind::antisym: return "a";
            case Kind::sym: return "s";
            case Kind::eg: return "eg";
            case Kind::ge: return "ge";
            case Kind::custom: return "custom";
        }
        return "custom";
    }

    Vec2 bare() const {
        const double r = 1.0 / std::sqrt(2.0);
        switch (kind) {
            case Kind::antisym: return {r, -r};
            case Kind::sym: return {r, r};
            case Kind::eg: return {1.0, 0.0};
            case Kind::ge: return {0.0, 1.0};
            case Kind::custom: return custom;
        }
        return custom;
    }
};

struct ScenarioSpec {
    std::string label;
    Basis basis = Basis::bare;
    std::vector<ModeParams> modes;
    double delta = 0.0;
    double Gamma1 = 0.0;  ///< total decay rate of emitter 1
    double Gamma2 = 0.0;
    InitialState initial;
    double t_max = 0.0;
    std::optional<double> dt;
    std::optional<double> tol;  ///< when set, refine_until is used
    std::size_t samples = 2000;

    /// Sets Gamma1/Gamma2 from the mode list.
    void derive_rates() {
        Gamma1 = total_rate(modes, 1);
        Gamma2 = total_rate(modes, 2);
    }
};

/// B_l' = -(Gamma_l +- i delta) B_l - sum_j alpha_j B_other(t - tau_j) Theta(t - tau_j).
inline DelaySystem build_bare_system(std::span<const ModeParams> modes, double delta, double Gamma1,
                                     double Gamma2) {
    if (modes.empty()) throw NoCoupledModesError("scenario has no modes");
    const Mat2 a0 = Mat2::diag(-Gamma1 - kI * delta, -Gamma2 + kI * delta);
    std::vector<DelayTerm> terms;
    for (const auto& m : modes) terms.push_back({m.tau, Mat2{0.0, -m.alpha, -m.alpha, 0.0}});
    return DelaySystem(a0, std::move(terms), "bare amplitudes, " + std::to_string(modes.size()) + " mode(s)");
}

/// C_s' = -Gamma C_s - i delta C_a - sum_j alpha_j C_s(t - tau_j),
/// C_a' = -Gamma C_a - i delta C_s + sum_j alpha_j C_a(t - tau_j).
inline DelaySystem build_sa_system(std::span<const ModeParams> modes, double delta) {
    if (modes.empty()) throw NoCoupledModesError("scenario has no modes");
    if (!equal_dipoles(modes)) {
        throw BasisUnavailableError("symmetric/antisymmetric basis requires equal dipoles");
    }
    double Gamma = 0.0;
    for (const auto& m : modes) Gamma += m.gamma;
    const Mat2 a0{-Gamma, -kI * delta, -kI * delta, -Gamma};
    std::vector<DelayTerm> terms;
    for (const auto& m : modes) terms.push_back({m.tau, Mat2::diag(-m.alpha, m.alpha)});
    return DelaySystem(a0, std::move(terms), "sa amplitudes, " + std::to_string(modes.size()) + " mode(s)");
}

/// sqrt(delta^2 + (Im alpha_2)^2) with two or more modes, |delta| with one.
inline double oscillation_strength(double delta, std::optional<cplx> alpha2 = std::nullopt) {
    if (!alpha2) return std::abs(delta);
    return std::hypot(delta, alpha2->imag());
}

inline double oscillation_strength(double delta, std::span<const ModeParams> modes) {
    if (modes.size() < 2) return oscillation_strength(delta);
    return oscillation_strength(delta, modes[1].alpha);
}

struct ScenarioMetadata {
    double dt = 0.0;
    int refinements = 0;
    double refine_estimate = 0.0;
    std::vector<double> gamma_tau;  ///< gamma_j tau_j per mode
    std::vector<double> phi_mod;    ///< phi_j mod 2 pi per mode
    double omega_osc = 0.0;
    double time_unit = 1.0;  ///< t_over_tau1 = t / time_unit
    bool time_unit_is_tau1 = true;
};

struct ScenarioResult {
    Trajectory trajectory;  ///< internal grid, in spec.basis
    std::vector<double> times;
    std::vector<Vec2> bare;
    std::vector<Vec2> sa;
    ObservableSeries observables;
    ScenarioMetadata meta;
};

inline DelaySystem build_system(const ScenarioSpec& spec) {
    return spec.basis == Basis::bare ? build_bare_system(spec.modes, spec.delta, spec.Gamma1, spec.Gamma2)
                                     : build_sa_system(spec.modes, spec.delta);
}

inline ScenarioResult run_scenario(const ScenarioSpec& spec) {
    if (spec.modes.empty()) throw NoCoupledModesError("scenario has no modes");
    if (!(spec.t_max > 0.0)) throw DomainError("t_max must be positive");
    if (spec.samples < 2) throw DomainError("at least two output samples are required");

    const DelaySystem system = build_system(spec);
    const Vec2 x0_bare = spec.initial.bare();
    const Vec2 x0 = spec.basis == Basis::bare ? x0_bare : bare_to_sa(x0_bare);

    ScenarioResult out;
    if (spec.tol) {
        auto refined = refine_until(system, x0, spec.t_max, *spec.tol, spec.dt.value_or(0.0));
        out.trajectory = std::move(refined.trajectory);
        out.meta.refinements = refined.refinements;
        out.meta.refine_estimate = refined.estimate;
    } else {
        const double dt = spec.dt.value_or(suggest_step(system, spec.t_max));
        out.trajectory = integrate(system, x0, spec.t_max, dt);
    }
    out.trajectory.basis = to_string(spec.basis);
    out.meta.dt = out.trajectory.dt();

    const std::size_t n = spec.samples;
    out.times.resize(n);
    out.bare.resize(n);
    out.sa.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = (k + 1 == n) ? spec.t_max : spec.t_max * double(k) / double(n - 1);
        out.times[k] = t;
        const Vec2 x = out.trajectory.at(t);
        out.bare[k] = spec.basis == Basis::bare ? x : sa_to_bare(x);
        out.sa[k] = spec.basis == Basis::bare ? bare_to_sa(x) : x;
    }
    out.observables = make_observables(out.times, out.bare, out.sa);

    for (const auto& m : spec.modes) {
        out.meta.gamma_tau.push_back(m.gamma * m.tau);
        out.meta.phi_mod.push_back(m.phi);
    }
    out.meta.omega_osc = oscillation_strength(spec.delta, spec.modes);
    const double tau1 = spec.modes.front().tau;
    if (tau1 > 0.0) {
        out.meta.time_unit = tau1;
        out.meta.time_unit_is_tau1 = true;
    } else {
        out.meta.time_unit = 1.0 / spec.Gamma1;
        out.meta.time_unit_is_tau1 = false;
    }
    return out;
}

}  // namespace wgqed
