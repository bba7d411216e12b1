#pragma once

// Static parameters of a hollow rectangular waveguide and of two emitters on
// its axis: TM cutoffs, linearized dispersion, group velocities, coupling
// constants, decay rates, propagation phases and delays.
//
// Units are natural (c = b = hbar = eps0 = 1 by default); only dimensionless
// combinations such as gamma*tau or gamma2/gamma1 are physically meaningful.

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "wgqed/errors.hpp"
#include "wgqed/linalg.hpp"

namespace wgqed {

struct WaveguideSpec {
    double a = 2.0;  ///< transverse width
    double b = 1.0;  ///< transverse height
    double c = 1.0;  ///< speed of light
    double hbar = 1.0;
    double eps0 = 1.0;

    double area() const { return a * b; }

    void validate() const {
        if (!(a > 0.0) || !(b > 0.0) || !(c > 0.0) || !(hbar > 0.0) || !(eps0 > 0.0)) {
            throw DomainError("waveguide dimensions and constants must be positive");
        }
    }
};

/// TM_mn label; ordinal is the 1-based position in ascending cutoff order (0 if unassigned).
struct TransverseModeIndex {
    int m = 1;
    int n = 1;
    int ordinal = 0;

    std::string name() const { return "TM" + std::to_string(m) + std::to_string(n); }
    friend bool operator==(const TransverseModeIndex& x, const TransverseModeIndex& y) {
        return x.m == y.m && x.n == y.n;
    }
};

struct TLSPair {
    double omega_A = 0.0;  ///< mean transition frequency
    double delta = 0.0;    ///< half the transition-frequency difference
    double mu1 = 1.0;
    double mu2 = 1.0;
    double z1 = 0.0;
    double z2 = 0.0;
    cplx b1{1.0 / std::sqrt(2.0), 0.0};
    cplx b2{-1.0 / std::sqrt(2.0), 0.0};

    double separation() const { return z2 - z1; }
    double omega1() const { return omega_A + delta; }
    double omega2() const { return omega_A - delta; }
};

struct ModeParams {
    TransverseModeIndex index;
    double Omega = 0.0;   ///< cutoff frequency
    double v = 0.0;       ///< group velocity at omega_A
    double k0 = 0.0;      ///< resonant wavenumber
    double lambda = 0.0;  ///< 2 pi / k0
    double gamma = 0.0;   ///< cross rate g_1 g_2 pi / (v omega_A)
    double gamma_l1 = 0.0;
    double gamma_l2 = 0.0;
    double phase_turns = 0.0;  ///< k0 d / 2 pi, unreduced
    double phi = 0.0;          ///< k0 d reduced to [0, 2 pi)
    double tau = 0.0;          ///< d / v
    cplx alpha{};              ///< gamma e^{i phi}
};

inline double cutoff_frequency(const WaveguideSpec& spec, int m, int n) {
    spec.validate();
    if (m < 1 || n < 1) throw DomainError("mode indices must be positive");
    const double kx = m * kPi / spec.a;
    const double ky = n * kPi / spec.b;
    return spec.c * std::sqrt(kx * kx + ky * ky);
}

inline double dispersion(double Omega, double k, double c = 1.0) {
    return std::sqrt(Omega * Omega + (c * k) * (c * k));
}

inline double resonant_wavenumber(double Omega, double omega_A, double c = 1.0) {
    if (!(omega_A > Omega)) {
        throw EvanescentModeError("transition frequency " + std::to_string(omega_A) +
                                  " is not above cutoff " + std::to_string(Omega));
    }
    // (w - W)(w + W) keeps precision when omega_A is close to the cutoff.
    return std::sqrt((omega_A - Omega) * (omega_A + Omega)) / c;
}

inline double group_velocity(double Omega, double omega_A, double c = 1.0) {
    return c * c * resonant_wavenumber(Omega, omega_A, c) / omega_A;
}

/// Coupling constant of a z-dipole at the guide centre (a/2, b/2) to TM_mn.
inline double coupling_strength(const WaveguideSpec& spec, TransverseModeIndex mode, double mu) {
    if (mode.m < 1 || mode.n < 1) throw DomainError("mode indices must be positive");
    if (mode.m % 2 == 0 || mode.n % 2 == 0) {
        throw ModeDecoupledError(mode.name() + " has a node at the guide centre");
    }
    // sin(m pi / 2) for odd m is +1 for m = 1 mod 4 and -1 for m = 3 mod 4.
    const double sm = (mode.m % 4 == 1) ? 1.0 : -1.0;
    const double sn = (mode.n % 4 == 1) ? 1.0 : -1.0;
    const double Omega = cutoff_frequency(spec, mode.m, mode.n);
    return Omega * mu * sm * sn / std::sqrt(spec.hbar * spec.area() * kPi * spec.eps0);
}

/// Odd-odd TM modes propagating at omega_A, ascending by cutoff.
inline std::vector<TransverseModeIndex> guided_modes(const WaveguideSpec& spec, double omega_A) {
    spec.validate();
    std::vector<TransverseModeIndex> out;
    const int m_max = static_cast<int>(std::floor(omega_A * spec.a / (kPi * spec.c))) + 1;
    const int n_max = static_cast<int>(std::floor(omega_A * spec.b / (kPi * spec.c))) + 1;
    for (int m = 1; m <= m_max; m += 2) {
        for (int n = 1; n <= n_max; n += 2) {
            if (cutoff_frequency(spec, m, n) < omega_A) out.push_back({m, n, 0});
        }
    }
    std::stable_sort(out.begin(), out.end(), [&](const auto& x, const auto& y) {
        return cutoff_frequency(spec, x.m, x.n) < cutoff_frequency(spec, y.m, y.n);
    });
    for (std::size_t i = 0; i < out.size(); ++i) out[i].ordinal = static_cast<int>(i) + 1;
    return out;
}

/// Open frequency interval, typically the band between two consecutive cutoffs.
struct FrequencyWindow {
    double lower = 0.0;
    double upper = 0.0;

    bool contains(double w) const { return lower < w && w < upper; }
    double midpoint() const { return 0.5 * (lower + upper); }
};

inline FrequencyWindow band_between(const WaveguideSpec& spec, TransverseModeIndex lo,
                                    TransverseModeIndex hi) {
    return {cutoff_frequency(spec, lo.m, lo.n), cutoff_frequency(spec, hi.m, hi.n)};
}

namespace detail {

/// 2 pi * frac(n * ratio) without losing the fractional part to rounding of the product.
inline double reduced_phase(double n, double ratio) {
    const double p = n * ratio;
    const double err = std::fma(n, ratio, -p);
    double frac = (p - std::floor(p)) + err;
    frac -= std::floor(frac);
    return 2.0 * kPi * frac;
}

struct RateTriple {
    double gamma, gamma_l1, gamma_l2;
};

inline std::vector<ModeParams> assemble(const WaveguideSpec& spec, double omega_A,
                                        std::span<const TransverseModeIndex> modes,
                                        std::span<const RateTriple> rates, double turns1) {
    if (modes.empty()) throw NoCoupledModesError("no guided mode couples to the emitters");
    const double Omega1 = cutoff_frequency(spec, modes[0].m, modes[0].n);
    const double k10 = resonant_wavenumber(Omega1, omega_A, spec.c);
    const double lambda1 = 2.0 * kPi / k10;
    const double v1 = group_velocity(Omega1, omega_A, spec.c);
    const double d = turns1 * lambda1;

    std::vector<ModeParams> out;
    out.reserve(modes.size());
    for (std::size_t j = 0; j < modes.size(); ++j) {
        ModeParams p;
        p.index = modes[j];
        p.index.ordinal = static_cast<int>(j) + 1;
        p.Omega = cutoff_frequency(spec, modes[j].m, modes[j].n);
        p.k0 = resonant_wavenumber(p.Omega, omega_A, spec.c);
        p.lambda = 2.0 * kPi / p.k0;
        p.v = group_velocity(p.Omega, omega_A, spec.c);
        p.gamma = rates[j].gamma;
        p.gamma_l1 = rates[j].gamma_l1;
        p.gamma_l2 = rates[j].gamma_l2;
        const double ratio = (j == 0) ? 1.0 : p.k0 / k10;
        p.phase_turns = turns1 * ratio;
        p.phi = reduced_phase(turns1, ratio);
        // tau_j = (d / v1) * (v1 / v_j) keeps tau_j / tau_1 exact for large d.
        p.tau = (j == 0) ? d / v1 : (d / v1) * (v1 / p.v);
        p.alpha = std::polar(p.gamma, p.phi);
        out.push_back(p);
    }
    return out;
}

}  // namespace detail

/// Dipole parametrization: rates from the coupling constants, phases and delays from tls.
inline std::vector<ModeParams> mode_interaction_params(const WaveguideSpec& spec, const TLSPair& tls,
                                                       std::span<const TransverseModeIndex> modes) {
    if (tls.separation() < 0.0) throw DomainError("emitter separation must be nonnegative");
    if (modes.empty()) throw NoCoupledModesError("no guided mode couples to the emitters");
    std::vector<detail::RateTriple> rates;
    for (const auto& mode : modes) {
        const double Omega = cutoff_frequency(spec, mode.m, mode.n);
        const double v = group_velocity(Omega, tls.omega_A, spec.c);
        const double g1 = coupling_strength(spec, mode, tls.mu1);
        const double g2 = coupling_strength(spec, mode, tls.mu2);
        const double scale = kPi / (v * tls.omega_A);
        rates.push_back({g1 * g2 * scale, g1 * g1 * scale, g2 * g2 * scale});
    }
    const double Omega1 = cutoff_frequency(spec, modes[0].m, modes[0].n);
    const double k10 = resonant_wavenumber(Omega1, tls.omega_A, spec.c);
    const double turns1 = tls.separation() * k10 / (2.0 * kPi);
    return detail::assemble(spec, tls.omega_A, modes, rates, turns1);
}

/// All propagating modes; omega_A must lie strictly inside window.
inline std::vector<ModeParams> mode_interaction_params(const WaveguideSpec& spec, const TLSPair& tls,
                                                       FrequencyWindow window) {
    if (!window.contains(tls.omega_A)) {
        throw DomainError("transition frequency lies outside the requested band");
    }
    const auto modes = guided_modes(spec, tls.omega_A);
    return mode_interaction_params(spec, tls, modes);
}

/// Rate parametrization for equal dipoles: gamma_j = gamma1 (Omega_j/Omega_1)^2 (v_1/v_j).
/// phase_turns1 = d / lambda_1, so phi_1 = 2 pi phase_turns1.
inline std::vector<ModeParams> mode_interaction_params_by_rate(const WaveguideSpec& spec,
                                                               double omega_A,
                                                               std::span<const TransverseModeIndex> modes,
                                                               double gamma1, double phase_turns1) {
    if (modes.empty()) throw NoCoupledModesError("no guided mode couples to the emitters");
    if (phase_turns1 < 0.0) throw DomainError("emitter separation must be nonnegative");
    const double Omega1 = cutoff_frequency(spec, modes[0].m, modes[0].n);
    const double v1 = group_velocity(Omega1, omega_A, spec.c);
    std::vector<detail::RateTriple> rates;
    for (const auto& mode : modes) {
        if (mode.m % 2 == 0 || mode.n % 2 == 0) {
            throw ModeDecoupledError(mode.name() + " has a node at the guide centre");
        }
        const double Omega = cutoff_frequency(spec, mode.m, mode.n);
        const double v = group_velocity(Omega, omega_A, spec.c);
        const double r = Omega / Omega1;
        const double g = gamma1 * r * r * (v1 / v);
        rates.push_back({g, g, g});
    }
    return detail::assemble(spec, omega_A, modes, rates, phase_turns1);
}

/// gamma_1 from the dimensionless product gamma_1 lambda_1 / v_1.
inline double gamma1_from_ratio(const WaveguideSpec& spec, double omega_A, TransverseModeIndex first,
                                double gamma_lambda_over_v) {
    const double Omega1 = cutoff_frequency(spec, first.m, first.n);
    const double k10 = resonant_wavenumber(Omega1, omega_A, spec.c);
    const double v1 = group_velocity(Omega1, omega_A, spec.c);
    return gamma_lambda_over_v * v1 * k10 / (2.0 * kPi);
}

/// Total decay rate of emitter l (1 or 2) into all listed modes.
inline double total_rate(std::span<const ModeParams> modes, int emitter) {
    double s = 0.0;
    for (const auto& m : modes) s += (emitter == 1) ? m.gamma_l1 : m.gamma_l2;
    return s;
}

inline bool equal_dipoles(std::span<const ModeParams> modes, double rel_tol = 1e-12) {
    for (const auto& m : modes) {
        const double scale = std::max({std::abs(m.gamma_l1), std::abs(m.gamma_l2), 1e-300});
        if (std::abs(m.gamma_l1 - m.gamma_l2) > rel_tol * scale) return false;
        if (std::abs(m.gamma - m.gamma_l1) > rel_tol * scale) return false;
    }
    return true;
}

}  // namespace wgqed
