#pragma once

// Closed-form solutions used as oracles for the delay integrator.
//
// Single mode: the Laplace-domain amplitudes
//
//     B1(s) = [(s - i xi2) B1(0) - alpha e^{-s tau} B2(0)] / [(s - i xi1)(s - i xi2) - alpha^2 e^{-2 s tau}]
//
// expand geometrically in alpha^2 e^{-2 s tau}, and each term inverts to a
// delayed copy of L^{-1}[1/((s - a)^p (s - b)^q)] with a = i xi1, b = i xi2.
// Those inverse transforms are sums of pole residues whose higher derivatives
// follow from the Leibniz rule.
//
// Markov limit: the 2x2 constant-coefficient system is solved by the exact
// matrix exponential.

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>

#include "wgqed/errors.hpp"
#include "wgqed/linalg.hpp"
#include "wgqed/waveguide.hpp"

namespace wgqed {

struct SingleModeParams {
    cplx xi1;     ///< i gamma_11 - delta
    cplx xi2;     ///< i gamma_21 + delta
    cplx alpha1;  ///< gamma_1 e^{i phi_1}
    double tau1 = 0.0;

    static SingleModeParams from_mode(const ModeParams& mode, double delta) {
        return {kI * mode.gamma_l1 - delta, kI * mode.gamma_l2 + delta, mode.alpha, mode.tau};
    }
};

struct SeriesOptions {
    bool allow_confluent = true;
    double confluence_rel_tol = 1e-8;
    double max_orders = 200.0;  ///< refuse t / tau beyond this
};

namespace detail {

inline double log_factorial(int k) { return std::lgamma(static_cast<double>(k) + 1.0); }

/// log C(n, k) for n >= k >= 0.
inline double log_binomial(int n, int k) {
    return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

/// log of a complex number; -inf real part for zero.
inline cplx safe_log(cplx z) {
    if (z == 0.0) return {-std::numeric_limits<double>::infinity(), 0.0};
    return std::log(z);
}

inline cplx exp_or_zero(cplx e) {
    if (e.real() == -std::numeric_limits<double>::infinity()) return 0.0;
    return std::exp(e);
}

/// e^{log_w} L^{-1}[1/((s-a)^p (s-b)^q)](t) for t >= 0, p >= 1, q >= 0.
///
/// Well separated poles (|b - a| t large) use the Leibniz residue sums. Close
/// or merged poles use the Taylor expansion about the merged pole,
///     e^{a t} t^{p+q-1}/(p+q-1)! M(q; p+q; (b-a) t),
/// with M Kummer's function; this is the limit of the residue sums and stays
/// exact for small nonzero separations, where the residue sums cancel badly.
inline cplx pole_pair_inverse(cplx a, cplx b, int p, int q, double t, cplx log_w, bool merged) {
    if (t < 0.0) return 0.0;
    if (q == 0) {
        const int k = p - 1;
        if (t == 0.0) return k == 0 ? exp_or_zero(log_w) : cplx{0.0};
        return exp_or_zero(log_w + a * t + double(k) * std::log(t) - log_factorial(k));
    }
    const int order = p + q - 1;
    if (t == 0.0) return 0.0;
    const cplx x = (b - a) * t;
    const double threshold = std::max(2.0, static_cast<double>(p + q));

    if (merged || std::abs(x) < threshold) {
        // Kummer series sum_k (q)_k / (p+q)_k x^k / k!
        CompensatedSum m;
        cplx term = 1.0;
        const double cap = 1e-17;
        for (int k = 0; k < 10000; ++k) {
            m.add(term);
            if (k > std::abs(x) && std::abs(term) < cap * std::abs(m.value())) break;
            term *= (double(q + k) / double(p + q + k)) * x / double(k + 1);
        }
        return exp_or_zero(log_w + a * t + double(order) * std::log(t) - log_factorial(order)) *
               m.value();
    }

    // Residue at a (order p) plus residue at b (order q):
    //   Res_a = e^{at} sum_j t^{p-1-j}/(p-1-j)! (-1)^j C(q+j-1, j) (a-b)^{-q-j}
    CompensatedSum sum;
    const double log_t = std::log(t);
    const auto residue = [&](cplx pole, cplx other, int own, int other_order) {
        const cplx log_diff = std::log(pole - other);
        for (int j = 0; j < own; ++j) {
            const int tk = own - 1 - j;
            const double sign = (j % 2 == 0) ? 1.0 : -1.0;
            const cplx e = log_w + pole * t + double(tk) * log_t - log_factorial(tk) +
                           log_binomial(other_order + j - 1, j) - double(other_order + j) * log_diff;
            sum.add(sign * std::exp(e));
        }
    };
    residue(a, b, p, q);
    residue(b, a, q, p);
    return sum.value();
}

/// (1/m!) d^m/dz^m [ e^{i z t} (z - xi_l)^{-q} ] at z = xi_k.
inline cplx pole_derivative(cplx xi_k, cplx xi_l, int m, int q, double t) {
    if (m < 0) return 0.0;
    CompensatedSum sum;
    const cplx it = kI * t;
    const cplx diff = xi_k - xi_l;
    for (int j = 0; j <= m; ++j) {
        if (q == 0 && j > 0) break;
        const double binom = (q == 0) ? 1.0 : std::exp(log_binomial(q + j - 1, j));
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        cplx power = 1.0;
        for (int r = 1; r <= m - j; ++r) power *= it / double(r);
        sum.add(sign * binom * power * std::pow(diff, -double(q + j)));
    }
    return std::exp(kI * xi_k * t) * sum.value();
}

}  // namespace detail

/// The six limit-derivative terms of order n in the spectral variable z
/// convention (z = -i s). A_0 is identically zero; B_0(xi_k) = e^{i xi_k t}.
struct ResidueTerms {
    cplx A_xi1, A_xi2;
    cplx B_xi1, B_xi2;
    cplx C_xi1, C_xi2;
};

inline ResidueTerms residue_terms(const SingleModeParams& p, int n, double t) {
    if (n < 0) throw DomainError("residue order must be nonnegative");
    if (!(p.tau1 > 0.0)) throw InvalidDelayError("series needs a positive delay");
    const double scale = std::max({std::abs(p.xi1), std::abs(p.xi2), std::abs(p.alpha1)});
    if (std::abs(p.xi1 - p.xi2) <= 1e-8 * scale) {
        throw ConfluentPoleError("xi1 and xi2 coincide; individual residues are undefined");
    }
    const cplx w = -kI * p.alpha1;
    const cplx w_even = std::pow(w, 2.0 * n);
    const cplx w_odd = w_even * w;
    const double t_even = t - 2.0 * n * p.tau1;
    const double t_odd = t - (2.0 * n + 1.0) * p.tau1;
    using detail::pole_derivative;
    ResidueTerms r;
    if (n >= 1) {
        r.A_xi1 = w_even * pole_derivative(p.xi1, p.xi2, n - 1, n + 1, t_even);
        r.A_xi2 = w_even * pole_derivative(p.xi2, p.xi1, n - 1, n + 1, t_even);
    }
    r.B_xi1 = w_even * pole_derivative(p.xi1, p.xi2, n, n, t_even);
    r.B_xi2 = w_even * pole_derivative(p.xi2, p.xi1, n, n, t_even);
    r.C_xi1 = w_odd * pole_derivative(p.xi1, p.xi2, n, n + 1, t_odd);
    r.C_xi2 = w_odd * pole_derivative(p.xi2, p.xi1, n, n + 1, t_odd);
    return r;
}

/// Exact single-mode amplitudes (B1(t), B2(t)) from the residue series.
inline Vec2 series_solution(const SingleModeParams& p, const Vec2& b0, double t,
                            const SeriesOptions& opts = {}) {
    if (!(p.tau1 > 0.0)) throw InvalidDelayError("series needs a positive delay; use markov_solution");
    if (t < 0.0) throw DomainError("time must be nonnegative");
    const double orders = t / p.tau1;
    if (orders > opts.max_orders) {
        throw OrderCapError("t / tau1 = " + std::to_string(orders) + " exceeds the series cap");
    }

    // Work in units of tau1: every term alpha^k L^{-1}[...](t) is invariant
    // under s -> s / tau1 once alpha, the poles and t are rescaled.
    const cplx a = kI * p.xi1 * p.tau1;
    const cplx b = kI * p.xi2 * p.tau1;
    const cplx log_alpha = detail::safe_log(p.alpha1 * p.tau1);

    const double scale = std::max({std::abs(p.xi1), std::abs(p.xi2), std::abs(p.alpha1)});
    const bool merged = std::abs(p.xi1 - p.xi2) <= opts.confluence_rel_tol * scale;
    if (merged && !opts.allow_confluent) {
        throw ConfluentPoleError("xi1 and xi2 coincide and the confluent branch is disabled");
    }

    CompensatedSum s1, s2;
    const double u = orders;
    for (int n = 0;; ++n) {
        const double t_even = u - 2.0 * n;
        const double t_odd = u - 2.0 * n - 1.0;
        if (t_even < 0.0) break;
        const cplx lw_even = (n == 0) ? cplx{0.0} : 2.0 * n * log_alpha;
        s1.add(b0[0] * detail::pole_pair_inverse(a, b, n + 1, n, t_even, lw_even, merged));
        s2.add(b0[1] * detail::pole_pair_inverse(b, a, n + 1, n, t_even, lw_even, merged));
        if (t_odd < 0.0) continue;
        const cplx lw_odd = (2.0 * n + 1.0) * log_alpha;
        const cplx cross = detail::pole_pair_inverse(a, b, n + 1, n + 1, t_odd, lw_odd, merged);
        s1.add(-b0[1] * cross);
        s2.add(-b0[0] * cross);
    }
    return {s1.value(), s2.value()};
}

/// exp(M t) for a 2x2 matrix via e^{mt} [cosh(w t) I + sinh(w t)/w (M - m I)],
/// m = tr M / 2, w^2 = ((M00 - M11)/2)^2 + M01 M10. The w -> 0 limit is
/// handled by the series of sinh(x)/x, so defective matrices need no special case.
inline Mat2 expm2(const Mat2& M, double t) {
    const cplx m = 0.5 * (M(0, 0) + M(1, 1));
    const Mat2 N{M(0, 0) - m, M(0, 1), M(1, 0), M(1, 1) - m};
    const cplx w = std::sqrt(N(0, 0) * N(0, 0) + N(0, 1) * N(1, 0));
    const cplx x = w * t;
    cplx ch, shc;  // cosh(x), t sinh(x)/x
    if (std::abs(x.real()) > 20.0) {
        // Large |Re x|: fold e^{mt} in so neither factor overflows on its own.
        const cplx ep = std::exp((m + w) * t);
        const cplx em = std::exp((m - w) * t);
        const cplx c = 0.5 * (ep + em);
        const cplx sh = (ep - em) / (2.0 * w);
        return {c + sh * N(0, 0), sh * N(0, 1), sh * N(1, 0), c + sh * N(1, 1)};
    }
    if (std::abs(x) < 1e-3) {
        const cplx x2 = x * x;
        ch = 1.0 + x2 / 2.0 * (1.0 + x2 / 12.0 * (1.0 + x2 / 30.0));
        shc = t * (1.0 + x2 / 6.0 * (1.0 + x2 / 20.0 * (1.0 + x2 / 42.0)));
    } else {
        ch = std::cosh(x);
        shc = std::sinh(x) / w;
    }
    const cplx e = std::exp(m * t);
    return {e * (ch + shc * N(0, 0)), e * shc * N(0, 1), e * shc * N(1, 0), e * (ch + shc * N(1, 1))};
}

/// Symmetric/antisymmetric amplitudes under
///     C_s' = -Gamma_s C_s - i delta C_a,   C_a' = -i delta C_s - Gamma_a C_a.
/// (2 gamma, 0) is the zero-delay single-mode limit at phi = 2 n pi; (Gamma, Gamma)
/// is the two-mode system before the first delay.
inline Vec2 markov_solution(cplx gamma_s, cplx gamma_a, double delta, const Vec2& c0, double t) {
    if (t < 0.0) throw DomainError("time must be nonnegative");
    const Mat2 M{-gamma_s, -kI * delta, -kI * delta, -gamma_a};
    const Vec2 out = expm2(M, t) * c0;
    if (!out.finite()) throw DivergedError("matrix exponential overflowed", t);
    return out;
}

}  // namespace wgqed
