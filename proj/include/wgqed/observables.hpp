#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "wgqed/errors.hpp"
#include "wgqed/linalg.hpp"

namespace wgqed {

/// Concurrence of the single-excitation state B1|eg> + B2|ge> (plus vacuum),
/// max(0, 2 |B1 B2*|). The reduced density matrix is an X state, so this
/// closed form is exact and the matrix is never built.
inline double concurrence(cplx b1, cplx b2, double norm_tolerance = 1e-6) {
    const double norm = std::norm(b1) + std::norm(b2);
    if (norm > 1.0 + norm_tolerance) {
        throw NormViolationError("amplitude norm " + std::to_string(norm) + " exceeds one");
    }
    return std::max(0.0, 2.0 * std::abs(b1 * std::conj(b2)));
}

inline double concurrence(const Vec2& bare, double norm_tolerance = 1e-6) {
    return concurrence(bare[0], bare[1], norm_tolerance);
}

struct ObservableSeries {
    std::vector<double> times;
    std::vector<double> concurrence;
    std::vector<double> p1, p2;  ///< |B1|^2, |B2|^2
    std::vector<double> ps, pa;  ///< |C_s|^2, |C_a|^2
    std::vector<double> norm;

    std::size_t size() const { return times.size(); }
};

/// Observables from bare and symmetric/antisymmetric amplitudes sampled at times.
inline ObservableSeries make_observables(std::span<const double> times, std::span<const Vec2> bare,
                                         std::span<const Vec2> sa) {
    if (bare.size() != times.size() || sa.size() != times.size()) {
        throw DomainError("observable inputs differ in length");
    }
    ObservableSeries out;
    out.times.assign(times.begin(), times.end());
    const std::size_t n = times.size();
    out.concurrence.resize(n);
    out.p1.resize(n);
    out.p2.resize(n);
    out.ps.resize(n);
    out.pa.resize(n);
    out.norm.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.p1[i] = std::norm(bare[i][0]);
        out.p2[i] = std::norm(bare[i][1]);
        out.ps[i] = std::norm(sa[i][0]);
        out.pa[i] = std::norm(sa[i][1]);
        out.norm[i] = out.p1[i] + out.p2[i];
        out.concurrence[i] = concurrence(bare[i]);
    }
    return out;
}

struct Revival {
    double onset_time;  ///< last local minimum before the peak
    double peak_time;
    double peak_value;
};

/// Peaks of C(t) that follow an excursion below floor. A peak counts once
/// it rises above floor; its onset is the local minimum that precedes it.
inline std::vector<Revival> detect_revivals(const ObservableSeries& series, double floor = 1e-3) {
    if (!(floor > 0.0)) throw DomainError("revival floor must be positive");
    const auto& c = series.concurrence;
    std::vector<Revival> out;
    const std::size_t n = c.size();
    if (n < 3) return out;
    bool armed = false;
    std::size_t last_min = 0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (c[i] < floor) armed = true;
        if (c[i] <= c[i - 1] && c[i] < c[i + 1]) last_min = i;
        if (armed && c[i] > c[i - 1] && c[i] >= c[i + 1] && c[i] > floor) {
            out.push_back({series.times[last_min], series.times[i], c[i]});
            armed = false;
        }
    }
    return out;
}

/// Least-squares decay rate -d ln C / dt over times in [t0, t1].
inline double decay_rate_fit(const ObservableSeries& series, double t0, double t1) {
    std::vector<double> ts, ys;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double t = series.times[i];
        if (t < t0 || t > t1) continue;
        const double c = series.concurrence[i];
        if (!(c > 0.0)) {
            throw FitDomainError("concurrence is not positive at t = " + std::to_string(t));
        }
        ts.push_back(t);
        ys.push_back(std::log(c));
    }
    if (ts.size() < 2) throw FitDomainError("fewer than two samples in the fit window");
    const double k = static_cast<double>(ts.size());
    double tm = 0.0, ym = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        tm += ts[i];
        ym += ys[i];
    }
    tm /= k;
    ym /= k;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        sxx += (ts[i] - tm) * (ts[i] - tm);
        sxy += (ts[i] - tm) * (ys[i] - ym);
    }
    if (!(sxx > 0.0)) throw FitDomainError("degenerate fit window");
    return -sxy / sxx;
}

}  // namespace wgqed
