#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include "wgqed/linalg.hpp"

namespace testing {

using wgqed::cplx;
using wgqed::kI;
using wgqed::kPi;

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
    cplx unit_phase() { return std::polar(1.0, uniform(0.0, 2.0 * kPi)); }

    /// Random normalized pair of amplitudes.
    wgqed::Vec2 state() {
        const double th = uniform(0.0, kPi / 2.0);
        return {std::cos(th) * unit_phase(), std::sin(th) * unit_phase()};
    }

private:
    std::mt19937_64 eng_;
};

// Single-mode amplitudes written out by hand on the first two delay segments.
// xi are the complex frequencies in B' = i xi B, alpha the cross coupling.
struct SegmentOracle {
    cplx xi1, xi2, alpha;
    double tau;

    wgqed::Vec2 operator()(const wgqed::Vec2& b0, double t) const {
        cplx b1 = b0[0] * std::exp(kI * xi1 * t);
        cplx b2 = b0[1] * std::exp(kI * xi2 * t);
        if (t >= tau) {
            const double s = t - tau;
            const cplx kernel = (std::exp(kI * xi2 * s) - std::exp(kI * xi1 * s)) / (kI * (xi2 - xi1));
            b1 -= b0[1] * alpha * kernel;
            b2 -= b0[0] * alpha * kernel;
        }
        return {b1, b2};
    }
};

inline double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

}  // namespace testing
