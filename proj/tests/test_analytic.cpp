#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "support.hpp"
#include "wgqed/analytic.hpp"
#include "wgqed/dde.hpp"

using namespace wgqed;
using testing::Rng;
using testing::SegmentOracle;

namespace {

SingleModeParams random_params(Rng& rng, double gamma_tau_lo = 0.05, double gamma_tau_hi = 15.0) {
    const double g = rng.uniform(0.3, 3.0);
    const double delta = rng.uniform(0.0, 6.0) * g;
    const double tau = rng.uniform(gamma_tau_lo, gamma_tau_hi) / g;
    return {cplx(-delta, g), cplx(delta, g), std::polar(g, rng.uniform(0.0, 2.0 * kPi)), tau};
}

DelaySystem as_system(const SingleModeParams& p) {
    return DelaySystem(Mat2::diag(kI * p.xi1, kI * p.xi2), {{p.tau1, Mat2{0.0, -p.alpha1, -p.alpha1, 0.0}}});
}

// Eighth-order central difference for the second derivative of f at z,
// along the real axis (f is analytic).
template <class F>
cplx second_derivative(F&& f, cplx z, double h) {
    static const double c[] = {-205.0 / 72.0, 8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0};
    cplx s = c[0] * f(z);
    for (int k = 1; k <= 4; ++k) s += c[k] * (f(z + k * h) + f(z - k * h));
    return s / (h * h);
}

template <class F>
cplx first_derivative(F&& f, cplx z, double h) {
    static const double c[] = {0.0, 4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
    cplx s = 0.0;
    for (int k = 1; k <= 4; ++k) s += c[k] * (f(z + k * h) - f(z - k * h));
    return s / h;
}

}  // namespace

TEST_CASE("series reproduces the first two segments") {
    Rng rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        const auto p = random_params(rng);
        const SegmentOracle exact{p.xi1, p.xi2, p.alpha1, p.tau1};
        const Vec2 b0 = rng.state();
        for (int k = 0; k < 40; ++k) {
            const double t = rng.uniform(0.0, 2.0 * p.tau1 * (1 - 1e-12));
            const Vec2 want = exact(b0, t);
            CHECK(max_abs(series_solution(p, b0, t) - want) <= 1e-12 * std::max(1.0, max_abs(want)));
        }
    }
}

TEST_CASE("series is continuous across multiples of the delay") {
    Rng rng(10);
    for (int trial = 0; trial < 30; ++trial) {
        const auto p = random_params(rng, 0.05, 5.0);
        const Vec2 b0 = rng.state();
        for (int n = 1; n <= 6; ++n) {
            const double t = n * p.tau1;
            const double eps = 1e-12 * t;
            CHECK(max_abs(series_solution(p, b0, t - eps) - series_solution(p, b0, t + eps)) < 1e-9);
        }
    }
}

TEST_CASE("series agrees with the integrator on random parameter sets") {
    Rng rng(4242);
    for (int trial = 0; trial < 20; ++trial) {
        const auto p = random_params(rng);
        const Vec2 b0 = rng.state();
        const double g = p.xi1.imag();
        const double t_end = std::min(8.0 * p.tau1, 30.0 / g);
        const auto sys = as_system(p);
        const auto traj = integrate(sys, b0, t_end, suggest_step(sys, t_end, 0.002));
        double worst = 0.0;
        for (int k = 0; k <= 400; ++k) {
            const double t = t_end * k / 400.0;
            worst = std::max(worst, max_abs(traj.at(t) - series_solution(p, b0, t)));
        }
        CHECK(worst < 1e-5);
    }
}

TEST_CASE("order-zero residue terms") {
    const SingleModeParams p{cplx(-0.4, 0.7), cplx(0.4, 0.7), std::polar(0.7, 0.9), 1.1};
    const double t = 2.5;
    const auto r = residue_terms(p, 0, t);
    CHECK(r.A_xi1 == cplx(0.0));
    CHECK(r.A_xi2 == cplx(0.0));
    CHECK(std::abs(r.A_xi1 + r.B_xi1 - std::exp(kI * p.xi1 * t)) < 1e-15);
    CHECK(std::abs(r.A_xi2 + r.B_xi2 - std::exp(kI * p.xi2 * t)) < 1e-15);
    const double t1 = t - p.tau1;
    const cplx c1 = (-kI * p.alpha1) * std::exp(kI * p.xi1 * t1) / (p.xi1 - p.xi2);
    const cplx c2 = (-kI * p.alpha1) * std::exp(kI * p.xi2 * t1) / (p.xi2 - p.xi1);
    CHECK(std::abs(r.C_xi1 - c1) < 1e-14);
    CHECK(std::abs(r.C_xi2 - c2) < 1e-14);

    // The two order-zero cross residues sum to the second-segment kernel.
    const cplx kernel = (std::exp(kI * p.xi2 * t1) - std::exp(kI * p.xi1 * t1)) / (kI * (p.xi2 - p.xi1));
    CHECK(std::abs(r.C_xi1 + r.C_xi2 - p.alpha1 * kernel) < 1e-14);
}

TEST_CASE("uncoupled emitters have no higher residues") {
    const SingleModeParams p{cplx(-0.4, 0.7), cplx(0.4, 0.2), 0.0, 1.0};
    for (int n = 1; n <= 4; ++n) {
        const auto r = residue_terms(p, n, 10.0);
        CHECK(r.A_xi1 == cplx(0.0));
        CHECK(r.B_xi2 == cplx(0.0));
        CHECK(r.C_xi1 == cplx(0.0));
    }
    const Vec2 b0{0.6, 0.8};
    const Vec2 got = series_solution(p, b0, 7.3);
    CHECK(std::abs(got[0] - b0[0] * std::exp(kI * p.xi1 * 7.3)) < 1e-15);
    CHECK(std::abs(got[1] - b0[1] * std::exp(kI * p.xi2 * 7.3)) < 1e-15);
}

TEST_CASE("order-two residues match finite differences in z") {
    const SingleModeParams p{cplx(-0.8, 0.5), cplx(0.6, 0.5), std::polar(0.5, 0.4), 0.7};
    const double t = 3.9;
    const int n = 2;
    const auto r = residue_terms(p, n, t);
    const cplx w = -kI * p.alpha1;
    const double t_even = t - 2 * n * p.tau1;
    const double t_odd = t - (2 * n + 1) * p.tau1;
    const double h = 0.02;

    const auto gen = [&](cplx other, int q, double s) {
        return [=](cplx z) { return std::exp(kI * z * s) * std::pow(z - other, -double(q)); };
    };
    const cplx w4 = std::pow(w, 4.0);
    const cplx a1 = w4 * first_derivative(gen(p.xi2, n + 1, t_even), p.xi1, h);
    const cplx b1 = w4 * second_derivative(gen(p.xi2, n, t_even), p.xi1, h) / 2.0;
    const cplx c1 = w4 * w * second_derivative(gen(p.xi2, n + 1, t_odd), p.xi1, h) / 2.0;
    const cplx b2 = w4 * second_derivative(gen(p.xi1, n, t_even), p.xi2, h) / 2.0;
    CHECK(std::abs(r.A_xi1 - a1) < 1e-7 * std::abs(a1));
    CHECK(std::abs(r.B_xi1 - b1) < 1e-7 * std::abs(b1));
    CHECK(std::abs(r.C_xi1 - c1) < 1e-7 * std::abs(c1));
    CHECK(std::abs(r.B_xi2 - b2) < 1e-7 * std::abs(b2));
}

TEST_CASE("confluent poles") {
    const double g = 0.8;
    const cplx alpha = std::polar(g, 0.6);
    const SingleModeParams merged{cplx(0.0, g), cplx(0.0, g), alpha, 1.4};
    const Vec2 b0{0.6, cplx(0.0, -0.8)};
    const double t = 7.7;
    const Vec2 limit = series_solution(merged, b0, t);

    SECTION("generic branch converges to the merged result") {
        double previous = 0.0;
        for (double sep : {1e-3, 1e-4, 1e-5}) {
            const SingleModeParams near{cplx(-0.5 * sep * g, g), cplx(0.5 * sep * g, g), alpha, 1.4};
            const double diff = max_abs(series_solution(near, b0, t) - limit);
            if (previous > 0.0) CHECK(diff == Catch::Approx(previous / 10.0).epsilon(0.02));
            previous = diff;
        }
        const SingleModeParams near{cplx(-0.5e-7 * g, g), cplx(0.5e-7 * g, g), alpha, 1.4};
        CHECK(max_abs(series_solution(near, b0, t) - limit) < 1e-6);
    }
    SECTION("merged result matches the integrator") {
        const auto sys = as_system(merged);
        const auto traj = integrate(sys, b0, t, merged.tau1 / 1000.0);
        CHECK(max_abs(traj.at(t) - limit) < 1e-9);
    }
    SECTION("Kummer and residue branches agree where they meet") {
        for (int p = 1; p <= 5; ++p) {
            for (int q = 1; q <= 5; ++q) {
                const cplx a{-0.3, -0.2};
                const double threshold = std::max(2.0, double(p + q));
                const double tt = 1.7;
                const cplx dir = std::polar(1.0, 0.7);
                // Just outside the switch the residue sums are used; force the series there.
                const cplx b = a + dir * (threshold * (1 + 1e-9) / tt);
                const cplx kummer = detail::pole_pair_inverse(a, b, p, q, tt, 0.0, true);
                const cplx residues = detail::pole_pair_inverse(a, b, p, q, tt, 0.0, false);
                CHECK(std::abs(kummer - residues) < 1e-10 * std::abs(kummer));
            }
        }
    }
    SECTION("residues are undefined at merged poles") {
        CHECK_THROWS_AS(residue_terms(merged, 1, t), ConfluentPoleError);
        SeriesOptions strict;
        strict.allow_confluent = false;
        CHECK_THROWS_AS(series_solution(merged, b0, t, strict), ConfluentPoleError);
    }
}

TEST_CASE("series guards") {
    const SingleModeParams p{cplx(-0.1, 1.0), cplx(0.1, 1.0), 1.0, 0.5};
    CHECK_THROWS_AS(series_solution(p, Vec2{1.0, 0.0}, 100.5), OrderCapError);
    CHECK_NOTHROW(series_solution(p, Vec2{1.0, 0.0}, 99.5));
    CHECK_THROWS_AS(series_solution(p, Vec2{1.0, 0.0}, -1.0), DomainError);
    const SingleModeParams no_delay{cplx(-0.1, 1.0), cplx(0.1, 1.0), 1.0, 0.0};
    CHECK_THROWS_AS(series_solution(no_delay, Vec2{1.0, 0.0}, 1.0), InvalidDelayError);
}

TEST_CASE("series norm bound") {
    Rng rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        const auto p = random_params(rng);
        const Vec2 b0 = rng.state();
        for (int k = 0; k < 50; ++k) {
            const double t = rng.uniform(0.0, std::min(30.0 * p.tau1, 40.0 / p.xi1.imag()));
            CHECK(series_solution(p, b0, t).norm_sq() <= 1.0 + 1e-9);
        }
    }
}

TEST_CASE("matrix exponential") {
    Rng rng(8);
    for (int trial = 0; trial < 50; ++trial) {
        Mat2 m;
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) m(i, j) = cplx(rng.uniform(-2, 2), rng.uniform(-2, 2));
        }
        const double t = rng.uniform(0.0, 2.0);
        // Taylor oracle with scaling and squaring.
        const int squarings = 8;
        const Mat2 a = (t / double(1 << squarings)) * m;
        Mat2 term = Mat2::identity(), sum = Mat2::identity();
        for (int k = 1; k < 25; ++k) {
            term = (1.0 / k) * (term * a);
            sum = sum + term;
        }
        for (int s = 0; s < squarings; ++s) sum = sum * sum;
        const Mat2 e = expm2(m, t);
        double worst = 0.0;
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) worst = std::max(worst, std::abs(e(i, j) - sum(i, j)));
        }
        CHECK(worst < 1e-10 * std::max(1.0, sum.norm_inf()));
    }
    // Defective: Jordan block.
    const Mat2 jordan{-1.0, 1.0, 0.0, -1.0};
    const Mat2 e = expm2(jordan, 2.0);
    CHECK(std::abs(e(0, 0) - std::exp(-2.0)) < 1e-15);
    CHECK(std::abs(e(0, 1) - 2.0 * std::exp(-2.0)) < 1e-15);
    CHECK(std::abs(e(1, 0)) == 0.0);

    // Long times: cosh(wt) and e^{mt} overflow separately but the product decays.
    const double d = 0.3;
    const Mat2 stiff{-2.0, cplx(0.0, -d), cplx(0.0, -d), 0.0};
    const double slow = -1.0 + std::sqrt(1.0 - d * d);
    const double fast = -1.0 - std::sqrt(1.0 - d * d);
    const double t_late = 1500.0;
    const cplx e11 = expm2(stiff, t_late)(1, 1);
    CHECK(std::abs(e11 / std::exp(slow * t_late) - (-fast / (slow - fast))) < 1e-12);
}

TEST_CASE("Markov-limit solutions") {
    const double g = 0.9;
    SECTION("dark antisymmetric state") {
        for (double t : {0.0, 1.0, 50.0}) {
            const Vec2 c = markov_solution(2.0 * g, 0.0, 0.0, Vec2{0.0, 1.0}, t);
            CHECK(c[1] == cplx(1.0));
            CHECK(c[0] == cplx(0.0));
        }
    }
    SECTION("equal widths: bare amplitudes decay independently") {
        Rng rng(12);
        for (int k = 0; k < 20; ++k) {
            const double G = rng.uniform(0.1, 2.0);
            const double delta = rng.uniform(-5.0, 5.0);
            const Vec2 c0 = rng.state();
            const Vec2 b0{(c0[0] + c0[1]) / std::sqrt(2.0), (c0[0] - c0[1]) / std::sqrt(2.0)};
            const double t = rng.uniform(0.0, 3.0);
            const Vec2 c = markov_solution(G, G, delta, c0, t);
            const cplx b1 = (c[0] + c[1]) / std::sqrt(2.0), b2 = (c[0] - c[1]) / std::sqrt(2.0);
            CHECK(std::abs(b1 * b2) == Catch::Approx(std::abs(b0[0] * b0[1]) * std::exp(-2.0 * G * t)).epsilon(1e-12).margin(1e-300));
            CHECK(std::abs(b1 - b0[0] * std::exp(-(G + kI * delta) * t)) < 1e-13);
        }
    }
    SECTION("large detuning: eigen decomposition oracle") {
        const double delta = 5.0 * g;
        const cplx w = std::sqrt(cplx(g * g - delta * delta));
        const cplx l1 = -g + w, l2 = -g - w;
        // C_a(t) from the eigenvalues of [[-2g, -i d], [-i d, 0]] with C(0) = (0, 1).
        for (double t : {0.3, 1.1, 2.7, 6.0}) {
            const cplx ca = ((l1 + 2.0 * g) * std::exp(l1 * t) - (l2 + 2.0 * g) * std::exp(l2 * t)) / (l1 - l2);
            const Vec2 c = markov_solution(2.0 * g, 0.0, delta, Vec2{0.0, 1.0}, t);
            CHECK(std::abs(c[1] - ca) < 1e-13);
        }
        // |C_a| is not monotone.
        double prev = 1.0;
        int turns = 0;
        bool falling = true;
        for (int k = 1; k < 2000; ++k) {
            const double v = std::abs(markov_solution(2.0 * g, 0.0, delta, Vec2{0.0, 1.0}, k * 0.005)[1]);
            if ((v > prev) == falling) {
                ++turns;
                falling = !falling;
            }
            prev = v;
        }
        CHECK(turns >= 2);
    }
}
