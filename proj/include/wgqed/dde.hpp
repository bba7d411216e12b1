#pragma once

// Method-of-steps integrator for linear complex 2-dimensional delay systems
//
//     X'(t) = A0 X(t) + sum_m A_m X(t - tau_m) Theta(t - tau_m),   X(t < 0) = 0,
//
// with Theta(0) = 1. Steps are classical RK4; delayed arguments come from a
// dense history built from cubic Hermite interpolation of stored nodes.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wgqed/errors.hpp"
#include "wgqed/linalg.hpp"

namespace wgqed {

struct DelayTerm {
    double tau = 0.0;
    Mat2 matrix;
};

class DelaySystem {
public:
    DelaySystem() = default;

    /// Terms with tau == 0 are always active (Theta(0) = 1) and fold into A0.
    DelaySystem(Mat2 instantaneous, std::vector<DelayTerm> delayed, std::string description = {})
        : a0_(instantaneous), description_(std::move(description)) {
        for (auto& term : delayed) {
            if (!(term.tau >= 0.0) || !std::isfinite(term.tau)) {
                throw InvalidDelayError("delays must be finite and nonnegative");
            }
            if (term.tau == 0.0) {
                a0_ = a0_ + term.matrix;
            } else {
                delayed_.push_back(term);
            }
        }
    }

    const Mat2& instantaneous() const { return a0_; }
    std::span<const DelayTerm> delayed() const { return delayed_; }
    const std::string& description() const { return description_; }

    double min_delay() const {
        double t = std::numeric_limits<double>::infinity();
        for (const auto& d : delayed_) t = std::min(t, d.tau);
        return t;
    }

    /// Crude rate scale used for step-size heuristics.
    double rate_scale() const {
        double r = a0_.norm_inf();
        for (const auto& d : delayed_) r += d.matrix.norm_inf();
        return r;
    }

private:
    Mat2 a0_;
    std::vector<DelayTerm> delayed_;
    std::string description_;
};

/// Uniform-grid history with cubic Hermite dense output. Each node keeps its
/// state and one-sided derivatives, so a derivative jump that lands on a node
/// does not leak into the neighbouring cells.
class HistoryBuffer {
public:
    explicit HistoryBuffer(double dt = 1.0) : dt_(dt) {
        if (!(dt > 0.0)) throw DomainError("history grid spacing must be positive");
    }

    void push(const Vec2& state, const Vec2& deriv_left, const Vec2& deriv_right) {
        states_.push_back(state);
        left_.push_back(deriv_left);
        right_.push_back(deriv_right);
    }
    void push(const Vec2& state, const Vec2& deriv) { push(state, deriv, deriv); }

    /// Interior point of the cell that starts at the newest node; must come in time order.
    void push_interior(double t, const Vec2& state, const Vec2& deriv_left, const Vec2& deriv_right) {
        interior_.push_back({size() - 1, t, state, deriv_left, deriv_right});
    }

    void reserve(std::size_t n) {
        states_.reserve(n);
        left_.reserve(n);
        right_.reserve(n);
    }

    double dt() const { return dt_; }
    std::size_t size() const { return states_.size(); }
    bool empty() const { return states_.empty(); }
    double time(std::size_t i) const { return static_cast<double>(i) * dt_; }
    double t_current() const { return empty() ? -dt_ : time(size() - 1); }

    const Vec2& state(std::size_t i) const { return states_[i]; }
    const Vec2& deriv_left(std::size_t i) const { return left_[i]; }
    const Vec2& deriv_right(std::size_t i) const { return right_[i]; }
    std::span<const Vec2> states() const { return states_; }

    /// Grid position of t; values within kSnap of a node are snapped onto it.
    struct Locator {
        std::ptrdiff_t cell;  ///< node index (on node) or left node of the cell
        double theta;         ///< 0 on a node, in (0, 1) inside a cell
    };

    Locator locate(double t) const {
        const double u = t / dt_;
        const double k = std::round(u);
        if (std::abs(u - k) <= kSnap + 1e-12 * std::abs(u)) {
            return {static_cast<std::ptrdiff_t>(k), 0.0};
        }
        const double f = std::floor(u);
        return {static_cast<std::ptrdiff_t>(f), u - f};
    }

    /// Zero before t = 0, exact on nodes, Hermite cubic in between.
    Vec2 eval(double t) const { return eval_at(locate(t), t); }

    Vec2 eval_at(Locator loc, double t) const {
        if (loc.cell < 0) return {};
        const auto k = static_cast<std::size_t>(loc.cell);
        if (k >= size() || (loc.theta > 0.0 && k + 1 >= size())) {
            throw QueryAheadError("history queried at t = " + std::to_string(t) +
                                  " beyond t_current = " + std::to_string(t_current()));
        }
        if (loc.theta == 0.0) return states_[k];
        auto it = std::lower_bound(interior_.begin(), interior_.end(), k,
                                   [](const Interior& p, std::size_t cell) { return p.cell < cell; });
        if (it == interior_.end() || it->cell != k) {
            return hermite(loc.theta, dt_, states_[k], right_[k], states_[k + 1], left_[k + 1]);
        }
        // Piecewise between the interior points of this cell.
        double a = time(k);
        const Vec2* xa = &states_[k];
        const Vec2* da = &right_[k];
        for (; it != interior_.end() && it->cell == k; ++it) {
            if (t <= it->t) return hermite((t - a) / (it->t - a), it->t - a, *xa, *da, it->state, it->left);
            a = it->t;
            xa = &it->state;
            da = &it->right;
        }
        const double b = time(k + 1);
        return hermite((t - a) / (b - a), b - a, *xa, *da, states_[k + 1], left_[k + 1]);
    }

    static constexpr double kSnap = 1e-9;  // in units of dt

private:
    struct Interior {
        std::size_t cell;
        double t;
        Vec2 state, left, right;
    };

    static Vec2 hermite(double s, double h, const Vec2& x0, const Vec2& d0, const Vec2& x1, const Vec2& d1) {
        const double s2 = s * s;
        const double s3 = s2 * s;
        const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        const double h10 = s3 - 2.0 * s2 + s;
        const double h01 = -2.0 * s3 + 3.0 * s2;
        const double h11 = s3 - s2;
        return h00 * x0 + (h10 * h) * d0 + h01 * x1 + (h11 * h) * d1;
    }

    double dt_;
    std::vector<Vec2> states_, left_, right_;
    std::vector<Interior> interior_;
};

struct Trajectory {
    HistoryBuffer history;
    std::string description;
    std::string basis = "bare";

    double dt() const { return history.dt(); }
    std::size_t size() const { return history.size(); }
    double time(std::size_t i) const { return history.time(i); }
    const Vec2& state(std::size_t i) const { return history.state(i); }
    double t_end() const { return history.t_current(); }
    Vec2 at(double t) const { return history.eval(t); }

    std::vector<double> times() const {
        std::vector<double> out(size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = time(i);
        return out;
    }
};

namespace detail {

enum class Side { left, right };

// Right-hand side at t. On the left side a delayed term whose argument sits
// exactly on t - tau = 0 is still inactive; on the right side it is active.
inline Vec2 rhs(const DelaySystem& sys, const HistoryBuffer& hist, double t, const Vec2& x, Side side) {
    Vec2 out = sys.instantaneous() * x;
    for (const auto& term : sys.delayed()) {
        const double arg = t - term.tau;
        const auto loc = hist.locate(arg);
        if (loc.cell < 0) continue;
        if (loc.cell == 0 && loc.theta == 0.0 && side == Side::left) continue;
        out += term.matrix * hist.eval_at(loc, arg);
    }
    return out;
}

}  // namespace detail

/// Integrates on the grid t_i = i dt up to the first node at or beyond t_max.
inline Trajectory integrate(const DelaySystem& system, const Vec2& x0, double t_max, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("step size must be positive");
    if (!(t_max > 0.0) || !std::isfinite(t_max)) throw DomainError("t_max must be positive");
    if (dt > system.min_delay() * (1.0 + 1e-12)) {
        throw DomainError("step size exceeds the smallest delay");
    }
    if (!x0.finite()) throw DivergedError("non-finite initial state", 0.0);

    const auto steps = static_cast<std::size_t>(std::ceil(t_max / dt - 1e-9));
    Trajectory traj{HistoryBuffer(dt), system.description(), "bare"};
    auto& hist = traj.history;
    hist.reserve(steps + 1);

    using detail::Side;
    hist.push(x0, detail::rhs(system, hist, 0.0, x0, Side::left),
              detail::rhs(system, hist, 0.0, x0, Side::right));

    // Breakpoints inside cells: the delays and their sums up to third order.
    std::vector<double> breaks;
    {
        std::vector<double> sums{0.0};
        for (int order = 1; order <= 3; ++order) {
            std::vector<double> grown;
            for (double base : sums) {
                for (const auto& term : system.delayed()) {
                    const double b = base + term.tau;
                    if (b < t_max + dt) grown.push_back(b);
                }
            }
            for (double b : grown) {
                if (hist.locate(b).theta > 0.0) breaks.push_back(b);
            }
            sums = std::move(grown);
        }
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    auto next_break = breaks.begin();

    const auto rk4 = [&](double t, double h, const Vec2& x, const Vec2& k1) {
        const Vec2 k2 = detail::rhs(system, hist, t + 0.5 * h, x + (0.5 * h) * k1, Side::right);
        const Vec2 k3 = detail::rhs(system, hist, t + 0.5 * h, x + (0.5 * h) * k2, Side::right);
        const Vec2 k4 = detail::rhs(system, hist, t + h, x + h * k3, Side::left);
        return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    };

    for (std::size_t i = 0; i < steps; ++i) {
        const double t = hist.time(i);
        const double t_next = hist.time(i + 1);
        Vec2 next;
        if (next_break != breaks.end() && *next_break < t_next) {
            // The delayed input jumps inside this cell: step to each jump, then on.
            double s = t;
            Vec2 x = hist.state(i);
            Vec2 k1 = hist.deriv_right(i);
            for (; next_break != breaks.end() && *next_break < t_next; ++next_break) {
                x = rk4(s, *next_break - s, x, k1);
                s = *next_break;
                k1 = detail::rhs(system, hist, s, x, Side::right);
                hist.push_interior(s, x, detail::rhs(system, hist, s, x, Side::left), k1);
            }
            next = rk4(s, t_next - s, x, k1);
        } else {
            next = rk4(t, dt, hist.state(i), hist.deriv_right(i));
        }
        if (!next.finite()) throw DivergedError("integration diverged", t_next);
        // dt <= min delay, so the derivatives at t_next only read nodes <= i.
        const Vec2 dl = detail::rhs(system, hist, t_next, next, Side::left);
        const Vec2 dr = detail::rhs(system, hist, t_next, next, Side::right);
        hist.push(next, dl, dr);
    }
    return traj;
}

/// Step size with |rate| * dt <= h that puts the smallest delay on the grid.
inline double suggest_step(const DelaySystem& system, double t_max, double h = 0.005) {
    const double rate = std::max(system.rate_scale(), 1e-300);
    double dt = h / rate;
    const double tau = system.min_delay();
    if (std::isfinite(tau)) {
        dt = tau / std::ceil(tau / dt);
    } else if (t_max > 0.0 && std::isfinite(t_max)) {
        dt = t_max / std::ceil(t_max / dt);
    }
    return dt;
}

struct RefinedTrajectory {
    Trajectory trajectory;
    double estimate = 0.0;  ///< max-norm change between the last two refinements
    int refinements = 0;    ///< number of halvings performed
};

/// Halves dt until successive runs agree to tol in max norm on the coarse nodes.
inline RefinedTrajectory refine_until(const DelaySystem& system, const Vec2& x0, double t_max, double tol,
                                      double dt0 = 0.0, int max_refinements = 16,
                                      std::size_t max_nodes = 50'000'000) {
    if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
    double dt = dt0 > 0.0 ? dt0 : suggest_step(system, t_max);
    Trajectory coarse = integrate(system, x0, t_max, dt);
    if (std::isinf(tol)) return {std::move(coarse), std::numeric_limits<double>::infinity(), 0};

    for (int r = 1; r <= max_refinements; ++r) {
        dt *= 0.5;
        if (dt < t_max * 1e-13 || static_cast<double>(t_max / dt) > static_cast<double>(max_nodes)) {
            break;
        }
        Trajectory fine = integrate(system, x0, t_max, dt);
        double diff = 0.0;
        for (std::size_t i = 0; i < coarse.size() && 2 * i < fine.size(); ++i) {
            diff = std::max(diff, max_abs(coarse.state(i) - fine.state(2 * i)));
        }
        if (diff < tol) return {std::move(fine), diff, r};
        coarse = std::move(fine);
    }
    throw ConvergenceError("step refinement did not reach tolerance " + std::to_string(tol));
}

}  // namespace wgqed
