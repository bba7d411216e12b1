#pragma once

// Fixed 2x2 complex algebra. The amplitude systems here are always two
// dimensional, so a general matrix library buys nothing.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

namespace wgqed {

using cplx = std::complex<double>;

inline constexpr cplx kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

struct Vec2 {
    std::array<cplx, 2> v{};

    constexpr Vec2() = default;
    constexpr Vec2(cplx first, cplx second) : v{first, second} {}

    constexpr cplx& operator[](std::size_t i) { return v[i]; }
    constexpr const cplx& operator[](std::size_t i) const { return v[i]; }

    double norm_sq() const { return std::norm(v[0]) + std::norm(v[1]); }
    bool finite() const {
        return std::isfinite(v[0].real()) && std::isfinite(v[0].imag()) &&
               std::isfinite(v[1].real()) && std::isfinite(v[1].imag());
    }

    friend Vec2 operator+(const Vec2& a, const Vec2& b) { return {a[0] + b[0], a[1] + b[1]}; }
    friend Vec2 operator-(const Vec2& a, const Vec2& b) { return {a[0] - b[0], a[1] - b[1]}; }
    friend Vec2 operator*(cplx s, const Vec2& a) { return {s * a[0], s * a[1]}; }
    friend Vec2 operator*(double s, const Vec2& a) { return {s * a[0], s * a[1]}; }
    Vec2& operator+=(const Vec2& o) {
        v[0] += o[0];
        v[1] += o[1];
        return *this;
    }
    friend bool operator==(const Vec2&, const Vec2&) = default;
};

/// Largest component modulus.
inline double max_abs(const Vec2& a) { return std::max(std::abs(a[0]), std::abs(a[1])); }

/// Row-major 2x2 complex matrix.
struct Mat2 {
    std::array<cplx, 4> m{};

    constexpr Mat2() = default;
    constexpr Mat2(cplx a00, cplx a01, cplx a10, cplx a11) : m{a00, a01, a10, a11} {}

    static constexpr Mat2 diag(cplx d0, cplx d1) { return {d0, 0.0, 0.0, d1}; }
    static constexpr Mat2 identity() { return diag(1.0, 1.0); }

    constexpr cplx& operator()(std::size_t r, std::size_t c) { return m[2 * r + c]; }
    constexpr const cplx& operator()(std::size_t r, std::size_t c) const { return m[2 * r + c]; }

    bool is_zero() const { return m[0] == 0.0 && m[1] == 0.0 && m[2] == 0.0 && m[3] == 0.0; }

    /// Induced infinity norm.
    double norm_inf() const {
        return std::max(std::abs(m[0]) + std::abs(m[1]), std::abs(m[2]) + std::abs(m[3]));
    }

    friend Vec2 operator*(const Mat2& a, const Vec2& x) {
        return {a.m[0] * x[0] + a.m[1] * x[1], a.m[2] * x[0] + a.m[3] * x[1]};
    }
    friend Mat2 operator*(const Mat2& a, const Mat2& b) {
        return {a.m[0] * b.m[0] + a.m[1] * b.m[2], a.m[0] * b.m[1] + a.m[1] * b.m[3],
                a.m[2] * b.m[0] + a.m[3] * b.m[2], a.m[2] * b.m[1] + a.m[3] * b.m[3]};
    }
    friend Mat2 operator+(const Mat2& a, const Mat2& b) {
        return {a.m[0] + b.m[0], a.m[1] + b.m[1], a.m[2] + b.m[2], a.m[3] + b.m[3]};
    }
    friend Mat2 operator*(cplx s, const Mat2& a) {
        return {s * a.m[0], s * a.m[1], s * a.m[2], s * a.m[3]};
    }
    friend bool operator==(const Mat2&, const Mat2&) = default;
};

/// Neumaier-compensated complex accumulator.
class CompensatedSum {
public:
    void add(cplx x) {
        add_part(sum_re_, comp_re_, x.real());
        add_part(sum_im_, comp_im_, x.imag());
    }
    cplx value() const { return {sum_re_ + comp_re_, sum_im_ + comp_im_}; }

private:
    static void add_part(double& sum, double& comp, double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }

    double sum_re_ = 0.0, comp_re_ = 0.0, sum_im_ = 0.0, comp_im_ = 0.0;
};

}  // namespace wgqed
