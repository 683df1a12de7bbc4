#pragma once

#include <cmath>
#include <numbers>

#include "errors.hpp"

namespace cellflow {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHalfPi = std::numbers::pi / 2.0;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2& operator+=(Vec2 o) {
        x += o.x;
        y += o.y;
        return *this;
    }
    double norm() const { return std::hypot(x, y); }
};

inline constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }
inline constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

// Row-major 2x2 matrix: [[xx, xy], [yx, yy]].
struct Mat2 {
    double xx = 0.0, xy = 0.0, yx = 0.0, yy = 0.0;

    constexpr double trace() const { return xx + yy; }
    constexpr double det() const { return xx * yy - xy * yx; }
    constexpr Vec2 operator*(Vec2 v) const { return {xx * v.x + xy * v.y, yx * v.x + yy * v.y}; }
};

struct Rect {
    double x_min = 0.0, x_max = 0.0, y_min = 0.0, y_max = 0.0;

    constexpr bool contains(Vec2 p) const {
        return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
    }
};

/// Constant forcing (b, a) and inertia parameter epsilon.
///
/// b is the horizontal forcing component and must be positive so that the
/// vertical lines x = pi k - pi/2 stay transversal to the flow. epsilon = 0
/// selects the Hamiltonian (zero-inertia) limit.
struct ForcingParams {
    double a = 0.0;
    double b = 0.0;
    double epsilon = 0.0;

    /// Forcing slope a/b.
    double alpha() const { return a / b; }

    /// Checks b > 0, epsilon >= 0 and finiteness; throws DomainError.
    void validate() const;

    /// validate() plus a > 0, for operations that assume positive forcing.
    void validate_positive() const;
};

}  // namespace cellflow
