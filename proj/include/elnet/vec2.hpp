#ifndef ELNET_VEC2_HPP
#define ELNET_VEC2_HPP

#include <cmath>

namespace elnet {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    // z-component of the cross product; positive when o is counterclockwise of *this.
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    double squared_norm() const { return x * x + y * y; }
    double arg() const { return std::atan2(y, x); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

/// Unit vector at the given angle.
inline Vec2 unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

/// Counterclockwise rotation by pi/2 (the normal convention for oriented curvature).
inline Vec2 perp(const Vec2& v) { return {-v.y, v.x}; }

inline Vec2 rotate(const Vec2& v, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

}  // namespace elnet

#endif
