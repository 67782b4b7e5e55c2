#pragma once

#include <cmath>
#include <numbers>

namespace elldet {

// Image frame: x to the right, y down, pixel centers at integer coordinates.
// Angles are atan2(dy, dx) in this frame, in degrees unless a name says otherwise.

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Point2 operator+(Point2 o) const { return {x + o.x, y + o.y}; }
    constexpr Point2 operator-(Point2 o) const { return {x - o.x, y - o.y}; }
    constexpr Point2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Point2 operator/(double s) const { return {x / s, y / s}; }
    constexpr Point2& operator+=(Point2 o) { x += o.x; y += o.y; return *this; }
    constexpr bool operator==(const Point2&) const = default;
};

struct PixelCoord {
    int x = 0;
    int y = 0;
    constexpr bool operator==(const PixelCoord&) const = default;
};

constexpr double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }

inline Point2 normalized(Point2 a) {
    const double n = norm(a);
    return n > 0.0 ? a / n : Point2{};
}

/// (x, y) -> (-y, x): +90 degrees in the image frame.
constexpr Point2 rotate_plus90(Point2 a) { return {-a.y, a.x}; }

constexpr double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Wraps to [0, period).
inline double wrap_angle(double deg, double period = 360.0) {
    double r = std::fmod(deg, period);
    if (r < 0.0) r += period;
    if (r >= period) r -= period;
    return r;
}

/// Signed circular difference a - b in (-period/2, period/2].
inline double signed_angle_diff(double a, double b, double period = 360.0) {
    double d = std::fmod(a - b, period);
    const double half = period / 2.0;
    if (d > half) d -= period;
    if (d <= -half) d += period;
    return d;
}

inline double abs_angle_diff(double a, double b, double period = 360.0) {
    return std::abs(signed_angle_diff(a, b, period));
}

inline Point2 unit_from_angle(double deg) {
    const double r = deg2rad(deg);
    return {std::cos(r), std::sin(r)};
}

inline double angle_of(Point2 v) { return wrap_angle(rad2deg(std::atan2(v.y, v.x))); }

}  // namespace elldet
