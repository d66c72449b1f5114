// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <span>

namespace daywatch {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
constexpr double squared_distance(Vec2 a, Vec2 b) {
    const double dx = a.x - b.x, dy = a.y - b.y;
    return dx * dx + dy * dy;
}
inline double distance(Vec2 a, Vec2 b) { return std::sqrt(squared_distance(a, b)); }

/// Polyline helpers used by the synthetic generator and by tests that
/// compare recovered structure against generator centerlines.
double polyline_length(std::span<const Vec2> line);

/// Point at arc length `s` (clamped to [0, length]) and the unit tangent there.
Vec2 polyline_point(std::span<const Vec2> line, double s, Vec2* tangent = nullptr);

/// Euclidean distance from `p` to the nearest point of the polyline.
double distance_to_polyline(std::span<const Vec2> line, Vec2 p);

}  // namespace daywatch
