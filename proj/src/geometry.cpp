// SPDX-License-Identifier: Apache-2.0
#include "daywatch/geometry.hpp"

#include <algorithm>
#include <limits>

namespace daywatch {

double polyline_length(std::span<const Vec2> line) {
    double total = 0.0;
    for (std::size_t i = 1; i < line.size(); ++i) total += distance(line[i - 1], line[i]);
    return total;
}

Vec2 polyline_point(std::span<const Vec2> line, double s, Vec2* tangent) {
    if (line.empty()) return {};
    if (line.size() == 1) {
        if (tangent) *tangent = {1.0, 0.0};
        return line.front();
    }
    s = std::max(0.0, s);
    for (std::size_t i = 1; i < line.size(); ++i) {
        const Vec2 d = line[i] - line[i - 1];
        const double len = norm(d);
        if (len == 0.0) continue;
        if (s <= len || i + 1 == line.size()) {
            if (tangent) *tangent = (1.0 / len) * d;
            return line[i - 1] + (std::min(s, len) / len) * d;
        }
        s -= len;
    }
    if (tangent) *tangent = {1.0, 0.0};
    return line.back();
}

double distance_to_polyline(std::span<const Vec2> line, Vec2 p) {
    if (line.empty()) return std::numeric_limits<double>::infinity();
    double best = squared_distance(line.front(), p);
    for (std::size_t i = 1; i < line.size(); ++i) {
        const Vec2 a = line[i - 1], d = line[i] - a;
        const double len2 = dot(d, d);
        const double u = len2 > 0.0 ? std::clamp(dot(p - a, d) / len2, 0.0, 1.0) : 0.0;
        best = std::min(best, squared_distance(a + u * d, p));
    }
    return std::sqrt(best);
}

}  // namespace daywatch
