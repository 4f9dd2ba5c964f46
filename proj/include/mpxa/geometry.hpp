#pragma once

#include <Eigen/Dense>
#include <vector>

namespace mpxa {

using Vec2 = Eigen::Vector2d;
using Tensor2 = Eigen::Matrix2d;

/// z-component of the cross product of two plane vectors.
inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

/// Signed area of the triangle (a, b, c); positive for counter-clockwise order.
inline double tri_area(const Vec2& a, const Vec2& b, const Vec2& c) {
    return 0.5 * cross2(b - a, c - a);
}

/// Shoelace area of a polygon given as an ordered vertex loop.
inline double polygon_area(const std::vector<Vec2>& poly) {
    double a = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec2& p = poly[i];
        const Vec2& q = poly[(i + 1) % poly.size()];
        a += cross2(p, q);
    }
    return 0.5 * a;
}

/// Area centroid of a polygon (assumes nonzero area).
inline Vec2 polygon_centroid(const std::vector<Vec2>& poly) {
    double a = 0.0;
    Vec2 c = Vec2::Zero();
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec2& p = poly[i];
        const Vec2& q = poly[(i + 1) % poly.size()];
        const double w = cross2(p, q);
        a += w;
        c += w * (p + q);
    }
    return c / (3.0 * a);
}

} // namespace mpxa
