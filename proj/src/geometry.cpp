#include "escher/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace escher {

namespace {

double max_abs_coord(std::initializer_list<Point2> pts) {
    double m = 0.0;
    for (const auto& p : pts) m = std::max({m, std::abs(p.x()), std::abs(p.y())});
    return m;
}

// Area-scaled tolerance for orientation sign tests.
double orient_tol(std::initializer_list<Point2> pts) {
    const double m = max_abs_coord(pts);
    return geom_eps * std::max(1.0, m * m);
}

}  // namespace

CoordVec stack_coords(const PointList& pts) {
    if (pts.empty()) throw InvalidPolygonError("stack_coords: empty point list");
    const int n = static_cast<int>(pts.size());
    CoordVec u(2 * n);
    for (int t = 0; t < n; ++t) {
        u(t) = pts[t].x();
        u(n + t) = pts[t].y();
    }
    return u;
}

PointList unstack_coords(const CoordVec& u) {
    if (u.size() == 0 || u.size() % 2 != 0)
        throw InvalidPolygonError("unstack_coords: length must be even and nonzero");
    const int n = static_cast<int>(u.size()) / 2;
    PointList pts(n);
    for (int t = 0; t < n; ++t) pts[t] = Point2(u(t), u(n + t));
    return pts;
}

double signed_area(const PointList& pts) {
    const int n = static_cast<int>(pts.size());
    double twice = 0.0;
    for (int t = 0; t < n; ++t) {
        const Point2& p = pts[t];
        const Point2& q = pts[(t + 1) % n];
        twice += p.x() * q.y() - q.x() * p.y();
    }
    return 0.5 * twice;
}

PointList ensure_clockwise(PointList pts) {
    if (pts.size() < 3) throw InvalidPolygonError("ensure_clockwise: need at least 3 points");
    double m = 0.0;
    for (const auto& p : pts) m = std::max({m, std::abs(p.x()), std::abs(p.y())});
    const double area = signed_area(pts);
    if (std::abs(area) <= 1e-12 * std::max(1.0, m * m))
        throw InvalidPolygonError("ensure_clockwise: polygon area is numerically zero");
    if (area > 0.0) std::reverse(pts.begin() + 1, pts.end());
    return pts;
}

double orient2d(const Point2& o, const Point2& p, const Point2& q) {
    return (p.x() - o.x()) * (q.y() - o.y()) - (p.y() - o.y()) * (q.x() - o.x());
}

double point_segment_distance(const Point2& p, const Point2& a, const Point2& b) {
    const Point2 ab = b - a;
    const double len2 = ab.squaredNorm();
    if (len2 == 0.0) return (p - a).norm();
    double t = (p - a).dot(ab) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return (p - (a + t * ab)).norm();
}

bool point_on_segment(const Point2& p, const Point2& a, const Point2& b) {
    return point_segment_distance(p, a, b) <= geom_eps;
}

bool segments_properly_cross(const Segment& s1, const Segment& s2) {
    const Point2 &a = s1.a, &b = s1.b, &c = s2.a, &d = s2.b;
    const double tol = orient_tol({a, b, c, d});
    const double d1 = orient2d(c, d, a);
    const double d2 = orient2d(c, d, b);
    const double d3 = orient2d(a, b, c);
    const double d4 = orient2d(a, b, d);
    const bool straddle1 = (d1 > tol && d2 < -tol) || (d1 < -tol && d2 > tol);
    const bool straddle2 = (d3 > tol && d4 < -tol) || (d3 < -tol && d4 > tol);
    return straddle1 && straddle2;
}

PointLocation point_in_polygon(const Point2& p, const PointList& poly) {
    const int n = static_cast<int>(poly.size());
    for (int t = 0; t < n; ++t) {
        if (point_segment_distance(p, poly[t], poly[(t + 1) % n]) <= geom_eps)
            return PointLocation::boundary;
    }
    // Even-odd ray cast toward +x; the strict/non-strict y comparison pair
    // makes vertex-level degeneracies consistent.
    bool inside = false;
    for (int t = 0; t < n; ++t) {
        const Point2& p1 = poly[t];
        const Point2& p2 = poly[(t + 1) % n];
        if ((p1.y() > p.y()) != (p2.y() > p.y())) {
            const double x_cross = p1.x() + (p.y() - p1.y()) * (p2.x() - p1.x()) / (p2.y() - p1.y());
            if (p.x() < x_cross) inside = !inside;
        }
    }
    return inside ? PointLocation::inside : PointLocation::outside;
}

bool is_simple_polygon(const PointList& pts) {
    const int n = static_cast<int>(pts.size());
    if (n < 3) throw InvalidPolygonError("is_simple_polygon: need at least 3 points");
    for (int t = 0; t < n; ++t) {
        if ((pts[t] - pts[(t + 1) % n]).norm() <= geom_eps) return false;  // zero-length edge
    }
    for (int i = 0; i < n; ++i) {
        const Point2& a = pts[i];
        const Point2& b = pts[(i + 1) % n];
        for (int j = i + 1; j < n; ++j) {
            const Point2& c = pts[j];
            const Point2& d = pts[(j + 1) % n];
            const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            if (adjacent) {
                // Shared endpoint allowed; any further contact is a fold-back spike.
                const Point2& shared = (j == i + 1) ? b : a;
                const Point2& far1 = (j == i + 1) ? a : b;   // endpoint of edge i away from the shared point
                const Point2& far2 = (j == i + 1) ? d : c;   // endpoint of edge j away from the shared point
                if (point_on_segment(far2, far1, shared) || point_on_segment(far1, far2, shared))
                    return false;
            } else {
                if (segments_properly_cross({a, b}, {c, d})) return false;
                if (point_on_segment(c, a, b) || point_on_segment(d, a, b) ||
                    point_on_segment(a, c, d) || point_on_segment(b, c, d))
                    return false;
            }
        }
    }
    return true;
}

}  // namespace escher
