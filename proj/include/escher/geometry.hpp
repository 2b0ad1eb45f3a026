#pragma once

#include <Eigen/Dense>
#include <vector>

#include "escher/errors.hpp"

namespace escher {

using Point2 = Eigen::Vector2d;
using CoordVec = Eigen::VectorXd;  // stacked layout (x_1..x_n, y_1..y_n)
using PointList = std::vector<Point2>;

// Boundary / collinearity tolerance, in goal-polygon units.
inline constexpr double geom_eps = 1e-9;

struct Segment {
    Point2 a;
    Point2 b;
};

// Stacks n points into a 2n vector, x block first. Throws InvalidPolygonError on empty input.
CoordVec stack_coords(const PointList& pts);

// Inverse of stack_coords. Throws InvalidPolygonError on odd-length input.
PointList unstack_coords(const CoordVec& u);

// Shoelace area; negative for clockwise orientation under the y-up convention.
double signed_area(const PointList& pts);

// Reverses the point order (keeping the first point first) if the polygon is
// counter-clockwise. Throws InvalidPolygonError for near-zero-area polygons.
PointList ensure_clockwise(PointList pts);

// True iff the open segments cross at exactly one interior point. Shared
// endpoints and collinear overlaps do not count.
bool segments_properly_cross(const Segment& s1, const Segment& s2);

enum class PointLocation { inside, outside, boundary };

// Even-odd classification; points within geom_eps of an edge report boundary.
PointLocation point_in_polygon(const Point2& p, const PointList& poly);

// True iff no two non-adjacent edges intersect and no two adjacent edges
// overlap beyond their shared endpoint. Throws InvalidPolygonError for < 3 points.
bool is_simple_polygon(const PointList& pts);

// Signed twice-area of triangle (o, p, q); sign gives the turn direction.
double orient2d(const Point2& o, const Point2& p, const Point2& q);

// True iff p lies on segment [a, b] within geom_eps.
bool point_on_segment(const Point2& p, const Point2& a, const Point2& b);

// Euclidean distance from p to segment [a, b].
double point_segment_distance(const Point2& p, const Point2& a, const Point2& b);

}  // namespace escher
