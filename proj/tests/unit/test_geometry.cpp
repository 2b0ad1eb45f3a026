#include <doctest.h>

#include <cmath>

#include "escher/geometry.hpp"

using namespace escher;

namespace {

PointList square() {
    return {Point2(0, 0), Point2(1, 0), Point2(1, 1), Point2(0, 1)};  // counter-clockwise
}

}  // namespace

TEST_CASE("stack/unstack layout") {
    PointList pts = {Point2(1, 2)};
    CoordVec u = stack_coords(pts);
    CHECK(u.size() == 2);
    CHECK(u(0) == 1.0);
    CHECK(u(1) == 2.0);
    pts = {Point2(1, 2), Point2(3, 4)};
    u = stack_coords(pts);
    REQUIRE(u.size() == 4);
    CHECK(u(0) == 1.0);
    CHECK(u(1) == 3.0);
    CHECK(u(2) == 2.0);
    CHECK(u(3) == 4.0);
    const PointList back = unstack_coords(u);
    REQUIRE(back.size() == 2);
    CHECK(back[0] == pts[0]);
    CHECK(back[1] == pts[1]);
    CHECK_THROWS_AS(unstack_coords(CoordVec::Zero(3)), InvalidPolygonError);
}

TEST_CASE("signed area and clockwise orientation") {
    const PointList ccw = square();
    CHECK(signed_area(ccw) == doctest::Approx(1.0));
    const PointList cw = ensure_clockwise(ccw);
    CHECK(signed_area(cw) == doctest::Approx(-1.0));
    CHECK(cw[0] == ccw[0]);  // reversal keeps the first point in place
    CHECK(cw[1] == ccw[3]);
    const PointList again = ensure_clockwise(cw);
    for (size_t i = 0; i < again.size(); ++i) CHECK(again[i] == cw[i]);
    const PointList flat = {Point2(0, 0), Point2(1, 0), Point2(2, 0)};
    CHECK_THROWS_AS(ensure_clockwise(flat), InvalidPolygonError);
}

TEST_CASE("proper segment crossing") {
    const Segment a{Point2(0, 0), Point2(1, 1)};
    const Segment b{Point2(0, 1), Point2(1, 0)};
    CHECK(segments_properly_cross(a, b));
    const Segment shared{Point2(1, 1), Point2(2, 0)};
    CHECK_FALSE(segments_properly_cross(a, shared));  // endpoint contact only
    const Segment touch{Point2(0.5, 0.5), Point2(2, 0.5)};
    CHECK_FALSE(segments_properly_cross(a, touch));  // T-contact at an endpoint
    const Segment collinear{Point2(0.25, 0.25), Point2(2, 2)};
    CHECK_FALSE(segments_properly_cross(a, collinear));
    const Segment far{Point2(3, 3), Point2(4, 3)};
    CHECK_FALSE(segments_properly_cross(a, far));
}

TEST_CASE("point in polygon") {
    const PointList sq = square();
    CHECK(point_in_polygon(Point2(0.5, 0.5), sq) == PointLocation::inside);
    CHECK(point_in_polygon(Point2(1.5, 0.5), sq) == PointLocation::outside);
    CHECK(point_in_polygon(Point2(0, 0), sq) == PointLocation::boundary);
    CHECK(point_in_polygon(Point2(0.5, 0), sq) == PointLocation::boundary);
    CHECK(point_in_polygon(Point2(0.5, 1.0 + 1e-12), sq) == PointLocation::boundary);
    CHECK(point_in_polygon(Point2(-0.25, 0.5), sq) == PointLocation::outside);
    // concave: notch cut into the square's top side
    const PointList notch = {Point2(0, 0), Point2(1, 0), Point2(1, 1),
                             Point2(0.5, 0.4), Point2(0, 1)};
    CHECK(point_in_polygon(Point2(0.5, 0.8), notch) == PointLocation::outside);
    CHECK(point_in_polygon(Point2(0.5, 0.2), notch) == PointLocation::inside);
}

TEST_CASE("simple polygon detection") {
    CHECK(is_simple_polygon(square()));
    const PointList bowtie = {Point2(0, 0), Point2(1, 1), Point2(1, 0), Point2(0, 1)};
    CHECK_FALSE(is_simple_polygon(bowtie));
    const PointList dup = {Point2(0, 0), Point2(1, 0), Point2(1, 0), Point2(0, 1)};
    CHECK_FALSE(is_simple_polygon(dup));
    // spike: consecutive edges double back over each other
    const PointList spike = {Point2(0, 0), Point2(1, 0), Point2(2, 0), Point2(1, 0), Point2(1, 1)};
    CHECK_FALSE(is_simple_polygon(spike));
    // vertex of one edge sitting on a non-adjacent edge
    const PointList touch = {Point2(0, 0), Point2(2, 0), Point2(2, 2), Point2(1, 0), Point2(0, 2)};
    CHECK_FALSE(is_simple_polygon(touch));
    const PointList tri = {Point2(0, 0), Point2(1, 0), Point2(0, 1)};
    CHECK(is_simple_polygon(tri));
}

TEST_CASE("point-segment distance") {
    const Point2 a(0, 0), b(2, 0);
    CHECK(point_segment_distance(Point2(1, 1), a, b) == doctest::Approx(1.0));
    CHECK(point_segment_distance(Point2(-1, 0), a, b) == doctest::Approx(1.0));
    CHECK(point_segment_distance(Point2(3, 4), a, b) == doctest::Approx(std::hypot(1.0, 4.0)));
    CHECK(point_segment_distance(Point2(1, 0), a, b) == doctest::Approx(0.0));
    CHECK(point_on_segment(Point2(1, 0), a, b));
    CHECK_FALSE(point_on_segment(Point2(1, 0.1), a, b));
    CHECK(orient2d(a, b, Point2(0, 1)) > 0.0);
    CHECK(orient2d(a, b, Point2(0, -1)) < 0.0);
}
