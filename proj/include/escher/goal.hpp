#pragma once

#include <string>

#include "escher/geometry.hpp"

namespace escher {

// Goal polygon W, stored clockwise, centered at the origin, and scaled to unit
// root-mean-square radius. Point weight t belongs to point t; edge weight t
// belongs to edge (t, t+1), cyclic. All weights are >= 1.
struct GoalPolygon {
    PointList points;
    CoordVec w;                      // stack_coords(points)
    Eigen::VectorXd point_weights;   // length n, default all 1
    Eigen::VectorXd edge_weights;    // length n, default all 1
    bool reversed_on_load = false;   // input file listed the points counter-clockwise

    int n() const { return static_cast<int>(points.size()); }
};

// Validates, orients clockwise, and normalizes (center + unit RMS radius).
GoalPolygon make_goal(PointList pts);

// Goal file: '#' comment lines; first data line n; then n lines "x y".
GoalPolygon load_goal(const std::string& path);

// Weights file: lines "P idx [weight]" or "E idx [weight]", idx 1-based in the
// file's drawing order; omitted weight defaults to default_marked. Indices are
// remapped automatically when the loader reversed the point order.
void apply_weights_file(GoalPolygon& g, const std::string& path, double default_marked = 4.0);

// w_j: both coordinate blocks rotated so position 1 holds point j.
CoordVec reindex(const GoalPolygon& g, int j);

// The same cyclic rotation applied to a weight vector.
Eigen::VectorXd rotate_weights(const Eigen::VectorXd& weights, int j);

// Arithmetic mean of the n edge lengths (symbol d_ave).
double average_edge_length(const GoalPolygon& g);

// Deterministic random star-shaped test polygon: n points at jittered angles
// with radii in [0.6, 1.4], then normalized by make_goal. Always simple.
GoalPolygon synthetic_goal(int n, unsigned seed);

}  // namespace escher
