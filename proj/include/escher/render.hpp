#pragma once

#include <string>
#include <vector>

#include "escher/search.hpp"

namespace escher {

// Plane isometry p -> R p + d.
struct Isometry {
    Eigen::Matrix2d R = Eigen::Matrix2d::Identity();
    Eigen::Vector2d d = Eigen::Vector2d::Zero();

    Point2 apply(const Point2& p) const { return R * p + d; }
};

// f then g is g(f(x)); compose(f, g) applies g first: (compose(f, g))(x) = f(g(x)).
Isometry compose(const Isometry& f, const Isometry& g);

struct TilingLayout {
    Candidate base;
    std::vector<int> h;                // tiling-vertex indices of the base tile
    std::vector<Isometry> placements;  // deterministic order; extent e-1 list is a prefix
    std::vector<int> coset;            // coset index per placement (fill colors)
    Eigen::Vector2d e1 = Eigen::Vector2d::Zero();  // translation lattice basis
    Eigen::Vector2d e2 = Eigen::Vector2d::Zero();
    int extent = 0;
};

// Builds the patch of placements covering cells within the given ring radius
// of the fundamental domain: the adjacency isometries of the candidate's
// template are closed under composition, the translation lattice and its
// cosets are extracted, and one placement per (cell, coset) is emitted.
// extent = 0 yields the single identity placement.
TilingLayout layout_tiling(const Candidate& cand, int extent);

// Worst pointwise deviation between paired edge polylines of adjacent
// placements (edges whose endpoints coincide after coarse rounding).
// Boundary edges with no partner are ignored. 0 for a single placement.
double max_edge_mismatch(const TilingLayout& layout);

// Shortest round-trip decimal formatting used by every emitter ("%.12g").
std::string fmt_g(double v);

std::string render_overlay_svg(const Candidate& cand, const GoalPolygon& goal);
std::string render_tiling_svg(const TilingLayout& layout);

// File-writing wrappers around the string emitters.
void render_overlay(const Candidate& cand, const GoalPolygon& goal, const std::string& path);
void render_tiling(const TilingLayout& layout, const std::string& path);

}  // namespace escher
