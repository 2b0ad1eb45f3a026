#pragma once

#include <Eigen/Sparse>
#include <vector>

#include "escher/goal.hpp"

namespace escher {

// Symmetric PSD quadratic form G = diag(K, K) over stacked coordinates,
// stored via its n x n block K.
struct GramMatrix {
    enum class Kind { identity, we, wad, gad };

    Eigen::SparseMatrix<double> K;
    Kind kind = Kind::identity;
    bool regularized = false;

    int n() const { return static_cast<int>(K.rows()); }
};

GramMatrix gram_identity(int n);

// Diagonal point-weight form, weights rotated by renumbering j.
GramMatrix gram_we(const GoalPolygon& g, int j);

// Cyclic weighted Laplacian over the polygon edges, weights rotated by j.
// regularize adds 1.0 at K(1,1), making the form positive definite without
// changing constrained optima (translations stay feasible).
GramMatrix gram_wad(const GoalPolygon& g, int j, bool regularize);

// gram_wad with unit edge weights (plain adjacent-difference form).
GramMatrix gram_ad(const GoalPolygon& g, int j, bool regularize);

// Selected segment set for the graph-difference form. Pairs are 1-based
// (s, t) with s < t; the n polygon edges are always members.
struct EdgeSet {
    std::vector<std::pair<int, int>> edges;
    bool includes_polygon_edges = true;
    double total_length = 0.0;  // over all members, polygon edges included
    double gamma = 0.0;
};

enum class GadVariant { gad1, gad2 };

// Candidate pairs below gamma * average edge length pass the variant's region
// filter (gad1: midpoint strictly inside and no polygon-edge crossing;
// gad2: midpoint inside or outside, not on the boundary), then a greedy
// ascending-length sweep keeps candidates that cross no accepted member.
// admit_crossing_for_gad2 lifts gad2's region filter entirely (alternative
// reading; the greedy sweep still rejects members crossing polygon edges).
EdgeSet build_ec(const GoalPolygon& g, double gamma, GadVariant variant,
                 bool admit_crossing_for_gad2 = false);

// Graph Laplacian of (points, ec), indices rotated by renumbering j.
GramMatrix gram_gad(const GoalPolygon& g, const EdgeSet& ec, int j, bool regularize);

// (u - w)^T G (u - w).
double distance_value(const GramMatrix& G, const CoordVec& u, const CoordVec& w);

}  // namespace escher
