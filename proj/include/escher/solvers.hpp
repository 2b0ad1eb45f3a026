#pragma once

#include "escher/distance.hpp"
#include "escher/templates.hpp"

namespace escher {

struct SolveResult {
    Eigen::VectorXd xi_star;
    CoordVec u_star;  // B * xi_star
    double eval = 0.0;
};

// Companion vectors of the rotation-optimal (Procrustes) objective.
struct ProcrustesData {
    CoordVec w_c;       // quarter-turned goal (y-block, -x-block)
    Eigen::VectorXd a;  // B^T w (or its whitened form)
    Eigen::VectorXd b;  // B^T w_c (or its whitened form)
};

// (x, y) blocks -> (y, -x) blocks: the 90-degree rotation of every point.
CoordVec quarter_turn(const CoordVec& w);

// Projection onto span(B) for orthonormal B: xi = B^T w, eval = w^T w - xi^T xi.
SolveResult solve_euclidean(const BasisMatrix& B, const CoordVec& w_j);

// Minimizes (B xi - w)^T G (B xi - w) via Cholesky on B^T G B.
// Throws NumericalError if the factorization fails.
SolveResult solve_quadratic(const BasisMatrix& B, const GramMatrix& G, const CoordVec& w_j);

// Modified Gram-Schmidt under the inner product x^T G y; vectors whose G-norm
// drops below 1e-10 (null directions) are removed.
std::vector<CoordVec> gram_schmidt_g(const std::vector<CoordVec>& vectors, const GramMatrix& G);

// Rotation-optimal projection for orthonormal B: eval = w^T w - lambda_max of
// the rank-2 matrix B^T (w w^T + w_c w_c^T) B, solved via its 2x2 Gram matrix.
// xi_star is scaled so that ||xi_star||^2 = lambda_max.
// Throws DegenerateGoalError when lambda_max is numerically zero.
SolveResult solve_procrustes(const BasisMatrix& B, const CoordVec& w_j);

// Rotation-optimal minimizer under a general Gram matrix: the generalized
// eigenproblem B^T G V G B xi = lambda B^T G B xi reduced by Cholesky
// whitening; again rank 2. xi_star satisfies xi^T B^T G B xi = lambda_max.
SolveResult solve_procrustes_general(const BasisMatrix& B, const GramMatrix& G, const CoordVec& w_j);

// Rigid transform p -> R(theta) p + translation minimizing the summed squared
// distance to w's points (used only for rendering overlays).
struct RigidTransform {
    double theta = 0.0;
    Point2 translation = Point2::Zero();
};
RigidTransform optimal_rotation_align(const CoordVec& u, const CoordVec& w);

}  // namespace escher
