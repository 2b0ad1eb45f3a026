#include "escher/solvers.hpp"

#include <cmath>

#include "escher/errors.hpp"

namespace escher {

namespace {

// Largest eigenvalue and eigenvector of [[saa, sab], [sab, sbb]].
struct Rank2Top {
    double lambda;
    Eigen::Vector2d c;
};

Rank2Top top_of_2x2(double saa, double sbb, double sab) {
    const double disc = std::sqrt((saa - sbb) * (saa - sbb) + 4.0 * sab * sab);
    Rank2Top r;
    r.lambda = 0.5 * (saa + sbb + disc);
    if (disc <= 1e-12 * std::max(1.0, r.lambda)) {
        r.c = Eigen::Vector2d(1.0, 0.0);  // eigenvalue of multiplicity 2: align with the first vector
        return r;
    }
    const Eigen::Vector2d c1(sab, r.lambda - saa);
    const Eigen::Vector2d c2(r.lambda - sbb, sab);
    r.c = (c1.squaredNorm() >= c2.squaredNorm() ? c1 : c2).normalized();
    return r;
}

void dense_blocks(const BasisMatrix& B, Eigen::MatrixXd& Bx, Eigen::MatrixXd& By) {
    const int n = B.rows / 2;
    Bx.setZero(n, B.m());
    By.setZero(n, B.m());
    for (int c = 0; c < B.m(); ++c) {
        for (const auto& [i, v] : B.cols[static_cast<size_t>(c)]) {
            if (i < n)
                Bx(i, c) = v;
            else
                By(i - n, c) = v;
        }
    }
}

double quad_form(const GramMatrix& G, const CoordVec& w) {
    const int n = G.n();
    return w.head(n).dot(G.K * w.head(n)) + w.tail(n).dot(G.K * w.tail(n));
}

}  // namespace

CoordVec quarter_turn(const CoordVec& w) {
    const int n = static_cast<int>(w.size()) / 2;
    CoordVec out(2 * n);
    out.head(n) = w.tail(n);
    out.tail(n) = -w.head(n);
    return out;
}

SolveResult solve_euclidean(const BasisMatrix& B, const CoordVec& w_j) {
    if (!B.orthonormal) throw ConfigError("solve_euclidean requires an orthonormal basis");
    if (w_j.size() != B.rows) throw Error("solve_euclidean: dimension mismatch");
    SolveResult r;
    r.xi_star = B.apply_transpose(w_j);
    r.eval = w_j.squaredNorm() - r.xi_star.squaredNorm();
    r.u_star = B.apply(r.xi_star);
    return r;
}

SolveResult solve_quadratic(const BasisMatrix& B, const GramMatrix& G, const CoordVec& w_j) {
    const int n = G.n();
    if (w_j.size() != 2 * n || B.rows != 2 * n) throw Error("solve_quadratic: dimension mismatch");
    Eigen::MatrixXd Bx, By;
    dense_blocks(B, Bx, By);
    const Eigen::MatrixXd KBx = G.K * Bx;
    const Eigen::MatrixXd KBy = G.K * By;
    const Eigen::MatrixXd M = Bx.transpose() * KBx + By.transpose() * KBy;
    const Eigen::VectorXd rhs =
        KBx.transpose() * w_j.head(n) + KBy.transpose() * w_j.tail(n);
    Eigen::LLT<Eigen::MatrixXd> llt(M);
    if (llt.info() != Eigen::Success)
        throw NumericalError("solve_quadratic: B^T G B is not positive definite");
    SolveResult r;
    r.xi_star = llt.solve(rhs);
    r.eval = quad_form(G, w_j) - rhs.dot(r.xi_star);
    r.u_star = B.apply(r.xi_star);
    return r;
}

std::vector<CoordVec> gram_schmidt_g(const std::vector<CoordVec>& vectors, const GramMatrix& G) {
    auto inner = [&](const CoordVec& x, const CoordVec& y) {
        const int n = G.n();
        return x.head(n).dot(G.K * y.head(n)) + x.tail(n).dot(G.K * y.tail(n));
    };
    std::vector<CoordVec> kept;
    for (const CoordVec& v0 : vectors) {
        CoordVec v = v0;
        for (int pass = 0; pass < 2; ++pass)
            for (const CoordVec& prev : kept) v -= inner(prev, v) * prev;
        const double norm2 = inner(v, v);
        if (norm2 < 1e-20) continue;  // G-null direction
        v /= std::sqrt(norm2);
        kept.push_back(std::move(v));
    }
    return kept;
}

SolveResult solve_procrustes(const BasisMatrix& B, const CoordVec& w_j) {
    if (!B.orthonormal) throw ConfigError("solve_procrustes requires an orthonormal basis");
    if (w_j.size() != B.rows) throw Error("solve_procrustes: dimension mismatch");
    const Eigen::VectorXd a = B.apply_transpose(w_j);
    const Eigen::VectorXd b = B.apply_transpose(quarter_turn(w_j));
    const Rank2Top top = top_of_2x2(a.squaredNorm(), b.squaredNorm(), a.dot(b));
    if (top.lambda <= 1e-12)
        throw DegenerateGoalError("solve_procrustes: goal projects to zero on the feasible space");
    SolveResult r;
    r.xi_star = top.c(0) * a + top.c(1) * b;
    const double align = r.xi_star.dot(a);
    if (align < 0.0 || (align == 0.0 && r.xi_star.dot(b) < 0.0)) r.xi_star = -r.xi_star;
    r.eval = w_j.squaredNorm() - top.lambda;
    r.u_star = B.apply(r.xi_star);
    return r;
}

SolveResult solve_procrustes_general(const BasisMatrix& B, const GramMatrix& G, const CoordVec& w_j) {
    const int n = G.n();
    if (w_j.size() != 2 * n || B.rows != 2 * n)
        throw Error("solve_procrustes_general: dimension mismatch");
    Eigen::MatrixXd Bx, By;
    dense_blocks(B, Bx, By);
    const Eigen::MatrixXd KBx = G.K * Bx;
    const Eigen::MatrixXd KBy = G.K * By;
    const Eigen::MatrixXd M = Bx.transpose() * KBx + By.transpose() * KBy;
    Eigen::LLT<Eigen::MatrixXd> llt(M);
    if (llt.info() != Eigen::Success)
        throw NumericalError("solve_procrustes_general: B^T G B is not positive definite");
    const CoordVec w_c = quarter_turn(w_j);
    const Eigen::VectorXd p = KBx.transpose() * w_j.head(n) + KBy.transpose() * w_j.tail(n);
    const Eigen::VectorXd q = KBx.transpose() * w_c.head(n) + KBy.transpose() * w_c.tail(n);
    // Whiten with the Cholesky factor so the rank-2 reduction applies unchanged.
    const Eigen::VectorXd pt = llt.matrixL().solve(p);
    const Eigen::VectorXd qt = llt.matrixL().solve(q);
    const Rank2Top top = top_of_2x2(pt.squaredNorm(), qt.squaredNorm(), pt.dot(qt));
    if (top.lambda <= 1e-12)
        throw DegenerateGoalError("solve_procrustes_general: goal projects to zero on the feasible space");
    Eigen::VectorXd y = top.c(0) * pt + top.c(1) * qt;
    if (y.dot(pt) < 0.0 || (y.dot(pt) == 0.0 && y.dot(qt) < 0.0)) y = -y;
    SolveResult r;
    r.xi_star = llt.matrixU().solve(y);
    r.eval = quad_form(G, w_j) - top.lambda;
    r.u_star = B.apply(r.xi_star);
    return r;
}

RigidTransform optimal_rotation_align(const CoordVec& u, const CoordVec& w) {
    if (u.size() != w.size() || u.size() == 0) throw Error("optimal_rotation_align: dimension mismatch");
    const int n = static_cast<int>(u.size()) / 2;
    const double ucx = u.head(n).mean(), ucy = u.tail(n).mean();
    const double wcx = w.head(n).mean(), wcy = w.tail(n).mean();
    double cross = 0.0, dot = 0.0;
    for (int t = 0; t < n; ++t) {
        const double ux = u(t) - ucx, uy = u(n + t) - ucy;
        const double wx = w(t) - wcx, wy = w(n + t) - wcy;
        cross += ux * wy - uy * wx;
        dot += ux * wx + uy * wy;
    }
    RigidTransform out;
    out.theta = (cross == 0.0 && dot == 0.0) ? 0.0 : std::atan2(cross, dot);
    const double c = std::cos(out.theta), s = std::sin(out.theta);
    out.translation = Point2(wcx - (c * ucx - s * ucy), wcy - (s * ucx + c * ucy));
    return out;
}

}  // namespace escher
