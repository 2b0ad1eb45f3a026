#include <doctest.h>

#include <algorithm>
#include <random>

#include "escher/distance.hpp"

using namespace escher;

namespace {

GoalPolygon square_goal() {
    return make_goal({Point2(0, 0), Point2(2, 0), Point2(2, 2), Point2(0, 2)});
}

CoordVec random_vec(int len, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss;
    CoordVec v(len);
    for (int i = 0; i < len; ++i) v(i) = gauss(rng);
    return v;
}

bool has_edge(const EdgeSet& ec, int s, int t) {
    return std::find(ec.edges.begin(), ec.edges.end(), std::make_pair(s, t)) != ec.edges.end();
}

// direct adjacent-difference sum with the given edge weights, renumbered by j
double direct_wad(const Eigen::VectorXd& ew, int j, const CoordVec& u, const CoordVec& w) {
    const int n = static_cast<int>(ew.size());
    double sum = 0.0;
    for (int t = 0; t < n; ++t) {
        const double wt = ew((j - 1 + t) % n);
        const double dx = (u((t + 1) % n) - u(t)) - (w((t + 1) % n) - w(t));
        const double dy = (u(n + (t + 1) % n) - u(n + t)) - (w(n + (t + 1) % n) - w(n + t));
        sum += wt * (dx * dx + dy * dy);
    }
    return sum;
}

}  // namespace

TEST_CASE("identity gram is the plain squared distance") {
    const int n = 7;
    const GramMatrix G = gram_identity(n);
    const CoordVec u = random_vec(2 * n, 1), w = random_vec(2 * n, 2);
    CHECK(distance_value(G, u, w) == doctest::Approx((u - w).squaredNorm()).epsilon(1e-12));
    CHECK_THROWS_AS(distance_value(G, random_vec(2 * n + 2, 3), w), Error);
}

TEST_CASE("weighted euclidean gram diagonal") {
    GoalPolygon g = square_goal();
    g.point_weights << 4, 1, 1, 1;
    const GramMatrix G1 = gram_we(g, 1);
    const Eigen::MatrixXd K1 = Eigen::MatrixXd(G1.K);
    Eigen::Vector4d expect(4, 1, 1, 1);
    CHECK((K1 - Eigen::MatrixXd(expect.asDiagonal())).cwiseAbs().maxCoeff() == 0.0);
    const GramMatrix G2 = gram_we(g, 2);
    const Eigen::MatrixXd K2 = Eigen::MatrixXd(G2.K);
    Eigen::Vector4d expect2(1, 1, 1, 4);
    CHECK((K2 - Eigen::MatrixXd(expect2.asDiagonal())).cwiseAbs().maxCoeff() == 0.0);
    // distance oracle
    const CoordVec u = random_vec(8, 4), w = random_vec(8, 5);
    double direct = 0.0;
    for (int t = 0; t < 4; ++t) {
        const double wt = expect2(t);
        direct += wt * ((u(t) - w(t)) * (u(t) - w(t)) + (u(4 + t) - w(4 + t)) * (u(4 + t) - w(4 + t)));
    }
    CHECK(distance_value(G2, u, w) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("adjacent-difference gram matches the direct sum") {
    const GoalPolygon g = make_goal({Point2(0, 0), Point2(3, 0), Point2(4, 2), Point2(2, 3),
                                     Point2(0, 2)});
    const int n = g.n();
    const CoordVec u = random_vec(2 * n, 6), w = random_vec(2 * n, 7);
    for (int j = 1; j <= n; ++j) {
        const GramMatrix G = gram_ad(g, j, false);
        const Eigen::VectorXd unit = Eigen::VectorXd::Ones(n);
        CHECK(distance_value(G, u, w) == doctest::Approx(direct_wad(unit, j, u, w)).epsilon(1e-10));
    }
    // translation invariance of the unregularized form
    const GramMatrix G = gram_ad(g, 1, false);
    CoordVec shifted = u;
    shifted.head(n).array() += 0.37;
    shifted.tail(n).array() -= 1.21;
    CHECK(distance_value(G, shifted, w) == doctest::Approx(distance_value(G, u, w)).epsilon(1e-10));
    // the regularizer adds exactly the squared first-point mismatch
    const GramMatrix Gr = gram_ad(g, 1, true);
    CHECK(Gr.regularized);
    const double extra = (u(0) - w(0)) * (u(0) - w(0)) + (u(n) - w(n)) * (u(n) - w(n));
    CHECK(distance_value(Gr, u, w) ==
          doctest::Approx(distance_value(G, u, w) + extra).epsilon(1e-10));
}

TEST_CASE("weighted adjacent-difference gram") {
    GoalPolygon g = square_goal();
    g.edge_weights << 2, 1, 5, 1;
    const int n = 4;
    const CoordVec u = random_vec(2 * n, 8), w = random_vec(2 * n, 9);
    for (int j = 1; j <= n; ++j) {
        const GramMatrix G = gram_wad(g, j, false);
        CHECK(distance_value(G, u, w) ==
              doctest::Approx(direct_wad(g.edge_weights, j, u, w)).epsilon(1e-10));
    }
    // with unit weights it coincides with gram_ad
    GoalPolygon g1 = square_goal();
    const Eigen::MatrixXd A = Eigen::MatrixXd(gram_wad(g1, 2, true).K);
    const Eigen::MatrixXd B = Eigen::MatrixXd(gram_ad(g1, 2, true).K);
    CHECK((A - B).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("candidate edge set of the square") {
    const GoalPolygon g = square_goal();
    const EdgeSet ec = build_ec(g, 2.0, GadVariant::gad1);
    CHECK(ec.edges.size() == 5);  // four polygon edges plus one diagonal
    CHECK(has_edge(ec, 1, 2));
    CHECK(has_edge(ec, 2, 3));
    CHECK(has_edge(ec, 3, 4));
    CHECK(has_edge(ec, 1, 4));
    CHECK(has_edge(ec, 1, 3));       // lexicographically first diagonal wins
    CHECK_FALSE(has_edge(ec, 2, 4)); // crosses the accepted diagonal
    double len = 0.0;
    for (const auto& [s, t] : ec.edges)
        len += (g.points[static_cast<size_t>(s - 1)] - g.points[static_cast<size_t>(t - 1)]).norm();
    CHECK(ec.total_length == doctest::Approx(len).epsilon(1e-12));
    // tiny gamma: only the polygon edges survive
    const EdgeSet tiny = build_ec(g, 1e-6, GadVariant::gad1);
    CHECK(tiny.edges.size() == 4);
    CHECK_THROWS_AS(build_ec(g, 0.0, GadVariant::gad1), ConfigError);
}

TEST_CASE("gad variants differ on outside-midpoint chords") {
    // U-shaped polygon, clockwise: the mouth chord (3,6) has its midpoint in
    // the notch (outside) and crosses no polygon edge.
    const GoalPolygon g = make_goal({Point2(0, 0), Point2(0, 3), Point2(1, 3), Point2(1, 1),
                                     Point2(3, 1), Point2(3, 3), Point2(4, 3), Point2(4, 0)});
    REQUIRE_FALSE(g.reversed_on_load);
    const EdgeSet e1 = build_ec(g, 1.0, GadVariant::gad1);
    const EdgeSet e2 = build_ec(g, 1.0, GadVariant::gad2);
    CHECK_FALSE(has_edge(e1, 3, 6));
    CHECK(has_edge(e2, 3, 6));
}

TEST_CASE("gad2 boundary-midpoint chords obey the admit toggle") {
    // chord (1,5) runs along the bottom and its midpoint is the vertex p6
    const GoalPolygon g = make_goal({Point2(-2, -1), Point2(-2, 1), Point2(0, 1), Point2(2, 1),
                                     Point2(2, -1), Point2(0, -1)});
    REQUIRE_FALSE(g.reversed_on_load);
    const EdgeSet strict = build_ec(g, 2.5, GadVariant::gad2, false);
    const EdgeSet admit = build_ec(g, 2.5, GadVariant::gad2, true);
    CHECK_FALSE(has_edge(strict, 1, 5));
    CHECK(has_edge(admit, 1, 5));
}

TEST_CASE("graph-difference gram matches the direct edge sum") {
    const GoalPolygon g = make_goal({Point2(0, 0), Point2(3, 0), Point2(4, 2), Point2(2, 3),
                                     Point2(0, 2), Point2(-1, 1)});
    const int n = g.n();
    const EdgeSet ec = build_ec(g, 1.8, GadVariant::gad1);
    CHECK(ec.edges.size() > static_cast<size_t>(n));  // at least one interior chord
    const CoordVec u = random_vec(2 * n, 10), w = random_vec(2 * n, 11);
    for (int j = 1; j <= n; ++j) {
        const GramMatrix G = gram_gad(g, ec, j, false);
        double direct = 0.0;
        for (const auto& [s, t] : ec.edges) {
            const int rs = (s - j + n) % n;
            const int rt = (t - j + n) % n;
            const double dx = (u(rs) - u(rt)) - (w(rs) - w(rt));
            const double dy = (u(n + rs) - u(n + rt)) - (w(n + rs) - w(n + rt));
            direct += dx * dx + dy * dy;
        }
        CHECK(distance_value(G, u, w) == doctest::Approx(direct).epsilon(1e-10));
    }
    // regularizer behaves as for the cyclic form
    const GramMatrix Gu = gram_gad(g, ec, 3, false), Gr = gram_gad(g, ec, 3, true);
    const double extra = (u(0) - w(0)) * (u(0) - w(0)) + (u(n) - w(n)) * (u(n) - w(n));
    CHECK(distance_value(Gr, u, w) == doctest::Approx(distance_value(Gu, u, w) + extra).epsilon(1e-10));
}

TEST_CASE("gram kinds and sizes") {
    const GoalPolygon g = square_goal();
    CHECK(gram_identity(4).kind == GramMatrix::Kind::identity);
    CHECK(gram_we(g, 1).kind == GramMatrix::Kind::we);
    CHECK(gram_wad(g, 1, true).kind == GramMatrix::Kind::wad);
    CHECK(gram_ad(g, 1, false).kind == GramMatrix::Kind::wad);
    const EdgeSet ec = build_ec(g, 2.0, GadVariant::gad1);
    CHECK(gram_gad(g, ec, 1, true).kind == GramMatrix::Kind::gad);
    CHECK(gram_we(g, 1).n() == 4);
    CHECK_THROWS_AS(gram_we(g, 0), ConfigError);
    CHECK_THROWS_AS(gram_we(g, 5), ConfigError);
}
