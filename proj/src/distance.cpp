#include "escher/distance.hpp"

#include <algorithm>
#include <cmath>

#include "escher/errors.hpp"

namespace escher {

namespace {

GramMatrix cycle_laplacian(const Eigen::VectorXd& edge_weights, bool regularize) {
    const int n = static_cast<int>(edge_weights.size());
    std::vector<Eigen::Triplet<double>> trips;
    for (int t = 0; t < n; ++t) {
        const double w = edge_weights(t);
        const int a = t;
        const int b = (t + 1) % n;
        trips.emplace_back(a, a, w);
        trips.emplace_back(b, b, w);
        trips.emplace_back(a, b, -w);
        trips.emplace_back(b, a, -w);
    }
    if (regularize) trips.emplace_back(0, 0, 1.0);
    GramMatrix G;
    G.K.resize(n, n);
    G.K.setFromTriplets(trips.begin(), trips.end());
    G.kind = GramMatrix::Kind::wad;
    G.regularized = regularize;
    return G;
}

}  // namespace

GramMatrix gram_identity(int n) {
    GramMatrix G;
    G.K.resize(n, n);
    G.K.setIdentity();
    G.kind = GramMatrix::Kind::identity;
    return G;
}

GramMatrix gram_we(const GoalPolygon& g, int j) {
    const Eigen::VectorXd w = rotate_weights(g.point_weights, j);
    const int n = static_cast<int>(w.size());
    std::vector<Eigen::Triplet<double>> trips;
    for (int t = 0; t < n; ++t) trips.emplace_back(t, t, w(t));
    GramMatrix G;
    G.K.resize(n, n);
    G.K.setFromTriplets(trips.begin(), trips.end());
    G.kind = GramMatrix::Kind::we;
    return G;
}

GramMatrix gram_wad(const GoalPolygon& g, int j, bool regularize) {
    return cycle_laplacian(rotate_weights(g.edge_weights, j), regularize);
}

GramMatrix gram_ad(const GoalPolygon& g, int j, bool regularize) {
    if (j < 1 || j > g.n()) throw ConfigError("gram_ad: j out of range");
    // the unit cycle itself is rotation-invariant
    return cycle_laplacian(Eigen::VectorXd::Ones(g.n()), regularize);
}

EdgeSet build_ec(const GoalPolygon& g, double gamma, GadVariant variant, bool admit_crossing_for_gad2) {
    if (gamma <= 0.0) throw ConfigError("build_ec: gamma must be positive");
    const int n = g.n();
    const double limit = gamma * average_edge_length(g);

    auto is_polygon_edge = [&](int s, int t) {  // 1-based, s < t
        return (t == s + 1) || (s == 1 && t == n);
    };

    struct Cand {
        double len;
        int s, t;  // 1-based, s < t
    };
    std::vector<Cand> cands;
    for (int s = 1; s <= n; ++s) {
        for (int t = s + 1; t <= n; ++t) {
            if (is_polygon_edge(s, t)) continue;
            const Point2& a = g.points[static_cast<size_t>(s) - 1];
            const Point2& b = g.points[static_cast<size_t>(t) - 1];
            const double len = (b - a).norm();
            if (len >= limit) continue;
            bool crosses_polygon = false;
            for (int e = 0; e < n && !crosses_polygon; ++e)
                crosses_polygon =
                    segments_properly_cross({a, b}, {g.points[static_cast<size_t>(e)],
                                                     g.points[static_cast<size_t>((e + 1) % n)]});
            const PointLocation mid = point_in_polygon(0.5 * (a + b), g.points);
            bool keep = false;
            switch (variant) {
                case GadVariant::gad1:
                    keep = (mid == PointLocation::inside) && !crosses_polygon;
                    break;
                case GadVariant::gad2:
                    keep = admit_crossing_for_gad2 ? true
                                                   : (!crosses_polygon && mid != PointLocation::boundary);
                    break;
            }
            if (keep) cands.push_back({len, s, t});
        }
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        if (a.len != b.len) return a.len < b.len;
        if (a.s != b.s) return a.s < b.s;
        return a.t < b.t;
    });

    std::vector<std::pair<int, int>> accepted;
    for (int t = 1; t <= n; ++t) accepted.emplace_back(std::min(t, t % n + 1), std::max(t, t % n + 1));
    auto seg_of = [&](const std::pair<int, int>& e) {
        return Segment{g.points[static_cast<size_t>(e.first) - 1], g.points[static_cast<size_t>(e.second) - 1]};
    };
    for (const Cand& c : cands) {
        const Segment sc{g.points[static_cast<size_t>(c.s) - 1], g.points[static_cast<size_t>(c.t) - 1]};
        bool ok = true;
        for (const auto& e : accepted) {
            if (segments_properly_cross(sc, seg_of(e))) {
                ok = false;
                break;
            }
        }
        if (ok) accepted.emplace_back(c.s, c.t);
    }

    EdgeSet ec;
    ec.includes_polygon_edges = true;
    ec.gamma = gamma;
    std::sort(accepted.begin(), accepted.end());
    ec.edges = std::move(accepted);
    for (const auto& e : ec.edges)
        ec.total_length +=
            (g.points[static_cast<size_t>(e.second) - 1] - g.points[static_cast<size_t>(e.first) - 1]).norm();
    return ec;
}

GramMatrix gram_gad(const GoalPolygon& g, const EdgeSet& ec, int j, bool regularize) {
    const int n = g.n();
    if (j < 1 || j > n) throw ConfigError("gram_gad: j out of range");
    auto renum = [&](int p) { return (p - j + n) % n; };  // 0-based position after renumbering
    std::vector<Eigen::Triplet<double>> trips;
    for (const auto& [s, t] : ec.edges) {
        const int a = renum(s);
        const int b = renum(t);
        trips.emplace_back(a, a, 1.0);
        trips.emplace_back(b, b, 1.0);
        trips.emplace_back(a, b, -1.0);
        trips.emplace_back(b, a, -1.0);
    }
    if (regularize) trips.emplace_back(0, 0, 1.0);
    GramMatrix G;
    G.K.resize(n, n);
    G.K.setFromTriplets(trips.begin(), trips.end());
    G.kind = GramMatrix::Kind::gad;
    G.regularized = regularize;
    return G;
}

double distance_value(const GramMatrix& G, const CoordVec& u, const CoordVec& w) {
    const int n = G.n();
    if (u.size() != 2 * n || w.size() != 2 * n)
        throw Error("distance_value: dimension mismatch");
    const Eigen::VectorXd dx = u.head(n) - w.head(n);
    const Eigen::VectorXd dy = u.tail(n) - w.tail(n);
    return dx.dot(G.K * dx) + dy.dot(G.K * dy);
}

}  // namespace escher
