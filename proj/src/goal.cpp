#include "escher/goal.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace escher {

namespace {

bool data_line(const std::string& line, std::string& out) {
    std::string s = line;
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return false;
    if (s[first] == '#') return false;
    out = s.substr(first);
    return true;
}

}  // namespace

GoalPolygon make_goal(PointList pts) {
    const int n = static_cast<int>(pts.size());
    if (n < 3) throw InvalidPolygonError("goal polygon needs at least 3 points");
    for (const auto& p : pts) {
        if (!std::isfinite(p.x()) || !std::isfinite(p.y()))
            throw InvalidPolygonError("goal polygon has non-finite coordinates");
    }
    if (!is_simple_polygon(pts)) throw NonSimplePolygonError("goal polygon is self-intersecting");

    const bool reversed = signed_area(pts) > 0.0;
    pts = ensure_clockwise(std::move(pts));

    Point2 centroid = Point2::Zero();
    for (const auto& p : pts) centroid += p;
    centroid /= static_cast<double>(n);
    double rms = 0.0;
    for (auto& p : pts) {
        p -= centroid;
        rms += p.squaredNorm();
    }
    rms = std::sqrt(rms / static_cast<double>(n));
    if (rms < 1e-12) throw InvalidPolygonError("goal polygon is numerically a single point");
    for (auto& p : pts) p /= rms;

    GoalPolygon g;
    g.points = std::move(pts);
    g.w = stack_coords(g.points);
    g.point_weights = Eigen::VectorXd::Ones(n);
    g.edge_weights = Eigen::VectorXd::Ones(n);
    g.reversed_on_load = reversed;
    return g;
}

GoalPolygon load_goal(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open goal file: " + path);
    std::string line, data;
    int n = -1;
    PointList pts;
    while (std::getline(in, line)) {
        if (!data_line(line, data)) continue;
        std::istringstream ss(data);
        if (n < 0) {
            if (!(ss >> n) || n < 3)
                throw ParseError("goal file " + path + ": first data line must be a point count >= 3");
            continue;
        }
        double x = 0.0, y = 0.0;
        if (!(ss >> x >> y))
            throw ParseError("goal file " + path + ": expected \"x y\", got \"" + data + "\"");
        pts.emplace_back(x, y);
        if (static_cast<int>(pts.size()) == n) break;
    }
    if (n < 0) throw ParseError("goal file " + path + ": no data lines");
    if (static_cast<int>(pts.size()) != n)
        throw ParseError("goal file " + path + ": expected " + std::to_string(n) + " points, got " +
                         std::to_string(pts.size()));
    return make_goal(std::move(pts));
}

void apply_weights_file(GoalPolygon& g, const std::string& path, double default_marked) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open weights file: " + path);
    const int n = g.n();
    std::string line, data;
    while (std::getline(in, line)) {
        if (!data_line(line, data)) continue;
        std::istringstream ss(data);
        char kind = 0;
        int idx = 0;
        ss >> kind >> idx;
        if (!ss || (kind != 'P' && kind != 'E'))
            throw ParseError("weights file " + path + ": expected \"P idx [w]\" or \"E idx [w]\", got \"" + data + "\"");
        if (idx < 1 || idx > n)
            throw ParseError("weights file " + path + ": index " + std::to_string(idx) + " out of range 1.." +
                             std::to_string(n));
        double w = default_marked;
        if (!(ss >> w)) w = default_marked;
        if (w < 1.0)
            throw ParseError("weights file " + path + ": weight " + std::to_string(w) +
                             " below 1 (pruning requires weights >= 1)");
        // File indices refer to the drawing order; remap if loading reversed it.
        int internal = idx;
        if (g.reversed_on_load) internal = (kind == 'P') ? (idx == 1 ? 1 : n - idx + 2) : (n - idx + 1);
        if (kind == 'P')
            g.point_weights(internal - 1) = w;
        else
            g.edge_weights(internal - 1) = w;
    }
}

CoordVec reindex(const GoalPolygon& g, int j) {
    const int n = g.n();
    if (j < 1 || j > n) throw ConfigError("reindex: j out of range");
    CoordVec out(2 * n);
    for (int t = 0; t < n; ++t) {
        const int src = (j - 1 + t) % n;
        out(t) = g.w(src);
        out(n + t) = g.w(n + src);
    }
    return out;
}

Eigen::VectorXd rotate_weights(const Eigen::VectorXd& weights, int j) {
    const int n = static_cast<int>(weights.size());
    if (j < 1 || j > n) throw ConfigError("rotate_weights: j out of range");
    Eigen::VectorXd out(n);
    for (int t = 0; t < n; ++t) out(t) = weights((j - 1 + t) % n);
    return out;
}

double average_edge_length(const GoalPolygon& g) {
    const int n = g.n();
    double sum = 0.0;
    for (int t = 0; t < n; ++t) sum += (g.points[(t + 1) % n] - g.points[t]).norm();
    return sum / static_cast<double>(n);
}

GoalPolygon synthetic_goal(int n, unsigned seed) {
    if (n < 3) throw ConfigError("synthetic_goal: need at least 3 points");
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> jitter(-0.3, 0.3);
    std::uniform_real_distribution<double> radius(-0.4, 0.4);
    PointList pts;
    for (int t = 0; t < n; ++t) {
        const double th = 2.0 * M_PI * (t + jitter(rng)) / n;  // strictly increasing angles
        const double r = 1.0 + radius(rng);
        pts.emplace_back(r * std::cos(th), r * std::sin(th));
    }
    return make_goal(std::move(pts));
}

}  // namespace escher
