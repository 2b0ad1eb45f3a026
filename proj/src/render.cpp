#include "escher/render.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <limits>
#include <map>

#include "escher/errors.hpp"

namespace escher {

namespace {

using Key = std::array<long long, 6>;

long long quant(double v, double q) { return std::llround(v / q); }

Key key_of(const Isometry& g) {
    return {quant(g.R(0, 0), 1e-9), quant(g.R(0, 1), 1e-9), quant(g.R(1, 0), 1e-9),
            quant(g.R(1, 1), 1e-9), quant(g.d(0), 1e-9),    quant(g.d(1), 1e-9)};
}

// Point index h(s) with the cyclic wrap n+1 -> 1, as a 0-based index.
int vertex_index(const std::vector<int>& h, int s, int n) {
    int p = h[static_cast<size_t>(s - 1)];
    if (p > n) p -= n;
    return p - 1;
}

// One isometry per direction of every gluing rule: applying a generator to the
// base tile yields the neighbor sharing the rule's edge.
std::vector<Isometry> adjacency_generators(const PointList& pts, const Configuration& c,
                                           const std::vector<int>& h) {
    const int n = c.n;
    auto V = [&](int s) { return pts[static_cast<size_t>(vertex_index(h, s, n))]; };
    std::vector<Isometry> gens;
    for (const EdgeRule& r : edge_rules(c.type)) {
        switch (r.kind) {
            case RuleKind::trans_pair: {
                const Eigen::Vector2d d = V(r.s) - V(r.t + 1);
                gens.push_back({Eigen::Matrix2d::Identity(), d});
                gens.push_back({Eigen::Matrix2d::Identity(), -d});
                break;
            }
            case RuleKind::s_edge: {
                const Eigen::Vector2d mid = 0.5 * (V(r.s) + V(r.s + 1));
                gens.push_back({-Eigen::Matrix2d::Identity(), 2.0 * mid});
                break;
            }
            case RuleKind::rot_pair: {
                const double a = r.angle_deg * M_PI / 180.0;
                Eigen::Matrix2d R;
                R << std::cos(a), std::sin(a), -std::sin(a), std::cos(a);  // rotation by -angle
                const Eigen::Vector2d v = V(r.s + 1);
                gens.push_back({R, v - R * v});
                gens.push_back({R.transpose(), v - R.transpose() * v});
                break;
            }
            case RuleKind::glide_pair: {
                gens.push_back({r.M, V(r.s) - r.M * V(r.t)});
                gens.push_back({r.M, V(r.t) - r.M * V(r.s)});
                break;
            }
        }
    }
    return gens;
}

std::map<Key, Isometry> closure_within(const std::vector<Isometry>& gens, double bound) {
    std::map<Key, Isometry> seen;
    std::deque<Isometry> frontier;
    const Isometry id;
    seen.emplace(key_of(id), id);
    frontier.push_back(id);
    while (!frontier.empty()) {
        const Isometry cur = frontier.front();
        frontier.pop_front();
        for (const Isometry& g : gens) {
            const Isometry nxt = compose(cur, g);
            if (nxt.d.norm() > bound) continue;
            const Key k = key_of(nxt);
            if (seen.emplace(k, nxt).second) frontier.push_back(nxt);
        }
    }
    return seen;
}

bool is_translation(const Isometry& g) {
    return (g.R - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-7;
}

// Two shortest independent lattice vectors, Gauss-reduced.
std::pair<Eigen::Vector2d, Eigen::Vector2d> lattice_basis(const std::map<Key, Isometry>& closure) {
    std::vector<std::pair<Eigen::Vector2d, Key>> trans;
    for (const auto& [k, g] : closure)
        if (is_translation(g) && g.d.norm() > 1e-7) trans.emplace_back(g.d, k);
    std::sort(trans.begin(), trans.end(), [](const auto& a, const auto& b) {
        if (a.first.norm() != b.first.norm()) return a.first.norm() < b.first.norm();
        return a.second < b.second;
    });
    if (trans.empty()) throw NumericalError("no translation found in the placement group");
    Eigen::Vector2d t1 = trans.front().first;
    Eigen::Vector2d t2 = Eigen::Vector2d::Zero();
    bool found = false;
    for (const auto& [d, k] : trans) {
        if (std::abs(t1.x() * d.y() - t1.y() * d.x()) > 1e-9 * t1.norm() * d.norm()) {
            t2 = d;
            found = true;
            break;
        }
    }
    if (!found) throw NumericalError("translation lattice is rank deficient");
    for (;;) {  // Gauss reduction
        if (t1.norm() > t2.norm()) std::swap(t1, t2);
        const double mu = std::round(t1.dot(t2) / t1.squaredNorm());
        if (mu == 0.0) break;
        t2 -= mu * t1;
    }
    if (t1.norm() > t2.norm()) std::swap(t1, t2);
    return {t1, t2};
}

long long frac_key(double a) {
    const double f = a - std::floor(a);
    long long k = std::llround(f * 1e6);
    if (k >= 1000000) k = 0;  // f rounded up to a full period
    return k;
}

struct CosetRep {
    Isometry g;
    Key key;
};

std::vector<CosetRep> coset_reps(const std::map<Key, Isometry>& closure, const Eigen::Vector2d& e1,
                                 const Eigen::Vector2d& e2) {
    Eigen::Matrix2d E;
    E << e1, e2;
    const Eigen::Matrix2d Einv = E.inverse();
    std::map<Key, CosetRep> best;  // coset key -> representative
    for (const auto& [k, g] : closure) {
        const Eigen::Vector2d ab = Einv * g.d;
        const Key ck = {quant(g.R(0, 0), 1e-6), quant(g.R(0, 1), 1e-6), quant(g.R(1, 0), 1e-6),
                        quant(g.R(1, 1), 1e-6), frac_key(ab(0)),        frac_key(ab(1))};
        auto it = best.find(ck);
        if (it == best.end() || g.d.norm() < it->second.g.d.norm() - 1e-12 ||
            (g.d.norm() < it->second.g.d.norm() + 1e-12 && k < it->second.key))
            best[ck] = CosetRep{g, k};
    }
    std::vector<CosetRep> reps;
    const Key idk = key_of(Isometry{});
    for (const auto& [ck, rep] : best)
        if (rep.key == idk) reps.push_back(rep);  // identity coset first
    for (const auto& [ck, rep] : best)
        if (!(rep.key == idk)) reps.push_back(rep);
    std::sort(reps.begin() + 1, reps.end(),
              [](const CosetRep& a, const CosetRep& b) { return a.key < b.key; });
    return reps;
}

struct EdgeEntry {
    int placement;
    std::vector<Point2> pts;
};

std::array<long long, 4> endpoint_key(const Point2& a, const Point2& b) {
    const std::array<long long, 2> ka = {quant(a.x(), 1e-4), quant(a.y(), 1e-4)};
    const std::array<long long, 2> kb = {quant(b.x(), 1e-4), quant(b.y(), 1e-4)};
    if (ka <= kb) return {ka[0], ka[1], kb[0], kb[1]};
    return {kb[0], kb[1], ka[0], ka[1]};
}

std::string path_data(const std::vector<Point2>& pts) {
    std::string s = "M";
    for (size_t i = 0; i < pts.size(); ++i) {
        s += (i == 0 ? " " : " L ");
        s += fmt_g(pts[i].x()) + " " + fmt_g(-pts[i].y());  // y flipped at emission
    }
    s += " Z";
    return s;
}

struct Box {
    double x0 = std::numeric_limits<double>::infinity(), y0 = std::numeric_limits<double>::infinity();
    double x1 = -std::numeric_limits<double>::infinity(), y1 = -std::numeric_limits<double>::infinity();
    void add(const Point2& p) {  // in flipped (emission) coordinates
        x0 = std::min(x0, p.x());
        x1 = std::max(x1, p.x());
        y0 = std::min(y0, -p.y());
        y1 = std::max(y1, -p.y());
    }
};

std::string svg_open(const Box& b) {
    const double mar = 0.05 * std::max(b.x1 - b.x0, b.y1 - b.y0) + 1e-6;
    const double w = b.x1 - b.x0 + 2 * mar;
    const double h = b.y1 - b.y0 + 2 * mar;
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + fmt_g(b.x0 - mar) + " " +
           fmt_g(b.y0 - mar) + " " + fmt_g(w) + " " + fmt_g(h) + "\" width=\"640\" height=\"" +
           fmt_g(640.0 * h / w) + "\">\n";
}

double view_scale(const Box& b) { return std::max(b.x1 - b.x0, b.y1 - b.y0); }

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open output file: " + path);
    out << text;
    if (!out) throw Error("failed writing output file: " + path);
}

}  // namespace

Isometry compose(const Isometry& f, const Isometry& g) {
    return {f.R * g.R, f.R * g.d + f.d};
}

std::string fmt_g(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

TilingLayout layout_tiling(const Candidate& cand, int extent) {
    if (extent < 0) throw UnsupportedLayoutError("extent must be non-negative");
    const int n = static_cast<int>(cand.u_star.size()) / 2;
    const Configuration c{cand.type, cand.k, n};
    TilingLayout layout;
    layout.base = cand;
    layout.h = tiling_vertex_indices(c);
    layout.extent = extent;
    if (extent == 0) {
        layout.placements.push_back(Isometry{});
        layout.coset.push_back(0);
        return layout;
    }
    const PointList pts = unstack_coords(cand.u_star);
    const std::vector<Isometry> gens = adjacency_generators(pts, c, layout.h);
    double scale = 0.0;
    for (const Point2& p : pts) scale = std::max(scale, p.norm());
    for (const Isometry& g : gens) scale = std::max(scale, g.d.norm());
    const double bound = (2.0 * extent + 6.0) * std::max(scale, 1e-9);
    const auto closure = closure_within(gens, bound);
    const auto [e1, e2] = lattice_basis(closure);
    layout.e1 = e1;
    layout.e2 = e2;
    const std::vector<CosetRep> reps = coset_reps(closure, e1, e2);
    std::map<Key, bool> emitted;
    for (int ring = 0; ring <= extent; ++ring) {
        for (int a = -ring; a <= ring; ++a) {
            for (int b = -ring; b <= ring; ++b) {
                if (std::max(std::abs(a), std::abs(b)) != ring) continue;
                for (size_t ci = 0; ci < reps.size(); ++ci) {
                    Isometry g = reps[ci].g;
                    g.d += a * e1 + b * e2;
                    if (!emitted.emplace(key_of(g), true).second) continue;
                    layout.placements.push_back(g);
                    layout.coset.push_back(static_cast<int>(ci));
                }
            }
        }
    }
    return layout;
}

double max_edge_mismatch(const TilingLayout& layout) {
    const int n = static_cast<int>(layout.base.u_star.size()) / 2;
    const PointList pts = unstack_coords(layout.base.u_star);
    const int S = edge_count(layout.base.type);
    std::vector<std::vector<int>> edge_points(static_cast<size_t>(S));
    for (int s = 1; s <= S; ++s) {
        const int lo = layout.h[static_cast<size_t>(s - 1)];
        const int hi = layout.h[static_cast<size_t>(s)];
        for (int p = lo; p <= hi; ++p) edge_points[static_cast<size_t>(s - 1)].push_back((p - 1) % n);
    }
    std::map<std::array<long long, 4>, std::vector<EdgeEntry>> buckets;
    for (size_t pi = 0; pi < layout.placements.size(); ++pi) {
        const Isometry& g = layout.placements[pi];
        for (int s = 0; s < S; ++s) {
            EdgeEntry e;
            e.placement = static_cast<int>(pi);
            for (int idx : edge_points[static_cast<size_t>(s)])
                e.pts.push_back(g.apply(pts[static_cast<size_t>(idx)]));
            buckets[endpoint_key(e.pts.front(), e.pts.back())].push_back(std::move(e));
        }
    }
    double worst = 0.0;
    for (const auto& [key, entries] : buckets) {
        if (entries.size() < 2) continue;  // patch boundary
        for (size_t i = 0; i < entries.size(); ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (size_t j = 0; j < entries.size(); ++j) {
                if (i == j || entries[i].pts.size() != entries[j].pts.size()) continue;
                const size_t m = entries[i].pts.size();
                double fwd = 0.0, rev = 0.0;
                for (size_t t = 0; t < m; ++t) {
                    fwd = std::max(fwd, (entries[i].pts[t] - entries[j].pts[t]).norm());
                    rev = std::max(rev, (entries[i].pts[t] - entries[j].pts[m - 1 - t]).norm());
                }
                best = std::min(best, std::min(fwd, rev));
            }
            if (std::isfinite(best)) worst = std::max(worst, best);
        }
    }
    return worst;
}

std::string render_overlay_svg(const Candidate& cand, const GoalPolygon& goal) {
    const CoordVec w = stack_coords(goal.points);
    const RigidTransform tr = optimal_rotation_align(cand.u_star, w);
    Eigen::Matrix2d R;
    R << std::cos(tr.theta), -std::sin(tr.theta), std::sin(tr.theta), std::cos(tr.theta);
    const PointList tile = unstack_coords(cand.u_star);
    std::vector<Point2> aligned;
    for (const Point2& p : tile) aligned.push_back(R * p + tr.translation);
    Box box;
    for (const Point2& p : aligned) box.add(p);
    for (const Point2& p : goal.points) box.add(p);
    const double sc = view_scale(box);
    std::string svg = svg_open(box);
    svg += "<path d=\"" + path_data(aligned) +
           "\" fill=\"#b3cde3\" fill-opacity=\"0.6\" stroke=\"#045a8d\" stroke-width=\"" +
           fmt_g(0.008 * sc) + "\"/>\n";
    for (const Point2& p : goal.points)
        svg += "<circle cx=\"" + fmt_g(p.x()) + "\" cy=\"" + fmt_g(-p.y()) + "\" r=\"" +
               fmt_g(0.012 * sc) + "\" fill=\"#111111\"/>\n";
    svg += "</svg>\n";
    return svg;
}

std::string render_tiling_svg(const TilingLayout& layout) {
    static const std::array<const char*, 6> palette = {"#a6cee3", "#fdbf6f", "#b2df8a",
                                                       "#cab2d6", "#fb9a99", "#ffff99"};
    const PointList pts = unstack_coords(layout.base.u_star);
    std::vector<std::vector<Point2>> shapes;
    Box box;
    for (const Isometry& g : layout.placements) {
        std::vector<Point2> shape;
        for (const Point2& p : pts) {
            shape.push_back(g.apply(p));
            box.add(shape.back());
        }
        shapes.push_back(std::move(shape));
    }
    const double sc = view_scale(box);
    std::string svg = svg_open(box);
    for (size_t i = 0; i < shapes.size(); ++i) {
        const char* fill = palette[static_cast<size_t>(layout.coset[i]) % palette.size()];
        svg += "<path d=\"" + path_data(shapes[i]) + "\" fill=\"" + fill +
               "\" stroke=\"#333333\" stroke-width=\"" + fmt_g(0.004 * sc) + "\"/>\n";
    }
    svg += "</svg>\n";
    return svg;
}

void render_overlay(const Candidate& cand, const GoalPolygon& goal, const std::string& path) {
    write_text(path, render_overlay_svg(cand, goal));
}

void render_tiling(const TilingLayout& layout, const std::string& path) {
    write_text(path, render_tiling_svg(layout));
}

}  // namespace escher
