#include <doctest.h>

#include <cmath>
#include <limits>

#include "escher/search.hpp"

using namespace escher;

namespace {

CoordVec rotate_stacked(const CoordVec& w, double theta) {
    const int n = static_cast<int>(w.size()) / 2;
    const double c = std::cos(theta), s = std::sin(theta);
    CoordVec out(2 * n);
    for (int t = 0; t < n; ++t) {
        out(t) = c * w(t) - s * w(n + t);
        out(n + t) = s * w(t) + c * w(n + t);
    }
    return out;
}

Candidate key_only(double eval, IhType type, std::vector<int> k, int j) {
    Candidate c;
    c.eval = eval;
    c.type = type;
    c.k = std::move(k);
    c.j = j;
    c.simple = true;
    return c;
}

long long expected_total(const std::vector<IhType>& types, int n) {
    long long total = 0;
    for (IhType t : types) {
        try {
            total += static_cast<long long>(enumerate_configurations(t, n).size()) * n;
        } catch (const EmptyConfigurationSetError&) {
        }
    }
    return total;
}

SearchParams small_params(int topk = 5) {
    SearchParams p;
    p.topk = topk;
    p.gamma = 1.7;
    return p;
}

GramMatrix mode_gram(const GoalPolygon& g, Mode mode, int j, double gamma, bool admit) {
    switch (mode) {
        case Mode::euclidean: return gram_identity(g.n());
        case Mode::we: return gram_we(g, j);
        case Mode::ad: return gram_ad(g, j, false);
        case Mode::wad: return gram_wad(g, j, false);
        case Mode::gad1: return gram_gad(g, build_ec(g, gamma, GadVariant::gad1), j, false);
        case Mode::gad2:
            return gram_gad(g, build_ec(g, gamma, GadVariant::gad2, admit), j, false);
    }
    throw Error("unreachable");
}

double min_over_rotation(const GramMatrix& G, const CoordVec& u, const CoordVec& w) {
    double best = std::numeric_limits<double>::infinity();
    double best_th = 0.0;
    const int grid = 1440;
    for (int i = 0; i < grid; ++i) {
        const double th = 2.0 * M_PI * i / grid;
        const double v = distance_value(G, rotate_stacked(u, th), w);
        if (v < best) {
            best = v;
            best_th = th;
        }
    }
    // parabolic refinement around the grid minimum
    double lo = best_th - 2.0 * M_PI / grid, hi = best_th + 2.0 * M_PI / grid;
    for (int it = 0; it < 80; ++it) {
        const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (distance_value(G, rotate_stacked(u, m1), w) <
            distance_value(G, rotate_stacked(u, m2), w))
            hi = m2;
        else
            lo = m1;
    }
    return std::min(best, distance_value(G, rotate_stacked(u, 0.5 * (lo + hi)), w));
}

}  // namespace

TEST_CASE("mode names round trip") {
    for (Mode m : {Mode::euclidean, Mode::we, Mode::ad, Mode::wad, Mode::gad1, Mode::gad2})
        CHECK(mode_from_name(mode_name(m)) == m);
    CHECK_THROWS_AS(mode_from_name("nope"), ConfigError);
    CHECK(is_gad(Mode::gad1));
    CHECK(is_gad(Mode::gad2));
    CHECK_FALSE(is_gad(Mode::euclidean));
    CHECK_FALSE(is_gad(Mode::wad));
}

TEST_CASE("top-k list ordering, threshold, and ties") {
    TopK top;
    top.capacity = 3;
    CHECK(top.threshold() == std::numeric_limits<double>::infinity());
    CHECK(top.offer(key_only(2.0, IhType::IH4, {0, 0, 2, 0, 2, 2}, 3)));
    CHECK(top.offer(key_only(1.0, IhType::IH1, {1, 1, 1, 1, 1, 1}, 2)));
    CHECK(top.threshold() == std::numeric_limits<double>::infinity());
    CHECK(top.offer(key_only(3.0, IhType::IH7, {0, 0, 1, 1, 2, 2}, 1)));
    CHECK(top.threshold() == 3.0);
    CHECK(top.entries[0].eval == 1.0);
    CHECK(top.entries[1].eval == 2.0);
    CHECK(top.entries[2].eval == 3.0);
    // worse than the current tail: rejected, list unchanged
    CHECK_FALSE(top.would_accept(3.5, IhType::IH1, {0, 0, 0, 0, 0, 0}, 1));
    CHECK_FALSE(top.offer(key_only(3.5, IhType::IH1, {0, 0, 0, 0, 0, 0}, 1)));
    CHECK(top.entries.size() == 3);
    // same eval as the tail but lexicographically earlier key: accepted
    CHECK(top.would_accept(3.0, IhType::IH2, {0, 0, 0, 0, 0, 0}, 1));
    CHECK(top.offer(key_only(3.0, IhType::IH2, {0, 0, 0, 0, 0, 0}, 1)));
    CHECK(top.entries.size() == 3);
    CHECK(top.entries[2].type == IhType::IH2);
    // same eval, later key than the new tail: rejected
    CHECK_FALSE(top.would_accept(3.0, IhType::IH7, {0, 0, 1, 1, 2, 2}, 1));
    // strict improvement evicts the tail
    CHECK(top.offer(key_only(0.5, IhType::IH47, {0, 0, 0, 4}, 1)));
    CHECK(top.entries[0].eval == 0.5);
    CHECK(top.threshold() == 2.0);
    // tie on everything but j
    CHECK(top.would_accept(2.0, IhType::IH4, {0, 0, 2, 0, 2, 2}, 2));
    CHECK_FALSE(top.would_accept(2.0, IhType::IH4, {0, 0, 2, 0, 2, 2}, 3));
    CHECK(candidate_before(top.entries[0], top.entries[1]));
}

TEST_CASE("pruned search equals the exhaustive reference in every mode") {
    for (int n : {8, 12}) {
        const GoalPolygon g = synthetic_goal(n, 40 + static_cast<unsigned>(n));
        for (Mode mode :
             {Mode::euclidean, Mode::we, Mode::ad, Mode::wad, Mode::gad1, Mode::gad2}) {
            const SearchParams p = small_params();
            const auto [fast, fs] = run_search(g, mode, p);
            const auto [ref, rs] = naive_search(g, mode, p);
            const std::string mn = mode_name(mode);
            CAPTURE(mn);
            CAPTURE(n);
            REQUIRE(fast.entries.size() == ref.entries.size());
            for (size_t i = 0; i < fast.entries.size(); ++i) {
                const Candidate& a = fast.entries[i];
                const Candidate& b = ref.entries[i];
                CHECK(a.type == b.type);
                CHECK(a.k == b.k);
                CHECK(a.j == b.j);
                CHECK(std::abs(a.eval - b.eval) <= 1e-9 * (1.0 + std::abs(b.eval)));
            }
            // reference never prunes and never runs the cheap tier
            CHECK(rs.cheap_evals == 0);
            CHECK(rs.pruned == 0);
            CHECK(rs.full_evals == expected_total(p.types, n));
        }
    }
}

TEST_CASE("search counters") {
    const GoalPolygon g = synthetic_goal(12, 77);
    SearchParams p = small_params(3);
    const auto [fast, fs] = run_search(g, Mode::we, p);
    const auto [ref, rs] = naive_search(g, Mode::we, p);
    const long long total = expected_total(p.types, 12);
    // two-tier mode: cheap tier runs for every triplet, full tier is gated
    CHECK(fs.cheap_evals == total);
    CHECK(fs.full_evals < rs.full_evals);
    CHECK(fs.full_evals + fs.pruned == total);
    CHECK(fast.entries.size() == 3);
    // per-type stats add up to the totals
    long long c = 0, f = 0, pr = 0;
    for (const auto& [t, ts] : fs.per_type) {
        c += ts.cheap_evals;
        f += ts.full_evals;
        pr += ts.pruned;
    }
    CHECK(c == fs.cheap_evals);
    CHECK(f == fs.full_evals);
    CHECK(pr == fs.pruned);
    CHECK(fs.wall_time >= 0.0);
}

TEST_CASE("candidates are valid tiles and evals match an independent distance") {
    const GoalPolygon g = synthetic_goal(12, 91);
    for (Mode mode :
         {Mode::euclidean, Mode::we, Mode::ad, Mode::wad, Mode::gad1, Mode::gad2}) {
        SearchParams p = small_params(4);
        const auto [top, stats] = run_search(g, mode, p);
        const std::string mn = mode_name(mode);
        CAPTURE(mn);
        REQUIRE(!top.entries.empty());
        for (const Candidate& cand : top.entries) {
            const Configuration c{cand.type, cand.k, 12};
            CHECK(cand.simple);
            CHECK(validate_tile(cand.u_star, c));
            const GramMatrix G = mode_gram(g, mode, cand.j, p.gamma, p.gad2_admit_crossing);
            const CoordVec wj = reindex(g, cand.j);
            if (!procrustes_required(cand.type)) {
                const double direct = distance_value(G, cand.u_star, wj);
                CHECK(cand.eval == doctest::Approx(direct).epsilon(1e-8));
            } else {
                const double direct = min_over_rotation(G, cand.u_star, wj);
                CHECK(cand.eval == doctest::Approx(direct).epsilon(1e-5));
            }
        }
    }
}

TEST_CASE("coordinate-subset bound stays below the true eval") {
    const GoalPolygon g = synthetic_goal(10, 55);
    BoundProvider bp;
    bp.kind = BoundKind::coordinate_subset;
    bp.subset_points = 4;
    BoundProvider full_bp = bp;
    full_bp.subset_points = 10;
    for (IhType t : {IhType::IH4, IhType::IH5, IhType::IH6, IhType::IH1}) {
        for (const Configuration& c : enumerate_configurations(t, 10)) {
            for (int j : {1, 4, 8}) {
                const CoordVec wj = reindex(g, j);
                const BasisMatrix B = build_basis(c, true);
                const double full = procrustes_required(t) ? solve_procrustes(B, wj).eval
                                                           : solve_euclidean(B, wj).eval;
                const double lb = lower_bound(bp, c, j, g, Mode::euclidean);
                CHECK(lb <= full + 1e-9);
                // the bound over all points is the eval itself
                const double lb_full = lower_bound(full_bp, c, j, g, Mode::euclidean);
                CHECK(lb_full == doctest::Approx(full).epsilon(1e-9));
            }
        }
    }
    // difference-basis flavor for the adjacent-difference family
    const Configuration c4{IhType::IH4, {1, 0, 1, 1, 0, 1}, 10};
    const BasisMatrix D4 = build_difference_basis(c4);
    for (int j : {2, 6}) {
        CoordVec wj = reindex(g, j);
        CoordVec d(20);
        for (int t = 0; t < 10; ++t) {
            d(t) = wj((t + 1) % 10) - wj(t);
            d(10 + t) = wj(10 + (t + 1) % 10) - wj(10 + t);
        }
        const double cheap = solve_euclidean(D4, d).eval;
        CHECK(lower_bound(bp, c4, j, g, Mode::ad) <= cheap + 1e-9);
        CHECK(lower_bound(full_bp, c4, j, g, Mode::ad) == doctest::Approx(cheap).epsilon(1e-9));
    }
    BoundProvider none;
    CHECK(lower_bound(none, c4, 1, g, Mode::ad) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("worker count does not change the result") {
    const GoalPolygon g = synthetic_goal(12, 63);
    SearchParams p1 = small_params(6);
    SearchParams p3 = p1;
    p3.workers = 3;
    for (Mode mode : {Mode::wad, Mode::gad1}) {
        const auto [a, as] = run_search(g, mode, p1);
        const auto [b, bs] = run_search(g, mode, p3);
        REQUIRE(a.entries.size() == b.entries.size());
        for (size_t i = 0; i < a.entries.size(); ++i) {
            CHECK(a.entries[i].type == b.entries[i].type);
            CHECK(a.entries[i].k == b.entries[i].k);
            CHECK(a.entries[i].j == b.entries[i].j);
            CHECK(a.entries[i].eval == b.entries[i].eval);
        }
        CHECK(as.full_evals + as.pruned == bs.full_evals + bs.pruned);
    }
}

TEST_CASE("heuristic gate with zero aggressiveness skips nothing") {
    const GoalPolygon g = synthetic_goal(10, 29);
    SearchParams pc = small_params(5);
    SearchParams pi = pc;
    pi.complete = false;
    pi.alpha = 0.0;
    const auto [a, as] = run_search(g, Mode::gad1, pc);
    const auto [b, bs] = run_search(g, Mode::gad1, pi);
    REQUIRE(a.entries.size() == b.entries.size());
    for (size_t i = 0; i < a.entries.size(); ++i) {
        CHECK(a.entries[i].type == b.entries[i].type);
        CHECK(a.entries[i].k == b.entries[i].k);
        CHECK(a.entries[i].j == b.entries[i].j);
        CHECK(a.entries[i].eval == b.entries[i].eval);
    }
}

TEST_CASE("search parameter validation") {
    const GoalPolygon g = synthetic_goal(8, 5);
    SearchParams p;
    p.topk = 0;
    CHECK_THROWS_AS(run_search(g, Mode::euclidean, p), ConfigError);
    p = SearchParams{};
    p.workers = 0;
    CHECK_THROWS_AS(run_search(g, Mode::euclidean, p), ConfigError);
    p = SearchParams{};
    p.types.clear();
    CHECK_THROWS_AS(run_search(g, Mode::euclidean, p), ConfigError);
    p = SearchParams{};
    p.alpha = 1.5;
    CHECK_THROWS_AS(run_search(g, Mode::euclidean, p), ConfigError);
    p = SearchParams{};
    p.complete = false;
    CHECK_THROWS_AS(run_search(g, Mode::euclidean, p), ConfigError);  // non-gad mode
    // the reference search is always exhaustive and ignores the complete flag
    p = SearchParams{};
    p.complete = false;
    p.gamma = 1.5;
    const auto [ni, nis] = naive_search(g, Mode::gad1, p);
    p.complete = true;
    const auto [nc, ncs] = naive_search(g, Mode::gad1, p);
    REQUIRE(ni.entries.size() == nc.entries.size());
    for (size_t i = 0; i < ni.entries.size(); ++i)
        CHECK(ni.entries[i].eval == nc.entries[i].eval);
    // no type yields a configuration at n = 7 for the translation-only template
    const GoalPolygon g7 = synthetic_goal(7, 5);
    p = SearchParams{};
    p.types = {IhType::IH1};
    CHECK_THROWS_AS(run_search(g7, Mode::euclidean, p), EmptySearchError);
}
