#include "escher/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

#include "escher/errors.hpp"

namespace escher {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// Gate comparisons admit a small slack so exact eval ties (resolved by the
// lexicographic candidate order) are never pruned away by float noise.
double gate_slack(double thr) { return 1e-7 * (1.0 + std::abs(thr)); }

CoordVec forward_differences(const CoordVec& w) {
    const int n = static_cast<int>(w.size()) / 2;
    CoordVec d(2 * n);
    for (int t = 0; t < n; ++t) {
        d(t) = w((t + 1) % n) - w(t);
        d(n + t) = w(n + (t + 1) % n) - w(n + t);
    }
    return d;
}

struct Rank2Top {
    double lambda;
    Eigen::Vector2d c;
};

Rank2Top top_of_2x2(double saa, double sbb, double sab) {
    const double disc = std::sqrt((saa - sbb) * (saa - sbb) + 4.0 * sab * sab);
    Rank2Top r;
    r.lambda = 0.5 * (saa + sbb + disc);
    if (disc <= 1e-12 * std::max(1.0, r.lambda)) {
        r.c = Eigen::Vector2d(1.0, 0.0);
        return r;
    }
    const Eigen::Vector2d c1(sab, r.lambda - saa);
    const Eigen::Vector2d c2(r.lambda - sbb, sab);
    r.c = (c1.squaredNorm() >= c2.squaredNorm() ? c1 : c2).normalized();
    return r;
}

void bt_apply(const BasisMatrix& B, const CoordVec& v, Eigen::VectorXd& out) {
    out.resize(B.m());
    for (int c = 0; c < B.m(); ++c) {
        double s = 0.0;
        for (const auto& [i, val] : B.cols[static_cast<size_t>(c)]) s += val * v(i);
        out(c) = s;
    }
}

struct ModeSetup {
    bool difference = false;  // cheap tier runs on the difference basis
    bool has_full = false;    // quadratic/generalized full tier exists
};

ModeSetup setup_of(Mode m) {
    switch (m) {
        case Mode::euclidean: return {false, false};
        case Mode::we: return {false, true};
        case Mode::ad: return {true, false};
        case Mode::wad:
        case Mode::gad1:
        case Mode::gad2: return {true, true};
    }
    return {};
}

struct GoalCache {
    int n = 0;
    ModeSetup setup;
    std::vector<CoordVec> vec;        // cheap-tier goal per j (w_j or its differences)
    std::vector<CoordVec> vec_c;      // quarter turns of vec
    std::vector<double> vec_norm2;    // ||vec||^2 per j
    std::vector<CoordVec> full_w;     // w_j (full tier)
    std::vector<GramMatrix> gram;     // full-tier Gram per j
    std::vector<double> full_const;   // w_j^T G_j w_j
    double r_factor = 1.0;
    bool heuristic_gate = false;      // incomplete gad: gate on r * cheap
    EdgeSet ec;
    bool has_ec = false;
};

double quad_form(const GramMatrix& G, const CoordVec& w) {
    const int n = G.n();
    return w.head(n).dot(G.K * w.head(n)) + w.tail(n).dot(G.K * w.tail(n));
}

GoalCache make_cache(const GoalPolygon& goal, Mode mode, const SearchParams& params, bool naive) {
    GoalCache gc;
    gc.n = goal.n();
    gc.setup = setup_of(mode);
    gc.heuristic_gate = !naive && !params.complete && is_gad(mode);
    if (is_gad(mode)) {
        gc.ec = build_ec(goal, params.gamma,
                         mode == Mode::gad1 ? GadVariant::gad1 : GadVariant::gad2,
                         params.gad2_admit_crossing);
        gc.has_ec = true;
        const double e0 = gc.n * average_edge_length(goal);
        gc.r_factor = params.alpha * gc.ec.total_length / e0;
    }
    for (int j = 1; j <= gc.n; ++j) {
        const CoordVec wj = reindex(goal, j);
        const CoordVec cheap = gc.setup.difference ? forward_differences(wj) : wj;
        gc.vec.push_back(cheap);
        gc.vec_c.push_back(quarter_turn(cheap));
        gc.vec_norm2.push_back(cheap.squaredNorm());
        if (gc.setup.has_full) {
            gc.full_w.push_back(wj);
            GramMatrix G;
            switch (mode) {
                case Mode::we: G = gram_we(goal, j); break;
                case Mode::wad: G = gram_wad(goal, j, true); break;
                case Mode::gad1:
                case Mode::gad2: G = gram_gad(goal, gc.ec, j, true); break;
                default: break;
            }
            gc.full_const.push_back(quad_form(G, wj));
            gc.gram.push_back(std::move(G));
        }
    }
    return gc;
}

// Lazily-built per-configuration artifacts.
struct ConfigJob {
    Configuration c;
    BasisMatrix cheapB;
    bool cheap_built = false;
    BasisMatrix fullB;  // only used in difference modes (otherwise cheapB serves)
    bool full_built = false;
    BasisMatrix rawB;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> recon_qr;  // of (B' - B)
    bool recon_built = false;
    Eigen::MatrixXd Us;  // orthonormal column basis of the bound row subset
    std::vector<int> subset_rows;
    bool bound_built = false;
};

void ensure_cheap(ConfigJob& job, bool difference) {
    if (job.cheap_built) return;
    job.cheapB = difference ? build_difference_basis(job.c) : build_basis(job.c, true);
    job.cheap_built = true;
}

const BasisMatrix& full_basis(ConfigJob& job, bool difference) {
    if (!difference) {
        ensure_cheap(job, false);
        return job.cheapB;
    }
    if (!job.full_built) {
        job.fullB = build_basis(job.c, true);
        job.full_built = true;
    }
    return job.fullB;
}

void ensure_recon(ConfigJob& job) {
    if (job.recon_built) return;
    job.rawB = build_basis(job.c, false);
    const int n = job.c.n;
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(2 * n, job.rawB.m());
    for (int col = 0; col < job.rawB.m(); ++col) {
        for (const auto& [idx, val] : job.rawB.cols[static_cast<size_t>(col)]) {
            const int block = idx < n ? 0 : 1;
            const int t = idx - block * n;
            D(idx, col) -= val;
            D(block * n + (t - 1 + n) % n, col) += val;
        }
    }
    job.recon_qr.compute(D);
    job.recon_built = true;
}

std::vector<int> bound_rows(int n, int q) {
    std::vector<int> rows;
    for (int t = 0; t < q; ++t) rows.push_back(t);
    for (int t = 0; t < q; ++t) rows.push_back(n + t);
    return rows;
}

Eigen::MatrixXd subset_orth(const BasisMatrix& B, const std::vector<int>& rows) {
    Eigen::MatrixXd Bs = Eigen::MatrixXd::Zero(static_cast<int>(rows.size()), B.m());
    std::vector<int> where(static_cast<size_t>(B.rows), -1);
    for (size_t r = 0; r < rows.size(); ++r) where[static_cast<size_t>(rows[r])] = static_cast<int>(r);
    for (int c = 0; c < B.m(); ++c)
        for (const auto& [i, v] : B.cols[static_cast<size_t>(c)])
            if (where[static_cast<size_t>(i)] >= 0) Bs(where[static_cast<size_t>(i)], c) = v;
    if (Bs.size() == 0) return Eigen::MatrixXd::Zero(static_cast<int>(rows.size()), 0);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Bs, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    const double tol = 1e-10 * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > tol) ++rank;
    return svd.matrixU().leftCols(rank);
}

double bound_value(const Eigen::MatrixXd& Us, const std::vector<int>& rows, const CoordVec& vec,
                   const CoordVec& vec_c, bool proc) {
    Eigen::VectorXd ws(static_cast<int>(rows.size()));
    for (size_t r = 0; r < rows.size(); ++r) ws(static_cast<int>(r)) = vec(rows[r]);
    const double base = ws.squaredNorm();
    if (Us.cols() == 0) return base;
    const Eigen::VectorXd a = Us.transpose() * ws;
    if (!proc) return base - a.squaredNorm();
    Eigen::VectorXd wcs(static_cast<int>(rows.size()));
    for (size_t r = 0; r < rows.size(); ++r) wcs(static_cast<int>(r)) = vec_c(rows[r]);
    const Eigen::VectorXd b = Us.transpose() * wcs;
    return base - top_of_2x2(a.squaredNorm(), b.squaredNorm(), a.dot(b)).lambda;
}

struct Scratch {
    Eigen::VectorXd a, b;
};

// Cheap-tier eval; leaves the projections in the scratch for materialization.
double cheap_eval(const BasisMatrix& B, const GoalCache& gc, int j0, bool proc, Scratch& s,
                  Eigen::Vector2d& c_out) {
    bt_apply(B, gc.vec[static_cast<size_t>(j0)], s.a);
    if (!proc) {
        c_out = Eigen::Vector2d(1.0, 0.0);
        return gc.vec_norm2[static_cast<size_t>(j0)] - s.a.squaredNorm();
    }
    bt_apply(B, gc.vec_c[static_cast<size_t>(j0)], s.b);
    const Rank2Top top = top_of_2x2(s.a.squaredNorm(), s.b.squaredNorm(), s.a.dot(s.b));
    c_out = top.c;
    return gc.vec_norm2[static_cast<size_t>(j0)] - top.lambda;
}

CoordVec reconstruct_tile(ConfigJob& job, const Eigen::VectorXd& xi_diff) {
    ensure_recon(job);
    const CoordVec ubar = job.cheapB.apply(xi_diff);
    const Eigen::VectorXd xi_full = job.recon_qr.solve(ubar);
    CoordVec u = job.rawB.apply(xi_full);
    const int n = job.c.n;
    const double cx = u.head(n).mean();
    const double cy = u.tail(n).mean();
    u.head(n).array() -= cx;  // the goal is centered at the origin
    u.tail(n).array() -= cy;
    return u;
}

struct ScanTarget {
    TopK* topk;
    TypeStats* ts;
    double external_thr;  // stale global threshold snapshot (parallel chunks)
};

double current_threshold(const ScanTarget& tgt) {
    return std::min(tgt.topk->threshold(), tgt.external_thr);
}

void offer_candidate(ScanTarget& tgt, Candidate cand) {
    cand.simple = is_simple_polygon(unstack_coords(cand.u_star));
    if (!cand.simple) return;  // rejected shapes never tighten the threshold
    tgt.topk->offer(std::move(cand));
}

void scan_configs(std::vector<ConfigJob>& jobs, Mode mode, const GoalCache& gc, const SearchParams& params,
                  bool gated, ScanTarget tgt) {
    Scratch scratch;
    Eigen::Vector2d comb;
    for (ConfigJob& job : jobs) {
        const IhType t = job.c.type;
        const bool proc = procrustes_required(t);
        const bool use_bound = gated && params.bound.kind == BoundKind::coordinate_subset &&
                               (t == IhType::IH4 || t == IhType::IH5 || t == IhType::IH6);
        for (int j0 = 0; j0 < gc.n; ++j0) {
            const double thr = current_threshold(tgt);
            if (use_bound) {
                ensure_cheap(job, gc.setup.difference);
                if (!job.bound_built) {
                    job.subset_rows = bound_rows(gc.n, std::min(params.bound.subset_points, gc.n));
                    job.Us = subset_orth(job.cheapB, job.subset_rows);
                    job.bound_built = true;
                }
                const double L = bound_value(job.Us, job.subset_rows, gc.vec[static_cast<size_t>(j0)],
                                             gc.vec_c[static_cast<size_t>(j0)], proc);
                if (!(L < thr + gate_slack(thr))) {
                    ++tgt.ts->pruned;
                    continue;
                }
            }
            if (!gc.setup.has_full) {
                // Single-tier mode: the cheap eval is the final eval.
                ensure_cheap(job, gc.setup.difference);
                const double eval = cheap_eval(job.cheapB, gc, j0, proc, scratch, comb);
                if (gated) ++tgt.ts->cheap_evals;
                ++tgt.ts->full_evals;
                if (tgt.topk->would_accept(eval, t, job.c.k, j0 + 1)) {
                    Candidate cand;
                    cand.type = t;
                    cand.k = job.c.k;
                    cand.j = j0 + 1;
                    cand.eval = eval;
                    cand.xi_star = proc ? Eigen::VectorXd(comb(0) * scratch.a + comb(1) * scratch.b)
                                        : scratch.a;
                    cand.u_star = gc.setup.difference ? reconstruct_tile(job, cand.xi_star)
                                                      : job.cheapB.apply(cand.xi_star);
                    offer_candidate(tgt, std::move(cand));
                }
                continue;
            }
            if (gated) {
                ensure_cheap(job, gc.setup.difference);
                const double ce = cheap_eval(job.cheapB, gc, j0, proc, scratch, comb);
                ++tgt.ts->cheap_evals;
                const double gate_val = gc.heuristic_gate ? gc.r_factor * ce : ce;
                if (!(gate_val < thr + gate_slack(thr))) {
                    ++tgt.ts->pruned;
                    continue;
                }
            }
            const BasisMatrix& B = full_basis(job, gc.setup.difference);
            const GramMatrix& G = gc.gram[static_cast<size_t>(j0)];
            const CoordVec& wj = gc.full_w[static_cast<size_t>(j0)];
            SolveResult res;
            try {
                res = proc ? solve_procrustes_general(B, G, wj) : solve_quadratic(B, G, wj);
            } catch (const NumericalError& e) {
                std::string ks;
                for (int kk : job.c.k) ks += std::to_string(kk) + ",";
                throw NumericalError(std::string(e.what()) + " [type=" + type_name(t) + " k=(" + ks +
                                     ") j=" + std::to_string(j0 + 1) + "]");
            }
            ++tgt.ts->full_evals;
            if (tgt.topk->would_accept(res.eval, t, job.c.k, j0 + 1)) {
                Candidate cand;
                cand.type = t;
                cand.k = job.c.k;
                cand.j = j0 + 1;
                cand.eval = res.eval;
                cand.xi_star = std::move(res.xi_star);
                cand.u_star = std::move(res.u_star);
                offer_candidate(tgt, std::move(cand));
            }
        }
    }
}

std::pair<TopK, SearchStats> drive(const GoalPolygon& goal, Mode mode, const SearchParams& params,
                                   bool naive) {
    if (params.topk < 1) throw ConfigError("topk must be at least 1");
    if (params.alpha < 0.0 || params.alpha > 1.0) throw ConfigError("alpha must lie in [0, 1]");
    if (params.workers < 1) throw ConfigError("workers must be at least 1");
    if (params.types.empty()) throw ConfigError("no template types selected");
    if (!params.complete && !is_gad(mode) && !naive)
        throw ConfigError("incomplete search is only defined for the gad modes");

    const auto t_start = std::chrono::steady_clock::now();
    const GoalCache gc = make_cache(goal, mode, params, naive);

    std::vector<IhType> ordered;
    for (IhType t : all_types)
        if (std::find(params.types.begin(), params.types.end(), t) != params.types.end())
            ordered.push_back(t);

    TopK topk;
    topk.capacity = params.topk;
    SearchStats stats;
    long long total_configs = 0;
    const bool gated = !naive;

    for (IhType t : ordered) {
        std::vector<Configuration> configs;
        try {
            configs = enumerate_configurations(t, goal.n());
        } catch (const EmptyConfigurationSetError&) {
            configs.clear();
        }
        total_configs += static_cast<long long>(configs.size());
        TypeStats ts;
        const int W = std::max(1, params.workers);
        if (W == 1 || static_cast<int>(configs.size()) < 2 * W) {
            std::vector<ConfigJob> jobs;
            jobs.reserve(configs.size());
            for (const auto& c : configs) jobs.push_back(ConfigJob{c});
            scan_configs(jobs, mode, gc, params, gated, ScanTarget{&topk, &ts, inf});
        } else {
            const double snapshot = topk.threshold();
            const size_t per = (configs.size() + static_cast<size_t>(W) - 1) / static_cast<size_t>(W);
            std::vector<TopK> partial(static_cast<size_t>(W));
            std::vector<TypeStats> pstats(static_cast<size_t>(W));
            std::vector<std::exception_ptr> errors(static_cast<size_t>(W));
            std::vector<std::thread> threads;
            for (int w = 0; w < W; ++w) {
                partial[static_cast<size_t>(w)].capacity = params.topk;
                threads.emplace_back([&, w] {
                    try {
                        const size_t lo = static_cast<size_t>(w) * per;
                        const size_t hi = std::min(configs.size(), lo + per);
                        std::vector<ConfigJob> jobs;
                        for (size_t i = lo; i < hi; ++i) jobs.push_back(ConfigJob{configs[i]});
                        scan_configs(jobs, mode, gc, params, gated,
                                     ScanTarget{&partial[static_cast<size_t>(w)], &pstats[static_cast<size_t>(w)],
                                                snapshot});
                    } catch (...) {
                        errors[static_cast<size_t>(w)] = std::current_exception();
                    }
                });
            }
            for (auto& th : threads) th.join();
            for (const auto& e : errors)
                if (e) std::rethrow_exception(e);
            for (int w = 0; w < W; ++w) {
                for (Candidate& cand : partial[static_cast<size_t>(w)].entries) topk.offer(std::move(cand));
                ts.cheap_evals += pstats[static_cast<size_t>(w)].cheap_evals;
                ts.full_evals += pstats[static_cast<size_t>(w)].full_evals;
                ts.pruned += pstats[static_cast<size_t>(w)].pruned;
            }
        }
        stats.cheap_evals += ts.cheap_evals;
        stats.full_evals += ts.full_evals;
        stats.pruned += ts.pruned;
        stats.per_type.emplace_back(t, ts);
    }
    if (total_configs == 0)
        throw EmptySearchError("no selected template admits a configuration at n = " + std::to_string(goal.n()));
    stats.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return {std::move(topk), std::move(stats)};
}

}  // namespace

std::string mode_name(Mode m) {
    switch (m) {
        case Mode::euclidean: return "euclidean";
        case Mode::we: return "we";
        case Mode::ad: return "ad";
        case Mode::wad: return "wad";
        case Mode::gad1: return "gad1";
        case Mode::gad2: return "gad2";
    }
    return "?";
}

Mode mode_from_name(const std::string& name) {
    for (Mode m : {Mode::euclidean, Mode::we, Mode::ad, Mode::wad, Mode::gad1, Mode::gad2})
        if (mode_name(m) == name) return m;
    throw ConfigError("unknown mode: " + name);
}

bool is_gad(Mode m) { return m == Mode::gad1 || m == Mode::gad2; }

bool candidate_before(const Candidate& a, const Candidate& b) {
    if (a.eval != b.eval) return a.eval < b.eval;
    if (a.type != b.type) return static_cast<int>(a.type) < static_cast<int>(b.type);
    if (a.k != b.k) return a.k < b.k;
    return a.j < b.j;
}

double TopK::threshold() const {
    if (static_cast<int>(entries.size()) < capacity) return inf;
    return entries.back().eval;
}

bool TopK::would_accept(double eval, IhType type, const std::vector<int>& k, int j) const {
    if (static_cast<int>(entries.size()) < capacity) return true;
    const Candidate& last = entries.back();
    if (eval != last.eval) return eval < last.eval;
    if (type != last.type) return static_cast<int>(type) < static_cast<int>(last.type);
    if (k != last.k) return k < last.k;
    return j < last.j;
}

bool TopK::offer(Candidate cand) {
    auto pos = std::upper_bound(entries.begin(), entries.end(), cand, candidate_before);
    if (static_cast<int>(entries.size()) >= capacity && pos == entries.end()) return false;
    entries.insert(pos, std::move(cand));
    if (static_cast<int>(entries.size()) > capacity) entries.pop_back();
    return true;
}

std::pair<TopK, SearchStats> run_search(const GoalPolygon& goal, Mode mode, const SearchParams& params) {
    return drive(goal, mode, params, false);
}

std::pair<TopK, SearchStats> naive_search(const GoalPolygon& goal, Mode mode, const SearchParams& params) {
    return drive(goal, mode, params, true);
}

double lower_bound(const BoundProvider& provider, const Configuration& c, int j, const GoalPolygon& goal,
                   Mode mode) {
    if (provider.kind == BoundKind::none) return -inf;
    const ModeSetup setup = setup_of(mode);
    const bool proc = procrustes_required(c.type);
    const BasisMatrix B = setup.difference ? build_difference_basis(c) : build_basis(c, true);
    const CoordVec wj = reindex(goal, j);
    const CoordVec vec = setup.difference ? forward_differences(wj) : wj;
    const CoordVec vec_c = quarter_turn(vec);
    const std::vector<int> rows = bound_rows(goal.n(), std::min(provider.subset_points, goal.n()));
    const Eigen::MatrixXd Us = subset_orth(B, rows);
    return bound_value(Us, rows, vec, vec_c, proc);
}

}  // namespace escher
