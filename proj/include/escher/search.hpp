#pragma once

#include <string>
#include <utility>
#include <vector>

#include "escher/solvers.hpp"

namespace escher {

enum class Mode { euclidean, we, ad, wad, gad1, gad2 };

std::string mode_name(Mode m);
Mode mode_from_name(const std::string& name);
bool is_gad(Mode m);

// One scored triplet (type, k, j). For the adjacent-difference family the
// stored xi_star refers to the difference basis; u_star is always the
// reconstructed full-space tile.
struct Candidate {
    IhType type = IhType::IH1;
    std::vector<int> k;
    int j = 1;
    double eval = 0.0;
    Eigen::VectorXd xi_star;
    CoordVec u_star;
    bool simple = false;
};

// Ascending (eval, type, k, j).
bool candidate_before(const Candidate& a, const Candidate& b);

struct TopK {
    int capacity = 10;
    std::vector<Candidate> entries;  // sorted by candidate_before

    // eval of the capacity-th entry; +infinity while underfull.
    double threshold() const;
    // Would a candidate with this key enter the current list?
    bool would_accept(double eval, IhType type, const std::vector<int>& k, int j) const;
    // Sorted insert, truncating to capacity. Returns true if the candidate stayed.
    bool offer(Candidate cand);
};

struct TypeStats {
    long long cheap_evals = 0;
    long long full_evals = 0;
    long long pruned = 0;
};

struct SearchStats {
    long long cheap_evals = 0;
    long long full_evals = 0;
    long long pruned = 0;
    double wall_time = 0.0;  // seconds
    std::vector<std::pair<IhType, TypeStats>> per_type;
};

// Optional cheap-tier lower bound consulted for IH4/IH5/IH6.
// coordinate_subset: minimize the objective over a fixed subset of the points
// (rows of both coordinate blocks); that restricted minimum never exceeds the
// full minimum.
enum class BoundKind { none, coordinate_subset };

struct BoundProvider {
    BoundKind kind = BoundKind::none;
    int subset_points = 4;
};

struct SearchParams {
    double gamma = 1.4;
    double alpha = 0.9;
    int topk = 10;
    std::vector<IhType> types{all_types.begin(), all_types.end()};
    bool complete = true;  // false enables the heuristic gate (gad modes only)
    int workers = 1;
    BoundProvider bound;
    bool gad2_admit_crossing = false;
};

// Exhaustive scan over (type, k, j) with the mode's two-tier evaluation and
// threshold pruning. Deterministic for fixed inputs, any worker count.
std::pair<TopK, SearchStats> run_search(const GoalPolygon& goal, Mode mode, const SearchParams& params);

// Full-tier eval for every triplet, no pruning; reference oracle.
std::pair<TopK, SearchStats> naive_search(const GoalPolygon& goal, Mode mode, const SearchParams& params);

// Standalone bound evaluation for one triplet (testing / diagnostics).
double lower_bound(const BoundProvider& provider, const Configuration& c, int j, const GoalPolygon& goal,
                   Mode mode);

}  // namespace escher
