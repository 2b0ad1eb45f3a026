#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "escher/errors.hpp"
#include "escher/goal.hpp"
#include "escher/render.hpp"
#include "escher/search.hpp"

namespace es = escher;
namespace fs = std::filesystem;

namespace {

// Manifest point coordinates carry full precision so a re-render from the
// manifest reproduces the SVGs byte for byte; everything else uses fmt_g.
std::string fmt17(double v) {
    char b[64];
    std::snprintf(b, sizeof b, "%.17g", v);
    return b;
}

std::string json_escape(const std::string& s) {
    std::string o;
    for (char c : s) {
        if (c == '"' || c == '\\') {
            o += '\\';
            o += c;
        } else if (c == '\n') {
            o += "\\n";
        } else {
            o += c;
        }
    }
    return o;
}

std::string json_string_or_null(const std::string& s) {
    return s.empty() ? "null" : "\"" + json_escape(s) + "\"";
}

struct RunConfig {
    std::string goal_path;
    std::string weights_path;
    std::string out_dir = "out";
    std::string mode_str = "euclidean";
    double gamma = 0.0;
    bool gamma_set = false;
    double alpha = 0.9;
    int topk = 10;
    int workers = 1;
    int extent = 2;
    int synthetic = 0;
    unsigned seed = 1;
    std::vector<std::string> type_names;
    bool force_complete = false;
    bool force_incomplete = false;
    bool gad2_admit = false;
};

es::GoalPolygon build_goal(const RunConfig& rc) {
    if (rc.synthetic == 0 && rc.goal_path.empty())
        throw es::ConfigError("either --goal or --synthetic is required");
    es::GoalPolygon g =
        rc.synthetic > 0 ? es::synthetic_goal(rc.synthetic, rc.seed) : es::load_goal(rc.goal_path);
    if (!rc.weights_path.empty()) es::apply_weights_file(g, rc.weights_path);
    return g;
}

es::SearchParams build_params(const RunConfig& rc, es::Mode mode, int n) {
    es::SearchParams p;
    if (es::is_gad(mode)) {
        if (!rc.gamma_set) throw es::ConfigError("gad modes require --gamma");
        p.gamma = rc.gamma;
    }
    p.alpha = rc.alpha;
    p.topk = rc.topk;
    p.workers = rc.workers;
    p.gad2_admit_crossing = rc.gad2_admit;
    if (!rc.type_names.empty()) {
        p.types.clear();
        for (const auto& s : rc.type_names) p.types.push_back(es::type_from_name(s));
    }
    if (rc.force_complete)
        p.complete = true;
    else if (rc.force_incomplete)
        p.complete = false;
    else
        p.complete = !(es::is_gad(mode) && n >= 90);
    return p;
}

std::string k_string(const std::vector<int>& k) {
    std::string s;
    for (size_t i = 0; i < k.size(); ++i) s += (i ? "," : "") + std::to_string(k[i]);
    return s;
}

void print_topk(const es::TopK& topk) {
    std::printf("%-4s %-5s %-16s %-4s %s\n", "rank", "type", "k", "j", "eval");
    for (size_t i = 0; i < topk.entries.size(); ++i) {
        const es::Candidate& c = topk.entries[i];
        std::printf("%-4zu %-5s %-16s %-4d %s\n", i + 1, es::type_name(c.type).c_str(),
                    k_string(c.k).c_str(), c.j, es::fmt_g(c.eval).c_str());
    }
}

void print_stats(const char* label, const es::SearchStats& st) {
    std::printf("%s: cheap=%lld full=%lld pruned=%lld wall=%ss\n", label, st.cheap_evals,
                st.full_evals, st.pruned, es::fmt_g(st.wall_time).c_str());
}

std::string manifest_json(const RunConfig& rc, es::Mode mode, const es::SearchParams& p,
                          const es::SearchStats& st, const es::TopK& topk) {
    std::string j = "{\n";
    j += "  \"mode\": \"" + es::mode_name(mode) + "\",\n";
    j += "  \"params\": {\n";
    j += "    \"goal\": " + (rc.synthetic > 0 ? "null" : json_string_or_null(rc.goal_path)) + ",\n";
    j += "    \"weights\": " + json_string_or_null(rc.weights_path) + ",\n";
    j += "    \"synthetic\": " + (rc.synthetic > 0 ? std::to_string(rc.synthetic) : "null") + ",\n";
    j += "    \"seed\": " + std::to_string(rc.seed) + ",\n";
    j += "    \"gamma\": " + (es::is_gad(mode) ? es::fmt_g(p.gamma) : "null") + ",\n";
    j += "    \"alpha\": " + es::fmt_g(p.alpha) + ",\n";
    j += "    \"topk\": " + std::to_string(p.topk) + ",\n";
    j += "    \"types\": [";
    for (size_t i = 0; i < p.types.size(); ++i)
        j += (i ? ", " : "") + ("\"" + es::type_name(p.types[i]) + "\"");
    j += "],\n";
    j += std::string("    \"complete\": ") + (p.complete ? "true" : "false") + ",\n";
    j += "    \"workers\": " + std::to_string(p.workers) + ",\n";
    j += "    \"extent\": " + std::to_string(rc.extent) + ",\n";
    j += std::string("    \"gad2_admit_crossing\": ") + (p.gad2_admit_crossing ? "true" : "false") +
         "\n  },\n";
    j += "  \"stats\": {\n";
    j += "    \"cheap_evals\": " + std::to_string(st.cheap_evals) + ",\n";
    j += "    \"full_evals\": " + std::to_string(st.full_evals) + ",\n";
    j += "    \"pruned\": " + std::to_string(st.pruned) + ",\n";
    j += "    \"wall_time\": " + es::fmt_g(st.wall_time) + ",\n";
    j += "    \"per_type\": [";
    for (size_t i = 0; i < st.per_type.size(); ++i) {
        const auto& [t, ts] = st.per_type[i];
        j += (i ? ", " : "") + std::string("{\"type\": \"") + es::type_name(t) +
             "\", \"cheap_evals\": " + std::to_string(ts.cheap_evals) +
             ", \"full_evals\": " + std::to_string(ts.full_evals) +
             ", \"pruned\": " + std::to_string(ts.pruned) + "}";
    }
    j += "]\n  },\n";
    j += "  \"candidates\": [\n";
    for (size_t i = 0; i < topk.entries.size(); ++i) {
        const es::Candidate& c = topk.entries[i];
        j += "    {\"type\": \"" + es::type_name(c.type) + "\", \"k\": [";
        for (size_t q = 0; q < c.k.size(); ++q) j += (q ? ", " : "") + std::to_string(c.k[q]);
        j += "], \"j\": " + std::to_string(c.j) + ", \"eval\": " + es::fmt_g(c.eval) +
             ", \"points\": [";
        const int n = static_cast<int>(c.u_star.size()) / 2;
        for (int t = 0; t < n; ++t)
            j += std::string(t ? ", " : "") + "[" + fmt17(c.u_star(t)) + ", " +
                 fmt17(c.u_star(n + t)) + "]";
        j += "]}";
        j += (i + 1 < topk.entries.size()) ? ",\n" : "\n";
    }
    j += "  ]\n}\n";
    return j;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw es::Error("cannot open output file: " + path);
    out << text;
}

int cmd_solve(const RunConfig& rc) {
    const es::Mode mode = es::mode_from_name(rc.mode_str);
    if (es::is_gad(mode) && !rc.gamma_set) throw es::ConfigError("gad modes require --gamma");
    const es::GoalPolygon g = build_goal(rc);
    const es::SearchParams p = build_params(rc, mode, g.n());
    const auto [topk, stats] = es::run_search(g, mode, p);
    fs::create_directories(rc.out_dir);
    write_file(rc.out_dir + "/manifest.json", manifest_json(rc, mode, p, stats, topk));
    for (size_t i = 0; i < topk.entries.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "/overlay_%02zu.svg", i + 1);
        es::render_overlay(topk.entries[i], g, rc.out_dir + name);
    }
    if (!topk.entries.empty())
        es::render_tiling(es::layout_tiling(topk.entries.front(), rc.extent),
                          rc.out_dir + "/tiling.svg");
    print_topk(topk);
    print_stats("search", stats);
    return 0;
}

bool topk_equal(const es::TopK& a, const es::TopK& b, std::string& why) {
    if (a.entries.size() != b.entries.size()) {
        why = "size " + std::to_string(a.entries.size()) + " vs " + std::to_string(b.entries.size());
        return false;
    }
    for (size_t i = 0; i < a.entries.size(); ++i) {
        const auto& x = a.entries[i];
        const auto& y = b.entries[i];
        if (x.type != y.type || x.k != y.k || x.j != y.j ||
            std::abs(x.eval - y.eval) > 1e-9 * (1.0 + std::abs(y.eval))) {
            why = "rank " + std::to_string(i + 1) + ": " + es::type_name(x.type) + "(" +
                  k_string(x.k) + ")@" + std::to_string(x.j) + " eval " + es::fmt_g(x.eval) +
                  " vs " + es::type_name(y.type) + "(" + k_string(y.k) + ")@" +
                  std::to_string(y.j) + " eval " + es::fmt_g(y.eval);
            return false;
        }
    }
    return true;
}

int cmd_bench(const RunConfig& rc) {
    const es::Mode mode = es::mode_from_name(rc.mode_str);
    if (es::is_gad(mode) && !rc.gamma_set) throw es::ConfigError("gad modes require --gamma");
    const es::GoalPolygon g = build_goal(rc);
    const es::SearchParams p = build_params(rc, mode, g.n());
    const auto [rk, rs] = es::run_search(g, mode, p);
    const auto [nk, ns] = es::naive_search(g, mode, p);
    std::printf("mode=%s n=%d topk=%d %s\n", es::mode_name(mode).c_str(), g.n(), p.topk,
                p.complete ? "complete" : "incomplete");
    print_stats("pruned search", rs);
    print_stats("naive search ", ns);
    std::printf("%-6s %-9s %-12s %-12s %-12s %-12s\n", "type", "configs", "run-cheap", "run-full",
                "run-pruned", "naive-full");
    for (size_t i = 0; i < rs.per_type.size(); ++i) {
        const auto& [t, ts] = rs.per_type[i];
        long long nconfigs = 0;
        try {
            nconfigs = static_cast<long long>(es::enumerate_configurations(t, g.n()).size());
        } catch (const es::EmptyConfigurationSetError&) {
        }
        const auto& nts = ns.per_type[i].second;
        std::printf("%-6s %-9lld %-12lld %-12lld %-12lld %-12lld\n", es::type_name(t).c_str(),
                    nconfigs, ts.cheap_evals, ts.full_evals, ts.pruned, nts.full_evals);
    }
    if (p.complete) {
        std::string why;
        if (!topk_equal(rk, nk, why)) {
            std::fprintf(stderr, "error: pruned and naive search disagree: %s\n", why.c_str());
            return 2;
        }
        std::printf("topk-match: OK (%zu entries)\n", rk.entries.size());
    } else {
        size_t kept = 0;
        for (const auto& c : nk.entries)
            for (const auto& d : rk.entries)
                if (c.type == d.type && c.k == d.k && c.j == d.j) {
                    ++kept;
                    break;
                }
        std::printf("overlooked: %zu of %zu reference entries missing\n", nk.entries.size() - kept,
                    nk.entries.size());
    }
    return 0;
}

int cmd_configs(const std::string& type_name_arg, int n, bool list) {
    const es::IhType t = es::type_from_name(type_name_arg);
    const auto configs = es::enumerate_configurations(t, n);
    if (list)
        for (const auto& c : configs) std::printf("%s\n", k_string(c.k).c_str());
    else
        std::printf("%zu\n", configs.size());
    return 0;
}

int cmd_edges(const RunConfig& rc, const std::string& variant) {
    if (!rc.gamma_set) throw es::ConfigError("edges requires --gamma");
    const es::GoalPolygon g = build_goal(rc);
    const es::GadVariant v = variant == "gad2" ? es::GadVariant::gad2 : es::GadVariant::gad1;
    const es::EdgeSet ec = es::build_ec(g, rc.gamma, v, rc.gad2_admit);
    for (const auto& [s, t] : ec.edges) {
        const double len = (g.points[static_cast<size_t>(s - 1)] -
                            g.points[static_cast<size_t>(t - 1)])
                               .norm();
        std::printf("%d %d %s\n", s, t, es::fmt_g(len).c_str());
    }
    return 0;
}

void add_goal_opts(CLI::App* sub, RunConfig& rc) {
    sub->add_option("--goal", rc.goal_path, "Goal polygon file");
    sub->add_option("--weights", rc.weights_path, "Weights file (P/E lines)");
    sub->add_option("--synthetic", rc.synthetic, "Generate a random goal with this many points");
    sub->add_option("--seed", rc.seed, "Seed for --synthetic");
}

void add_search_opts(CLI::App* sub, RunConfig& rc) {
    sub->add_option("--mode", rc.mode_str,
                    "Distance mode: euclidean|we|ad|wad|gad1|gad2 (default euclidean)");
    sub->add_option("--gamma", rc.gamma, "Candidate-edge length cutoff factor (gad modes; try 1.4)");
    sub->add_option("--alpha", rc.alpha, "Incomplete-search gate strength (default 0.9)");
    sub->add_option("--topk", rc.topk, "Number of candidates to keep (default 10)")
        ->check(CLI::Range(1, 1 << 20));
    sub->add_option("--types", rc.type_names, "Comma-separated template subset, e.g. IH1,IH47")
        ->delimiter(',');
    auto* comp = sub->add_flag("--complete", rc.force_complete, "Force the complete search");
    sub->add_flag("--incomplete", rc.force_incomplete, "Force the heuristic gate (gad modes)")
        ->excludes(comp);
    sub->add_option("--workers", rc.workers, "Worker threads (default 1)")
        ->check(CLI::Range(1, 4096));
    sub->add_flag("--gad2-admit-crossing", rc.gad2_admit,
                  "gad2: admit candidate edges that cross the polygon boundary");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Isohedral tile-shape search and rendering"};
    app.require_subcommand(1);
    RunConfig rc;

    CLI::App* solve = app.add_subcommand("solve", "Search and emit manifest + SVGs");
    add_goal_opts(solve, rc);
    add_search_opts(solve, rc);
    solve->add_option("--out", rc.out_dir, "Output directory (default out)");
    solve->add_option("--extent", rc.extent, "Tiling patch radius for rank 1 (default 2)")
        ->check(CLI::Range(0, 64));

    CLI::App* bench = app.add_subcommand("bench", "Run pruned and naive search side by side");
    add_goal_opts(bench, rc);
    add_search_opts(bench, rc);

    std::string cfg_type;
    int cfg_n = 0;
    bool cfg_list = false;
    CLI::App* configs = app.add_subcommand("configs", "Count configurations of a template");
    configs->add_option("type", cfg_type, "Template name, e.g. IH47")->required();
    configs->add_option("n", cfg_n, "Point count")->required();
    configs->add_flag("--list", cfg_list, "Print every k vector instead of the count");

    std::string edges_variant = "gad1";
    CLI::App* edges = app.add_subcommand("edges", "Print the candidate edge set");
    add_goal_opts(edges, rc);
    edges->add_option("--gamma", rc.gamma, "Candidate-edge length cutoff factor")->required();
    edges->add_option("--variant", edges_variant, "gad1|gad2 (default gad1)");
    edges->add_flag("--gad2-admit-crossing", rc.gad2_admit,
                    "gad2: admit candidate edges that cross the polygon boundary");

    CLI11_PARSE(app, argc, argv);
    rc.gamma_set = solve->count("--gamma") > 0 || bench->count("--gamma") > 0 ||
                   edges->count("--gamma") > 0;
    try {
        if (solve->parsed()) return cmd_solve(rc);
        if (bench->parsed()) return cmd_bench(rc);
        if (configs->parsed()) return cmd_configs(cfg_type, cfg_n, cfg_list);
        if (edges->parsed()) return cmd_edges(rc, edges_variant);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
