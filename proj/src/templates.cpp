#include "escher/templates.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "escher/errors.hpp"

namespace escher {

namespace {

constexpr double pi = 3.14159265358979323846;

Eigen::Matrix2d rot_mat(double deg) {
    const double r = deg * pi / 180.0;
    Eigen::Matrix2d R;
    R << std::cos(r), -std::sin(r), std::sin(r), std::cos(r);
    return R;
}

Eigen::Matrix2d mirror_about_y() {
    Eigen::Matrix2d M;
    M << -1.0, 0.0, 0.0, 1.0;
    return M;
}

Eigen::Matrix2d mirror_about_x() {
    Eigen::Matrix2d M;
    M << 1.0, 0.0, 0.0, -1.0;
    return M;
}

EdgeRule trans(int s, int t) {
    EdgeRule r;
    r.kind = RuleKind::trans_pair;
    r.s = s;
    r.t = t;
    r.M.setIdentity();
    return r;
}

EdgeRule sedge(int s) {
    EdgeRule r;
    r.kind = RuleKind::s_edge;
    r.s = s;
    r.M.setIdentity();
    return r;
}

EdgeRule rot(int s, double deg) {
    EdgeRule r;
    r.kind = RuleKind::rot_pair;
    r.s = s;
    r.t = s + 1;
    r.angle_deg = deg;
    r.M.setIdentity();
    return r;
}

EdgeRule glide(int s, int t, const Eigen::Matrix2d& M) {
    EdgeRule r;
    r.kind = RuleKind::glide_pair;
    r.s = s;
    r.t = t;
    r.M = M;
    return r;
}

struct TemplateDef {
    int S = 0;
    std::vector<EdgeRule> rules;
    std::string kinds;
    bool procrustes = false;
};

const TemplateDef& def_of(IhType t) {
    static const std::array<TemplateDef, 10> defs = [] {
        const Eigen::Matrix2d MY = mirror_about_y();
        const Eigen::Matrix2d MX = mirror_about_x();
        std::array<TemplateDef, 10> d;
        d[0] = {6, {trans(1, 4), trans(2, 5), trans(3, 6)}, "JJJJJJ", false};                 // IH1
        d[1] = {6, {glide(1, 4, MY), trans(2, 5), glide(3, 6, MY)}, "JJJJJJ", true};          // IH2
        d[2] = {6, {glide(1, 3, MY), trans(2, 5), glide(4, 6, MY)}, "JJJJJJ", true};          // IH3
        d[3] = {6, {trans(1, 4), sedge(2), sedge(3), sedge(5), sedge(6)}, "JSSJSS", false};   // IH4
        d[4] = {6, {sedge(1), glide(2, 5, MY), sedge(3), glide(4, 6, MX)}, "SJSJJJ", true};   // IH5
        d[5] = {6, {glide(1, 4, MY), sedge(2), glide(3, 6, MY), sedge(5)}, "JSJJSJ", true};   // IH6
        d[6] = {6, {rot(1, 120.0), rot(3, 120.0), rot(5, 120.0)}, "JJJJJJ", false};           // IH7
        d[7] = {5, {rot(1, 60.0), rot(3, 120.0), sedge(5)}, "JJJJS", false};                  // IH21
        d[8] = {5, {rot(1, 90.0), rot(3, 90.0), sedge(5)}, "JJJJS", false};                   // IH28
        d[9] = {4, {trans(1, 3), sedge(2), sedge(4)}, "JSJS", false};                         // IH47
        return d;
    }();
    return defs[static_cast<size_t>(t)];
}

// Follower point: value = CL * leader + sum of Cv * tiling-vertex values.
struct Follower {
    int point = 0;   // 1-based tile point index
    int leader = 0;  // 1-based tile point index, 0 for pinned midpoints
    Eigen::Matrix2d CL;
    std::vector<std::pair<int, Eigen::Matrix2d>> verts;  // (edge index s, coefficient on V_s)
};

struct Roles {
    std::vector<int> leaders;          // ascending tile point indices
    std::vector<Follower> followers;   // includes pinned midpoints (leader = 0)
};

int wrap_point(int p, int n) { return (p - 1) % n + 1; }
int wrap_edge(int s, int S) { return (s - 1) % S + 1; }

Roles collect_roles(const Configuration& c, const std::vector<int>& h) {
    const TemplateDef& d = def_of(c.type);
    const int n = c.n;
    const int S = d.S;
    auto H = [&](int s) { return h[static_cast<size_t>(wrap_edge(s, S)) - 1]; };
    const Eigen::Matrix2d I = Eigen::Matrix2d::Identity();
    Roles roles;
    for (const EdgeRule& r : d.rules) {
        const int ks = c.k[static_cast<size_t>(r.s) - 1];
        switch (r.kind) {
            case RuleKind::trans_pair:
                for (int i = 1; i <= ks; ++i) {
                    roles.leaders.push_back(H(r.s) + i);
                    Follower f;
                    f.point = wrap_point(H(r.t + 1) - i + n, n);
                    f.leader = H(r.s) + i;
                    f.CL = I;
                    f.verts = {{wrap_edge(r.t + 1, S), I}, {r.s, -I}};
                    roles.followers.push_back(std::move(f));
                }
                break;
            case RuleKind::s_edge: {
                for (int i = 1; i <= ks / 2; ++i) {
                    roles.leaders.push_back(H(r.s) + i);
                    Follower f;
                    f.point = wrap_point(H(r.s + 1) - i + n, n);
                    f.leader = H(r.s) + i;
                    f.CL = -I;
                    f.verts = {{r.s, I}, {wrap_edge(r.s + 1, S), I}};
                    roles.followers.push_back(std::move(f));
                }
                if (ks % 2 == 1) {  // odd count: the middle point sits at the chord midpoint
                    Follower f;
                    f.point = H(r.s) + (ks + 1) / 2;
                    f.leader = 0;
                    f.CL.setZero();
                    f.verts = {{r.s, 0.5 * I}, {wrap_edge(r.s + 1, S), 0.5 * I}};
                    roles.followers.push_back(std::move(f));
                }
                break;
            }
            case RuleKind::rot_pair: {
                const Eigen::Matrix2d R = rot_mat(-r.angle_deg);
                for (int i = 1; i <= ks; ++i) {
                    roles.leaders.push_back(H(r.s + 1) + i);
                    Follower f;
                    f.point = wrap_point(H(r.s + 1) - i + n, n);
                    f.leader = H(r.s + 1) + i;
                    f.CL = R;
                    f.verts = {{wrap_edge(r.s + 1, S), I - R}};
                    roles.followers.push_back(std::move(f));
                }
                break;
            }
            case RuleKind::glide_pair:
                for (int i = 1; i <= ks; ++i) {
                    roles.leaders.push_back(H(r.t) + i);
                    Follower f;
                    f.point = H(r.s) + i;
                    f.leader = H(r.t) + i;
                    f.CL = r.M;
                    f.verts = {{r.s, I}, {r.t, -r.M}};
                    roles.followers.push_back(std::move(f));
                }
                break;
        }
    }
    std::sort(roles.leaders.begin(), roles.leaders.end());
    return roles;
}

// Tiling-vertex closure rows (the i = k_s + 1 instances of each pair rule),
// over the 2S vertex unknowns laid out (X_1..X_S, Y_1..Y_S).
Eigen::MatrixXd vertex_rows(const Configuration& c) {
    const TemplateDef& d = def_of(c.type);
    const int S = d.S;
    const Eigen::Matrix2d I = Eigen::Matrix2d::Identity();
    std::vector<std::map<int, Eigen::Matrix2d>> rows;
    auto add = [&](std::map<int, Eigen::Matrix2d>& row, int s, const Eigen::Matrix2d& C) {
        const int v = wrap_edge(s, S);
        auto [it, inserted] = row.emplace(v, C);
        if (!inserted) it->second += C;
    };
    for (const EdgeRule& r : d.rules) {
        std::map<int, Eigen::Matrix2d> row;
        switch (r.kind) {
            case RuleKind::trans_pair:
                add(row, r.s + 1, I);
                add(row, r.s, -I);
                add(row, r.t, -I);
                add(row, r.t + 1, I);
                break;
            case RuleKind::rot_pair: {
                const Eigen::Matrix2d R = rot_mat(-r.angle_deg);
                add(row, r.s, I);
                add(row, r.s + 1, -I + R);
                add(row, r.s + 2, -R);
                break;
            }
            case RuleKind::glide_pair:
                add(row, r.s + 1, I);
                add(row, r.s, -I);
                add(row, r.t + 1, -r.M);
                add(row, r.t, r.M);
                break;
            case RuleKind::s_edge:
                continue;  // S edges do not constrain their endpoints
        }
        rows.push_back(std::move(row));
    }
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * static_cast<int>(rows.size()), 2 * S);
    for (size_t r = 0; r < rows.size(); ++r) {
        for (const auto& [v, C] : rows[r]) {
            const int xcol = v - 1;
            const int ycol = S + v - 1;
            A(2 * r, xcol) += C(0, 0);
            A(2 * r, ycol) += C(0, 1);
            A(2 * r + 1, xcol) += C(1, 0);
            A(2 * r + 1, ycol) += C(1, 1);
        }
    }
    return A;
}

Eigen::MatrixXd vertex_kernel(const Configuration& c) {
    const int S = def_of(c.type).S;
    const Eigen::MatrixXd A = vertex_rows(c);
    if (A.rows() == 0) return Eigen::MatrixXd::Identity(2 * S, 2 * S);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double tol = 1e-10 * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > tol) ++rank;
    return svd.matrixV().rightCols(2 * S - rank);
}

std::vector<std::pair<int, double>> sparsify(const Eigen::VectorXd& v) {
    std::vector<std::pair<int, double>> col;
    for (int i = 0; i < v.size(); ++i)
        if (v(i) != 0.0) col.emplace_back(i, v(i));
    return col;
}

}  // namespace

std::string type_name(IhType t) {
    static const std::array<std::string, 10> names = {"IH1", "IH2",  "IH3",  "IH4",  "IH5",
                                                      "IH6", "IH7",  "IH21", "IH28", "IH47"};
    return names[static_cast<size_t>(t)];
}

IhType type_from_name(const std::string& name) {
    for (IhType t : all_types)
        if (type_name(t) == name) return t;
    throw ConfigError("unknown template type: " + name);
}

bool procrustes_required(IhType t) { return def_of(t).procrustes; }

int edge_count(IhType t) { return def_of(t).S; }

std::string edge_kinds(IhType t) { return def_of(t).kinds; }

const std::vector<EdgeRule>& edge_rules(IhType t) { return def_of(t).rules; }

std::vector<Configuration> enumerate_configurations(IhType t, int n) {
    const TemplateDef& d = def_of(t);
    if (n < d.S)
        throw EmptyConfigurationSetError(type_name(t) + ": point count " + std::to_string(n) +
                                         " is below the vertex count " + std::to_string(d.S));
    std::vector<Configuration> out;
    auto emit = [&](std::initializer_list<int> k) { out.push_back(Configuration{t, std::vector<int>(k), n}); };
    const int interior = n - d.S;
    switch (t) {
        case IhType::IH1:
        case IhType::IH2: {
            if (interior % 2 != 0) break;
            const int q = interior / 2;
            for (int a = 0; a <= q; ++a)
                for (int b = 0; a + b <= q; ++b) emit({a, b, q - a - b, a, b, q - a - b});
            break;
        }
        case IhType::IH3: {
            if (interior % 2 != 0) break;
            const int q = interior / 2;
            for (int a = 0; a <= q; ++a)
                for (int b = 0; a + b <= q; ++b) emit({a, b, a, q - a - b, b, q - a - b});
            break;
        }
        case IhType::IH4: {
            for (int a = 0; 2 * a <= interior; ++a)
                for (int p = 0; 2 * a + p <= interior; ++p)
                    for (int q = 0; 2 * a + p + q <= interior; ++q)
                        for (int r = 0; 2 * a + p + q + r <= interior; ++r)
                            emit({a, p, q, a, r, interior - 2 * a - p - q - r});
            break;
        }
        case IhType::IH5: {
            for (int a = 0; a <= interior; ++a)
                for (int p = 0; a + 2 * p <= interior; ++p)
                    for (int q = 0; a + 2 * p + q <= interior; ++q) {
                        const int rem = interior - a - 2 * p - q;
                        if (rem % 2 != 0) continue;
                        emit({a, p, q, rem / 2, p, rem / 2});
                    }
            break;
        }
        case IhType::IH6: {
            for (int a = 0; 2 * a <= interior; ++a)
                for (int p = 0; 2 * a + p <= interior; ++p)
                    for (int q = 0; 2 * a + p + 2 * q <= interior; ++q)
                        emit({a, p, q, a, interior - 2 * a - p - 2 * q, q});
            break;
        }
        case IhType::IH7: {
            if (interior % 2 != 0) break;
            const int q = interior / 2;
            for (int a = 0; a <= q; ++a)
                for (int b = 0; a + b <= q; ++b) emit({a, a, b, b, q - a - b, q - a - b});
            break;
        }
        case IhType::IH21:
        case IhType::IH28: {
            for (int a = 0; 2 * a <= interior; ++a)
                for (int p = 0; 2 * a + 2 * p <= interior; ++p)
                    emit({a, a, p, p, interior - 2 * a - 2 * p});
            break;
        }
        case IhType::IH47: {
            for (int a = 0; 2 * a <= interior; ++a)
                for (int p = 0; 2 * a + p <= interior; ++p) emit({a, p, a, interior - 2 * a - p});
            break;
        }
    }
    return out;
}

std::vector<int> tiling_vertex_indices(const Configuration& c) {
    const TemplateDef& d = def_of(c.type);
    if (static_cast<int>(c.k.size()) != d.S)
        throw ConfigError(type_name(c.type) + ": k must have " + std::to_string(d.S) + " entries");
    std::vector<int> h(static_cast<size_t>(d.S) + 1);
    h[0] = 1;
    for (int s = 0; s < d.S; ++s) {
        if (c.k[static_cast<size_t>(s)] < 0) throw ConfigError("negative interior point count");
        h[static_cast<size_t>(s) + 1] = h[static_cast<size_t>(s)] + c.k[static_cast<size_t>(s)] + 1;
    }
    if (h[static_cast<size_t>(d.S)] != c.n + 1)
        throw ConfigError(type_name(c.type) + ": k entries sum to " + std::to_string(h[static_cast<size_t>(d.S)] - 1) +
                          " points, configuration says " + std::to_string(c.n));
    // Membership predicate: glued partner edges carry equal interior counts.
    auto kv = [&](int s) { return c.k[static_cast<size_t>(wrap_edge(s, d.S)) - 1]; };
    for (const EdgeRule& r : d.rules) {
        bool ok = true;
        switch (r.kind) {
            case RuleKind::trans_pair:
            case RuleKind::glide_pair: ok = kv(r.s) == kv(r.t); break;
            case RuleKind::rot_pair: ok = kv(r.s) == kv(r.s + 1); break;
            case RuleKind::s_edge: break;
        }
        if (!ok)
            throw ConfigError(type_name(c.type) + ": k is not a member of the template's set (edge " +
                              std::to_string(r.s) + " mismatch)");
    }
    return h;
}

ConstraintSystem build_constraints(const Configuration& c) {
    const TemplateDef& d = def_of(c.type);
    const std::vector<int> h = tiling_vertex_indices(c);
    const int n = c.n;
    const int S = d.S;
    auto H = [&](int s) { return h[static_cast<size_t>(wrap_edge(s, S)) - 1]; };
    const Eigen::Matrix2d I = Eigen::Matrix2d::Identity();

    // One block row = { point -> 2x2 coefficient }, accumulated.
    std::vector<std::map<int, Eigen::Matrix2d>> rows;
    auto add = [&](std::map<int, Eigen::Matrix2d>& row, int p, const Eigen::Matrix2d& C) {
        const int q = wrap_point(p + 2 * n, n);
        auto [it, inserted] = row.emplace(q, C);
        if (!inserted) it->second += C;
    };
    for (const EdgeRule& r : d.rules) {
        const int ks = c.k[static_cast<size_t>(r.s) - 1];
        switch (r.kind) {
            case RuleKind::trans_pair:
                for (int i = 1; i <= ks + 1; ++i) {
                    std::map<int, Eigen::Matrix2d> row;
                    add(row, H(r.s) + i, I);
                    add(row, H(r.s), -I);
                    add(row, H(r.t + 1) - i, -I);
                    add(row, H(r.t + 1), I);
                    rows.push_back(std::move(row));
                }
                break;
            case RuleKind::s_edge:
                for (int i = 1; i <= (ks + 1) / 2; ++i) {
                    std::map<int, Eigen::Matrix2d> row;
                    add(row, H(r.s) + i, I);
                    add(row, H(r.s), -I);
                    add(row, H(r.s + 1) - i, I);
                    add(row, H(r.s + 1), -I);
                    rows.push_back(std::move(row));
                }
                break;
            case RuleKind::rot_pair: {
                const Eigen::Matrix2d R = rot_mat(-r.angle_deg);
                for (int i = 1; i <= ks + 1; ++i) {
                    std::map<int, Eigen::Matrix2d> row;
                    add(row, H(r.s + 1) - i, I);
                    add(row, H(r.s + 1) + i, -R);
                    add(row, H(r.s + 1), R - I);
                    rows.push_back(std::move(row));
                }
                break;
            }
            case RuleKind::glide_pair:
                for (int i = 1; i <= ks + 1; ++i) {
                    std::map<int, Eigen::Matrix2d> row;
                    add(row, H(r.s) + i, I);
                    add(row, H(r.s), -I);
                    add(row, H(r.t) + i, -r.M);
                    add(row, H(r.t), r.M);
                    rows.push_back(std::move(row));
                }
                break;
        }
    }

    std::vector<Eigen::Triplet<double>> trips;
    for (size_t r = 0; r < rows.size(); ++r) {
        for (const auto& [p, C] : rows[r]) {
            const int xcol = p - 1;
            const int ycol = n + p - 1;
            const int rx = static_cast<int>(2 * r);
            const int ry = rx + 1;
            if (C(0, 0) != 0.0) trips.emplace_back(rx, xcol, C(0, 0));
            if (C(0, 1) != 0.0) trips.emplace_back(rx, ycol, C(0, 1));
            if (C(1, 0) != 0.0) trips.emplace_back(ry, xcol, C(1, 0));
            if (C(1, 1) != 0.0) trips.emplace_back(ry, ycol, C(1, 1));
        }
    }
    ConstraintSystem sys;
    sys.A.resize(static_cast<int>(2 * rows.size()), 2 * n);
    sys.A.setFromTriplets(trips.begin(), trips.end());
    return sys;
}

Eigen::MatrixXd BasisMatrix::dense() const {
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(rows, m());
    for (int c = 0; c < m(); ++c)
        for (const auto& [i, v] : cols[static_cast<size_t>(c)]) B(i, c) = v;
    return B;
}

Eigen::VectorXd BasisMatrix::apply_transpose(const CoordVec& v) const {
    Eigen::VectorXd out(m());
    for (int c = 0; c < m(); ++c) {
        double s = 0.0;
        for (const auto& [i, val] : cols[static_cast<size_t>(c)]) s += val * v(i);
        out(c) = s;
    }
    return out;
}

CoordVec BasisMatrix::apply(const Eigen::VectorXd& xi) const {
    CoordVec out = CoordVec::Zero(rows);
    for (int c = 0; c < m(); ++c)
        for (const auto& [i, val] : cols[static_cast<size_t>(c)]) out(i) += val * xi(c);
    return out;
}

BasisMatrix build_basis(const Configuration& c, bool orthonormalize) {
    const std::vector<int> h = tiling_vertex_indices(c);
    const int n = c.n;
    const int S = def_of(c.type).S;
    const Roles roles = collect_roles(c, h);
    auto xrow = [&](int p) { return p - 1; };
    auto yrow = [&](int p) { return n + p - 1; };

    // Follower lookup by leader point.
    std::map<int, const Follower*> by_leader;
    for (const Follower& f : roles.followers)
        if (f.leader != 0) by_leader[f.leader] = &f;

    BasisMatrix B;
    B.rows = 2 * n;

    // Interior columns: leader displacement propagated to its single follower.
    for (int p : roles.leaders) {
        const Follower& f = *by_leader.at(p);
        for (int axis = 0; axis < 2; ++axis) {
            std::vector<std::pair<int, double>> col;
            col.emplace_back(axis == 0 ? xrow(p) : yrow(p), 1.0);
            const double cx = f.CL(0, axis);
            const double cy = f.CL(1, axis);
            if (cx != 0.0) col.emplace_back(xrow(f.point), cx);
            if (cy != 0.0) col.emplace_back(yrow(f.point), cy);
            std::sort(col.begin(), col.end());
            B.cols.push_back(std::move(col));
        }
    }
    const int interior_cols = B.m();

    // Vertex columns: a kernel vector of the vertex closure rows, propagated to
    // followers and pinned midpoints.
    const Eigen::MatrixXd kernel = vertex_kernel(c);
    std::vector<Eigen::VectorXd> vertex_cols;
    for (int kcol = 0; kcol < kernel.cols(); ++kcol) {
        Eigen::VectorXd col = Eigen::VectorXd::Zero(2 * n);
        auto zx = [&](int s) { return kernel(wrap_edge(s, S) - 1, kcol); };
        auto zy = [&](int s) { return kernel(S + wrap_edge(s, S) - 1, kcol); };
        for (int s = 1; s <= S; ++s) {
            const int p = h[static_cast<size_t>(s) - 1];
            col(xrow(p)) = zx(s);
            col(yrow(p)) = zy(s);
        }
        for (const Follower& f : roles.followers) {
            double vx = 0.0, vy = 0.0;
            for (const auto& [s, C] : f.verts) {
                vx += C(0, 0) * zx(s) + C(0, 1) * zy(s);
                vy += C(1, 0) * zx(s) + C(1, 1) * zy(s);
            }
            col(xrow(f.point)) += vx;
            col(yrow(f.point)) += vy;
        }
        vertex_cols.push_back(std::move(col));
    }

    if (!orthonormalize) {
        for (const auto& col : vertex_cols) B.cols.push_back(sparsify(col));
        return B;
    }

    // Interior columns have pairwise disjoint or orthogonal supports: scaling
    // suffices.
    for (int ci = 0; ci < interior_cols; ++ci) {
        double norm2 = 0.0;
        for (const auto& [i, v] : B.cols[static_cast<size_t>(ci)]) norm2 += v * v;
        const double inv = 1.0 / std::sqrt(norm2);
        for (auto& [i, v] : B.cols[static_cast<size_t>(ci)]) v *= inv;
    }
    // Vertex columns overlap the interior columns at follower coordinates:
    // project those out (sparse dots), then modified Gram-Schmidt among
    // themselves. Two passes keep the residual orthogonality below 1e-10.
    std::vector<Eigen::VectorXd> done;
    for (Eigen::VectorXd& col : vertex_cols) {
        for (int pass = 0; pass < 2; ++pass) {
            for (int ci = 0; ci < interior_cols; ++ci) {
                double dot = 0.0;
                for (const auto& [i, v] : B.cols[static_cast<size_t>(ci)]) dot += v * col(i);
                if (dot != 0.0)
                    for (const auto& [i, v] : B.cols[static_cast<size_t>(ci)]) col(i) -= dot * v;
            }
            for (const Eigen::VectorXd& prev : done) col -= prev.dot(col) * prev;
        }
        const double norm = col.norm();
        if (norm < 1e-10)
            throw NumericalError(type_name(c.type) + ": vertex basis column collapsed during orthonormalization");
        col /= norm;
        done.push_back(col);
    }
    for (const auto& col : done) B.cols.push_back(sparsify(col));
    B.orthonormal = true;
    return B;
}

BasisMatrix build_difference_basis(const Configuration& c) {
    const BasisMatrix raw = build_basis(c, false);
    const int n = c.n;
    const int m = raw.m();
    // D = B' - B with B' the cyclic up-shift of each coordinate block.
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(2 * n, m);
    for (int col = 0; col < m; ++col) {
        for (const auto& [idx, val] : raw.cols[static_cast<size_t>(col)]) {
            const int block = idx < n ? 0 : 1;
            const int t = idx - block * n;
            D(idx, col) -= val;
            D(block * n + (t - 1 + n) % n, col) += val;
        }
    }
    // Modified Gram-Schmidt, two passes, dropping null directions
    // (translations vanish under differencing).
    BasisMatrix out;
    out.rows = 2 * n;
    std::vector<Eigen::VectorXd> kept;
    for (int col = 0; col < m; ++col) {
        Eigen::VectorXd v = D.col(col);
        for (int pass = 0; pass < 2; ++pass)
            for (const Eigen::VectorXd& prev : kept) v -= prev.dot(v) * prev;
        const double norm = v.norm();
        if (norm < 1e-10) continue;
        v /= norm;
        kept.push_back(std::move(v));
    }
    for (const auto& col : kept) out.cols.push_back(sparsify(col));
    out.orthonormal = true;
    return out;
}

bool validate_tile(const CoordVec& u, const Configuration& c) {
    if (u.size() != 2 * c.n) throw InvalidPolygonError("validate_tile: coordinate vector length mismatch");
    const ConstraintSystem sys = build_constraints(c);
    const Eigen::VectorXd r = sys.A * u;
    if (r.size() > 0 && r.cwiseAbs().maxCoeff() >= 1e-8) return false;
    return is_simple_polygon(unstack_coords(u));
}

}  // namespace escher
