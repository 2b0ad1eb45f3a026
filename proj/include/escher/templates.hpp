#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <array>
#include <string>
#include <utility>
#include <vector>

#include "escher/geometry.hpp"

namespace escher {

enum class IhType { IH1, IH2, IH3, IH4, IH5, IH6, IH7, IH21, IH28, IH47 };

inline constexpr std::array<IhType, 10> all_types = {
    IhType::IH1,  IhType::IH2,  IhType::IH3, IhType::IH4,  IhType::IH5,
    IhType::IH6,  IhType::IH7,  IhType::IH21, IhType::IH28, IhType::IH47};

std::string type_name(IhType t);
IhType type_from_name(const std::string& name);

// Types whose feasible set pins glide axes to fixed directions; their distance
// evaluation must optimize over a free rotation (Procrustes form).
bool procrustes_required(IhType t);

// Number of tiling edges (= tiling vertices) of the template.
int edge_count(IhType t);

// Edge kind letters in edge order, e.g. "JSJS": J = glued to a partner edge,
// S = symmetric about its own midpoint.
std::string edge_kinds(IhType t);

// Gluing rules for one template. Edges are 1-based.
//   trans_pair: edge s congruent-parallel to edge t (opposite traversal)
//   s_edge:     edge s symmetric about its chord midpoint
//   rot_pair:   edges s and s+1 glued by a rotation about their shared vertex
//   glide_pair: edge s is the mirror image (matrix M) of edge t, same traversal
enum class RuleKind { trans_pair, s_edge, rot_pair, glide_pair };

struct EdgeRule {
    RuleKind kind;
    int s = 0;
    int t = 0;              // partner edge (trans_pair / glide_pair)
    double angle_deg = 0.0; // rotation angle (rot_pair)
    Eigen::Matrix2d M;      // mirror matrix (glide_pair)
};

const std::vector<EdgeRule>& edge_rules(IhType t);

struct Configuration {
    IhType type;
    std::vector<int> k;  // interior points per tiling edge
    int n = 0;           // total point count
};

// All members of K_i at point count n, lexicographic in k. Throws
// EmptyConfigurationSetError when n is below the template's vertex count.
std::vector<Configuration> enumerate_configurations(IhType t, int n);

// h(s) per edge, 1-based, plus sentinel h(S+1) = n+1.
std::vector<int> tiling_vertex_indices(const Configuration& c);

// Homogeneous constraint system A u = 0 over the stacked coordinates.
struct ConstraintSystem {
    Eigen::SparseMatrix<double> A;  // rows x 2n
};
ConstraintSystem build_constraints(const Configuration& c);

// Sparse column basis of the constraint null space.
struct BasisMatrix {
    int rows = 0;  // 2n
    std::vector<std::vector<std::pair<int, double>>> cols;
    bool orthonormal = false;

    int m() const { return static_cast<int>(cols.size()); }
    Eigen::MatrixXd dense() const;
    Eigen::VectorXd apply_transpose(const CoordVec& v) const;  // B^T v
    CoordVec apply(const Eigen::VectorXd& xi) const;           // B xi
};

// Basis built in O(n): free points (tiling-vertex null space + one
// representative per glued pair / symmetric half-edge) propagated through the
// constraints. Orthonormal mode rescales the disjoint-support columns and
// runs modified Gram-Schmidt on the overlapping vertex columns.
BasisMatrix build_basis(const Configuration& c, bool orthonormalize);

// Orthonormal basis of the column space of (B' - B), where B' is B with each
// coordinate block's rows shifted up cyclically; spans the feasible stacked
// forward-difference vectors. Translation null directions drop out.
BasisMatrix build_difference_basis(const Configuration& c);

// True iff u satisfies the constraint system within 1e-8 and unstacks to a
// simple polygon.
bool validate_tile(const CoordVec& u, const Configuration& c);

}  // namespace escher
