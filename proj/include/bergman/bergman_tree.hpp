#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bergman/geometry.hpp"
#include "bergman/set_tree.hpp"

namespace bergman {

struct TreeParams {
  int dim = 1;
  double R = 0.7;
  double delta = 0.35;
  int depth = 8;
  // layer boundaries sit at Bergman radii n*R + radial_offset (n >= 1)
  double radial_offset = 0.0;
  // rotation of the candidate grids (radians; d = 2 rotates both Hopf angles)
  double rotation = 0.0;
  // d = 1: each level's net starts this fraction of its own spacing past the rotation
  double stagger = 0.0;
  // d = 1: candidates per minimal net spacing
  int candidate_oversampling = 16;
  // d = 2: candidate points on each sphere
  std::size_t sphere_candidates = 4096;
  std::size_t net_cap = 2'000'000;

  static TreeParams defaults(int dim);
  void validate() const;
  bool operator==(const TreeParams&) const = default;
};

struct TreeNode {
  int level = 0;
  int index = 1;          // j in 1..J_n
  BallPoint net_point{};  // z_j^n on S_{nR}; origin for the root
  BallPoint center{};     // c_j^n
  double angle = 0.0;     // d = 1: argument of the net point
  int parent = -1;
  std::vector<int> children;
};

// Minimal angular separation on the circle of Euclidean radius r giving Bergman distance `dist`.
double circle_spacing(double r, double dist);

// Candidate grid and greedy net on S_{level}. The net is a maximal 2*delta-separated
// subset of the candidates, in candidate order.
std::vector<BallPoint> sphere_candidates(int level, const TreeParams& params);
std::vector<BallPoint> build_sphere_net(int level, const TreeParams& params);

class BergmanTree {
 public:
  static BergmanTree build(const TreeParams& params);
  // Rebuild from stored net points (per level, in index order); parents are recomputed.
  static BergmanTree from_nets(const TreeParams& params, const std::vector<std::vector<BallPoint>>& nets);

  const TreeParams& params() const { return params_; }
  int dim() const { return params_.dim; }
  int depth() const { return params_.depth; }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const TreeNode& node(int id) const { return nodes_.at(id); }
  // node ids at level n in index order
  const std::vector<int>& level_nodes(int n) const { return levels_.at(n); }
  std::size_t level_count(int n) const { return levels_.at(n).size(); }
  int subtree_end(int id) const { return subtree_end_[id]; }
  bool is_ancestor_or_self(int a, int b) const { return a <= b && b < subtree_end_[a]; }
  std::vector<int> parent_vector() const;

  // Bergman radius of S_{nR} (shifted by the radial offset); 0 for n = 0.
  double layer_rho(int n) const;
  // Euclidean radius of S_{nR}
  double layer_radius(int n) const { return radius_.at(n); }
  // 1 - r^2 on S_{nR}
  double layer_gap(int n) const { return gap_.at(n); }
  double horizon_radius() const { return radius_.back(); }

  // Annulus index of zeta; throws OutOfDepthError beyond the deepest annulus.
  int level_of(const BallPoint& zeta) const;
  // Node at `level` whose patch contains the radial projection of zeta (zeta != 0 for level >= 1).
  int patch_of(int level, const BallPoint& zeta) const;
  int locate(const BallPoint& zeta) const;
  // locate without throwing: -1 beyond the horizon
  int try_locate(const BallPoint& zeta) const;
  bool kube_contains(int id, const BallPoint& zeta) const;
  bool tent_contains(int id, const BallPoint& zeta) const;

  // d = 1: the angular arc [lo, hi] (hi > lo) of the patch of a non-root node.
  std::pair<double, double> patch_arc(int id) const;
  // Exact kube volume for d = 1; throws for d = 2.
  double kube_volume(int id) const;

  std::string to_json() const;
  static BergmanTree from_json(const std::string& text);

 private:
  static BergmanTree assemble(const TreeParams& params, const std::vector<std::vector<BallPoint>>& nets,
                              const std::vector<std::vector<double>>& angles);
  std::size_t patch_index(int level, const BallPoint& zeta) const;

  TreeParams params_;
  std::vector<TreeNode> nodes_;
  std::vector<std::vector<int>> levels_;
  std::vector<int> subtree_end_;
  std::vector<double> radius_;  // index n = 0..depth+1, radius_[0] = 0
  std::vector<double> gap_;     // 1 - radius^2
  // d = 1 patches: per level, relative angles, lower boundaries, node ids
  std::vector<std::vector<double>> phi_;
  std::vector<std::vector<double>> bnd_;
  // d = 2 patches: unit directions of the net points per level
  std::vector<std::vector<BallPoint>> dirs_;
};

// Independent check of the kube partition on random points inside the horizon:
// each point must sit in the radial band of its kube and in the angular Voronoi
// cell of its net point (d = 1: also inside the patch arc). Also checks that the
// d = 1 patch arcs of every level tile the circle.
struct PartitionAudit {
  std::size_t samples = 0;
  std::size_t violations = 0;
  std::size_t tiling_gaps = 0;
};
PartitionAudit audit_partition(const BergmanTree& tree, std::size_t samples, std::uint64_t seed);

// Shifted copies of one tree: d = 1 staggers the nets and offsets the layers, d = 2 rotates and offsets.
std::vector<BergmanTree> build_tree_family(const TreeParams& params, int count);

// Rule with nodes placed inside every kube (d = 1): Gauss-Legendre in
// t = -log(1 - |z|^2) times uniform angles, masses rescaled to the exact kube
// volume, plus one ring beyond the horizon so the total mass is 1.
struct KubeRuleOptions {
  int radial = 3;
  int angular = 4;
  int outer_ring = 64;
};
struct KubeAdaptedRule {
  QuadratureRule rule;
  std::vector<int> node_kube;  // -1 beyond the horizon
};
KubeAdaptedRule build_kube_rule(const BergmanTree& tree, const KubeRuleOptions& opt = {});

// A tree bound to a quadrature rule: rule nodes grouped by kube in DFS order.
class TentIndex {
 public:
  TentIndex(const BergmanTree& tree, const QuadratureRule& rule);
  TentIndex(const BergmanTree& tree, const KubeAdaptedRule& kr);

  const BergmanTree& tree() const { return *tree_; }
  const QuadratureRule& rule() const { return *rule_; }
  const SetTree& sets() const { return sets_; }
  // rule node index of each atom
  const std::vector<std::uint32_t>& atom_node() const { return atom_node_; }
  // kube id of each rule node, -1 beyond the horizon
  const std::vector<int>& node_kube() const { return node_kube_; }
  // kube id of each atom
  const std::vector<int>& atom_kube() const { return atom_kube_; }
  std::size_t min_nodes_per_kube() const;
  std::size_t atoms() const { return atom_node_.size(); }

  // Evaluate a real function at every atom.
  template <class F>
  std::vector<double> sample(F&& f) const {
    std::vector<double> out(atom_node_.size());
    for (std::size_t a = 0; a < out.size(); ++a) out[a] = f(rule_->nodes[atom_node_[a]]);
    return out;
  }
  const BallPoint& atom_point(std::size_t a) const { return rule_->nodes[atom_node_[a]]; }

  // Calls fn(atom) for every atom in the Carleson tent (angular window search for d = 1).
  template <class Fn>
  void for_each_in(const CarlesonTent& t, Fn&& fn) const;

 private:
  void init(std::vector<int> node_kube);

  const BergmanTree* tree_;
  const QuadratureRule* rule_;
  std::vector<int> node_kube_;
  std::vector<std::uint32_t> atom_node_;
  std::vector<int> atom_kube_;
  SetTree sets_;
  // d = 1: atoms sorted by argument
  std::vector<double> atom_angle_sorted_;
  std::vector<std::uint32_t> atom_by_angle_;
};

struct SparsityCertificate {
  double tau_hat = 1.0;
  int argmax = 0;
  std::vector<double> per_node_ratios;  // 0 where the kube has no mass
  int depth_used = 0;
  bool starved = false;
  std::size_t min_nodes_per_kube = 0;
};
SparsityCertificate sparsity_certificate(const TentIndex& index, std::size_t min_nodes = 10);

struct DyadicCover {
  int tree = 0;
  int node = 0;
  double ratio = 0.0;  // nu(K_hat)/nu(T_z)
  double tent_volume = 0.0;
  double carleson_volume = 0.0;
  std::size_t violations = 0;
};
DyadicCover covering_dyadic_tent(const std::vector<const TentIndex*>& indices, const CarlesonTent& t);

struct CarlesonCover {
  CarlesonTent tent;
  double ratio = 0.0;  // nu(T_z)/nu(K_hat)
  std::size_t violations = 0;
};
CarlesonCover covering_carleson_tent(const TentIndex& index, int node);

// ---- template implementation ----

template <class Fn>
void TentIndex::for_each_in(const CarlesonTent& t, Fn&& fn) const {
  if (t.origin) {
    for (std::size_t a = 0; a < atom_node_.size(); ++a) fn(a);
    return;
  }
  if (tree_->dim() != 1) {
    for (std::size_t a = 0; a < atom_node_.size(); ++a)
      if (t.contains(atom_point(a))) fn(a);
    return;
  }
  const double r = t.apex.norm();
  const double h = 1.0 - r;
  const double c = 1.0 - h * h / (2.0 * (1.0 - h));
  const double pi = 3.14159265358979323846;
  const double half = c <= -1.0 ? pi : std::acos(c) * (1.0 + 1e-12) + 1e-15;
  if (half >= pi) {
    for (std::size_t a = 0; a < atom_node_.size(); ++a)
      if (t.contains(atom_point(a))) fn(a);
    return;
  }
  const double th = std::arg(t.apex.c[0]);
  auto scan = [&](double lo, double hi) {
    auto it = std::lower_bound(atom_angle_sorted_.begin(), atom_angle_sorted_.end(), lo);
    for (; it != atom_angle_sorted_.end() && *it <= hi; ++it) {
      const std::size_t a = atom_by_angle_[it - atom_angle_sorted_.begin()];
      if (t.contains(atom_point(a))) fn(a);
    }
  };
  // sorted angles live in [-pi, pi]
  double lo = th - half, hi = th + half;
  if (lo < -pi) {
    scan(lo + 2 * pi, pi);
    scan(-pi, hi);
  } else if (hi > pi) {
    scan(lo, pi);
    scan(-pi, hi - 2 * pi);
  } else {
    scan(lo, hi);
  }
}

}  // namespace bergman
