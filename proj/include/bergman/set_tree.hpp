#pragma once

#include <cstddef>
#include <vector>

namespace bergman {

// A finite family of nested sets indexed by a rooted tree stored in DFS
// pre-order. Node i "owns" a contiguous range of atoms; the tent of i is the
// union of the atoms owned by i and its descendants, which is again a
// contiguous range. Both the dyadic tents of a Bergman tree (atoms are
// quadrature nodes grouped by kube) and the dyadic intervals of the
// one-dimensional model (atoms are finest cells) are SetTrees.
class SetTree {
 public:
  SetTree() = default;
  // parent[0] must be -1 and parent[i] < i; own_count[i] atoms per node.
  SetTree(std::vector<int> parent, const std::vector<std::size_t>& own_count,
          std::vector<double> atom_mass);

  std::size_t size() const { return parent_.size(); }
  std::size_t atoms() const { return mass_.size(); }
  int parent(std::size_t i) const { return parent_[i]; }
  int subtree_end(std::size_t i) const { return subtree_end_[i]; }
  int depth(std::size_t i) const { return depth_[i]; }
  std::size_t own_begin(std::size_t i) const { return own_begin_[i]; }
  std::size_t own_end(std::size_t i) const { return own_begin_[i + 1]; }
  std::size_t tent_begin(std::size_t i) const { return own_begin_[i]; }
  std::size_t tent_end(std::size_t i) const { return own_begin_[subtree_end_[i]]; }
  const std::vector<double>& atom_mass() const { return mass_; }
  const std::vector<int>& parents() const { return parent_; }
  bool is_ancestor_or_self(std::size_t a, std::size_t b) const {
    return a <= b && int(b) < subtree_end_[a];
  }
  int lowest_common_ancestor(int a, int b) const;

  // Per-node sum over owned atoms of mass * f (f sized by atoms; empty f means 1).
  std::vector<double> own_integrals(const std::vector<double>& f) const;
  // Per-node sum over the tent.
  std::vector<double> tent_integrals(const std::vector<double>& f) const;
  // Accumulates own values up the tree into tent values.
  std::vector<double> accumulate(std::vector<double> own) const;
  // Expands per-node values to atoms.
  std::vector<double> to_atoms(const std::vector<double>& node_values) const;

 private:
  std::vector<int> parent_;
  std::vector<int> subtree_end_;
  std::vector<int> depth_;
  std::vector<std::size_t> own_begin_;
  std::vector<double> mass_;
};

// Membership mask over the nodes of a SetTree; an empty mask selects all nodes.
using Mask = std::vector<char>;
inline bool selected(const Mask& m, std::size_t i) { return m.empty() || m[i]; }

struct ArgMax {
  double value = 0.0;
  int node = -1;
};

// sup over selected tents of <w><s>^(p-1); all averages with respect to the atom masses.
ArgMax joint_bp(const SetTree& t, const std::vector<double>& w, const std::vector<double>& s,
                double p, const Mask& mask = {}, std::vector<double>* per_node = nullptr);

// sup over selected tents Q of (1/s(Q)) * integral over Q of M(s 1_Q), M the maximal
// operator of the selected family.
ArgMax b_infty(const SetTree& t, const std::vector<double>& s, const Mask& mask = {},
               std::vector<double>* per_node = nullptr);

// Averages of f over the selected tents; weight v (empty = unweighted) gives
// (integral f v)/(integral v). Zero-measure tents report 0.
std::vector<double> tent_averages(const SetTree& t, const std::vector<double>& f,
                                  const std::vector<double>& v = {});

// sum over selected tents containing each node of the given tent values (per node).
std::vector<double> sum_over_ancestors(const SetTree& t, const std::vector<double>& tent_values,
                                       const Mask& mask = {});
// max over selected tents containing each node of the given tent values (per node).
std::vector<double> max_over_ancestors(const SetTree& t, const std::vector<double>& tent_values,
                                       const Mask& mask = {});

// Lambda f = sum_Q <f>_Q 1_Q over the selected tents, per node.
std::vector<double> lambda_apply(const SetTree& t, const std::vector<double>& f,
                                 const Mask& mask = {});

// Testing quotients ||1_Q Lambda(1_Q s)||_{L^p(w)}^p / s(Q) for every selected Q
// (unselected entries are 0). With localized = true only tents L inside Q
// contribute to Lambda, and the quotient is not divided by s(Q).
std::vector<double> testing_quotients(const SetTree& t, const std::vector<double>& w,
                                      const std::vector<double>& s, double p,
                                      const Mask& mask = {}, bool localized = false);

// Stopping family of f with respect to the measure v (empty = atom masses)
// rooted at `root`: maximal descendants whose v-average of f exceeds twice the
// average of their stopping parent.
struct Corona {
  Mask member;                   // over all nodes
  std::vector<int> generation;   // -1 for non-members
  std::vector<int> projection;   // minimal member containing the node, -1 outside root
  std::vector<int> members() const;
};
Corona stopping_family(const SetTree& t, const std::vector<double>& f,
                       const std::vector<double>& v, int root = 0, double factor = 2.0);

// Majors E_Q = Q minus the tents of maximal selected proper descendants, measured
// with v (empty = atom masses). Returns v(E_Q) per selected node.
std::vector<double> major_measures(const SetTree& t, const Mask& mask, const std::vector<double>& v);
// max over selected Q of v(Q)/v(E_Q); infinity when some major is null.
double sparsity_constant(const SetTree& t, const Mask& mask, const std::vector<double>& v);

}  // namespace bergman
