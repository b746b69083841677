#include "bergman/set_tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bergman/errors.hpp"
#include "bergman/geometry.hpp"

namespace bergman {

SetTree::SetTree(std::vector<int> parent, const std::vector<std::size_t>& own_count,
                 std::vector<double> atom_mass)
    : parent_(std::move(parent)), mass_(std::move(atom_mass)) {
  const std::size_t n = parent_.size();
  if (n == 0) throw ValidationError("SetTree: empty tree");
  if (own_count.size() != n) throw ValidationError("SetTree: own_count size mismatch");
  if (parent_[0] != -1) throw ValidationError("SetTree: node 0 must be the root");
  depth_.assign(n, 0);
  for (std::size_t i = 1; i < n; ++i) {
    if (parent_[i] < 0 || parent_[i] >= int(i)) throw ValidationError("SetTree: parent must precede child");
    depth_[i] = depth_[parent_[i]] + 1;
  }
  // pre-order: the parent of i is an ancestor-or-self of i-1
  for (std::size_t i = 1; i < n; ++i) {
    int a = int(i) - 1;
    while (a > parent_[i]) a = parent_[a];
    if (a != parent_[i]) throw ValidationError("SetTree: nodes are not in DFS pre-order");
  }
  subtree_end_.resize(n);
  for (std::size_t i = 0; i < n; ++i) subtree_end_[i] = int(i) + 1;
  for (std::size_t i = n; i-- > 1;)
    subtree_end_[parent_[i]] = std::max(subtree_end_[parent_[i]], subtree_end_[i]);
  own_begin_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) own_begin_[i + 1] = own_begin_[i] + own_count[i];
  if (own_begin_[n] != mass_.size()) throw ValidationError("SetTree: atom count mismatch");
}

int SetTree::lowest_common_ancestor(int a, int b) const {
  while (a != b) {
    if (a > b)
      a = parent_[a];
    else
      b = parent_[b];
  }
  return a;
}

std::vector<double> SetTree::own_integrals(const std::vector<double>& f) const {
  if (!f.empty() && f.size() != atoms()) throw ValidationError("SetTree: atom values size mismatch");
  std::vector<double> out(size(), 0.0);
  for (std::size_t i = 0; i < size(); ++i) {
    KahanSum s;
    for (std::size_t a = own_begin_[i]; a < own_begin_[i + 1]; ++a)
      s.add(f.empty() ? mass_[a] : mass_[a] * f[a]);
    out[i] = s.value();
  }
  return out;
}

std::vector<double> SetTree::accumulate(std::vector<double> own) const {
  for (std::size_t i = size(); i-- > 1;) own[parent_[i]] += own[i];
  return own;
}

std::vector<double> SetTree::tent_integrals(const std::vector<double>& f) const {
  return accumulate(own_integrals(f));
}

std::vector<double> SetTree::to_atoms(const std::vector<double>& node_values) const {
  std::vector<double> out(atoms());
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t a = own_begin_[i]; a < own_begin_[i + 1]; ++a) out[a] = node_values[i];
  return out;
}

namespace {
std::vector<double> product(const std::vector<double>& a, const std::vector<double>& b) {
  if (b.empty()) return a;
  if (a.empty()) return b;
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}
}  // namespace

ArgMax joint_bp(const SetTree& t, const std::vector<double>& w, const std::vector<double>& s,
                double p, const Mask& mask, std::vector<double>* per_node) {
  if (!(p > 1.0)) throw ValidationError("joint B_p: p must exceed 1");
  const auto m = t.tent_integrals({});
  const auto W = t.tent_integrals(w);
  const auto S = t.tent_integrals(s);
  ArgMax best;
  if (per_node) per_node->assign(t.size(), 0.0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!selected(mask, i) || !(m[i] > 0.0)) continue;
    const double v = (W[i] / m[i]) * std::pow(S[i] / m[i], p - 1.0);
    if (per_node) (*per_node)[i] = v;
    if (best.node < 0 || v > best.value) best = {v, int(i)};
  }
  if (best.node < 0) throw NumericalError("joint B_p: every tent is empty");
  return best;
}

std::vector<double> tent_averages(const SetTree& t, const std::vector<double>& f,
                                  const std::vector<double>& v) {
  const auto num = t.tent_integrals(product(f, v));
  const auto den = t.tent_integrals(v);
  std::vector<double> out(t.size(), 0.0);
  for (std::size_t i = 0; i < t.size(); ++i)
    if (den[i] > 0.0) out[i] = num[i] / den[i];
  return out;
}

std::vector<double> sum_over_ancestors(const SetTree& t, const std::vector<double>& val,
                                       const Mask& mask) {
  std::vector<double> out(t.size(), 0.0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double base = i == 0 ? 0.0 : out[t.parent(i)];
    out[i] = base + (selected(mask, i) ? val[i] : 0.0);
  }
  return out;
}

std::vector<double> max_over_ancestors(const SetTree& t, const std::vector<double>& val,
                                       const Mask& mask) {
  std::vector<double> out(t.size(), 0.0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double base = i == 0 ? 0.0 : out[t.parent(i)];
    out[i] = selected(mask, i) ? std::max(base, val[i]) : base;
  }
  return out;
}

std::vector<double> lambda_apply(const SetTree& t, const std::vector<double>& f, const Mask& mask) {
  return sum_over_ancestors(t, tent_averages(t, f), mask);
}

ArgMax b_infty(const SetTree& t, const std::vector<double>& s, const Mask& mask,
               std::vector<double>* per_node) {
  const auto own_mass = t.own_integrals({});
  const auto m = t.accumulate(own_mass);
  const auto S = t.tent_integrals(s);
  std::vector<double> avg(t.size(), 0.0);
  for (std::size_t i = 0; i < t.size(); ++i)
    if (m[i] > 0.0) avg[i] = S[i] / m[i];
  std::vector<double> acc(t.size(), 0.0);
  for (std::size_t b = 0; b < t.size(); ++b) {
    if (!(own_mass[b] > 0.0)) continue;
    double run = 0.0;
    for (int g = int(b); g >= 0; g = t.parent(g)) {
      if (!selected(mask, g)) continue;
      run = std::max(run, avg[g]);
      acc[g] += own_mass[b] * run;
    }
  }
  ArgMax best;
  if (per_node) per_node->assign(t.size(), 0.0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!selected(mask, i) || !(S[i] > 0.0)) continue;
    const double v = acc[i] / S[i];
    if (per_node) (*per_node)[i] = v;
    if (best.node < 0 || v > best.value) best = {v, int(i)};
  }
  if (best.node < 0) throw NumericalError("B_infinity: every tent is empty");
  return best;
}

std::vector<double> testing_quotients(const SetTree& t, const std::vector<double>& w,
                                      const std::vector<double>& s, double p, const Mask& mask,
                                      bool localized) {
  const std::size_t n = t.size();
  const auto m = t.tent_integrals({});
  const auto S = t.tent_integrals(s);
  const auto w_own = t.own_integrals(w);
  std::vector<double> avg(n, 0.0), inv_mass(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    if (m[i] > 0.0) {
      avg[i] = S[i] / m[i];
      inv_mass[i] = 1.0 / m[i];
    }
  const auto D = sum_over_ancestors(t, avg, mask);
  // A[i]: sum of 1/|G| over selected strict ancestors G of i
  std::vector<double> A(n, 0.0), c(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    const int p_i = t.parent(i);
    A[i] = A[p_i] + (selected(mask, p_i) ? inv_mass[p_i] : 0.0);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double d_parent = i == 0 ? 0.0 : D[t.parent(i)];
    c[i] = localized ? -d_parent : S[i] * A[i] - d_parent;
  }
  std::vector<double> acc(n, 0.0);
  for (std::size_t b = 0; b < n; ++b) {
    if (w_own[b] == 0.0) continue;
    for (int g = int(b); g >= 0; g = t.parent(g)) {
      if (!selected(mask, g)) continue;
      const double v = std::abs(c[g] + D[b]);
      acc[g] += w_own[b] * (p == 2.0 ? v * v : std::pow(v, p));
    }
  }
  if (!localized)
    for (std::size_t i = 0; i < n; ++i) acc[i] = S[i] > 0.0 ? acc[i] / S[i] : 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (!selected(mask, i)) acc[i] = 0.0;
  return acc;
}

std::vector<int> Corona::members() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < member.size(); ++i)
    if (member[i]) out.push_back(int(i));
  return out;
}

Corona stopping_family(const SetTree& t, const std::vector<double>& f, const std::vector<double>& v,
                       int root, double factor) {
  const std::size_t n = t.size();
  if (root < 0 || std::size_t(root) >= n) throw ValidationError("stopping family: bad root");
  const auto avg = tent_averages(t, f, v);
  Corona c;
  c.member.assign(n, 0);
  c.generation.assign(n, -1);
  c.projection.assign(n, -1);
  c.member[root] = 1;
  c.generation[root] = 0;
  c.projection[root] = root;
  for (int i = root + 1; i < t.subtree_end(root); ++i) {
    const int F = c.projection[t.parent(i)];
    if (avg[i] > factor * avg[F]) {
      c.member[i] = 1;
      c.generation[i] = c.generation[F] + 1;
      c.projection[i] = i;
    } else {
      c.projection[i] = F;
    }
  }
  return c;
}

std::vector<double> major_measures(const SetTree& t, const Mask& mask, const std::vector<double>& v) {
  const std::size_t n = t.size();
  auto out = t.tent_integrals(v);
  std::vector<int> nearest(n, -1);  // nearest selected strict ancestor
  for (std::size_t i = 1; i < n; ++i) {
    const int p = t.parent(i);
    nearest[i] = selected(mask, p) ? p : nearest[p];
  }
  const auto tent = out;
  for (std::size_t i = 1; i < n; ++i)
    if (selected(mask, i) && nearest[i] >= 0) out[nearest[i]] -= tent[i];
  for (std::size_t i = 0; i < n; ++i) {
    if (!selected(mask, i)) out[i] = 0.0;
    // rounding can leave a tiny negative residue when the children cover Q
    if (out[i] < 1e-12 * tent[i]) out[i] = 0.0;
  }
  return out;
}

double sparsity_constant(const SetTree& t, const Mask& mask, const std::vector<double>& v) {
  const auto tent = t.tent_integrals(v);
  const auto maj = major_measures(t, mask, v);
  double tau = 1.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!selected(mask, i) || !(tent[i] > 0.0)) continue;
    if (!(maj[i] > 0.0)) return std::numeric_limits<double>::infinity();
    tau = std::max(tau, tent[i] / maj[i]);
  }
  return tau;
}

}  // namespace bergman
