#pragma once

#include <Eigen/Dense>
#include <random>
#include <utility>
#include <vector>

#include "bergman/orlicz.hpp"
#include "bergman/set_tree.hpp"

namespace bergman {

// Dyadic intervals of [0, 1) of generations 0..depth as a SetTree; the atoms are
// the 2^depth finest cells in left-to-right order, each of mass 2^-depth.
class DyadicGrid {
 public:
  explicit DyadicGrid(int depth);
  int depth() const { return depth_; }
  std::size_t cells() const { return std::size_t(1) << depth_; }
  std::size_t size() const { return tree_.size(); }
  const SetTree& tree() const { return tree_; }
  int generation(int node) const { return gen_[node]; }
  int position(int node) const { return pos_[node]; }
  int node(int generation, int position) const;
  std::pair<double, double> interval(int node) const;

 private:
  int depth_;
  SetTree tree_;
  std::vector<int> gen_, pos_;
  std::vector<std::vector<int>> by_gen_;
};

// One positive value per finest cell.
using StepWeight = std::vector<double>;

// Log-uniform cell values in [2^-spread, 2^spread].
StepWeight random_step_weight(int depth, int spread, std::mt19937_64& rng);
// Repeats each value so that the weight lives on a finer grid.
StepWeight refine(const StepWeight& w, int depth);
// background (on any coarser grid) plus a spike of total mass `mass` on the
// finest cell containing x.
StepWeight spiked_weight(int depth, const StepWeight& background, double x, double mass);

double model_average(const DyadicGrid& g, const StepWeight& w, int node);

// Random 1/2-sparse family containing the root: below each member, a random
// set of descendants one or two generations down, of total length <= half.
Mask random_sparse_family(const DyadicGrid& g, std::mt19937_64& rng);

struct ModelRatio {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double bound = 0.0;  // the bound the ratio is audited against, 0 if none
  double tau = 1.0;    // certified sparsity constant of the family
  int extremal = -1;
};

// (sum_F (<f>^s_F)^p s(F))^(1/p) / ||f||_{L^p(s)} over the selected family; the
// bound is tau^(1/p) p' with tau the s-sparsity constant. Throws ValidationError
// if the family is not sparse with respect to s.
ModelRatio model_sparse_sum(const DyadicGrid& g, const StepWeight& f, const StepWeight& sigma, const Mask& family,
                            double p);

// sum_{Q in S, Q subset G} <w^(1/p)>_{Phi,Q}^p |Q| / w(G). Rejects Phi outside B_p
// unless allow_outside_class is set.
ModelRatio model_packing_sum(const DyadicGrid& g, const StepWeight& w, int G, const YoungFunction& phi, double p,
                            const Mask& family, bool allow_outside_class = false);

struct SawyerConstants {
  double T = 0.0;
  double T_prime = 0.0;
  double norm = 0.0;   // exact ||Lambda(s .)||_{L^p(s) -> L^p(w)}, p = 2 only
  double ratio = 0.0;  // norm / (T^(1/p) + T'^(1/p'))
};
SawyerConstants model_sawyer_constants(const DyadicGrid& g, const StepWeight& w, const StepWeight& sigma,
                                       const Mask& family, double p);

// ||Lambda_S(s .)||_{L^2(s) -> L^2(w)} from the eigenvalues of A^T A.
double exact_lambda_norm(const DyadicGrid& g, const Mask& family, const StepWeight& sigma, const StepWeight& w);

// sup over the family of (<s>/<s^(1/2)>_Phi)(<w>/<w^(1/2)>_Psi)
double model_bump(const DyadicGrid& g, const StepWeight& sigma, const StepWeight& w, const YoungFunction& phi,
                  const YoungFunction& psi, const Mask& family);
// exact norm / bump
ModelRatio model_bump_ratio(const DyadicGrid& g, const StepWeight& w, const StepWeight& sigma,
                           const YoungFunction& phi, const YoungFunction& psi, const Mask& family);

// max over selected Q0 of ||1_Q0 sum_{L in S, L subset Q0} <s>_L 1_L||^2_{L^2(w)}
// / ([s,w]_{B_2} [s]_{B_inf} s(Q0)), characteristics over all dyadic intervals.
ModelRatio model_localized_testing(const DyadicGrid& g, const StepWeight& w, const StepWeight& sigma, const Mask& family);

}  // namespace bergman
