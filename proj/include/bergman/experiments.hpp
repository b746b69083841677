#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "bergman/bergman_tree.hpp"
#include "bergman/dyadic_model.hpp"
#include "bergman/operators.hpp"
#include "bergman/orlicz.hpp"
#include "bergman/weights.hpp"

namespace bergman {

enum class Verdict { BoundedEvidence, GrowthFlag };
std::string to_string(Verdict v);

struct RatioReport {
  std::string experiment;
  std::string model = "ball";
  std::uint64_t seed = 0;
  std::string inputs;
  std::string truncation;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  std::vector<double> trend;  // ratio at the coarse and fine refinement
  double bound = std::numeric_limits<double>::quiet_NaN();
  Verdict verdict = Verdict::BoundedEvidence;
  std::string note;
  double growth() const;
};

// GROWTH-FLAG iff the fine ratio is at least twice the coarse one (or not finite).
Verdict verdict_of(double coarse, double fine);

struct BallOptions {
  TreeParams params;
  int trees = 1;
  // d = 1 defaults to the kube-adapted rule; d = 2 to monte-carlo
  Scheme scheme = Scheme::KubeAdapted;
  std::size_t quadrature_size = 20000;  // polar: radial = angular count; monte-carlo: nodes
  std::uint64_t seed = 0;
  KubeRuleOptions kube;
};

// Trees of one family with their quadrature rules and tent indices.
class BallSetup {
 public:
  explicit BallSetup(const BallOptions& opt);
  BallSetup(BallSetup&&) = default;
  BallSetup& operator=(BallSetup&&) = default;

  const BallOptions& options() const { return opt_; }
  std::size_t tree_count() const { return trees_.size(); }
  const BergmanTree& tree(std::size_t k) const { return *trees_[k]; }
  const TentIndex& index(std::size_t k) const { return *indices_[k]; }
  IndexFamily family() const;
  // |z|^2 at the horizon of the first tree
  double horizon_s() const;
  std::string truncation() const;

 private:
  BallOptions opt_;
  std::vector<std::unique_ptr<BergmanTree>> trees_;
  std::vector<std::unique_ptr<KubeAdaptedRule>> kube_rules_;
  std::unique_ptr<QuadratureRule> shared_rule_;
  std::vector<std::unique_ptr<TentIndex>> indices_;
};

// ||1_B P(sigma 1_B .)||_{L^2(sigma) -> L^2(w)} over the truncated ball B of the setup:
// mode decomposition for power-radial pairs, power iteration on a graded grid otherwise.
NormResult projection_norm(const BallSetup& s, const Weight& sigma, const Weight& w);

RatioReport verify_mixed_bound(const Weight& w, const Weight& sigma, const BallSetup& coarse, const BallSetup& fine);
RatioReport verify_bump_bound(const Weight& w, const Weight& sigma, const YoungFunction& phi,
                              const YoungFunction& psi, const BallSetup& coarse, const BallSetup& fine);
RatioReport verify_binfty_vs_bp(const Weight& sigma, double p, const BallSetup& coarse, const BallSetup& fine);
RatioReport verify_tent_testing(const Weight& w, const Weight& sigma, const BallSetup& coarse, const BallSetup& fine);
RatioReport compare_characteristics(const Weight& w, const Weight& sigma, const BallSetup& coarse,
                                    const BallSetup& fine, const ApexGrid& grid = {});

struct SawyerBall {
  double T = 0.0;
  double T_prime = 0.0;
  double norm = 0.0;
  double ratio = 0.0;
  int tree = 0;
};
SawyerBall sawyer_constants_ball(const Weight& w, const Weight& sigma, const BallSetup& s);
RatioReport verify_sawyer_ball(const Weight& w, const Weight& sigma, const BallSetup& coarse, const BallSetup& fine);

// P+|f|(z) / Lambda_T f(z) over a seeded bank of (f, z).
struct ComparisonReport {
  double c = 0.0;
  double C = 0.0;
  std::vector<double> ratios;
  bool flagged = false;  // C/c > 50
};
ComparisonReport positive_vs_sparse(const BallSetup& s, int samples, std::uint64_t seed);

// Power-radial sweeps over alpha_w x alpha_sigma.
std::vector<RatioReport> mixed_bound_sweep(const std::vector<double>& alphas, const BallSetup& coarse,
                                           const BallSetup& fine);
std::vector<RatioReport> bump_bound_sweep(const std::vector<double>& alphas, const std::vector<YoungFunction>& young,
                                          const BallSetup& coarse, const BallSetup& fine);

struct ModelSuiteOptions {
  int coarse_depth = 8;
  int depth = 10;
  int seeds = 50;
  std::uint64_t seed = 0;
  double p = 2.0;
  std::vector<int> spreads{1, 2, 3};
  std::vector<int> growth_depths{6, 8, 10};
};
// The exact dyadic oracle suite; every report is tagged model = dyadic1d.
std::vector<RatioReport> model_suite(const ModelSuiteOptions& opt);

}  // namespace bergman
