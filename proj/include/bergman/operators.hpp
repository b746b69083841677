#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bergman/bergman_tree.hpp"
#include "bergman/geometry.hpp"
#include "bergman/set_tree.hpp"
#include "bergman/weights.hpp"

namespace bergman {

using RealFn = std::function<double(const BallPoint&)>;

// (1 - <z, zeta>)^-(d+1)
cplx bergman_kernel(const BallPoint& z, const BallPoint& zeta);

// Kernel integrals against the rule. near_singular is set when some node has
// |1 - <z, zeta>| < 1e-6.
cplx bergman_projection(const PointFn& f, const BallPoint& z, const QuadratureRule& rule,
                        bool* near_singular = nullptr);
double maximal_projection(const RealFn& f, const BallPoint& z, const QuadratureRule& rule,
                          bool* near_singular = nullptr);
// Same with f given at the rule nodes.
cplx bergman_projection(const std::vector<cplx>& f, const BallPoint& z, const QuadratureRule& rule);
double maximal_projection(const std::vector<double>& f, const BallPoint& z, const QuadratureRule& rule);

// A family of tents of one SetTree with its majors E_Q = Q minus the tents of
// the maximal selected proper descendants, and tau = max |Q|/|E_Q|.
struct SparseCollection {
  const SetTree* sets = nullptr;
  Mask mask;
  std::vector<double> major_mass;  // per node; 0 for unselected nodes
  double tau = 1.0;
};
SparseCollection make_sparse_collection(const SetTree& t, Mask mask, const std::vector<double>& v = {});

// Lambda_S f per node and at a point of the ball.
std::vector<double> sparse_apply(const SparseCollection& s, const std::vector<double>& f);
double sparse_apply(const TentIndex& index, const Mask& mask, const std::vector<double>& f, const BallPoint& z);

// M f per node: max over tents containing the node of <|f|> (or <|f|>^sigma).
std::vector<double> maximal_nodes(const SetTree& t, const std::vector<double>& f,
                                  const std::vector<double>& sigma = {}, const Mask& mask = {});
double maximal_function(const TentIndex& index, const std::vector<double>& f, const BallPoint& z,
                        const std::vector<double>& sigma = {});

enum class KernelKind { P, PPlus, Lambda };
std::string to_string(KernelKind k);

struct PowerOptions {
  double rel_tol = 1e-12;  // on successive Rayleigh quotients of A*A
  int max_iter = 10000;
  std::uint64_t seed = 0x5eed;
  int threads = 0;  // 0: default_threads()
};

struct NormResult {
  double value = 0.0;
  int iterations = 0;
  std::string method;
};

using MatVec = std::function<void(const Eigen::VectorXcd&, Eigen::VectorXcd&)>;
// Largest singular value of A by power iteration on A*A; throws NumericalError
// when max_iter is reached.
NormResult power_iteration(const MatVec& apply, const MatVec& apply_adjoint, Eigen::Index cols,
                           const PowerOptions& opt = {});

// A_ij = sqrt(w_i m_i) K(z_i, z_j) sqrt(s_j m_j) for the P or P+ kernel.
Eigen::MatrixXcd kernel_matrix(KernelKind k, const Weight& sigma, const Weight& w, const QuadratureRule& rule);
double dense_norm(const Eigen::MatrixXcd& a);

// ||T(sigma .)||_{L^2(sigma) -> L^2(w)} for T = P or P+ discretized on the rule.
// Dense storage up to dense_limit nodes, kernel evaluated on the fly beyond.
NormResult operator_norm(KernelKind k, const Weight& sigma, const Weight& w, const QuadratureRule& rule,
                         const PowerOptions& opt = {}, std::size_t dense_limit = 2500);

// ||Lambda_S(sigma .)||_{L^2(sigma) -> L^2(w)} on the atoms of a SetTree.
NormResult lambda_norm(const SetTree& t, const Mask& mask, const std::vector<double>& sigma,
                       const std::vector<double>& w, const PowerOptions& opt = {});
// Dense matrix of the same operator (small trees only).
Eigen::MatrixXd lambda_matrix(const SetTree& t, const Mask& mask, const std::vector<double>& sigma,
                              const std::vector<double>& w);

// ||1_B P(sigma 1_B .)||_{L^2(sigma) -> L^2(w)} for power-radial sigma, w and B the
// ball of squared radius s_h, from the decomposition into homogeneous modes.
NormResult radial_projection_norm(int dim, double scale_w, double alpha_w, double scale_s, double alpha_s,
                                  double s_h);
// value of the mode of degree l in radial_projection_norm
double radial_mode_norm(int dim, double alpha_w, double alpha_s, double s_h, double l);

}  // namespace bergman
