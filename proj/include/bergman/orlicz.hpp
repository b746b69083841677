#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "bergman/bergman_tree.hpp"
#include "bergman/set_tree.hpp"

namespace bergman {

enum class YoungFamily { Power, PowerLog };

// Phi(t) = t^r (power) or t^q log(e + t)^a (power-log).
class YoungFunction {
 public:
  static YoungFunction power(double r);
  static YoungFunction power_log(double q, double a);

  double operator()(double t) const;
  double inverse(double y) const;
  double inverse_one() const { return inv_one_; }
  YoungFamily family() const { return family_; }
  double exponent() const { return q_; }
  double log_exponent() const { return a_; }
  bool is_power() const { return family_ == YoungFamily::Power; }
  std::string label() const;

 private:
  YoungFunction(YoungFamily f, double q, double a);
  void check_young() const;

  YoungFamily family_;
  double q_;
  double a_;
  double inv_one_ = 1.0;
};

struct LuxembourgResult {
  double value = 0.0;
  double residual = 0.0;  // <Phi(f/value)> - 1
  int evaluations = 0;
};

// inf { lambda > 0 : <Phi(f/lambda)>_Q <= 1 } for f >= 0 with the given masses.
// use_closed_form lets the power family skip the root finder.
LuxembourgResult luxembourg_average(const double* f, const double* mass, std::size_t n, const YoungFunction& phi,
                                    bool use_closed_form = true);
LuxembourgResult luxembourg_average(const std::vector<double>& f, const std::vector<double>& mass,
                                    const YoungFunction& phi, bool use_closed_form = true);

struct BpCheck {
  bool converges = false;
  double integral_to_T = 0.0;  // int_1^T Phi(t) t^(-p-1) dt
  double total = std::numeric_limits<double>::infinity();  // over [1, inf) when convergent
  double T = 1e8;
  std::string reason;
};
BpCheck young_bp_check(const YoungFunction& phi, double p);
inline bool in_bp_class(const YoungFunction& phi, double p) { return young_bp_check(phi, p).converges; }

// Luxembourg average of f (per atom, >= 0) over every tent.
std::vector<double> tent_luxembourg(const SetTree& t, const std::vector<double>& f, const YoungFunction& phi,
                                    const Mask& mask = {});

// M_Phi f per node: max over selected tents containing the node.
std::vector<double> orlicz_maximal_nodes(const SetTree& t, const std::vector<double>& f, const YoungFunction& phi,
                                         const Mask& mask = {});

// M_Phi f(z) for a point of the ball, with f sampled at the index atoms.
double orlicz_maximal(const TentIndex& index, const std::vector<double>& f_atoms, const BallPoint& z,
                      const YoungFunction& phi);

}  // namespace bergman
