#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bergman/bergman_tree.hpp"
#include "bergman/geometry.hpp"
#include "bergman/orlicz.hpp"

namespace bergman {

enum class WeightKind { PowerRadial, Product, Tabulated, Explicit };

// w(z) = scale * base(z)^exponent. Powers and duals of a weight keep its base.
class Weight {
 public:
  static Weight unit();
  // (1 - |z|^2)^alpha
  static Weight power_radial(double alpha);
  // prod_k (1 - |phi_{a_k}(z)|^2)^{alpha_k}
  static Weight product(std::vector<std::pair<BallPoint, double>> factors);
  // one value per tree node, constant on its kube; 1 beyond the horizon
  static Weight tabulated(std::shared_ptr<const BergmanTree> tree, std::vector<double> per_node);
  static Weight explicit_fn(std::string id, std::function<double(const BallPoint&)> fn);
  // named explicit weights: "unit", "angular", "radial-log"
  static Weight from_id(const std::string& id);

  double operator()(const BallPoint& z) const;
  WeightKind kind() const { return kind_; }
  Weight scaled(double c) const;
  Weight pow(double e) const;
  // w^(1 - p')
  Weight dual(double p) const;
  // (scale, alpha) when w = scale * (1 - |z|^2)^alpha
  std::optional<std::pair<double, double>> power_radial_form() const;
  std::string label() const;

 private:
  WeightKind kind_ = WeightKind::Explicit;
  std::string label_;
  double scale_ = 1.0;
  double exponent_ = 1.0;
  std::shared_ptr<const std::function<double(const BallPoint&)>> base_;
  double radial_alpha_ = 0.0;  // PowerRadial only, for the base
};

// Weight values at the atoms of an index; throws ValidationError unless finite and > 0.
std::vector<double> sample_weight(const TentIndex& index, const Weight& w);

// <w>_E over the rule nodes in E.
double average(const Weight& w, const Region& set, const QuadratureRule& rule);

struct CharacteristicReport {
  double value = 0.0;
  std::string extremal;
  std::string truncation;
  std::vector<double> trend;  // values at the recorded refinements, coarse first
  bool diverged = false;
  int tree = 0;
  int node = -1;
};

// Records the trend across a refinement pair; diverged when the value at least doubles.
CharacteristicReport with_trend(const CharacteristicReport& coarse, const CharacteristicReport& fine);

using IndexFamily = std::vector<const TentIndex*>;

std::string node_label(const BergmanTree& tree, int node);

// sup over dyadic tents of <w><s>^(p-1).
CharacteristicReport joint_bp_dyadic(const Weight& w, const Weight& sigma, double p, const IndexFamily& family);
// Same on precomputed atom values of one index.
CharacteristicReport joint_bp_dyadic(const TentIndex& index, const std::vector<double>& w,
                                     const std::vector<double>& sigma, double p);

CharacteristicReport b_infty(const Weight& sigma, const IndexFamily& family);
CharacteristicReport b_infty(const TentIndex& index, const std::vector<double>& sigma);

// sup over tents of (<w>/<w^(1/2)>_Phi)(<s>/<s^(1/2)>_Psi).
CharacteristicReport orlicz_bump(const Weight& w, const Weight& sigma, const YoungFunction& phi,
                                 const YoungFunction& psi, const IndexFamily& family);
CharacteristicReport orlicz_bump(const TentIndex& index, const std::vector<double>& w,
                                 const std::vector<double>& sigma, const YoungFunction& phi,
                                 const YoungFunction& psi);

// Apexes of the classical characteristic: radii 1 - 2^-k (k = 1..levels) with
// about angular_factor/(1 - r) directions each, plus the origin (whole ball).
struct ApexGrid {
  int levels = 8;
  double angular_factor = 12.566370614359172;
  std::size_t max_directions = 4096;
  std::vector<CarlesonTent> tents(int dim) const;
  std::string label() const;
};

// Per Carleson tent: (mass, integral of each function) over the index atoms.
std::vector<std::vector<double>> carleson_sums(const TentIndex& index, const std::vector<CarlesonTent>& tents,
                                               const std::vector<const std::vector<double>*>& fns);

CharacteristicReport bp_classical(const Weight& w, const Weight& sigma, double p, const TentIndex& index,
                                  const ApexGrid& grid = {});
CharacteristicReport bp_classical(const TentIndex& index, const std::vector<double>& w,
                                  const std::vector<double>& sigma, double p, const ApexGrid& grid = {});

}  // namespace bergman
