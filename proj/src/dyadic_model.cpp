#include "bergman/dyadic_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bergman/errors.hpp"
#include "bergman/geometry.hpp"
#include "bergman/operators.hpp"

namespace bergman {

namespace {

void check_weight(const DyadicGrid& g, const StepWeight& w, const char* name) {
  if (w.size() != g.cells()) throw ValidationError(std::string("model: ") + name + " needs one value per cell");
  for (double v : w)
    if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(std::string("model: ") + name + " must be > 0");
}

}  // namespace

DyadicGrid::DyadicGrid(int depth) : depth_(depth) {
  if (depth < 0 || depth > 20) throw ValidationError("dyadic grid: depth must lie in [0, 20]");
  const std::size_t n = (std::size_t(2) << depth) - 1;
  std::vector<int> parent;
  std::vector<std::size_t> own;
  parent.reserve(n);
  gen_.reserve(n);
  pos_.reserve(n);
  by_gen_.assign(depth + 1, {});
  for (int k = 0; k <= depth; ++k) by_gen_[k].assign(std::size_t(1) << k, -1);
  // pre-order walk with an explicit stack of (generation, position, parent)
  struct Item {
    int k, j, par;
  };
  std::vector<Item> stack{{0, 0, -1}};
  while (!stack.empty()) {
    const Item it = stack.back();
    stack.pop_back();
    const int id = int(parent.size());
    parent.push_back(it.par);
    gen_.push_back(it.k);
    pos_.push_back(it.j);
    by_gen_[it.k][it.j] = id;
    own.push_back(it.k == depth ? 1 : 0);
    if (it.k < depth) {
      stack.push_back({it.k + 1, 2 * it.j + 1, id});
      stack.push_back({it.k + 1, 2 * it.j, id});
    }
  }
  tree_ = SetTree(std::move(parent), own, std::vector<double>(cells(), std::ldexp(1.0, -depth)));
}

int DyadicGrid::node(int generation, int position) const {
  if (generation < 0 || generation > depth_ || position < 0 || position >= (1 << generation))
    throw ValidationError("dyadic grid: no such interval");
  return by_gen_[generation][position];
}

std::pair<double, double> DyadicGrid::interval(int node) const {
  const double len = std::ldexp(1.0, -gen_[node]);
  return {pos_[node] * len, (pos_[node] + 1) * len};
}

StepWeight random_step_weight(int depth, int spread, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-double(spread), double(spread));
  StepWeight w(std::size_t(1) << depth);
  for (auto& v : w) v = std::exp2(u(rng));
  return w;
}

StepWeight refine(const StepWeight& w, int depth) {
  const std::size_t n = std::size_t(1) << depth;
  if (w.empty() || n % w.size() != 0 || n < w.size()) throw ValidationError("refine: target grid is not finer");
  const std::size_t r = n / w.size();
  StepWeight out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = w[i / r];
  return out;
}

StepWeight spiked_weight(int depth, const StepWeight& background, double x, double mass) {
  if (!(x >= 0.0 && x < 1.0) || !(mass >= 0.0)) throw ValidationError("spiked weight: bad spike");
  StepWeight w = refine(background, depth);
  const std::size_t cell = std::min(w.size() - 1, std::size_t(x * double(w.size())));
  w[cell] += mass * double(w.size());
  return w;
}

double model_average(const DyadicGrid& g, const StepWeight& w, int node) {
  check_weight(g, w, "weight");
  const auto& t = g.tree();
  KahanSum s;
  for (std::size_t a = t.tent_begin(node); a < t.tent_end(node); ++a) s.add(w[a]);
  return s.value() / double(t.tent_end(node) - t.tent_begin(node));
}

Mask random_sparse_family(const DyadicGrid& g, std::mt19937_64& rng) {
  Mask m(g.size(), 0);
  std::bernoulli_distribution coin(0.5);
  std::vector<int> todo{0};
  m[0] = 1;
  while (!todo.empty()) {
    const int q = todo.back();
    todo.pop_back();
    const int k = g.generation(q), j = g.position(q);
    if (k == g.depth()) continue;
    const int gap = (k + 2 <= g.depth() && coin(rng)) ? 2 : 1;
    const int count = 1 << gap;
    // at most half of the 2^gap descendants
    std::vector<int> slots(count);
    for (int c = 0; c < count; ++c) slots[c] = c;
    std::shuffle(slots.begin(), slots.end(), rng);
    int taken = 0;
    for (int c : slots) {
      if (taken == count / 2) break;
      if (!coin(rng)) continue;
      const int id = g.node(k + gap, j * count + c);
      m[id] = 1;
      todo.push_back(id);
      ++taken;
    }
  }
  return m;
}

ModelRatio model_sparse_sum(const DyadicGrid& g, const StepWeight& f, const StepWeight& sigma, const Mask& family,
                            double p) {
  check_weight(g, sigma, "sigma");
  if (f.size() != g.cells()) throw ValidationError("model: f needs one value per cell");
  if (!(p > 1.0)) throw ValidationError("model: p must exceed 1");
  const auto& t = g.tree();
  ModelRatio r;
  r.tau = sparsity_constant(t, family, sigma);
  if (!std::isfinite(r.tau)) throw ValidationError("model: family is not sparse with respect to sigma");
  std::vector<double> af(f.size());
  for (std::size_t a = 0; a < f.size(); ++a) af[a] = std::abs(f[a]);
  const auto avg = tent_averages(t, af, sigma);
  const auto smass = t.tent_integrals(sigma);
  KahanSum lhs, rhs;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (selected(family, i)) lhs.add(std::pow(avg[i], p) * smass[i]);
  for (std::size_t a = 0; a < f.size(); ++a) rhs.add(std::pow(af[a], p) * sigma[a] * t.atom_mass()[a]);
  r.lhs = std::pow(lhs.value(), 1.0 / p);
  r.rhs = std::pow(rhs.value(), 1.0 / p);
  r.ratio = r.rhs > 0.0 ? r.lhs / r.rhs : 0.0;
  r.bound = std::pow(r.tau, 1.0 / p) * p / (p - 1.0);
  return r;
}

ModelRatio model_packing_sum(const DyadicGrid& g, const StepWeight& w, int G, const YoungFunction& phi, double p,
                            const Mask& family, bool allow_outside_class) {
  check_weight(g, w, "w");
  if (!(p > 1.0)) throw ValidationError("model: p must exceed 1");
  if (!allow_outside_class && !in_bp_class(phi, p))
    throw ValidationError("Young function " + phi.label() + " is not in B_p for p = " + std::to_string(p) +
                          ": " + young_bp_check(phi, p).reason);
  const auto& t = g.tree();
  ModelRatio r;
  r.tau = sparsity_constant(t, family, {});
  std::vector<double> root(w.size());
  for (std::size_t a = 0; a < w.size(); ++a) root[a] = std::pow(w[a], 1.0 / p);
  Mask inside(t.size(), 0);
  for (int i = G; i < t.subtree_end(G); ++i) inside[i] = selected(family, i);
  const auto lux = tent_luxembourg(t, root, phi, inside);
  const auto len = t.tent_integrals({});
  KahanSum s;
  for (int i = G; i < t.subtree_end(G); ++i)
    if (inside[i]) s.add(std::pow(lux[i], p) * len[i]);
  r.lhs = s.value();
  r.rhs = t.tent_integrals(w)[G];
  r.ratio = r.lhs / r.rhs;
  r.extremal = G;
  return r;
}

double exact_lambda_norm(const DyadicGrid& g, const Mask& family, const StepWeight& sigma, const StepWeight& w) {
  check_weight(g, sigma, "sigma");
  check_weight(g, w, "w");
  const Eigen::MatrixXd a = lambda_matrix(g.tree(), family, sigma, w);
  const Eigen::MatrixXd ata = a.transpose() * a;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ata, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("model: eigenvalue solver failed");
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

SawyerConstants model_sawyer_constants(const DyadicGrid& g, const StepWeight& w, const StepWeight& sigma,
                                       const Mask& family, double p) {
  check_weight(g, sigma, "sigma");
  check_weight(g, w, "w");
  if (!(p > 1.0)) throw ValidationError("model: p must exceed 1");
  const auto& t = g.tree();
  const double pp = p / (p - 1.0);
  SawyerConstants c;
  const auto q1 = testing_quotients(t, w, sigma, p, family);
  const auto q2 = testing_quotients(t, sigma, w, pp, family);
  c.T = *std::max_element(q1.begin(), q1.end());
  c.T_prime = *std::max_element(q2.begin(), q2.end());
  if (p == 2.0) {
    c.norm = exact_lambda_norm(g, family, sigma, w);
    c.ratio = c.norm / (std::pow(c.T, 1.0 / p) + std::pow(c.T_prime, 1.0 / pp));
  } else {
    c.norm = std::numeric_limits<double>::quiet_NaN();
    c.ratio = std::numeric_limits<double>::quiet_NaN();
  }
  return c;
}

double model_bump(const DyadicGrid& g, const StepWeight& sigma, const StepWeight& w, const YoungFunction& phi,
                  const YoungFunction& psi, const Mask& family) {
  check_weight(g, sigma, "sigma");
  check_weight(g, w, "w");
  const auto& t = g.tree();
  StepWeight rs(sigma.size()), rw(w.size());
  for (std::size_t a = 0; a < w.size(); ++a) {
    rs[a] = std::sqrt(sigma[a]);
    rw[a] = std::sqrt(w[a]);
  }
  const auto as = tent_averages(t, sigma), aw = tent_averages(t, w);
  const auto ls = tent_luxembourg(t, rs, phi, family), lw = tent_luxembourg(t, rw, psi, family);
  double best = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (selected(family, i)) best = std::max(best, as[i] / ls[i] * (aw[i] / lw[i]));
  return best;
}

ModelRatio model_bump_ratio(const DyadicGrid& g, const StepWeight& w, const StepWeight& sigma,
                           const YoungFunction& phi, const YoungFunction& psi, const Mask& family) {
  if (!in_bp_class(phi, 2.0) || !in_bp_class(psi, 2.0))
    throw ValidationError("bump: both Young functions must lie in B_2");
  ModelRatio r;
  r.tau = sparsity_constant(g.tree(), family, {});
  r.lhs = exact_lambda_norm(g, family, sigma, w);
  r.rhs = model_bump(g, sigma, w, phi, psi, family);
  r.ratio = r.lhs / r.rhs;
  return r;
}

ModelRatio model_localized_testing(const DyadicGrid& g, const StepWeight& w, const StepWeight& sigma, const Mask& family) {
  check_weight(g, sigma, "sigma");
  check_weight(g, w, "w");
  const auto& t = g.tree();
  ModelRatio r;
  r.tau = sparsity_constant(t, family, {});
  const double b2 = joint_bp(t, sigma, w, 2.0).value;
  const double binf = b_infty(t, sigma).value;
  const auto energy = testing_quotients(t, w, sigma, 2.0, family, true);
  const auto smass = t.tent_integrals(sigma);
  r.ratio = -1.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!selected(family, i)) continue;
    const double rhs = b2 * binf * smass[i];
    if (energy[i] / rhs > r.ratio) {
      r.ratio = energy[i] / rhs;
      r.lhs = energy[i];
      r.rhs = rhs;
      r.extremal = int(i);
    }
  }
  return r;
}

}  // namespace bergman
