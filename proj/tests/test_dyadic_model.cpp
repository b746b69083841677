#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "bergman/dyadic_model.hpp"
#include "bergman/errors.hpp"
#include "bergman/operators.hpp"
#include "doctest.h"

using namespace bergman;

namespace {

double direct_norm(const DyadicGrid& g, const Mask& fam, const StepWeight& s, const StepWeight& w) {
  return Eigen::JacobiSVD<Eigen::MatrixXd>(lambda_matrix(g.tree(), fam, s, w)).singularValues()(0);
}

Mask only_root(const DyadicGrid& g) {
  Mask m(g.size(), 0);
  m[0] = 1;
  return m;
}

}  // namespace

TEST_CASE("dyadic grid structure") {
  const DyadicGrid g(5);
  CHECK(g.size() == 63);
  CHECK(g.cells() == 32);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto [a, b] = g.interval(int(i));
    CHECK(b - a == doctest::Approx(std::ldexp(1.0, -g.generation(int(i)))));
    CHECK(a == doctest::Approx(g.position(int(i)) * (b - a)));
    if (g.generation(int(i)) < 5) {
      const int l = g.node(g.generation(int(i)) + 1, 2 * g.position(int(i)));
      const int r = g.node(g.generation(int(i)) + 1, 2 * g.position(int(i)) + 1);
      CHECK(g.tree().parent(l) == int(i));
      CHECK(g.tree().parent(r) == int(i));
      CHECK(g.interval(l).first == doctest::Approx(a));
      CHECK(g.interval(r).second == doctest::Approx(b));
    }
  }
}

TEST_CASE("model averages") {
  const DyadicGrid g1(1);
  CHECK(model_average(g1, {1.0, 3.0}, 0) == doctest::Approx(2.0));
  const DyadicGrid g(6);
  CHECK(model_average(g, StepWeight(64, 2.5), 17) == doctest::Approx(2.5));
  std::mt19937_64 rng(1);
  const StepWeight w = random_step_weight(6, 3, rng);
  for (int gen = 0; gen < 6; ++gen)
    for (int pos = 0; pos < (1 << gen); ++pos) {
      const int q = g.node(gen, pos);
      const double kids = 0.5 * (model_average(g, w, g.node(gen + 1, 2 * pos)) +
                                 model_average(g, w, g.node(gen + 1, 2 * pos + 1)));
      CHECK(model_average(g, w, q) == doctest::Approx(kids).epsilon(1e-12));
    }
  for (double v : w) {
    CHECK(v >= 0.125 * (1 - 1e-12));
    CHECK(v <= 8.0 * (1 + 1e-12));
  }
  const StepWeight fine = refine(w, 8);
  CHECK(fine.size() == 256);
  const DyadicGrid g8(8);
  CHECK(model_average(g8, fine, 0) == doctest::Approx(model_average(g, w, 0)).epsilon(1e-12));
  const StepWeight spiked = spiked_weight(8, w, 0.3, 5.0);
  double extra = 0;
  for (std::size_t c = 0; c < 256; ++c) extra += (spiked[c] - fine[c]) / 256.0;
  CHECK(extra == doctest::Approx(5.0));
}

TEST_CASE("random sparse families are half sparse and contain the root") {
  const DyadicGrid g(8);
  std::mt19937_64 rng(2);
  for (int k = 0; k < 20; ++k) {
    const Mask m = random_sparse_family(g, rng);
    CHECK(m[0]);
    CHECK(sparsity_constant(g.tree(), m, {}) <= 2.0 + 1e-12);
  }
}

TEST_CASE("sparse sum bound: disjoint families, constants, coronas") {
  const DyadicGrid g(8);
  std::mt19937_64 rng(3);
  const StepWeight s = random_step_weight(8, 2, rng);
  // disjoint: generation 3
  Mask disjoint(g.size(), 0);
  for (int pos = 0; pos < 8; ++pos) disjoint[g.node(3, pos)] = 1;
  const StepWeight f = random_step_weight(8, 2, rng);
  CHECK(model_sparse_sum(g, f, s, disjoint, 2.0).ratio <= 1.0 + 1e-12);
  const Mask fam = random_sparse_family(g, rng);
  const ModelRatio one = model_sparse_sum(g, StepWeight(256, 1.0), s, fam, 2.0);
  CHECK(one.ratio <= std::sqrt(one.tau) * (1 + 1e-12));
  for (int seed = 0; seed < 50; ++seed) {
    std::mt19937_64 r(seed);
    const StepWeight ff = random_step_weight(8, 3, r), ss = random_step_weight(8, 3, r);
    const Corona c = stopping_family(g.tree(), ff, ss);
    const ModelRatio m = model_sparse_sum(g, ff, ss, c.member, 2.0);
    CHECK(m.tau <= 2.0 + 1e-12);
    CHECK(m.ratio <= std::sqrt(2.0) * 2.0);
    CHECK(m.ratio <= m.bound);
  }
  // a chain over one point has a huge constant for a weight concentrated there
  Mask chain(g.size(), 0);
  for (int gen = 0; gen <= 8; ++gen) chain[g.node(gen, 0)] = 1;
  StepWeight heavy(256, 1e-9);
  heavy[0] = 1.0;
  const ModelRatio bad = model_sparse_sum(g, f, heavy, chain, 2.0);
  CHECK(bad.tau > 1e6);
  CHECK(bad.ratio <= bad.bound);
  CHECK_THROWS_AS(model_sparse_sum(g, f, StepWeight(256, 0.0), fam, 2.0), ValidationError);
}

TEST_CASE("Orlicz packing sum: unit weight, stability, boundary growth") {
  std::mt19937_64 rng(4);
  {
    const DyadicGrid g(8);
    const Mask fam = random_sparse_family(g, rng);
    const ModelRatio r = model_packing_sum(g, StepWeight(256, 1.0), 0, YoungFunction::power(1.5), 2.0, fam);
    CHECK(r.ratio <= r.tau * (1 + 1e-12));
  }
  CHECK_THROWS_AS(model_packing_sum(DyadicGrid(4), StepWeight(16, 1.0), 0, YoungFunction::power(2.0), 2.0, {}),
                  ValidationError);
  // the full dyadic family under a weight with a spike at 0
  auto boundary = [](int depth) {
    const DyadicGrid g(depth);
    StepWeight w(g.cells(), 1.0);
    w[0] = double(g.cells());
    return model_packing_sum(g, w, 0, YoungFunction::power(2.0), 2.0, {}, true).ratio;
  };
  CHECK(boundary(8) > boundary(6));
  CHECK(boundary(10) > boundary(8));
}

TEST_CASE("Sawyer constants") {
  const DyadicGrid g(6);
  const StepWeight one(64, 1.0);
  const SawyerConstants unit = model_sawyer_constants(g, one, one, only_root(g), 2.0);
  CHECK(unit.T == doctest::Approx(1.0));
  CHECK(unit.T_prime == doctest::Approx(1.0));
  CHECK(unit.norm == doctest::Approx(1.0));
  std::mt19937_64 rng(5);
  double lo = 1e300, hi = 0;
  for (int k = 0; k < 50; ++k) {
    const StepWeight w = random_step_weight(6, 2, rng), s = random_step_weight(6, 2, rng);
    const Mask fam = random_sparse_family(g, rng);
    const SawyerConstants a = model_sawyer_constants(g, w, s, fam, 2.0);
    const SawyerConstants b = model_sawyer_constants(g, s, w, fam, 2.0);
    CHECK(a.T == doctest::Approx(b.T_prime).epsilon(1e-12));
    CHECK(a.T_prime == doctest::Approx(b.T).epsilon(1e-12));
    CHECK(a.norm == doctest::Approx(direct_norm(g, fam, s, w)).epsilon(1e-6));
    lo = std::min(lo, a.ratio);
    hi = std::max(hi, a.ratio);
  }
  CHECK(hi / lo <= 8.0);
  CHECK(hi <= 1.0 + 1e-9);
}

TEST_CASE("exact Lambda norm agrees with the dense SVD") {
  const DyadicGrid g(7);
  std::mt19937_64 rng(6);
  for (int k = 0; k < 5; ++k) {
    const StepWeight w = random_step_weight(7, 3, rng), s = random_step_weight(7, 3, rng);
    const Mask fam = random_sparse_family(g, rng);
    CHECK(exact_lambda_norm(g, fam, s, w) == doctest::Approx(direct_norm(g, fam, s, w)).epsilon(1e-10));
  }
}

TEST_CASE("bump ratio: unit weights, scaling invariance") {
  const DyadicGrid g(6);
  std::mt19937_64 rng(7);
  const Mask fam = random_sparse_family(g, rng);
  const YoungFunction phi = YoungFunction::power(1.5);
  const StepWeight one(64, 1.0);
  const ModelRatio unit = model_bump_ratio(g, one, one, phi, phi, fam);
  CHECK(std::isfinite(unit.ratio));
  CHECK(model_bump(g, one, one, phi, phi, fam) == doctest::Approx(1.0));
  const StepWeight w = random_step_weight(6, 2, rng), s = random_step_weight(6, 2, rng);
  StepWeight w2 = w, s2 = s;
  for (auto& x : w2) x *= 5.0;
  for (auto& x : s2) x *= 0.2;
  CHECK(model_bump_ratio(g, w2, s2, phi, phi, fam).ratio ==
        doctest::Approx(model_bump_ratio(g, w, s, phi, phi, fam).ratio).epsilon(1e-8));
}

TEST_CASE("localized testing constant stays below 16") {
  const DyadicGrid g(8);
  std::mt19937_64 rng(8);
  for (int k = 0; k < 20; ++k) {
    const StepWeight w = random_step_weight(8, 2, rng), s = random_step_weight(8, 2, rng);
    const Mask fam = random_sparse_family(g, rng);
    CHECK(model_localized_testing(g, w, s, fam).ratio <= 16.0);
  }
}
