#include <random>

#include "bergman/dyadic_model.hpp"
#include "bergman/errors.hpp"
#include "bergman/orlicz.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bergman;

TEST_CASE("Young function construction and validation") {
  CHECK_THROWS_AS(YoungFunction::power(1.0), ValidationError);
  CHECK_THROWS_AS(YoungFunction::power_log(0.5, 0.0), ValidationError);
  const YoungFunction f = YoungFunction::power_log(2.0, -1.0);
  CHECK(f.label() == "t^2*log(e+t)^-1");
  CHECK(YoungFunction::power(1.5).label() == "t^1.5");
  for (double y : {1e-6, 0.3, 1.0, 7.0, 1e6}) CHECK(f(f.inverse(y)) == doctest::Approx(y).epsilon(1e-10));
  CHECK(f.inverse_one() == doctest::Approx(f.inverse(1.0)));
}

TEST_CASE("Luxembourg average of t^p is the L^p average") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 5.0), m(0.1, 1.0);
  for (double p : {1.25, 1.5, 2.0, 3.0}) {
    const YoungFunction phi = YoungFunction::power(p);
    for (int k = 0; k < 20; ++k) {
      std::vector<double> f(50), mass(50);
      double num = 0, den = 0;
      for (int i = 0; i < 50; ++i) {
        f[i] = u(rng);
        mass[i] = m(rng);
        num += mass[i] * std::pow(f[i], p);
        den += mass[i];
      }
      const double oracle = std::pow(num / den, 1.0 / p);
      CHECK(std::abs(luxembourg_average(f, mass, phi, true).value - oracle) <= 1e-8 * oracle);
      const LuxembourgResult solved = luxembourg_average(f, mass, phi, false);
      CHECK(std::abs(solved.value - oracle) <= 1e-8 * oracle);
      CHECK(std::abs(solved.residual) < 1e-8);
    }
  }
}

TEST_CASE("Luxembourg average: homogeneity, monotonicity, Jensen") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  const YoungFunction phi = YoungFunction::power_log(2.0, -2.0);
  std::vector<double> f(40), g(40), mass(40, 1.0);
  for (int i = 0; i < 40; ++i) {
    f[i] = u(rng);
    g[i] = f[i] + u(rng);
  }
  const double a = luxembourg_average(f, mass, phi).value;
  std::vector<double> f3 = f;
  for (auto& x : f3) x *= 3.0;
  CHECK(luxembourg_average(f3, mass, phi).value == doctest::Approx(3.0 * a).epsilon(1e-9));
  CHECK(luxembourg_average(g, mass, phi).value >= a);
  double mean = 0;
  for (double x : f) mean += x / 40.0;
  CHECK(a >= mean / phi.inverse_one() * (1 - 1e-12));
  CHECK(luxembourg_average(std::vector<double>(5, 0.0), std::vector<double>(5, 1.0), phi).value == 0.0);
}

TEST_CASE("B_p integral of powers equals 1/(p - r)") {
  for (double p : {1.5, 2.0, 3.0})
    for (double r : {1.1, 1.25, 1.4}) {
      if (r >= p) continue;
      const BpCheck c = young_bp_check(YoungFunction::power(r), p);
      CHECK(c.converges);
      CHECK(std::abs(c.total - 1.0 / (p - r)) <= 1e-6);
    }
  const BpCheck d = young_bp_check(YoungFunction::power(2.0), 2.0);
  CHECK_FALSE(d.converges);
  CHECK_FALSE(in_bp_class(YoungFunction::power(2.5), 2.0));
}

TEST_CASE("B_p integral of power-log functions against quadrature") {
  // int_1^inf Phi(t) t^(-p-1) dt = int_0^inf e^((q-p)u) log(e + e^u)^a du; beyond
  // u = 60 the log factor is u to double precision, giving a closed-form tail
  const double p = 2.0, U = 60.0;
  struct Case {
    double q, a, reference;  // reference from 30-digit quadrature
  };
  for (const Case& k : {Case{1.5, 1.0, 5.11472734544752}, Case{2.0, -2.0, 1.18988397034435},
                        Case{2.0, -1.5, 2.29756561006862}}) {
    const BpCheck c = young_bp_check(YoungFunction::power_log(k.q, k.a), p);
    REQUIRE(c.converges);
    double oracle = testing::integrate_1d(
        [&](double u) { return std::exp((k.q - p) * u) * std::pow(u + std::log1p(std::exp(1.0 - u)), k.a); }, 0.0,
        U, 600);
    if (k.q == p) oracle += std::pow(U, k.a + 1.0) / (-k.a - 1.0);
    CHECK(c.total == doctest::Approx(oracle).epsilon(1e-8));
    CHECK(c.total == doctest::Approx(k.reference).epsilon(1e-8));
  }
  CHECK_FALSE(young_bp_check(YoungFunction::power_log(2.0, -1.0), 2.0).converges);
  CHECK_FALSE(young_bp_check(YoungFunction::power_log(2.0, 0.5), 2.0).converges);
  CHECK_THROWS_AS(YoungFunction::power_log(2.0, -3.0), ValidationError);
}

TEST_CASE("tent Luxembourg averages match per-tent solves") {
  const DyadicGrid g(5);
  std::mt19937_64 rng(8);
  const StepWeight w = random_step_weight(5, 2, rng);
  const YoungFunction phi = YoungFunction::power_log(1.5, 1.0);
  const auto all = tent_luxembourg(g.tree(), w, phi);
  for (std::size_t q = 0; q < g.size(); q += 5) {
    std::vector<double> f, m;
    for (std::size_t a = g.tree().tent_begin(q); a < g.tree().tent_end(q); ++a) {
      f.push_back(w[a]);
      m.push_back(g.tree().atom_mass()[a]);
    }
    CHECK(all[q] == doctest::Approx(luxembourg_average(f, m, phi, false).value).epsilon(1e-9));
  }
}
