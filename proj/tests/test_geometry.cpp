#include <random>

#include "bergman/errors.hpp"
#include "bergman/geometry.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bergman;
using testing::random_point;

TEST_CASE("disc involution matches the Mobius map") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 1000; ++k) {
    const BallPoint z = random_point(rng, 1), w = random_point(rng, 1);
    const BallPoint p = involution(z, w);
    CHECK(std::abs(p.c[0] - testing::mobius(z.c[0], w.c[0])) < 1e-13);
  }
}

TEST_CASE("involution is an involution exchanging z and 0") {
  std::mt19937_64 rng(12);
  for (int dim : {1, 2}) {
    for (int k = 0; k < 1000; ++k) {
      const BallPoint z = random_point(rng, dim), w = random_point(rng, dim);
      CHECK(testing::dist(involution(z, involution(z, w)), w) < 1e-12);
      CHECK(testing::dist(involution(z, z), BallPoint()) < 1e-13);
      CHECK(testing::dist(involution(z, dim == 1 ? BallPoint(0.0) : BallPoint(0.0, 0.0)), z) < 1e-13);
    }
  }
}

TEST_CASE("one_minus_phi2 agrees with the explicit involution") {
  std::mt19937_64 rng(13);
  for (int dim : {1, 2})
    for (int k = 0; k < 500; ++k) {
      const BallPoint z = random_point(rng, dim, 0.9), w = random_point(rng, dim, 0.9);
      CHECK(one_minus_phi2(z, w) == doctest::Approx(1.0 - involution(z, w).norm2()).epsilon(1e-10));
    }
}

TEST_CASE("Bergman distance: symmetry, radius, Mobius invariance, disc oracle") {
  std::mt19937_64 rng(14);
  for (int dim : {1, 2})
    for (int k = 0; k < 500; ++k) {
      const BallPoint a = random_point(rng, dim), z = random_point(rng, dim), w = random_point(rng, dim);
      const double d = bergman_distance(z, w);
      CHECK(std::abs(d - bergman_distance(w, z)) <= 1e-12 * std::max(1.0, d));
      CHECK(bergman_distance(z, z) < 1e-7);
      const BallPoint o = dim == 1 ? BallPoint(0.0) : BallPoint(0.0, 0.0);
      CHECK(bergman_distance(o, z) == doctest::Approx(std::atanh(z.norm())).epsilon(1e-12));
      CHECK(bergman_distance(involution(a, z), involution(a, w)) == doctest::Approx(d).epsilon(1e-8));
      if (dim == 1) CHECK(d == doctest::Approx(testing::disc_distance(z.c[0], w.c[0])).epsilon(1e-10));
    }
}

TEST_CASE("Bergman distance triangle inequality") {
  std::mt19937_64 rng(15);
  for (int k = 0; k < 500; ++k) {
    const BallPoint a = random_point(rng, 2), b = random_point(rng, 2), c = random_point(rng, 2);
    CHECK(bergman_distance(a, c) <= bergman_distance(a, b) + bergman_distance(b, c) + 1e-12);
  }
}

TEST_CASE("Carleson tent truth table") {
  const CarlesonTent t = CarlesonTent::at(BallPoint(cplx(0.5, 0.0)));
  CHECK(t.contains(BallPoint(cplx(0.9, 0.0))));
  CHECK_FALSE(t.contains(BallPoint(cplx(0.4, 0.0))));
  CHECK_FALSE(t.contains(BallPoint(cplx(0.0, 0.9))));
  CHECK(t.contains(BallPoint(std::polar(0.8, 0.3))));
  CHECK_FALSE(t.contains(BallPoint(std::polar(0.99, 0.6))));
  CHECK(CarlesonTent::whole_ball().contains(BallPoint(cplx(-0.99, 0.0))));
  const CarlesonTent t2 = CarlesonTent::at(BallPoint(cplx(0.0, 0.0), cplx(0.0, 0.6)));
  CHECK(t2.contains(BallPoint(cplx(0.1, 0.0), cplx(0.0, 0.9))));
  CHECK_FALSE(t2.contains(BallPoint(cplx(0.9, 0.0), cplx(0.0, 0.1))));
}

TEST_CASE("tent membership equals the defining inequality on random samples") {
  std::mt19937_64 rng(16);
  for (int k = 0; k < 1000; ++k) {
    const BallPoint z = random_point(rng, 1), w = random_point(rng, 1, 0.999);
    const cplx u = z.c[0] / std::abs(z.c[0]);
    const bool oracle = std::abs(1.0 - w.c[0] * std::conj(u)) <= 1.0 - std::abs(z.c[0]);
    CHECK(CarlesonTent::at(z).contains(w) == oracle);
  }
}

TEST_CASE("points outside the ball are rejected") {
  CHECK_THROWS_AS(require_in_ball(BallPoint(cplx(1.0, 0.0))), DomainError);
  CHECK_THROWS_AS(bergman_distance(BallPoint(cplx(0.6, 0.0), cplx(0.8, 0.0)), BallPoint(cplx(0.0, 0.0), cplx(0.0, 0.0))),
                  DomainError);
  CHECK_THROWS_AS(CarlesonTent::at(BallPoint(cplx(2.0, 0.0))), DomainError);
}

TEST_CASE("quadrature rules integrate moments") {
  const QuadratureRule polar = build_polar_grid(1, PolarOptions{});
  CHECK(std::abs(polar.total_mass() - 1.0) <= 1e-12);
  const auto r2 = integrate([](const BallPoint& z) { return cplx(z.norm2()); }, polar);
  CHECK(std::abs(r2.value.real() - 0.5) <= 1e-3);
  // |z|^(2k) has mean 1/(k+1) on the disc
  const auto r8 = integrate([](const BallPoint& z) { return cplx(std::pow(z.norm2(), 4)); }, polar);
  CHECK(r8.value.real() == doctest::Approx(0.2).epsilon(1e-3));
  // z^2 integrates to zero by rotation invariance
  const auto z2 = integrate([](const BallPoint& z) { return z.c[0] * z.c[0]; }, polar);
  CHECK(std::abs(z2.value) < 1e-12);

  const QuadratureRule mc = build_monte_carlo(2, 200000, 7);
  CHECK(std::abs(mc.total_mass() - 1.0) <= 1e-12);
  // |z|^2 has mean d/(d+1) on the ball of C^d
  const auto m2 = integrate([](const BallPoint& z) { return cplx(z.norm2()); }, mc);
  CHECK(m2.value.real() == doctest::Approx(2.0 / 3.0).epsilon(1e-2));
}

TEST_CASE("quadrature rules are seed-deterministic") {
  const QuadratureRule a = build_monte_carlo(2, 1000, 3), b = build_monte_carlo(2, 1000, 3), c = build_monte_carlo(2, 1000, 4);
  CHECK(a.nodes[17].c[1] == b.nodes[17].c[1]);
  CHECK(a.nodes[17].c[1] != c.nodes[17].c[1]);
}

TEST_CASE("region integrals report empty regions") {
  const QuadratureRule polar = build_polar_grid(1, PolarOptions{});
  const auto e = integrate([](const BallPoint&) { return cplx(1.0); }, [](const BallPoint&) { return false; }, polar);
  CHECK(e.empty());
}
