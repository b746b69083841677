#include <cmath>
#include <limits>

#include "bergman/errors.hpp"
#include "bergman/experiments.hpp"
#include "doctest.h"

using namespace bergman;

namespace {

BallOptions ball(int depth) {
  BallOptions o;
  o.params = TreeParams::defaults(1);
  o.params.depth = depth;
  return o;
}

struct Pair {
  BallSetup coarse{ball(4)};
  BallSetup fine{ball(5)};
};

const Pair& setups() {
  static const Pair p;
  return p;
}

}  // namespace

TEST_CASE("verdicts and growth") {
  CHECK(verdict_of(1.0, 1.99) == Verdict::BoundedEvidence);
  CHECK(verdict_of(1.0, 0.2) == Verdict::BoundedEvidence);
  CHECK(verdict_of(1.0, 2.0) == Verdict::GrowthFlag);
  CHECK(verdict_of(1.0, std::numeric_limits<double>::infinity()) == Verdict::GrowthFlag);
  CHECK(verdict_of(1.0, std::nan("")) == Verdict::GrowthFlag);
  CHECK(to_string(Verdict::BoundedEvidence) == "BOUNDED-EVIDENCE");
  CHECK(to_string(Verdict::GrowthFlag) == "GROWTH-FLAG");
  RatioReport r;
  r.trend = {2.0, 3.0};
  CHECK(r.growth() == doctest::Approx(1.5));
}

TEST_CASE("mixed bound: identity weights give one half") {
  const auto& s = setups();
  const RatioReport r = verify_mixed_bound(Weight::unit(), Weight::unit(), s.coarse, s.fine);
  CHECK(std::abs(r.ratio - 0.5) <= 0.05);
  CHECK(r.ratio == doctest::Approx(r.lhs / r.rhs));
  CHECK(r.verdict == Verdict::BoundedEvidence);
  CHECK(r.trend.size() == 2);
}

TEST_CASE("mixed bound: scaling invariance and the one-weight case") {
  const auto& s = setups();
  const Weight w = Weight::power_radial(0.3), sig = Weight::power_radial(-0.3);
  const RatioReport a = verify_mixed_bound(w, sig, s.coarse, s.fine);
  const RatioReport b = verify_mixed_bound(w.scaled(7.0), sig.scaled(0.25), s.coarse, s.fine);
  CHECK(b.ratio == doctest::Approx(a.ratio).epsilon(1e-9));
  CHECK(a.verdict == Verdict::BoundedEvidence);
  CHECK(std::isfinite(a.ratio));
}

TEST_CASE("bump bound: unit weights and the class hypothesis") {
  const auto& s = setups();
  const YoungFunction phi = YoungFunction::power(1.5);
  const RatioReport r = verify_bump_bound(Weight::unit(), Weight::unit(), phi, phi, s.coarse, s.fine);
  CHECK(std::abs(r.ratio - 1.0) <= 0.1);
  const Weight w = Weight::power_radial(0.25), sig = Weight::power_radial(0.25);
  CHECK(verify_bump_bound(w.scaled(3.0), sig.scaled(5.0), phi, phi, s.coarse, s.fine).ratio ==
        doctest::Approx(verify_bump_bound(w, sig, phi, phi, s.coarse, s.fine).ratio).epsilon(1e-8));
  CHECK_THROWS_AS(verify_bump_bound(w, sig, YoungFunction::power(2.0), phi, s.coarse, s.fine), ValidationError);
}

TEST_CASE("B_infinity over B_p") {
  const auto& s = setups();
  CHECK(verify_binfty_vs_bp(Weight::unit(), 2.0, s.coarse, s.fine).ratio == doctest::Approx(1.0));
  for (double alpha : {0.25, 0.5, 0.75})
    for (double p : {1.5, 2.0, 3.0}) CHECK(verify_binfty_vs_bp(Weight::power_radial(alpha), p, s.coarse, s.fine).ratio <= 1.05);
}

TEST_CASE("dyadic and classical joint B_2") {
  const auto& s = setups();
  CHECK(compare_characteristics(Weight::unit(), Weight::unit(), s.coarse, s.fine).ratio ==
        doctest::Approx(1.0).epsilon(1e-9));
  const RatioReport r =
      compare_characteristics(Weight::power_radial(0.25), Weight::power_radial(-0.25), s.coarse, s.fine);
  CHECK(r.ratio >= 0.125);
  CHECK(r.ratio <= 8.0);
}

TEST_CASE("tent testing and Sawyer constants on the ball") {
  const auto& s = setups();
  const RatioReport t = verify_tent_testing(Weight::unit(), Weight::unit(), s.coarse, s.fine);
  CHECK(std::isfinite(t.ratio));
  CHECK(t.verdict == Verdict::BoundedEvidence);
  const SawyerBall sb = sawyer_constants_ball(Weight::unit(), Weight::unit(), s.fine);
  CHECK(sb.ratio >= 0.125);
  CHECK(sb.ratio <= 8.0);
  const RatioReport r = verify_sawyer_ball(Weight::power_radial(0.25), Weight::power_radial(-0.25), s.coarse, s.fine);
  CHECK(r.ratio >= 0.125);
  CHECK(r.ratio <= 8.0);
}

TEST_CASE("maximal projection against the sparse operator") {
  const ComparisonReport c = positive_vs_sparse(setups().fine, 50, 3);
  CHECK(c.ratios.size() == 50);
  CHECK(c.c > 0.0);
  CHECK(c.C / c.c <= 50.0);
  CHECK_FALSE(c.flagged);
}

TEST_CASE("model suite is tagged and reproducible") {
  ModelSuiteOptions o;
  o.depth = 6;
  o.coarse_depth = 5;
  o.seeds = 3;
  o.growth_depths = {4, 5, 6};
  const auto a = model_suite(o), b = model_suite(o);
  REQUIRE(a.size() == b.size());
  REQUIRE_FALSE(a.empty());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].model == "dyadic1d");
    CHECK(a[i].ratio == b[i].ratio);
    CHECK(a[i].inputs == b[i].inputs);
  }
}
