#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "bergman/bergman_tree.hpp"
#include "bergman/geometry.hpp"

namespace testing {

using bergman::BallPoint;
using bergman::cplx;

constexpr double kPi = 3.14159265358979323846;

// Uniform in the Euclidean ball of the given radius.
inline BallPoint random_point(std::mt19937_64& rng, int dim, double max_radius = 0.95) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (dim == 1) {
    const double r = max_radius * std::sqrt(u(rng));
    return BallPoint(std::polar(r, 2.0 * kPi * u(rng)));
  }
  cplx a(g(rng), g(rng)), b(g(rng), g(rng));
  const double n = std::sqrt(std::norm(a) + std::norm(b));
  const double r = max_radius * std::pow(u(rng), 0.25);
  return BallPoint(a * (r / n), b * (r / n));
}

// One-variable disc automorphism (z - w)/(1 - conj(z) w).
inline cplx mobius(cplx z, cplx w) { return (z - w) / (1.0 - std::conj(z) * w); }

// Bergman distance on the disc from the pseudo-hyperbolic distance.
inline double disc_distance(cplx z, cplx w) { return std::atanh(std::abs(mobius(z, w))); }

inline double dist(const BallPoint& a, const BallPoint& b) {
  return std::sqrt(std::norm(a.c[0] - b.c[0]) + std::norm(a.c[1] - b.c[1]));
}

// Composite Gauss-Legendre on [a, b] with `panels` panels of 20 nodes.
template <class F>
double integrate_1d(F&& f, double a, double b, int panels = 64) {
  static const double x[10] = {0.0765265211334973, 0.2277858511416451, 0.3737060887154195, 0.5108670019508271,
                               0.6360536807265150, 0.7463319064601508, 0.8391169718222188, 0.9122344282513259,
                               0.9639719272779138, 0.9931285991850949};
  static const double w[10] = {0.1527533871307258, 0.1491729864726037, 0.1420961093183820, 0.1316886384491766,
                               0.1181945319615184, 0.1019301198172404, 0.0832767415767048, 0.0626720483341091,
                               0.0406014298003869, 0.0176140071391521};
  const double h = (b - a) / panels;
  double s = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double c = a + (k + 0.5) * h, r = 0.5 * h;
    for (int i = 0; i < 10; ++i) s += w[i] * (f(c - r * x[i]) + f(c + r * x[i]));
  }
  return 0.5 * h * s;
}

// A d = 1 tree with its kube-adapted rule and tent index.
struct SmallBall {
  bergman::BergmanTree tree;
  bergman::KubeAdaptedRule kube;
  bergman::TentIndex index;

  explicit SmallBall(int depth, double stagger = 0.0)
      : tree(bergman::BergmanTree::build(params(depth, stagger))), kube(bergman::build_kube_rule(tree)),
        index(tree, kube) {}
  SmallBall(const SmallBall&) = delete;
  SmallBall& operator=(const SmallBall&) = delete;

  static bergman::TreeParams params(int depth, double stagger) {
    bergman::TreeParams p = bergman::TreeParams::defaults(1);
    p.depth = depth;
    p.stagger = stagger;
    return p;
  }
};

}  // namespace testing
