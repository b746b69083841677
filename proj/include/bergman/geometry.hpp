#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace bergman {

using cplx = std::complex<double>;

// A point of C^d, d in {1, 2}. Unused coordinates are zero.
struct BallPoint {
  std::array<cplx, 2> c{};
  int dim = 1;

  BallPoint() = default;
  explicit BallPoint(cplx z) : c{z, 0.0}, dim(1) {}
  BallPoint(cplx z1, cplx z2) : c{z1, z2}, dim(2) {}

  double norm2() const { return std::norm(c[0]) + std::norm(c[1]); }
  double norm() const { return std::sqrt(norm2()); }
  bool in_ball() const { return norm2() < 1.0; }
  BallPoint scaled(double s) const;
};

BallPoint operator+(const BallPoint& a, const BallPoint& b);
BallPoint operator-(const BallPoint& a, const BallPoint& b);
BallPoint operator*(cplx s, const BallPoint& a);

// <a, b> = sum_k a_k conj(b_k)
cplx inner(const BallPoint& a, const BallPoint& b);

// Throws DomainError unless |z| < 1 and dim is 1 or 2.
void require_in_ball(const BallPoint& z, const char* what = "point");

// phi_z(w); phi_0 = -id.
BallPoint involution(const BallPoint& z, const BallPoint& w);

// 1 - |phi_z(w)|^2 = (1-|z|^2)(1-|w|^2)/|1-<w,z>|^2, accurate near the boundary.
double one_minus_phi2(const BallPoint& z, const BallPoint& w);

double bergman_distance(const BallPoint& z, const BallPoint& w);

// Euclidean radius r with beta(0, r) = rho.
inline double radius_of(double rho) { return std::tanh(rho); }
// beta(0, z) from |z|.
double bergman_radius(double r);

struct CarlesonTent {
  bool origin = true;
  BallPoint apex{};

  static CarlesonTent whole_ball() { return {}; }
  static CarlesonTent at(const BallPoint& z);
  bool contains(const BallPoint& zeta) const;
  std::string label() const;
};

enum class Scheme { PolarGrid, MonteCarlo, KubeAdapted };
std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

enum class AngularMode { Product, Hyperbolic };

struct PolarOptions {
  int n_radial = 128;
  int n_angular = 256;
  // ratio of successive gaps 1 - t_k; values >= 1 give a uniform radial grid
  double grading = 0.9;
  AngularMode angular = AngularMode::Product;
  // hyperbolic mode: ring angular count = pow2 >= hyperbolic_c / (1 - r), at least 8
  double hyperbolic_c = 8.0;
  int max_ring_count = 1 << 16;
};

struct QuadratureRule {
  std::vector<BallPoint> nodes;
  std::vector<double> masses;
  Scheme scheme = Scheme::PolarGrid;
  std::uint64_t seed = 0;
  int dim = 1;

  QuadratureRule() = default;
  QuadratureRule(std::vector<BallPoint> nodes, std::vector<double> masses, Scheme scheme,
                 std::uint64_t seed, int dim);
  std::size_t size() const { return nodes.size(); }
  double total_mass() const;
};

// Compensated (Neumaier) summation.
class KahanSum {
 public:
  void add(double x);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

QuadratureRule build_polar_grid(int dim, const PolarOptions& opt);
QuadratureRule build_monte_carlo(int dim, std::size_t n, std::uint64_t seed);
// size is the radial and angular count of the polar grid, or the node count for monte-carlo.
QuadratureRule build_quadrature(int dim, Scheme scheme, std::size_t size, std::uint64_t seed);

using PointFn = std::function<cplx(const BallPoint&)>;
using Region = std::function<bool(const BallPoint&)>;

struct Integral {
  cplx value{};
  std::size_t nodes_hit = 0;
  bool empty() const { return nodes_hit == 0; }
};

Integral integrate(const PointFn& f, const Region& region, const QuadratureRule& rule);
Integral integrate(const PointFn& f, const QuadratureRule& rule);

}  // namespace bergman
