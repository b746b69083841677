#include "bergman/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "bergman/errors.hpp"

namespace bergman {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

int pow2_ceil(double x) {
  int m = 1;
  while (m < x && m < (1 << 30)) m <<= 1;
  return m;
}
}  // namespace

BallPoint BallPoint::scaled(double s) const {
  BallPoint out = *this;
  out.c[0] *= s;
  out.c[1] *= s;
  return out;
}

BallPoint operator+(const BallPoint& a, const BallPoint& b) {
  BallPoint out = a;
  out.c[0] += b.c[0];
  out.c[1] += b.c[1];
  out.dim = std::max(a.dim, b.dim);
  return out;
}

BallPoint operator-(const BallPoint& a, const BallPoint& b) {
  BallPoint out = a;
  out.c[0] -= b.c[0];
  out.c[1] -= b.c[1];
  out.dim = std::max(a.dim, b.dim);
  return out;
}

BallPoint operator*(cplx s, const BallPoint& a) {
  BallPoint out = a;
  out.c[0] *= s;
  out.c[1] *= s;
  return out;
}

cplx inner(const BallPoint& a, const BallPoint& b) {
  return a.c[0] * std::conj(b.c[0]) + a.c[1] * std::conj(b.c[1]);
}

void require_in_ball(const BallPoint& z, const char* what) {
  if (z.dim != 1 && z.dim != 2) throw DomainError(std::string(what) + ": unsupported dimension");
  if (!(z.norm2() < 1.0)) {
    std::ostringstream os;
    os << what << " outside the open unit ball (|z| = " << z.norm() << ")";
    throw DomainError(os.str());
  }
}

BallPoint involution(const BallPoint& z, const BallPoint& w) {
  require_in_ball(z, "involution: z");
  require_in_ball(w, "involution: w");
  const double r2 = z.norm2();
  if (r2 == 0.0) return cplx(-1.0) * w;
  const double r = std::sqrt(r2);
  const BallPoint u = z.scaled(1.0 / r);
  const BallPoint pw = inner(w, u) * u;
  const BallPoint num = z - pw - (w - pw).scaled(std::sqrt(1.0 - r2));
  BallPoint out = (1.0 / (1.0 - inner(w, z))) * num;
  out.dim = std::max(z.dim, w.dim);
  return out;
}

double one_minus_phi2(const BallPoint& z, const BallPoint& w) {
  const double d = std::norm(1.0 - inner(w, z));
  return (1.0 - z.norm2()) * (1.0 - w.norm2()) / d;
}

double bergman_distance(const BallPoint& z, const BallPoint& w) {
  require_in_ball(z, "bergman_distance: z");
  require_in_ball(w, "bergman_distance: w");
  const double q = std::clamp(one_minus_phi2(z, w), 0.0, 1.0);
  const double a = std::sqrt(1.0 - q);
  // 1/2 log((1+a)/(1-a)) = log(1+a) - 1/2 log(1-a^2)
  return std::log1p(a) - 0.5 * std::log(q);
}

double bergman_radius(double r) { return std::atanh(r); }

CarlesonTent CarlesonTent::at(const BallPoint& z) {
  require_in_ball(z, "Carleson tent apex");
  CarlesonTent t;
  if (z.norm2() == 0.0) return t;
  t.origin = false;
  t.apex = z;
  return t;
}

bool CarlesonTent::contains(const BallPoint& zeta) const {
  if (origin) return true;
  const double r = apex.norm();
  const BallPoint u = apex.scaled(1.0 / r);
  return std::abs(1.0 - inner(zeta, u)) <= 1.0 - r;
}

std::string CarlesonTent::label() const {
  if (origin) return "T0";
  std::ostringstream os;
  os.precision(17);
  os << "T(" << apex.c[0].real() << "," << apex.c[0].imag();
  if (apex.dim == 2) os << "," << apex.c[1].real() << "," << apex.c[1].imag();
  os << ")";
  return os.str();
}

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::PolarGrid: return "polar-grid";
    case Scheme::MonteCarlo: return "monte-carlo";
    case Scheme::KubeAdapted: return "kube-adapted";
  }
  return "?";
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "polar-grid") return Scheme::PolarGrid;
  if (s == "monte-carlo") return Scheme::MonteCarlo;
  if (s == "kube-adapted") return Scheme::KubeAdapted;
  throw ValidationError("unknown quadrature scheme '" + s + "'");
}

void KahanSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x))
    comp_ += (sum_ - t) + x;
  else
    comp_ += (x - t) + sum_;
  sum_ = t;
}

QuadratureRule::QuadratureRule(std::vector<BallPoint> n, std::vector<double> m, Scheme s,
                               std::uint64_t sd, int d)
    : nodes(std::move(n)), masses(std::move(m)), scheme(s), seed(sd), dim(d) {
  if (nodes.size() != masses.size()) throw ValidationError("quadrature: nodes/masses size mismatch");
  if (nodes.empty()) throw ValidationError("quadrature: empty rule");
  KahanSum total;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!(masses[i] > 0.0)) throw ValidationError("quadrature: non-positive mass");
    if (!nodes[i].in_ball()) throw ValidationError("quadrature: node outside the ball");
    total.add(masses[i]);
  }
  if (std::abs(total.value() - 1.0) > 1e-12)
    throw NumericalError("quadrature: masses do not sum to 1");
}

double QuadratureRule::total_mass() const {
  KahanSum s;
  for (double m : masses) s.add(m);
  return s.value();
}

namespace {

// Radial cell edges t_0 = 0 < ... < t_n = 1.
std::vector<double> radial_edges(int n, double g) {
  std::vector<double> t(n + 1);
  t[0] = 0.0;
  if (g >= 1.0) {
    for (int k = 1; k <= n; ++k) t[k] = double(k) / n;
  } else {
    for (int k = 1; k < n; ++k) t[k] = 1.0 - std::pow(g, k);
    t[n] = 1.0;
  }
  return t;
}

void normalize(std::vector<double>& m) {
  KahanSum s;
  for (double x : m) s.add(x);
  const double tot = s.value();
  for (double& x : m) x /= tot;
  // absorb the last rounding residue into the largest mass
  KahanSum s2;
  for (double x : m) s2.add(x);
  auto it = std::max_element(m.begin(), m.end());
  *it += 1.0 - s2.value();
}

}  // namespace

QuadratureRule build_polar_grid(int dim, const PolarOptions& opt) {
  if (dim != 1 && dim != 2) throw ValidationError("polar grid: unsupported dimension");
  if (opt.n_radial < 1 || opt.n_angular < 1) throw ValidationError("polar grid: size must be >= 1");
  if (!(opt.grading > 0.0)) throw ValidationError("polar grid: grading must be positive");
  const auto t = radial_edges(opt.n_radial, opt.grading);
  std::vector<BallPoint> nodes;
  std::vector<double> masses;
  const double e = 2.0 * dim;  // nu-mass of B(0, r) is r^(2d)
  for (int k = 0; k < opt.n_radial; ++k) {
    const double s0 = std::pow(t[k], e), s1 = std::pow(t[k + 1], e);
    const double r = std::pow(0.5 * (s0 + s1), 1.0 / e);
    const double ring_mass = s1 - s0;
    if (dim == 1) {
      int m = opt.n_angular;
      if (opt.angular == AngularMode::Hyperbolic)
        m = std::min(opt.max_ring_count, std::max(8, pow2_ceil(opt.hyperbolic_c / (1.0 - r))));
      for (int j = 0; j < m; ++j) {
        const double th = kTwoPi * j / m;
        nodes.emplace_back(std::polar(r, th));
        masses.push_back(ring_mass / m);
      }
    } else {
      // Hopf coordinates: sin^2(eta), theta1, theta2 uniform for the sphere measure
      const int m = opt.n_angular;
      for (int a = 0; a < m; ++a) {
        const double s = (a + 0.5) / m;
        const double c1 = std::sqrt(1.0 - s), c2 = std::sqrt(s);
        for (int b = 0; b < m; ++b)
          for (int c = 0; c < m; ++c) {
            const double t1 = kTwoPi * (b + 0.5) / m, t2 = kTwoPi * (c + 0.5) / m;
            nodes.emplace_back(std::polar(r * c1, t1), std::polar(r * c2, t2));
            masses.push_back(ring_mass / (double(m) * m * m));
          }
      }
    }
  }
  normalize(masses);
  return QuadratureRule(std::move(nodes), std::move(masses), Scheme::PolarGrid, 0, dim);
}

QuadratureRule build_monte_carlo(int dim, std::size_t n, std::uint64_t seed) {
  if (dim != 1 && dim != 2) throw ValidationError("monte-carlo: unsupported dimension");
  if (n < 1) throw ValidationError("monte-carlo: size must be >= 1");
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<BallPoint> nodes;
  nodes.reserve(n);
  while (nodes.size() < n) {
    BallPoint p;
    if (dim == 1) {
      const double x = u(gen), y = u(gen);
      p = BallPoint(cplx(x, y));
    } else {
      const double a = u(gen), b = u(gen), c = u(gen), d = u(gen);
      p = BallPoint(cplx(a, b), cplx(c, d));
    }
    if (p.norm2() < 1.0) nodes.push_back(p);
  }
  std::vector<double> masses(n, 1.0 / double(n));
  normalize(masses);
  return QuadratureRule(std::move(nodes), std::move(masses), Scheme::MonteCarlo, seed, dim);
}

QuadratureRule build_quadrature(int dim, Scheme scheme, std::size_t size, std::uint64_t seed) {
  if (size < 1) throw ValidationError("quadrature: size must be >= 1");
  switch (scheme) {
    case Scheme::PolarGrid: {
      PolarOptions opt;
      opt.n_radial = int(size);
      opt.n_angular = int(size);
      return build_polar_grid(dim, opt);
    }
    case Scheme::MonteCarlo: return build_monte_carlo(dim, size, seed);
    case Scheme::KubeAdapted:
      throw ValidationError("kube-adapted rules are built from a tree (see bergman_tree.hpp)");
  }
  throw ValidationError("quadrature: unknown scheme");
}

Integral integrate(const PointFn& f, const Region& region, const QuadratureRule& rule) {
  Integral out;
  KahanSum re, im;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    if (region && !region(rule.nodes[i])) continue;
    const cplx v = rule.masses[i] * f(rule.nodes[i]);
    re.add(v.real());
    im.add(v.imag());
    ++out.nodes_hit;
  }
  out.value = cplx(re.value(), im.value());
  return out;
}

Integral integrate(const PointFn& f, const QuadratureRule& rule) { return integrate(f, Region{}, rule); }

}  // namespace bergman
