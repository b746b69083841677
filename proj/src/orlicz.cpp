#include "bergman/orlicz.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bergman/errors.hpp"
#include "bergman/geometry.hpp"

namespace bergman {

namespace {
constexpr double kE = std::numbers::e;

// Root of a decreasing function of x on [lo, hi] with g(lo) >= 0 >= g(hi).
template <class G>
double solve_decreasing(G g, double lo, double hi, double glo, double ghi, int& evals) {
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  std::uintmax_t iters = 200;
  auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-13 * std::max(1.0, std::abs(a)); };
  auto counted = [&](double x) {
    ++evals;
    return g(x);
  };
  const auto r = boost::math::tools::toms748_solve(counted, lo, hi, glo, ghi, tol, iters);
  if (iters >= 200) throw NumericalError("root finder did not converge");
  return 0.5 * (r.first + r.second);
}
}  // namespace

YoungFunction::YoungFunction(YoungFamily f, double q, double a) : family_(f), q_(q), a_(a) {
  if (!std::isfinite(q) || !std::isfinite(a)) throw ValidationError("Young function: parameters must be finite");
  if (f == YoungFamily::Power) {
    if (!(q > 1.0)) throw ValidationError("Young function: power exponent must exceed 1");
    inv_one_ = 1.0;
  } else {
    if (!(q >= 1.0)) throw ValidationError("Young function: power-log exponent must be >= 1");
    check_young();
    inv_one_ = inverse(1.0);
  }
}

YoungFunction YoungFunction::power(double r) { return YoungFunction(YoungFamily::Power, r, 0.0); }
YoungFunction YoungFunction::power_log(double q, double a) { return YoungFunction(YoungFamily::PowerLog, q, a); }

double YoungFunction::operator()(double t) const {
  if (t <= 0.0) return 0.0;
  if (family_ == YoungFamily::Power) return std::pow(t, q_);
  return std::pow(t, q_) * std::pow(std::log(kE + t), a_);
}

double YoungFunction::inverse(double y) const {
  if (y <= 0.0) return 0.0;
  if (family_ == YoungFamily::Power) return std::pow(y, 1.0 / q_);
  // Phi is increasing; solve Phi(e^x) = y in x
  double lo = -1.0, hi = 1.0;
  auto g = [&](double x) { return std::log(y) - std::log((*this)(std::exp(x))); };
  int guard = 0;
  while (g(lo) < 0.0 && guard++ < 200) lo *= 2.0;
  guard = 0;
  while (g(hi) > 0.0 && guard++ < 200) hi *= 2.0;
  int evals = 0;
  return std::exp(solve_decreasing(g, lo, hi, g(lo), g(hi), evals));
}

void YoungFunction::check_young() const {
  // increasing and convex on a logarithmic grid, superlinear at 1e3 and 1e6
  double prev_t = 0.0, prev_v = 0.0, prev_slope = 0.0;
  for (int k = -60; k <= 80; ++k) {
    const double t = std::pow(10.0, k / 10.0);
    const double v = (*this)(t);
    if (!(v > prev_v)) throw ValidationError("Young function: not strictly increasing");
    const double slope = (v - prev_v) / (t - prev_t);
    if (slope < prev_slope * (1.0 - 1e-9)) throw ValidationError("Young function: not convex");
    prev_t = t;
    prev_v = v;
    prev_slope = slope;
  }
  if (!((*this)(1e6) / 1e6 > (*this)(1e3) / 1e3 && (*this)(1e3) / 1e3 > (*this)(1.0)))
    throw ValidationError("Young function: not superlinear");
}

std::string YoungFunction::label() const {
  std::ostringstream os;
  os.precision(6);
  if (family_ == YoungFamily::Power)
    os << "t^" << q_;
  else
    os << "t^" << q_ << "*log(e+t)^" << a_;
  return os.str();
}

LuxembourgResult luxembourg_average(const double* f, const double* mass, std::size_t n, const YoungFunction& phi,
                                    bool use_closed_form) {
  LuxembourgResult out;
  KahanSum m, mf;
  double fmax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (f[i] < 0.0 || !std::isfinite(f[i])) throw ValidationError("Luxembourg average: f must be finite and >= 0");
    m.add(mass[i]);
    mf.add(mass[i] * f[i]);
    fmax = std::max(fmax, f[i]);
  }
  if (!(m.value() > 0.0)) throw NumericalError("Luxembourg average: empty set");
  if (fmax == 0.0) return out;
  const double total = m.value();
  if (use_closed_form && phi.is_power()) {
    const double r = phi.exponent();
    KahanSum s;
    for (std::size_t i = 0; i < n; ++i) s.add(mass[i] * std::pow(f[i] / fmax, r));
    out.value = fmax * std::pow(s.value() / total, 1.0 / r);
    return out;
  }
  // <Phi(f/lambda)> - 1 as a function of x = log(lambda), decreasing
  auto g = [&](double x) {
    const double lam = std::exp(x);
    KahanSum s;
    for (std::size_t i = 0; i < n; ++i) s.add(mass[i] * phi(f[i] / lam));
    return s.value() / total - 1.0;
  };
  const double c = phi.inverse_one();
  const double lo = std::log(mf.value() / total / c), hi = std::log(fmax / c);
  if (!(hi - lo > 1e-14)) {
    out.value = std::exp(hi);
    return out;
  }
  double glo = g(lo), ghi = g(hi);
  out.evaluations = 2;
  // rounding can push the Jensen endpoints by an ulp
  glo = std::max(glo, 0.0);
  ghi = std::min(ghi, 0.0);
  const double x = solve_decreasing(g, lo, hi, glo, ghi, out.evaluations);
  out.value = std::exp(x);
  out.residual = g(x);
  return out;
}

LuxembourgResult luxembourg_average(const std::vector<double>& f, const std::vector<double>& mass,
                                    const YoungFunction& phi, bool use_closed_form) {
  if (f.size() != mass.size()) throw ValidationError("Luxembourg average: size mismatch");
  return luxembourg_average(f.data(), mass.data(), f.size(), phi, use_closed_form);
}

BpCheck young_bp_check(const YoungFunction& phi, double p) {
  if (!(p > 1.0)) throw ValidationError("B_p check: p must exceed 1");
  BpCheck out;
  const double q = phi.exponent(), a = phi.log_exponent();
  const double U = std::log(out.T);
  auto integrand = [&](double u) {
    if (phi.is_power()) return std::exp((q - p) * u);
    return std::exp((q - p) * u) * std::pow(u + std::log1p(std::exp(1.0 - u)), a);
  };
  double err = 0.0;
  out.integral_to_T = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, U, 20, 1e-13, &err);
  if (phi.is_power()) {
    out.converges = q < p;
    out.reason = out.converges ? "power exponent below p" : "power exponent >= p: integrand decays no faster than 1/t";
  } else {
    out.converges = q < p || (q == p && a < -1.0);
    if (q < p)
      out.reason = "power exponent below p";
    else if (q == p && a < -1.0)
      out.reason = "power exponent equals p with log exponent below -1";
    else
      out.reason = "tail not integrable";
  }
  if (!out.converges) return out;
  double tail;
  if (phi.is_power()) {
    tail = std::exp(-(p - q) * U) / (p - q);
  } else {
    boost::math::quadrature::exp_sinh<double> es;
    tail = es.integrate(integrand, U, std::numeric_limits<double>::infinity());
  }
  out.total = out.integral_to_T + tail;
  return out;
}

std::vector<double> tent_luxembourg(const SetTree& t, const std::vector<double>& f, const YoungFunction& phi,
                                    const Mask& mask) {
  if (f.size() != t.atoms()) throw ValidationError("tent_luxembourg: atom values size mismatch");
  std::vector<double> out(t.size(), 0.0);
  if (phi.is_power()) {
    // closed form through tent sums of f^r, scaled by the global max for range safety
    const double r = phi.exponent();
    double fmax = 0.0;
    for (double v : f) fmax = std::max(fmax, v);
    if (fmax == 0.0) return out;
    std::vector<double> fr(f.size());
    for (std::size_t a = 0; a < f.size(); ++a) fr[a] = std::pow(f[a] / fmax, r);
    const auto num = t.tent_integrals(fr);
    const auto den = t.tent_integrals({});
    for (std::size_t i = 0; i < t.size(); ++i)
      if (selected(mask, i) && den[i] > 0.0) out[i] = fmax * std::pow(num[i] / den[i], 1.0 / r);
    return out;
  }
  const auto& m = t.atom_mass();
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!selected(mask, i)) continue;
    const std::size_t b = t.tent_begin(i), e = t.tent_end(i);
    if (e == b) continue;
    out[i] = luxembourg_average(f.data() + b, m.data() + b, e - b, phi).value;
  }
  return out;
}

std::vector<double> orlicz_maximal_nodes(const SetTree& t, const std::vector<double>& f, const YoungFunction& phi,
                                         const Mask& mask) {
  return max_over_ancestors(t, tent_luxembourg(t, f, phi, mask), mask);
}

double orlicz_maximal(const TentIndex& index, const std::vector<double>& f_atoms, const BallPoint& z,
                      const YoungFunction& phi) {
  const int k = index.tree().locate(z);
  const SetTree& s = index.sets();
  double best = 0.0;
  for (int g = k; g >= 0; g = s.parent(g)) {
    const std::size_t b = s.tent_begin(g), e = s.tent_end(g);
    if (e == b) continue;
    best = std::max(best, luxembourg_average(f_atoms.data() + b, s.atom_mass().data() + b, e - b, phi).value);
  }
  return best;
}

}  // namespace bergman
