#include "bergman/operators.hpp"

#include <algorithm>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <random>

#include "bergman/errors.hpp"
#include "bergman/numerics.hpp"

namespace bergman {

namespace {

constexpr double kNearSingular = 1e-6;

int threads_of(const PowerOptions& opt) { return opt.threads > 0 ? opt.threads : default_threads(); }

void check_rule(const BallPoint& z, const QuadratureRule& rule) {
  require_in_ball(z, "evaluation point");
  if (z.dim != rule.dim) throw ValidationError("evaluation point and rule have different dimensions");
}

std::vector<double> sqrt_weighted(const Weight& v, const QuadratureRule& rule) {
  std::vector<double> out(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double x = v(rule.nodes[i]);
    if (!(x > 0.0) || !std::isfinite(x))
      throw ValidationError("weight " + v.label() + " is not finite and positive at every quadrature node");
    out[i] = std::sqrt(x * rule.masses[i]);
  }
  return out;
}

}  // namespace

cplx bergman_kernel(const BallPoint& z, const BallPoint& zeta) {
  const cplx g = 1.0 - inner(z, zeta);
  return z.dim == 1 ? 1.0 / (g * g) : 1.0 / (g * g * g);
}

cplx bergman_projection(const PointFn& f, const BallPoint& z, const QuadratureRule& rule, bool* near_singular) {
  check_rule(z, rule);
  KahanSum re, im;
  bool near = false;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const cplx g = 1.0 - inner(z, rule.nodes[i]);
    near = near || std::abs(g) < kNearSingular;
    const cplx v = rule.masses[i] * f(rule.nodes[i]) * bergman_kernel(z, rule.nodes[i]);
    re.add(v.real());
    im.add(v.imag());
  }
  if (near_singular) *near_singular = near;
  return {re.value(), im.value()};
}

double maximal_projection(const RealFn& f, const BallPoint& z, const QuadratureRule& rule, bool* near_singular) {
  check_rule(z, rule);
  KahanSum s;
  bool near = false;
  const int e = z.dim + 1;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double g = std::abs(1.0 - inner(z, rule.nodes[i]));
    near = near || g < kNearSingular;
    s.add(rule.masses[i] * std::abs(f(rule.nodes[i])) / std::pow(g, e));
  }
  if (near_singular) *near_singular = near;
  return s.value();
}

cplx bergman_projection(const std::vector<cplx>& f, const BallPoint& z, const QuadratureRule& rule) {
  if (f.size() != rule.size()) throw ValidationError("projection: one value per rule node required");
  check_rule(z, rule);
  KahanSum re, im;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const cplx v = rule.masses[i] * f[i] * bergman_kernel(z, rule.nodes[i]);
    re.add(v.real());
    im.add(v.imag());
  }
  return {re.value(), im.value()};
}

double maximal_projection(const std::vector<double>& f, const BallPoint& z, const QuadratureRule& rule) {
  if (f.size() != rule.size()) throw ValidationError("projection: one value per rule node required");
  check_rule(z, rule);
  KahanSum s;
  const int e = z.dim + 1;
  for (std::size_t i = 0; i < rule.size(); ++i)
    s.add(rule.masses[i] * std::abs(f[i]) / std::pow(std::abs(1.0 - inner(z, rule.nodes[i])), e));
  return s.value();
}

SparseCollection make_sparse_collection(const SetTree& t, Mask mask, const std::vector<double>& v) {
  SparseCollection s;
  s.sets = &t;
  s.major_mass = major_measures(t, mask, v);
  s.tau = sparsity_constant(t, mask, v);
  s.mask = std::move(mask);
  return s;
}

std::vector<double> sparse_apply(const SparseCollection& s, const std::vector<double>& f) {
  return lambda_apply(*s.sets, f, s.mask);
}

double sparse_apply(const TentIndex& index, const Mask& mask, const std::vector<double>& f, const BallPoint& z) {
  return lambda_apply(index.sets(), f, mask).at(index.tree().locate(z));
}

std::vector<double> maximal_nodes(const SetTree& t, const std::vector<double>& f, const std::vector<double>& sigma,
                                  const Mask& mask) {
  std::vector<double> a(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) a[i] = std::abs(f[i]);
  return max_over_ancestors(t, tent_averages(t, a, sigma), mask);
}

double maximal_function(const TentIndex& index, const std::vector<double>& f, const BallPoint& z,
                        const std::vector<double>& sigma) {
  return maximal_nodes(index.sets(), f, sigma).at(index.tree().locate(z));
}

std::string to_string(KernelKind k) {
  switch (k) {
    case KernelKind::P:
      return "P";
    case KernelKind::PPlus:
      return "P+";
    case KernelKind::Lambda:
      return "Lambda";
  }
  return "?";
}

NormResult power_iteration(const MatVec& apply, const MatVec& apply_adjoint, Eigen::Index cols,
                           const PowerOptions& opt) {
  NormResult r;
  r.method = "power-iteration";
  if (cols == 0) return r;
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  Eigen::VectorXcd x(cols), y, z;
  for (Eigen::Index i = 0; i < cols; ++i) x[i] = u(rng);
  x.normalize();
  double prev = -1.0;
  for (int it = 1; it <= opt.max_iter; ++it) {
    apply(x, y);
    const double mu = y.squaredNorm();
    r.iterations = it;
    if (mu == 0.0) return r;
    apply_adjoint(y, z);
    const double zn = z.norm();
    if (!(zn > 0.0) || !std::isfinite(zn)) throw NumericalError("power iteration: degenerate iterate");
    x = z / zn;
    if (prev > 0.0 && std::abs(mu - prev) <= opt.rel_tol * mu) {
      r.value = std::sqrt(mu);
      return r;
    }
    prev = mu;
  }
  throw NumericalError("power iteration did not converge in " + std::to_string(opt.max_iter) + " iterations");
}

Eigen::MatrixXcd kernel_matrix(KernelKind k, const Weight& sigma, const Weight& w, const QuadratureRule& rule) {
  if (k == KernelKind::Lambda) throw ValidationError("kernel_matrix: Lambda has no point kernel; use lambda_matrix");
  const auto dw = sqrt_weighted(w, rule), ds = sqrt_weighted(sigma, rule);
  const Eigen::Index n = Eigen::Index(rule.size());
  Eigen::MatrixXcd a(n, n);
  parallel_for(std::size_t(n), default_threads(), [&](std::size_t i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      cplx kv = bergman_kernel(rule.nodes[i], rule.nodes[j]);
      if (k == KernelKind::PPlus) kv = std::abs(kv);
      a(Eigen::Index(i), j) = dw[i] * kv * ds[j];
    }
  });
  return a;
}

double dense_norm(const Eigen::MatrixXcd& a) {
  if (a.size() == 0) return 0.0;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(a);
  return svd.singularValues()(0);
}

NormResult operator_norm(KernelKind k, const Weight& sigma, const Weight& w, const QuadratureRule& rule,
                         const PowerOptions& opt, std::size_t dense_limit) {
  if (k == KernelKind::Lambda) throw ValidationError("operator_norm: use lambda_norm for the sparse operator");
  const Eigen::Index n = Eigen::Index(rule.size());
  if (rule.size() <= dense_limit) {
    const Eigen::MatrixXcd a = kernel_matrix(k, sigma, w, rule);
    auto r = power_iteration([&](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) { y.noalias() = a * x; },
                             [&](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) { y.noalias() = a.adjoint() * x; },
                             n, opt);
    r.method = "power-iteration/dense";
    return r;
  }
  const auto dw = sqrt_weighted(w, rule), ds = sqrt_weighted(sigma, rule);
  const int th = threads_of(opt);
  auto entry = [&](std::size_t i, std::size_t j) {
    cplx kv = bergman_kernel(rule.nodes[i], rule.nodes[j]);
    if (k == KernelKind::PPlus) kv = std::abs(kv);
    return dw[i] * kv * ds[j];
  };
  auto fwd = [&](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) {
    y.resize(n);
    parallel_for(std::size_t(n), th, [&](std::size_t i) {
      cplx s = 0.0;
      for (std::size_t j = 0; j < std::size_t(n); ++j) s += entry(i, j) * x[Eigen::Index(j)];
      y[Eigen::Index(i)] = s;
    });
  };
  auto adj = [&](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) {
    y.resize(n);
    parallel_for(std::size_t(n), th, [&](std::size_t j) {
      cplx s = 0.0;
      for (std::size_t i = 0; i < std::size_t(n); ++i) s += std::conj(entry(i, j)) * x[Eigen::Index(i)];
      y[Eigen::Index(j)] = s;
    });
  };
  auto r = power_iteration(fwd, adj, n, opt);
  r.method = "power-iteration/on-the-fly";
  return r;
}

namespace {

// y = D_out Lambda D_in x on real vectors
void lambda_matvec(const SetTree& t, const Mask& mask, const std::vector<double>& tent_mass,
                   const std::vector<double>& d_in, const std::vector<double>& d_out, const double* x, double* y) {
  std::vector<double> own(t.size(), 0.0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    double s = 0.0;
    for (std::size_t a = t.own_begin(i); a < t.own_end(i); ++a) s += d_in[a] * x[a];
    own[i] = s;
  }
  auto tent = t.accumulate(std::move(own));
  for (std::size_t i = 0; i < t.size(); ++i) tent[i] = tent_mass[i] > 0.0 ? tent[i] / tent_mass[i] : 0.0;
  const auto node_vals = sum_over_ancestors(t, tent, mask);
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t a = t.own_begin(i); a < t.own_end(i); ++a) y[a] = d_out[a] * node_vals[i];
}

void sqrt_mass_weight(const SetTree& t, const std::vector<double>& v, std::vector<double>& out, const char* name) {
  if (v.size() != t.atoms()) throw ValidationError(std::string("lambda norm: ") + name + " size mismatch");
  out.resize(v.size());
  for (std::size_t a = 0; a < v.size(); ++a) {
    if (!(v[a] > 0.0) || !std::isfinite(v[a]))
      throw ValidationError(std::string("lambda norm: ") + name + " must be finite and > 0");
    out[a] = std::sqrt(v[a] * t.atom_mass()[a]);
  }
}

}  // namespace

NormResult lambda_norm(const SetTree& t, const Mask& mask, const std::vector<double>& sigma,
                       const std::vector<double>& w, const PowerOptions& opt) {
  std::vector<double> ds, dw;
  sqrt_mass_weight(t, sigma, ds, "sigma");
  sqrt_mass_weight(t, w, dw, "w");
  const auto tm = t.tent_integrals({});
  const std::size_t n = t.atoms();
  std::vector<double> xr(n), yr(n);
  auto run = [&](const std::vector<double>& din, const std::vector<double>& dout) {
    return [&, din_p = &din, dout_p = &dout](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) {
      y.resize(Eigen::Index(n));
      for (std::size_t a = 0; a < n; ++a) xr[a] = x[Eigen::Index(a)].real();
      lambda_matvec(t, mask, tm, *din_p, *dout_p, xr.data(), yr.data());
      for (std::size_t a = 0; a < n; ++a) y[Eigen::Index(a)] = yr[a];
      for (std::size_t a = 0; a < n; ++a) xr[a] = x[Eigen::Index(a)].imag();
      lambda_matvec(t, mask, tm, *din_p, *dout_p, xr.data(), yr.data());
      for (std::size_t a = 0; a < n; ++a) y[Eigen::Index(a)] += cplx(0.0, yr[a]);
    };
  };
  auto r = power_iteration(run(ds, dw), run(dw, ds), Eigen::Index(n), opt);
  r.method = "power-iteration/tree";
  return r;
}

Eigen::MatrixXd lambda_matrix(const SetTree& t, const Mask& mask, const std::vector<double>& sigma,
                              const std::vector<double>& w) {
  std::vector<double> ds, dw;
  sqrt_mass_weight(t, sigma, ds, "sigma");
  sqrt_mass_weight(t, w, dw, "w");
  const auto tm = t.tent_integrals({});
  const Eigen::Index n = Eigen::Index(t.atoms());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t q = 0; q < t.size(); ++q) {
    if (!selected(mask, q) || !(tm[q] > 0.0)) continue;
    const std::size_t b = t.tent_begin(q), e = t.tent_end(q);
    for (std::size_t i = b; i < e; ++i)
      for (std::size_t j = b; j < e; ++j) a(Eigen::Index(i), Eigen::Index(j)) += 1.0 / tm[q];
  }
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) *= dw[std::size_t(i)] * ds[std::size_t(j)];
  return a;
}

double radial_mode_norm(int dim, double alpha_w, double alpha_s, double s_h, double l) {
  // ||e||_w ||e||_s / ||e||^2 for a holomorphic monomial e of degree l, in s = |z|^2
  const double a = l + dim;
  const double jw = boost::math::beta(a, alpha_w + 1.0, s_h);
  const double js = boost::math::beta(a, alpha_s + 1.0, s_h);
  return a * std::sqrt(jw * js);
}

NormResult radial_projection_norm(int dim, double scale_w, double alpha_w, double scale_s, double alpha_s,
                                  double s_h) {
  if (dim != 1 && dim != 2) throw ValidationError("radial norm: dim must be 1 or 2");
  if (!(alpha_w > -1.0) || !(alpha_s > -1.0))
    throw ValidationError("radial norm: exponents must exceed -1");
  if (!(s_h > 0.0 && s_h < 1.0)) throw ValidationError("radial norm: s_h must lie in (0, 1)");
  auto f = [&](double l) { return radial_mode_norm(dim, alpha_w, alpha_s, s_h, l); };
  // all small degrees, then a geometric grid out to well past the truncation scale
  std::vector<double> ls;
  for (int l = 0; l <= 100; ++l) ls.push_back(l);
  const double top = std::max(200.0, 50.0 / (1.0 - s_h));
  for (double l = 102.0; l < top; l = std::ceil(l * 1.02)) ls.push_back(l);
  ls.push_back(std::ceil(top));
  std::vector<double> vals(ls.size());
  for (std::size_t k = 0; k < ls.size(); ++k) vals[k] = f(ls[k]);
  std::size_t best = std::size_t(std::max_element(vals.begin(), vals.end()) - vals.begin());
  NormResult r;
  r.method = "radial-modes";
  r.value = vals[best];
  r.iterations = int(ls.size());
  if (best > 0 && best + 1 < ls.size()) {
    double lo = ls[best - 1], hi = ls[best + 1];
    // integer golden-section on the bracketing interval, then a short scan
    while (hi - lo > 16) {
      const double m1 = std::floor(lo + (hi - lo) * 0.381966), m2 = std::ceil(hi - (hi - lo) * 0.381966);
      if (f(m1) < f(m2))
        lo = m1;
      else
        hi = m2;
      r.iterations += 2;
    }
    for (double l = lo; l <= hi; l += 1.0) r.value = std::max(r.value, f(l));
  }
  r.value *= std::sqrt(scale_w * scale_s);
  return r;
}

}  // namespace bergman
