#include "bergman/weights.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bergman/errors.hpp"
#include "bergman/numerics.hpp"

namespace bergman {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}


std::string truncation_of(const BergmanTree& t) {
  std::ostringstream os;
  os.precision(6);
  os << "depth " << t.depth() << ", R " << t.params().R << ", offset " << t.params().radial_offset;
  return os.str();
}

CharacteristicReport from_argmax(const TentIndex& index, const ArgMax& a) {
  CharacteristicReport r;
  r.value = a.value;
  r.node = a.node;
  r.extremal = a.node >= 0 ? node_label(index.tree(), a.node) : "none";
  r.truncation = truncation_of(index.tree());
  return r;
}

template <class F>
CharacteristicReport over_family(const IndexFamily& family, F&& per_index) {
  if (family.empty()) throw ValidationError("characteristic: empty tree family");
  CharacteristicReport best;
  best.value = -1.0;
  for (std::size_t k = 0; k < family.size(); ++k) {
    CharacteristicReport r = per_index(*family[k]);
    if (r.value > best.value) {
      best = std::move(r);
      best.tree = int(k);
    }
  }
  if (family.size() > 1) best.extremal = "tree " + std::to_string(best.tree) + ", " + best.extremal;
  return best;
}

std::vector<double> sqrt_of(const std::vector<double>& v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::sqrt(v[i]);
  return out;
}

}  // namespace

Weight Weight::explicit_fn(std::string id, std::function<double(const BallPoint&)> fn) {
  Weight w;
  w.kind_ = WeightKind::Explicit;
  w.label_ = std::move(id);
  w.base_ = std::make_shared<const std::function<double(const BallPoint&)>>(std::move(fn));
  return w;
}

Weight Weight::unit() {
  Weight w = power_radial(0.0);
  return w;
}

Weight Weight::power_radial(double alpha) {
  if (!std::isfinite(alpha)) throw ValidationError("power-radial weight: alpha must be finite");
  Weight w = explicit_fn("power-radial", [](const BallPoint& z) { return 1.0 - z.norm2(); });
  w.kind_ = WeightKind::PowerRadial;
  w.exponent_ = alpha;
  return w;
}

Weight Weight::product(std::vector<std::pair<BallPoint, double>> factors) {
  if (factors.empty()) throw ValidationError("product weight: no factors");
  std::ostringstream os;
  os << "product(";
  for (std::size_t k = 0; k < factors.size(); ++k) {
    require_in_ball(factors[k].first, "product weight centre");
    if (k) os << ";";
    os << fmt(factors[k].first.c[0].real()) << "," << fmt(factors[k].first.c[0].imag()) << ":"
       << fmt(factors[k].second);
  }
  os << ")";
  Weight w = explicit_fn(os.str(), [factors = std::move(factors)](const BallPoint& z) {
    double v = 1.0;
    for (const auto& [a, alpha] : factors) v *= std::pow(one_minus_phi2(a, z), alpha);
    return v;
  });
  w.kind_ = WeightKind::Product;
  return w;
}

Weight Weight::tabulated(std::shared_ptr<const BergmanTree> tree, std::vector<double> per_node) {
  if (!tree || per_node.size() != tree->size()) throw ValidationError("tabulated weight: one value per node required");
  for (double v : per_node)
    if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError("tabulated weight: values must be finite and > 0");
  Weight w = explicit_fn("tabulated", [tree, per_node = std::move(per_node)](const BallPoint& z) {
    const int k = tree->try_locate(z);
    return k < 0 ? 1.0 : per_node[k];
  });
  w.kind_ = WeightKind::Tabulated;
  return w;
}

Weight Weight::from_id(const std::string& id) {
  if (id == "unit") return explicit_fn("unit", [](const BallPoint&) { return 1.0; });
  if (id == "angular")
    return explicit_fn("angular", [](const BallPoint& z) { return 1.0 + 0.5 * std::cos(std::arg(z.c[0])); });
  if (id == "radial-log")
    return explicit_fn("radial-log", [](const BallPoint& z) { return 1.0 - std::log1p(-z.norm2()); });
  throw ValidationError("unknown weight expression id '" + id + "'");
}

double Weight::operator()(const BallPoint& z) const {
  const double b = (*base_)(z);
  return exponent_ == 1.0 ? scale_ * b : scale_ * std::pow(b, exponent_);
}

Weight Weight::scaled(double c) const {
  if (!(c > 0.0) || !std::isfinite(c)) throw ValidationError("weight scale must be finite and > 0");
  Weight w = *this;
  w.scale_ *= c;
  return w;
}

Weight Weight::pow(double e) const {
  if (!std::isfinite(e)) throw ValidationError("weight power must be finite");
  Weight w = *this;
  w.scale_ = std::pow(scale_, e);
  w.exponent_ *= e;
  return w;
}

Weight Weight::dual(double p) const {
  if (!(p > 1.0)) throw ValidationError("dual weight: p must exceed 1");
  return pow(1.0 - p / (p - 1.0));
}

std::optional<std::pair<double, double>> Weight::power_radial_form() const {
  if (kind_ != WeightKind::PowerRadial) return std::nullopt;
  return std::make_pair(scale_, exponent_);
}

std::string Weight::label() const {
  std::string s;
  if (kind_ == WeightKind::PowerRadial)
    s = "power-radial(" + fmt(exponent_) + ")";
  else
    s = exponent_ == 1.0 ? label_ : label_ + "^" + fmt(exponent_);
  if (scale_ != 1.0) s = fmt(scale_) + "*" + s;
  return s;
}

std::vector<double> sample_weight(const TentIndex& index, const Weight& w) {
  auto v = index.sample(w);
  for (double x : v)
    if (!(x > 0.0) || !std::isfinite(x))
      throw ValidationError("weight " + w.label() + " is not finite and positive at every quadrature node");
  return v;
}

double average(const Weight& w, const Region& set, const QuadratureRule& rule) {
  KahanSum num, den;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    if (!set(rule.nodes[i])) continue;
    num.add(rule.masses[i] * w(rule.nodes[i]));
    den.add(rule.masses[i]);
  }
  if (!(den.value() > 0.0)) throw NumericalError("average over an empty set");
  return num.value() / den.value();
}

CharacteristicReport with_trend(const CharacteristicReport& coarse, const CharacteristicReport& fine) {
  CharacteristicReport r = fine;
  r.trend = {coarse.value, fine.value};
  r.diverged = fine.value >= 2.0 * coarse.value;
  return r;
}

std::string node_label(const BergmanTree& tree, int node) {
  const auto& n = tree.node(node);
  return "level " + std::to_string(n.level) + " index " + std::to_string(n.index);
}

CharacteristicReport joint_bp_dyadic(const TentIndex& index, const std::vector<double>& w,
                                     const std::vector<double>& sigma, double p) {
  if (!(p > 1.0)) throw ValidationError("B_p: p must exceed 1");
  return from_argmax(index, joint_bp(index.sets(), w, sigma, p));
}

CharacteristicReport joint_bp_dyadic(const Weight& w, const Weight& sigma, double p, const IndexFamily& family) {
  return over_family(family, [&](const TentIndex& ix) {
    return joint_bp_dyadic(ix, sample_weight(ix, w), sample_weight(ix, sigma), p);
  });
}

CharacteristicReport b_infty(const TentIndex& index, const std::vector<double>& sigma) {
  return from_argmax(index, b_infty(index.sets(), sigma));
}

CharacteristicReport b_infty(const Weight& sigma, const IndexFamily& family) {
  return over_family(family, [&](const TentIndex& ix) { return b_infty(ix, sample_weight(ix, sigma)); });
}

CharacteristicReport orlicz_bump(const TentIndex& index, const std::vector<double>& w,
                                 const std::vector<double>& sigma, const YoungFunction& phi,
                                 const YoungFunction& psi) {
  const SetTree& t = index.sets();
  const auto aw = tent_averages(t, w), as = tent_averages(t, sigma);
  const auto lw = tent_luxembourg(t, sqrt_of(w), phi), ls = tent_luxembourg(t, sqrt_of(sigma), psi);
  ArgMax best;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(lw[i] > 0.0) || !(ls[i] > 0.0)) continue;
    const double v = aw[i] / lw[i] * (as[i] / ls[i]);
    if (v > best.value) best = {v, int(i)};
  }
  return from_argmax(index, best);
}

CharacteristicReport orlicz_bump(const Weight& w, const Weight& sigma, const YoungFunction& phi,
                                 const YoungFunction& psi, const IndexFamily& family) {
  return over_family(family, [&](const TentIndex& ix) {
    return orlicz_bump(ix, sample_weight(ix, w), sample_weight(ix, sigma), phi, psi);
  });
}

std::vector<CarlesonTent> ApexGrid::tents(int dim) const {
  if (levels < 0) throw ValidationError("apex grid: levels must be >= 0");
  std::vector<CarlesonTent> out{CarlesonTent::whole_ball()};
  const double two_pi = 2.0 * std::numbers::pi;
  for (int k = 1; k <= levels; ++k) {
    const double r = 1.0 - std::ldexp(1.0, -k);
    std::size_t n = std::size_t(std::ceil(angular_factor / (1.0 - r)));
    if (dim == 1) {
      n = std::min(n, max_directions);
      for (std::size_t j = 0; j < n; ++j)
        out.push_back(CarlesonTent::at(BallPoint(std::polar(r, two_pi * double(j) / double(n)))));
    } else {
      n = std::min(n * n, max_directions);
      // Kronecker sequence on the cube mapped to Hopf coordinates
      const double g = 1.2207440846057596;
      const double a1 = 1.0 / g, a2 = 1.0 / (g * g), a3 = 1.0 / (g * g * g);
      for (std::size_t j = 0; j < n; ++j) {
        const double x1 = std::fmod(0.5 + a1 * double(j + 1), 1.0);
        const double x2 = std::fmod(0.5 + a2 * double(j + 1), 1.0);
        const double x3 = std::fmod(0.5 + a3 * double(j + 1), 1.0);
        const double c = std::sqrt(x1), s = std::sqrt(1.0 - x1);
        out.push_back(CarlesonTent::at(BallPoint(std::polar(r * c, two_pi * x2), std::polar(r * s, two_pi * x3))));
      }
    }
  }
  return out;
}

std::string ApexGrid::label() const {
  std::ostringstream os;
  os.precision(6);
  os << "apex radii 1-2^-k, k=1.." << levels << ", " << angular_factor << "/(1-r) directions";
  return os.str();
}

std::vector<std::vector<double>> carleson_sums(const TentIndex& index, const std::vector<CarlesonTent>& tents,
                                               const std::vector<const std::vector<double>*>& fns) {
  const auto& m = index.sets().atom_mass();
  std::vector<std::vector<double>> out(tents.size(), std::vector<double>(fns.size() + 1, 0.0));
  parallel_for(tents.size(), default_threads(), [&](std::size_t k) {
    std::vector<KahanSum> acc(fns.size() + 1);
    index.for_each_in(tents[k], [&](std::size_t a) {
      acc[0].add(m[a]);
      for (std::size_t f = 0; f < fns.size(); ++f) acc[f + 1].add(m[a] * (*fns[f])[a]);
    });
    for (std::size_t f = 0; f <= fns.size(); ++f) out[k][f] = acc[f].value();
  });
  return out;
}

CharacteristicReport bp_classical(const TentIndex& index, const std::vector<double>& w,
                                  const std::vector<double>& sigma, double p, const ApexGrid& grid) {
  if (!(p > 1.0)) throw ValidationError("B_p: p must exceed 1");
  const auto tents = grid.tents(index.tree().dim());
  const auto sums = carleson_sums(index, tents, {&w, &sigma});
  CharacteristicReport r;
  r.value = -1.0;
  for (std::size_t k = 0; k < tents.size(); ++k) {
    if (!(sums[k][0] > 0.0)) continue;
    const double v = sums[k][1] / sums[k][0] * std::pow(sums[k][2] / sums[k][0], p - 1.0);
    if (v > r.value) {
      r.value = v;
      r.extremal = tents[k].label();
    }
  }
  if (r.value < 0.0) throw NumericalError("classical B_p: no apex captured a quadrature node");
  r.truncation = grid.label() + "; " + truncation_of(index.tree());
  return r;
}

CharacteristicReport bp_classical(const Weight& w, const Weight& sigma, double p, const TentIndex& index,
                                  const ApexGrid& grid) {
  return bp_classical(index, sample_weight(index, w), sample_weight(index, sigma), p, grid);
}

}  // namespace bergman
