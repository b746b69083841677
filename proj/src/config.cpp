#include "bergman/config.hpp"

#include <cmath>

#include "bergman/errors.hpp"

namespace bergman {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ValidationError(where + ": " + what);
}

}  // namespace

ObjectReader::ObjectReader(const Json& j, std::string where) : j_(j), where_(std::move(where)) {
  if (!j_.is_object()) fail(where_, "expected a JSON object");
}

bool ObjectReader::has(const std::string& key) { return j_.contains(key); }

const Json* ObjectReader::member(const std::string& key) {
  seen_.insert(key);
  auto it = j_.find(key);
  return it == j_.end() ? nullptr : &*it;
}

double ObjectReader::number(const std::string& key, double def, double lo, double hi) {
  const Json* v = member(key);
  if (!v) return def;
  if (!v->is_number()) fail(where_ + "." + key, "expected a number");
  const double x = v->get<double>();
  if (!std::isfinite(x) || x < lo || x > hi)
    fail(where_ + "." + key, "value " + std::to_string(x) + " outside [" + std::to_string(lo) + ", " +
                                 std::to_string(hi) + "]");
  return x;
}

long long ObjectReader::integer(const std::string& key, long long def, long long lo, long long hi) {
  const Json* v = member(key);
  if (!v) return def;
  if (!v->is_number_integer()) fail(where_ + "." + key, "expected an integer");
  const long long x = v->get<long long>();
  if (x < lo || x > hi)
    fail(where_ + "." + key, "value " + std::to_string(x) + " outside [" + std::to_string(lo) + ", " +
                                 std::to_string(hi) + "]");
  return x;
}

std::string ObjectReader::string(const std::string& key, const std::string& def) {
  const Json* v = member(key);
  if (!v) return def;
  if (!v->is_string()) fail(where_ + "." + key, "expected a string");
  return v->get<std::string>();
}

std::vector<double> ObjectReader::numbers(const std::string& key, const std::vector<double>& def) {
  const Json* v = member(key);
  if (!v) return def;
  if (!v->is_array() || v->empty()) fail(where_ + "." + key, "expected a non-empty array of numbers");
  std::vector<double> out;
  for (const auto& x : *v) {
    if (!x.is_number() || !std::isfinite(x.get<double>())) fail(where_ + "." + key, "expected finite numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::vector<long long> ObjectReader::integers(const std::string& key, const std::vector<long long>& def,
                                              long long lo, long long hi) {
  const Json* v = member(key);
  if (!v) return def;
  if (!v->is_array() || v->empty()) fail(where_ + "." + key, "expected a non-empty array of integers");
  std::vector<long long> out;
  for (const auto& x : *v) {
    if (!x.is_number_integer()) fail(where_ + "." + key, "expected integers");
    const long long y = x.get<long long>();
    if (y < lo || y > hi) fail(where_ + "." + key, "value " + std::to_string(y) + " out of range");
    out.push_back(y);
  }
  return out;
}

std::vector<std::string> ObjectReader::strings(const std::string& key, const std::vector<std::string>& def) {
  const Json* v = member(key);
  if (!v) return def;
  if (!v->is_array() || v->empty()) fail(where_ + "." + key, "expected a non-empty array of strings");
  std::vector<std::string> out;
  for (const auto& x : *v) {
    if (!x.is_string()) fail(where_ + "." + key, "expected strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

void ObjectReader::finish() const {
  for (const auto& [k, v] : j_.items())
    if (!seen_.count(k)) fail(where_, "unknown key '" + k + "'");
}

TreeParams parse_tree(const Json& j, const std::string& where) {
  ObjectReader r(j, where);
  const int dim = int(r.integer("dim", 1, 1, 2));
  TreeParams p = TreeParams::defaults(dim);
  p.R = r.number("R", p.R, 1e-3, 20.0);
  p.delta = r.number("delta", p.delta, 1e-4, 20.0);
  p.depth = int(r.integer("depth", p.depth, 0, 16));
  p.radial_offset = r.number("radial_offset", p.radial_offset, 0.0, 20.0);
  p.rotation = r.number("rotation", p.rotation, -1e3, 1e3);
  p.stagger = r.number("stagger", p.stagger, 0.0, 1.0);
  p.candidate_oversampling = int(r.integer("candidate_oversampling", p.candidate_oversampling, 1, 4096));
  p.sphere_candidates = std::size_t(r.integer("sphere_candidates", (long long)p.sphere_candidates, 1, 10'000'000));
  p.net_cap = std::size_t(r.integer("net_cap", (long long)p.net_cap, 1, 100'000'000));
  r.finish();
  try {
    p.validate();
  } catch (const ValidationError& e) {
    fail(where, e.what());
  }
  return p;
}

Json tree_params_json(const TreeParams& p) {
  return Json{{"dim", p.dim},
              {"R", p.R},
              {"delta", p.delta},
              {"depth", p.depth},
              {"radial_offset", p.radial_offset},
              {"rotation", p.rotation},
              {"stagger", p.stagger},
              {"candidate_oversampling", p.candidate_oversampling},
              {"sphere_candidates", p.sphere_candidates},
              {"net_cap", p.net_cap}};
}

YoungFunction parse_young(const Json& j, const std::string& where) {
  ObjectReader r(j, where);
  const std::string fam = r.string("family", "");
  try {
    if (fam == "power") {
      const double e = r.number("r", 0.0);
      r.finish();
      return YoungFunction::power(e);
    }
    if (fam == "power-log") {
      const double q = r.number("p", 0.0), a = r.number("a", 0.0);
      r.finish();
      return YoungFunction::power_log(q, a);
    }
  } catch (const ValidationError& e) {
    fail(where, e.what());
  }
  fail(where + ".family", "expected \"power\" or \"power-log\"");
}

Scheme parse_scheme(const std::string& s, const std::string& where) {
  try {
    return scheme_from_string(s);
  } catch (const std::exception&) {
    fail(where, "unknown quadrature scheme '" + s + "'");
  }
}

Weight parse_weight(const Json& j, const std::string& where,
                    const std::function<std::shared_ptr<const BergmanTree>()>& reference) {
  ObjectReader r(j, where);
  const std::string kind = r.string("kind", "");
  const double scale = r.number("scale", 1.0, 1e-300, 1e300);
  if (!(scale > 0.0)) fail(where + ".scale", "must be > 0");
  Weight w = Weight::unit();
  if (kind == "unit") {
    w = Weight::unit();
  } else if (kind == "power-radial") {
    w = Weight::power_radial(r.number("alpha", 0.0, -50.0, 50.0));
  } else if (kind == "product") {
    const Json* f = r.member("factors");
    if (!f || !f->is_array() || f->empty()) fail(where + ".factors", "expected a non-empty array");
    std::vector<std::pair<BallPoint, double>> factors;
    for (std::size_t k = 0; k < f->size(); ++k) {
      ObjectReader fr((*f)[k], where + ".factors[" + std::to_string(k) + "]");
      const auto c = fr.numbers("center", {});
      const double a = fr.number("alpha", 0.0, -50.0, 50.0);
      fr.finish();
      BallPoint p;
      if (c.size() == 2)
        p = BallPoint(cplx(c[0], c[1]));
      else if (c.size() == 4)
        p = BallPoint(cplx(c[0], c[1]), cplx(c[2], c[3]));
      else
        fail(fr.where() + ".center", "expected [re, im] or [re1, im1, re2, im2]");
      if (!p.in_ball()) fail(fr.where() + ".center", "must lie in the open unit ball");
      factors.emplace_back(p, a);
    }
    w = Weight::product(std::move(factors));
  } else if (kind == "tabulated") {
    const auto lv = r.numbers("per_level", {});
    if (lv.empty()) fail(where + ".per_level", "required");
    for (double v : lv)
      if (!(v > 0.0)) fail(where + ".per_level", "values must be > 0");
    auto tree = reference();
    std::vector<double> vals(tree->size());
    for (std::size_t i = 0; i < vals.size(); ++i)
      vals[i] = lv[std::min<std::size_t>(std::size_t(tree->node(int(i)).level), lv.size() - 1)];
    w = Weight::tabulated(tree, std::move(vals));
  } else if (kind == "explicit") {
    const std::string id = r.string("id", "");
    try {
      w = Weight::from_id(id);
    } catch (const ValidationError& e) {
      fail(where + ".id", e.what());
    }
  } else if (kind == "dual") {
    const double p = r.number("p", 2.0, 1.0 + 1e-9, 1e6);
    const Json* of = r.member("of");
    if (!of) fail(where + ".of", "required");
    w = parse_weight(*of, where + ".of", reference).dual(p);
  } else {
    fail(where + ".kind", "expected one of unit, power-radial, product, tabulated, explicit, dual");
  }
  r.finish();
  return scale == 1.0 ? w : w.scaled(scale);
}

}  // namespace bergman
