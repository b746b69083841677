#include "bergman/bergman_tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include "json.hpp"
#include <numbers>
#include <random>
#include <sstream>

#include "bergman/errors.hpp"
#include "bergman/numerics.hpp"

namespace bergman {

using nlohmann::json;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_2pi(double x) {
  x = std::fmod(x, kTwoPi);
  if (x < 0) x += kTwoPi;
  if (x >= kTwoPi) x -= kTwoPi;
  return x;
}

// 1 - tanh(rho)^2
double sech2(double rho) {
  const double c = std::cosh(rho);
  return 1.0 / (c * c);
}

std::size_t d1_candidate_count(double spacing, const TreeParams& p) {
  if (!(spacing < kPi)) return std::size_t(p.candidate_oversampling);
  const std::size_t m = pow2_ceil(p.candidate_oversampling * kTwoPi / spacing);
  if (m > (std::size_t(1) << 30)) throw ValidationError("sphere net: candidate grid too large");
  return m;
}

// Kronecker sequence on the unit cube mapped to the uniform measure on S^3.
BallPoint sphere_candidate(std::size_t k, double rotation) {
  constexpr double phi3 = 1.2207440846057596;
  const double a1 = 1.0 / phi3, a2 = a1 / phi3, a3 = a2 / phi3;
  auto frac = [](double x) { return x - std::floor(x); };
  const double x1 = frac(0.5 + k * a1), x2 = frac(0.5 + k * a2), x3 = frac(0.5 + k * a3);
  const double s = x1;
  const double t1 = kTwoPi * x2 + rotation, t2 = kTwoPi * x3 + rotation;
  return BallPoint(std::polar(std::sqrt(1.0 - s), t1), std::polar(std::sqrt(s), t2));
}

struct LevelNet {
  std::vector<BallPoint> points;
  std::vector<double> angles;  // d = 1
};

LevelNet make_net(int level, const TreeParams& p) {
  if (level < 1) throw ValidationError("sphere net: level must be >= 1");
  const double rho = level * p.R + p.radial_offset;
  const double r = std::tanh(rho);
  LevelNet out;
  if (p.dim == 1) {
    const double spacing = circle_spacing(r, 2.0 * p.delta);
    const std::size_t m = d1_candidate_count(spacing, p);
    const double h = kTwoPi / double(m);
    std::size_t k = std::isfinite(spacing) ? std::size_t(std::ceil(spacing / h)) : m;
    k = std::max<std::size_t>(k, 1);
    const double start = p.rotation + p.stagger * h * double(k);
    for (std::size_t c = 0;; c += k) {
      if (out.angles.size() >= p.net_cap) throw ValidationError("sphere net: net size exceeds net_cap");
      const double th = start + h * double(c);
      out.angles.push_back(th);
      out.points.emplace_back(std::polar(r, th));
      // the next pick must also stay k steps away from the first point across the wrap
      if (c + 2 * k > m) break;
    }
    return out;
  }
  const double gap = sech2(rho);
  const double thresh = gap * std::cosh(2.0 * p.delta);
  std::vector<BallPoint> dirs;
  for (std::size_t k = 0; k < p.sphere_candidates; ++k) {
    const BallPoint u = sphere_candidate(k, p.rotation);
    bool ok = true;
    for (const auto& v : dirs)
      if (std::abs(1.0 - r * r * inner(u, v)) < thresh) {
        ok = false;
        break;
      }
    if (!ok) continue;
    if (dirs.size() >= p.net_cap) throw ValidationError("sphere net: net size exceeds net_cap");
    dirs.push_back(u);
    out.points.push_back(u.scaled(r));
  }
  return out;
}

}  // namespace

TreeParams TreeParams::defaults(int dim) {
  TreeParams p;
  p.dim = dim;
  if (dim == 2) {
    p.R = 0.9;
    p.delta = 0.45;
    p.depth = 3;
  }
  return p;
}

void TreeParams::validate() const {
  if (dim != 1 && dim != 2) throw ValidationError("tree: dim must be 1 or 2");
  if (!(R > 0.0)) throw ValidationError("tree: R must be positive");
  if (!(delta > 0.0)) throw ValidationError("tree: delta must be positive");
  if (depth < 0) throw ValidationError("tree: depth must be >= 0");
  if (!(radial_offset >= 0.0 && radial_offset < R)) throw ValidationError("tree: radial_offset must lie in [0, R)");
  if (!std::isfinite(rotation)) throw ValidationError("tree: rotation must be finite");
  if (!(stagger >= 0.0 && stagger < 1.0)) throw ValidationError("tree: stagger must lie in [0, 1)");
  if (dim == 2 && stagger != 0.0) throw ValidationError("tree: stagger applies to d = 1 only");
  if (candidate_oversampling < 2) throw ValidationError("tree: candidate_oversampling must be >= 2");
  if (sphere_candidates < 1) throw ValidationError("tree: sphere_candidates must be >= 1");
  if (net_cap < 1) throw ValidationError("tree: net_cap must be >= 1");
  // tanh saturates in double precision past ~18
  if ((depth + 1) * R + radial_offset > 17.0) throw ValidationError("tree: horizon too close to the boundary for double precision");
}

double circle_spacing(double r, double dist) {
  if (!(r > 0.0)) return std::numeric_limits<double>::infinity();
  const double x = (1.0 - r * r) * std::sinh(dist) / (2.0 * r);
  if (x >= 1.0) return std::numeric_limits<double>::infinity();
  return 2.0 * std::asin(x);
}

std::vector<BallPoint> sphere_candidates(int level, const TreeParams& p) {
  p.validate();
  if (level < 1) throw ValidationError("sphere candidates: level must be >= 1");
  const double r = std::tanh(level * p.R + p.radial_offset);
  std::vector<BallPoint> out;
  if (p.dim == 1) {
    const std::size_t m = d1_candidate_count(circle_spacing(r, 2.0 * p.delta), p);
    out.reserve(m);
    for (std::size_t c = 0; c < m; ++c) out.emplace_back(std::polar(r, p.rotation + kTwoPi * double(c) / double(m)));
  } else {
    for (std::size_t k = 0; k < p.sphere_candidates; ++k) out.push_back(sphere_candidate(k, p.rotation).scaled(r));
  }
  return out;
}

std::vector<BallPoint> build_sphere_net(int level, const TreeParams& p) {
  p.validate();
  return make_net(level, p).points;
}

BergmanTree BergmanTree::build(const TreeParams& p) {
  p.validate();
  std::vector<std::vector<BallPoint>> nets(p.depth + 1);
  std::vector<std::vector<double>> angles(p.depth + 1);
  for (int n = 1; n <= p.depth; ++n) {
    auto net = make_net(n, p);
    nets[n] = std::move(net.points);
    angles[n] = std::move(net.angles);
  }
  return assemble(p, nets, angles);
}

BergmanTree BergmanTree::from_nets(const TreeParams& p, const std::vector<std::vector<BallPoint>>& nets) {
  p.validate();
  std::vector<std::vector<double>> angles(nets.size());
  if (p.dim == 1)
    for (std::size_t n = 1; n < nets.size(); ++n)
      for (const auto& z : nets[n]) angles[n].push_back(std::arg(z.c[0]));
  return assemble(p, nets, angles);
}

BergmanTree BergmanTree::assemble(const TreeParams& p, const std::vector<std::vector<BallPoint>>& nets,
                                  const std::vector<std::vector<double>>& angles) {
  if (int(nets.size()) != p.depth + 1) throw ValidationError("tree: expected one net per level");
  BergmanTree t;
  t.params_ = p;
  const int D = p.depth;
  t.radius_.assign(D + 2, 0.0);
  t.gap_.assign(D + 2, 1.0);
  for (int n = 1; n <= D + 1; ++n) {
    const double rho = n * p.R + p.radial_offset;
    t.radius_[n] = std::tanh(rho);
    t.gap_[n] = sech2(rho);
  }
  t.phi_.assign(D + 1, {});
  t.bnd_.assign(D + 1, {});
  t.dirs_.assign(D + 1, {});

  // temporary ids: (level, k) -> flat index in creation order
  struct Tmp {
    int level, k, parent;
    BallPoint z;
    double angle;
    std::vector<int> children;
  };
  std::vector<Tmp> tmp;
  tmp.push_back({0, 0, -1, BallPoint(), 0.0, {}});
  if (p.dim == 2) tmp[0].z = BallPoint(0.0, 0.0);
  std::vector<std::vector<int>> tmp_levels(D + 1);
  tmp_levels[0] = {0};

  for (int n = 1; n <= D; ++n) {
    const auto& net = nets[n];
    if (net.empty()) throw ValidationError("tree: empty net at some level");
    const double r = t.radius_[n];
    if (p.dim == 1) {
      if (angles[n].size() != net.size()) throw ValidationError("tree: angle count mismatch");
      auto& phi = t.phi_[n];
      for (double a : angles[n]) {
        double f = wrap_2pi(a - p.rotation);
        if (f > kTwoPi - 1e-12) f = 0.0;
        phi.push_back(f);
      }
      for (std::size_t k = 1; k < phi.size(); ++k)
        if (!(phi[k] > phi[k - 1])) throw ValidationError("tree: net angles must increase with the index");
      auto& b = t.bnd_[n];
      b.resize(phi.size());
      b[0] = 0.5 * (phi.back() + kTwoPi + phi.front());
      if (phi.size() == 1) b[0] = phi[0] + kPi;
      for (std::size_t k = 1; k < phi.size(); ++k) b[k] = 0.5 * (phi[k - 1] + phi[k]);
    } else {
      for (const auto& z : net) t.dirs_[n].push_back(z.scaled(1.0 / z.norm()));
    }
    for (std::size_t k = 0; k < net.size(); ++k) {
      if (std::abs(net[k].norm() - r) > 1e-9) throw ValidationError("tree: net point off its sphere");
      Tmp node{n, int(k), -1, net[k], p.dim == 1 ? angles[n][k] : 0.0, {}};
      node.parent = n == 1 ? 0 : tmp_levels[n - 1][t.patch_index(n - 1, net[k])];
      tmp_levels[n].push_back(int(tmp.size()));
      tmp[node.parent].children.push_back(int(tmp.size()));
      tmp.push_back(std::move(node));
    }
  }

  // DFS pre-order renumbering, children in index order
  std::vector<int> new_id(tmp.size(), -1);
  std::vector<int> order;
  order.reserve(tmp.size());
  std::vector<int> stack{0};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    new_id[v] = int(order.size());
    order.push_back(v);
    for (auto it = tmp[v].children.rbegin(); it != tmp[v].children.rend(); ++it) stack.push_back(*it);
  }
  t.nodes_.resize(tmp.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Tmp& s = tmp[order[i]];
    TreeNode& node = t.nodes_[i];
    node.level = s.level;
    node.index = s.k + 1;
    node.net_point = s.z;
    node.angle = s.angle;
    node.parent = s.parent < 0 ? -1 : new_id[s.parent];
    for (int c : s.children) node.children.push_back(new_id[c]);
    if (s.level == 0) {
      node.center = s.z;
    } else {
      const double rc = std::tanh((s.level + 0.5) * p.R + p.radial_offset);
      node.center = s.z.scaled(rc / s.z.norm());
    }
  }
  t.levels_.assign(D + 1, {});
  for (int n = 0; n <= D; ++n)
    for (int v : tmp_levels[n]) t.levels_[n].push_back(new_id[v]);
  t.subtree_end_.resize(t.nodes_.size());
  for (std::size_t i = 0; i < t.nodes_.size(); ++i) t.subtree_end_[i] = int(i) + 1;
  for (std::size_t i = t.nodes_.size(); i-- > 1;) {
    const int par = t.nodes_[i].parent;
    t.subtree_end_[par] = std::max(t.subtree_end_[par], t.subtree_end_[i]);
  }
  return t;
}

std::vector<int> BergmanTree::parent_vector() const {
  std::vector<int> out(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) out[i] = nodes_[i].parent;
  return out;
}

double BergmanTree::layer_rho(int n) const { return n == 0 ? 0.0 : n * params_.R + params_.radial_offset; }

int BergmanTree::level_of(const BallPoint& z) const {
  const double r2 = z.norm2();
  const double h = radius_.back();
  if (!(r2 < h * h)) throw OutOfDepthError("point beyond the deepest annulus of the tree");
  int n = 0;
  while (n + 1 <= params_.depth && r2 >= radius_[n + 1] * radius_[n + 1]) ++n;
  return n;
}

std::size_t BergmanTree::patch_index(int level, const BallPoint& z) const {
  if (level == 0) return 0;
  if (params_.dim == 1) {
    const auto& b = bnd_.at(level);
    if (b.size() == 1) return 0;
    const double f = wrap_2pi(std::arg(z.c[0]) - params_.rotation);
    if (f >= b[0]) return 0;
    // patch k covers (b[k], b[k+1]]; ties go to the lower index
    return std::size_t(std::lower_bound(b.begin() + 1, b.end(), f) - (b.begin() + 1));
  }
  const double nz = z.norm();
  if (nz == 0.0) throw DomainError("patch_of: the origin has no radial projection");
  const BallPoint u = z.scaled(1.0 / nz);
  const double r2 = radius_[level] * radius_[level];
  const auto& dirs = dirs_.at(level);
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    const double d = std::abs(1.0 - r2 * inner(u, dirs[k]));
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

int BergmanTree::patch_of(int level, const BallPoint& z) const { return levels_.at(level).at(patch_index(level, z)); }

int BergmanTree::locate(const BallPoint& z) const {
  require_in_ball(z, "locate");
  return patch_of(level_of(z), z);
}

int BergmanTree::try_locate(const BallPoint& z) const {
  const double h = radius_.back();
  if (!(z.norm2() < h * h)) return -1;
  return patch_of(level_of(z), z);
}

bool BergmanTree::kube_contains(int id, const BallPoint& z) const { return locate(z) == id; }

bool BergmanTree::tent_contains(int id, const BallPoint& z) const { return is_ancestor_or_self(id, locate(z)); }

std::pair<double, double> BergmanTree::patch_arc(int id) const {
  const TreeNode& v = nodes_.at(id);
  if (params_.dim != 1) throw ValidationError("patch_arc: only defined for d = 1");
  if (v.level == 0) return {-kPi, kPi};
  const auto& b = bnd_[v.level];
  const std::size_t k = std::size_t(v.index - 1);
  const std::size_t J = b.size();
  double lo, hi;
  if (J == 1) {
    lo = b[0] - kTwoPi;
    hi = b[0];
  } else if (k == 0) {
    lo = b[0] - kTwoPi;
    hi = b[1];
  } else {
    lo = b[k];
    hi = k + 1 < J ? b[k + 1] : b[0];
  }
  return {lo + params_.rotation, hi + params_.rotation};
}

double BergmanTree::kube_volume(int id) const {
  if (params_.dim != 1) throw ValidationError("kube_volume: analytic volumes only for d = 1");
  const TreeNode& v = nodes_.at(id);
  if (v.level == 0) return 1.0 - gap_[1];
  const auto [lo, hi] = patch_arc(id);
  return (gap_[v.level] - gap_[v.level + 1]) * (hi - lo) / kTwoPi;
}

namespace {
json point_json(const BallPoint& z) {
  json a = json::array({z.c[0].real(), z.c[0].imag()});
  if (z.dim == 2) {
    a.push_back(z.c[1].real());
    a.push_back(z.c[1].imag());
  }
  return a;
}

BallPoint point_from_json(const json& a, int dim) {
  if (!a.is_array() || a.size() != std::size_t(2 * dim)) throw ValidationError("tree json: malformed point");
  if (dim == 1) return BallPoint(cplx(a[0].get<double>(), a[1].get<double>()));
  return BallPoint(cplx(a[0].get<double>(), a[1].get<double>()), cplx(a[2].get<double>(), a[3].get<double>()));
}

json params_json(const TreeParams& p) {
  return json{{"dim", p.dim},
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
}  // namespace

std::string BergmanTree::to_json() const {
  json levels = json::array();
  for (int n = 0; n <= params_.depth; ++n) {
    json nodes = json::array();
    for (int id : levels_[n]) {
      const TreeNode& v = nodes_[id];
      json e{{"id", id},
             {"index", v.index},
             {"net_point", point_json(v.net_point)},
             {"center", point_json(v.center)},
             {"parent", v.parent}};
      if (params_.dim == 1) e["angle"] = v.angle;
      nodes.push_back(std::move(e));
    }
    levels.push_back(json{{"level", n}, {"rho", layer_rho(n)}, {"count", levels_[n].size()}, {"nodes", std::move(nodes)}});
  }
  json doc{{"format", "bergman-tree"}, {"version", 1}, {"params", params_json(params_)}, {"levels", std::move(levels)}};
  return doc.dump(1) + "\n";
}

BergmanTree BergmanTree::from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("tree json: ") + e.what());
  }
  try {
    if (doc.at("format") != "bergman-tree" || doc.at("version") != 1) throw ValidationError("tree json: unknown format");
    const json& jp = doc.at("params");
    TreeParams p;
    p.dim = jp.at("dim").get<int>();
    p.R = jp.at("R").get<double>();
    p.delta = jp.at("delta").get<double>();
    p.depth = jp.at("depth").get<int>();
    p.radial_offset = jp.at("radial_offset").get<double>();
    p.rotation = jp.at("rotation").get<double>();
    p.stagger = jp.value("stagger", 0.0);
    p.candidate_oversampling = jp.at("candidate_oversampling").get<int>();
    p.sphere_candidates = jp.at("sphere_candidates").get<std::size_t>();
    p.net_cap = jp.at("net_cap").get<std::size_t>();
    p.validate();
    const json& lv = doc.at("levels");
    if (!lv.is_array() || int(lv.size()) != p.depth + 1) throw ValidationError("tree json: level count mismatch");
    std::vector<std::vector<BallPoint>> nets(p.depth + 1);
    std::vector<std::vector<double>> angles(p.depth + 1);
    for (int n = 1; n <= p.depth; ++n)
      for (const json& e : lv[n].at("nodes")) {
        nets[n].push_back(point_from_json(e.at("net_point"), p.dim));
        if (p.dim == 1) angles[n].push_back(e.at("angle").get<double>());
      }
    BergmanTree t = assemble(p, nets, angles);
    // stored links must agree with the recomputed structure
    for (int n = 0; n <= p.depth; ++n) {
      const json& nodes = lv[n].at("nodes");
      if (nodes.size() != t.levels_[n].size()) throw ValidationError("tree json: node count mismatch");
      for (std::size_t k = 0; k < nodes.size(); ++k) {
        const int id = t.levels_[n][k];
        if (nodes[k].at("id").get<int>() != id || nodes[k].at("parent").get<int>() != t.nodes_[id].parent)
          throw ValidationError("tree json: parent links disagree with the nets");
      }
    }
    return t;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("tree json: ") + e.what());
  }
}

std::vector<BergmanTree> build_tree_family(const TreeParams& params, int count) {
  if (count < 1) throw ValidationError("tree family: count must be >= 1");
  params.validate();
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  // d = 1: a grid of radial offsets (two once count >= 4) times angular staggers
  const int offsets = count >= 4 ? 2 : 1;
  const int staggers = (count + offsets - 1) / offsets;
  std::vector<BergmanTree> out;
  for (int l = 0; l < count; ++l) {
    TreeParams p = params;
    if (l > 0) {
      if (params.dim == 1) {
        p.radial_offset = std::fmod(params.radial_offset + (l % offsets) * params.R / offsets, params.R);
        p.stagger = std::fmod(params.stagger + double(l / offsets) / staggers, 1.0);
      } else {
        p.radial_offset = std::fmod(params.radial_offset + l * params.R / count, params.R);
        p.rotation = params.rotation + l * golden;
      }
    }
    out.push_back(BergmanTree::build(p));
  }
  return out;
}

KubeAdaptedRule build_kube_rule(const BergmanTree& tree, const KubeRuleOptions& opt) {
  if (tree.dim() != 1) throw ValidationError("kube-adapted rule: only d = 1");
  if (opt.radial < 1 || opt.angular < 1 || opt.outer_ring < 1) throw ValidationError("kube-adapted rule: counts must be >= 1");
  const auto [gx, gw] = gauss_legendre(opt.radial);
  KubeAdaptedRule out;
  std::vector<BallPoint> nodes;
  std::vector<double> masses;
  const std::size_t per = std::size_t(opt.radial) * opt.angular;
  nodes.reserve(tree.size() * per + opt.outer_ring);
  masses.reserve(tree.size() * per + opt.outer_ring);
  out.node_kube.reserve(tree.size() * per + opt.outer_ring);
  const double rot = tree.params().rotation;
  for (std::size_t id = 0; id < tree.size(); ++id) {
    const TreeNode& v = tree.node(int(id));
    const std::size_t first = masses.size();
    KahanSum raw;
    if (v.level == 0) {
      const double s1 = 1.0 - tree.layer_gap(1);
      for (int i = 0; i < opt.radial; ++i) {
        const double s = 0.5 * s1 * (gx[i] + 1.0);
        for (int j = 0; j < opt.angular; ++j) {
          const double th = rot + kTwoPi * (j + 0.5) / opt.angular;
          nodes.emplace_back(std::polar(std::sqrt(s), th));
          masses.push_back(0.5 * s1 * gw[i] / opt.angular);
          raw.add(masses.back());
        }
      }
    } else {
      const double t0 = -std::log(tree.layer_gap(v.level)), t1 = -std::log(tree.layer_gap(v.level + 1));
      const auto [lo, hi] = tree.patch_arc(int(id));
      for (int i = 0; i < opt.radial; ++i) {
        const double tt = t0 + 0.5 * (t1 - t0) * (gx[i] + 1.0);
        const double r = std::sqrt(-std::expm1(-tt));
        const double radial_mass = 0.5 * (t1 - t0) * gw[i] * std::exp(-tt);
        for (int j = 0; j < opt.angular; ++j) {
          const double th = lo + (hi - lo) * (j + 0.5) / opt.angular;
          nodes.emplace_back(std::polar(r, th));
          masses.push_back(radial_mass * (hi - lo) / (kTwoPi * opt.angular));
          raw.add(masses.back());
        }
      }
    }
    const double scale = tree.kube_volume(int(id)) / raw.value();
    for (std::size_t a = first; a < masses.size(); ++a) masses[a] *= scale;
    out.node_kube.insert(out.node_kube.end(), masses.size() - first, int(id));
  }
  const double gh = tree.layer_gap(tree.depth() + 1);
  const double r_out = std::sqrt(1.0 - 0.5 * gh);
  for (int j = 0; j < opt.outer_ring; ++j) {
    nodes.emplace_back(std::polar(r_out, rot + kTwoPi * (j + 0.5) / opt.outer_ring));
    masses.push_back(gh / opt.outer_ring);
    out.node_kube.push_back(-1);
  }
  out.rule = QuadratureRule(std::move(nodes), std::move(masses), Scheme::KubeAdapted, 0, 1);
  return out;
}

TentIndex::TentIndex(const BergmanTree& tree, const QuadratureRule& rule) : tree_(&tree), rule_(&rule) {
  if (rule.dim != tree.dim()) throw ValidationError("tent index: rule and tree dimensions differ");
  std::vector<int> nk(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) nk[i] = tree.try_locate(rule.nodes[i]);
  init(std::move(nk));
}

TentIndex::TentIndex(const BergmanTree& tree, const KubeAdaptedRule& kr) : tree_(&tree), rule_(&kr.rule) {
  if (kr.node_kube.size() != kr.rule.size()) throw ValidationError("tent index: node_kube size mismatch");
  init(kr.node_kube);
}

void TentIndex::init(std::vector<int> node_kube) {
  node_kube_ = std::move(node_kube);
  const std::size_t n = tree_->size();
  std::vector<std::size_t> count(n, 0);
  for (int k : node_kube_)
    if (k >= 0) ++count[k];
  std::vector<std::size_t> offset(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) offset[i + 1] = offset[i] + count[i];
  atom_node_.assign(offset[n], 0);
  atom_kube_.assign(offset[n], 0);
  std::vector<double> mass(offset[n]);
  auto pos = offset;
  for (std::size_t i = 0; i < node_kube_.size(); ++i) {
    const int k = node_kube_[i];
    if (k < 0) continue;
    atom_node_[pos[k]] = std::uint32_t(i);
    atom_kube_[pos[k]] = k;
    mass[pos[k]] = rule_->masses[i];
    ++pos[k];
  }
  sets_ = SetTree(tree_->parent_vector(), count, std::move(mass));
  if (tree_->dim() == 1) {
    std::vector<std::pair<double, std::uint32_t>> by_angle(atom_node_.size());
    for (std::size_t a = 0; a < atom_node_.size(); ++a) by_angle[a] = {std::arg(atom_point(a).c[0]), std::uint32_t(a)};
    std::sort(by_angle.begin(), by_angle.end());
    atom_angle_sorted_.resize(by_angle.size());
    atom_by_angle_.resize(by_angle.size());
    for (std::size_t q = 0; q < by_angle.size(); ++q) {
      atom_angle_sorted_[q] = by_angle[q].first;
      atom_by_angle_[q] = by_angle[q].second;
    }
  }
}

std::size_t TentIndex::min_nodes_per_kube() const {
  std::size_t m = std::numeric_limits<std::size_t>::max();
  for (std::size_t i = 0; i < sets_.size(); ++i) m = std::min(m, sets_.own_end(i) - sets_.own_begin(i));
  return m;
}

SparsityCertificate sparsity_certificate(const TentIndex& index, std::size_t min_nodes) {
  const SetTree& s = index.sets();
  const auto own = s.own_integrals({});
  const auto tent = s.accumulate(own);
  SparsityCertificate c;
  c.per_node_ratios.assign(s.size(), 0.0);
  c.depth_used = index.tree().depth();
  c.min_nodes_per_kube = index.min_nodes_per_kube();
  c.starved = c.min_nodes_per_kube < min_nodes;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!(own[i] > 0.0)) continue;
    c.per_node_ratios[i] = tent[i] / own[i];
    if (c.per_node_ratios[i] > c.tau_hat) {
      c.tau_hat = c.per_node_ratios[i];
      c.argmax = int(i);
    }
  }
  return c;
}

DyadicCover covering_dyadic_tent(const std::vector<const TentIndex*>& indices, const CarlesonTent& t) {
  if (indices.empty()) throw ValidationError("covering_dyadic_tent: no trees");
  DyadicCover best;
  bool found = false;
  bool all_deep = !t.origin;
  for (std::size_t l = 0; l < indices.size(); ++l) {
    const TentIndex& ix = *indices[l];
    const SetTree& s = ix.sets();
    int lca = -1;
    KahanSum vol;
    ix.for_each_in(t, [&](std::size_t a) {
      const int k = ix.atom_kube()[a];
      lca = lca < 0 ? k : s.lowest_common_ancestor(lca, k);
      vol.add(s.atom_mass()[a]);
    });
    if (!t.origin) {
      const int apex_level = ix.tree().try_locate(t.apex) < 0 ? ix.tree().depth() + 1 : ix.tree().level_of(t.apex);
      if (apex_level < 2) all_deep = false;
    }
    if (lca < 0) continue;
    std::size_t viol = 0;
    ix.for_each_in(t, [&](std::size_t a) {
      if (!s.is_ancestor_or_self(std::size_t(lca), std::size_t(ix.atom_kube()[a]))) ++viol;
    });
    KahanSum tv;
    for (std::size_t a = s.tent_begin(lca); a < s.tent_end(lca); ++a) tv.add(s.atom_mass()[a]);
    DyadicCover c{int(l), lca, tv.value() / vol.value(), tv.value(), vol.value(), viol};
    if (!found || c.ratio < best.ratio) best = c;
    found = true;
  }
  if (!found) throw NumericalError("covering_dyadic_tent: the Carleson tent captures no quadrature nodes");
  if (best.node == 0 && all_deep)
    throw NumericalError("covering_dyadic_tent: only root tents cover a deep Carleson tent (increase depth or tree count)");
  return best;
}

CarlesonCover covering_carleson_tent(const TentIndex& index, int node) {
  const SetTree& s = index.sets();
  const BergmanTree& tree = index.tree();
  if (node < 0 || std::size_t(node) >= tree.size()) throw ValidationError("covering_carleson_tent: bad node");
  CarlesonCover out;
  KahanSum kvol;
  for (std::size_t a = s.tent_begin(node); a < s.tent_end(node); ++a) kvol.add(s.atom_mass()[a]);
  if (!(kvol.value() > 0.0)) throw NumericalError("covering_carleson_tent: tent captures no quadrature nodes");
  if (node != 0) {
    const BallPoint& c = tree.node(node).center;
    const BallPoint u = c.scaled(1.0 / c.norm());
    double tstar = 1.0;
    for (std::size_t a = s.tent_begin(node); a < s.tent_end(node); ++a)
      tstar = std::min(tstar, 1.0 - std::abs(1.0 - inner(index.atom_point(a), u)));
    if (tstar >= 1.0 - 1e-15) throw NumericalError("covering_carleson_tent: apex search reached the boundary");
    if (tstar > 0.0) out.tent = CarlesonTent::at(u.scaled(tstar * (1.0 - 1e-13)));
  }
  KahanSum tvol;
  index.for_each_in(out.tent, [&](std::size_t a) { tvol.add(s.atom_mass()[a]); });
  for (std::size_t a = s.tent_begin(node); a < s.tent_end(node); ++a)
    if (!out.tent.contains(index.atom_point(a))) ++out.violations;
  out.ratio = tvol.value() / kvol.value();
  return out;
}

}  // namespace bergman

namespace bergman {

PartitionAudit audit_partition(const BergmanTree& tree, std::size_t samples, std::uint64_t seed) {
  PartitionAudit out;
  const int D = tree.depth();
  const bool d1 = tree.dim() == 1;
  // net angles per level, sorted, for the Voronoi check
  std::vector<std::vector<double>> ang(D + 1);
  if (d1) {
    for (int n = 1; n <= D; ++n) {
      std::vector<std::pair<double, double>> arcs;
      for (int id : tree.level_nodes(n)) {
        ang[n].push_back(wrap_2pi(tree.node(id).angle));
        arcs.push_back(tree.patch_arc(id));
      }
      std::sort(ang[n].begin(), ang[n].end());
      std::sort(arcs.begin(), arcs.end());
      double total = 0.0;
      for (std::size_t k = 0; k < arcs.size(); ++k) {
        total += arcs[k].second - arcs[k].first;
        if (k + 1 < arcs.size() && std::abs(arcs[k].second - arcs[k + 1].first) > 1e-12) ++out.tiling_gaps;
      }
      if (std::abs(total - kTwoPi) > 1e-9) ++out.tiling_gaps;
    }
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double h = tree.horizon_radius();
  auto ang_dist = [](double a, double b) {
    const double d = std::abs(wrap_2pi(a - b));
    return std::min(d, kTwoPi - d);
  };
  while (out.samples < samples) {
    BallPoint z = d1 ? BallPoint(cplx(u(rng), u(rng))) : BallPoint(cplx(u(rng), u(rng)), cplx(u(rng), u(rng)));
    if (out.samples % 2 == 1) {
      // every other sample uniform in the Bergman radius, so deep levels are hit
      const double nz = z.norm();
      if (nz == 0.0 || nz > 1.0) continue;
      z = z.scaled(std::tanh(0.5 * (u(rng) + 1.0) * bergman_radius(h)) / nz);
    }
    if (!(z.norm() < h)) continue;
    ++out.samples;
    const int id = tree.locate(z);
    const int n = tree.node(id).level;
    const double r = z.norm();
    bool ok = r >= (n == 0 ? 0.0 : tree.layer_radius(n)) && r < tree.layer_radius(n + 1);
    if (ok && n >= 1 && d1) {
      const double a = std::arg(z.c[0]);
      const auto [lo, hi] = tree.patch_arc(id);
      const double rel = wrap_2pi(a - lo);
      ok = rel <= (hi - lo) + 1e-12;
      const double mine = ang_dist(a, tree.node(id).angle);
      const auto& v = ang[n];
      const std::size_t k = std::size_t(std::lower_bound(v.begin(), v.end(), wrap_2pi(a)) - v.begin());
      for (int dk = -2; dk <= 2 && ok; ++dk) {
        const std::size_t j = (k + v.size() + std::size_t(dk + 2) - 2) % v.size();
        if (ang_dist(a, v[j]) < mine - 1e-12) ok = false;
      }
    } else if (ok && n >= 1) {
      // nearest net point on the level sphere by |1 - r^2 <u, v>|
      const BallPoint uz = z.scaled(1.0 / r);
      const double rn = tree.layer_radius(n);
      auto gap = [&](int j) {
        const BallPoint v = tree.node(j).net_point.scaled(1.0 / tree.node(j).net_point.norm());
        return std::abs(1.0 - rn * rn * inner(uz, v));
      };
      const double mine = gap(id);
      for (int j : tree.level_nodes(n))
        if (gap(j) < mine - 1e-12) {
          ok = false;
          break;
        }
    }
    if (!ok) ++out.violations;
  }
  return out;
}

}  // namespace bergman
