#include "bergman/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "bergman/config.hpp"
#include "bergman/errors.hpp"
#include "bergman/experiments.hpp"
#include "bergman/numerics.hpp"

namespace bergman {

namespace fs = std::filesystem;

namespace {

struct Common {
  std::string config;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  int threads = 0;
  fs::path config_dir() const { return config.empty() ? fs::path(".") : fs::path(config).parent_path(); }
};

Json load_config(const Common& c) {
  if (c.config.empty()) return Json::object();
  std::ifstream in(c.config, std::ios::binary);
  if (!in) throw ValidationError("cannot read config '" + c.config + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError("config '" + c.config + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw ValidationError("config: expected a JSON object");
  return j;
}

std::uint64_t read_seed(ObjectReader& r, const Common& c) {
  const auto s = std::uint64_t(r.integer("seed", 0, 0, (1LL << 62)));
  return c.seed ? *c.seed : s;
}

std::string num(double x) {
  if (std::isnan(x)) return "";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += csv_field(fields[i]);
  }
  return line + "\n";
}

Json num_json(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
  f << text;
  if (!f) throw std::runtime_error("write failed for '" + path.string() + "'");
}

void write_json(const fs::path& path, const Json& j) { write_file(path, j.dump(2) + "\n"); }

std::string reports_csv(const std::vector<RatioReport>& rows) {
  std::string s = csv_row({"experiment", "model", "seed", "inputs", "truncation", "lhs", "rhs", "ratio", "ratio_coarse",
                           "ratio_fine", "growth", "bound", "verdict", "note", "trend"});
  for (const auto& r : rows) {
    std::string trend;
    for (std::size_t i = 0; i < r.trend.size(); ++i) trend += (i ? ";" : "") + num(r.trend[i]);
    const double coarse = r.trend.empty() ? r.ratio : r.trend.front();
    const double fine = r.trend.empty() ? r.ratio : r.trend.back();
    s += csv_row({r.experiment, r.model, std::to_string(r.seed), r.inputs, r.truncation, num(r.lhs), num(r.rhs),
                  num(r.ratio), num(coarse), num(fine), num(r.growth()), num(r.bound), to_string(r.verdict), r.note,
                  trend});
  }
  return s;
}

// Per-experiment maxima of a report table.
Json reports_summary(const std::vector<RatioReport>& rows) {
  std::map<std::string, std::vector<const RatioReport*>> by;
  for (const auto& r : rows) by[r.experiment].push_back(&r);
  Json ex = Json::object();
  std::size_t flags = 0;
  for (const auto& [name, list] : by) {
    const RatioReport* hi = list.front();
    double lo = list.front()->ratio, max_growth = 0.0;
    std::size_t f = 0;
    for (const auto* r : list) {
      if (!(r->ratio <= hi->ratio)) hi = r;
      lo = std::min(lo, r->ratio);
      max_growth = std::max(max_growth, r->growth());
      f += r->verdict == Verdict::GrowthFlag;
    }
    flags += f;
    ex[name] = Json{{"rows", list.size()},
                    {"max_ratio", num_json(hi->ratio)},
                    {"max_ratio_inputs", hi->inputs},
                    {"max_ratio_seed", hi->seed},
                    {"min_ratio", num_json(lo)},
                    {"max_growth", num_json(max_growth)},
                    {"growth_flags", f},
                    {"model", hi->model}};
  }
  return Json{{"rows", rows.size()}, {"growth_flags", flags}, {"all_bounded_evidence", flags == 0}, {"experiments", ex}};
}

// ---- shared ball configuration ----

struct BallConfig {
  TreeParams params;
  int trees = 1;
  Scheme scheme = Scheme::KubeAdapted;
  std::size_t quadrature_size = 20000;
  KubeRuleOptions kube;
  std::vector<int> depths;

  BallSetup setup(int depth, std::uint64_t seed) const {
    BallOptions o;
    o.params = params;
    o.params.depth = depth;
    o.trees = trees;
    o.scheme = scheme;
    o.quadrature_size = quadrature_size;
    o.seed = seed;
    o.kube = kube;
    return BallSetup(o);
  }
  std::shared_ptr<const BergmanTree> reference() const {
    TreeParams p = params;
    p.depth = depths.back();
    return std::make_shared<const BergmanTree>(BergmanTree::build(p));
  }
  Json json() const {
    Json t = tree_params_json(params);
    t.erase("depth");
    return Json{{"tree", t},
                {"trees", trees},
                {"scheme", to_string(scheme)},
                {"quadrature_size", quadrature_size},
                {"kube", {{"radial", kube.radial}, {"angular", kube.angular}, {"outer_ring", kube.outer_ring}}},
                {"depths", depths}};
  }
};

BallConfig parse_ball(const Json* j, const std::string& where) {
  static const Json empty = Json::object();
  ObjectReader r(j ? *j : empty, where);
  BallConfig b;
  const Json* t = r.member("tree");
  b.params = t ? parse_tree(*t, where + ".tree") : TreeParams::defaults(1);
  const bool d1 = b.params.dim == 1;
  b.trees = int(r.integer("trees", 1, 1, 16));
  b.scheme = parse_scheme(r.string("scheme", d1 ? "kube-adapted" : "monte-carlo"), where + ".scheme");
  if (b.scheme == Scheme::KubeAdapted && !d1) throw ValidationError(where + ".scheme: kube-adapted requires dim 1");
  b.quadrature_size = std::size_t(r.integer("quadrature_size", d1 ? 20000 : 200000, 16, 50'000'000));
  if (const Json* k = r.member("kube")) {
    ObjectReader kr(*k, where + ".kube");
    b.kube.radial = int(kr.integer("radial", b.kube.radial, 1, 64));
    b.kube.angular = int(kr.integer("angular", b.kube.angular, 1, 256));
    b.kube.outer_ring = int(kr.integer("outer_ring", b.kube.outer_ring, 1, 1 << 20));
    kr.finish();
  }
  const auto d = r.integers("depths", d1 ? std::vector<long long>{6, 8} : std::vector<long long>{4, 5}, 1, 14);
  if (d.size() != 2 || d[0] >= d[1]) throw ValidationError(where + ".depths: expected [coarse, fine] with coarse < fine");
  b.depths = {int(d[0]), int(d[1])};
  r.finish();
  return b;
}

ApexGrid parse_apex(ObjectReader& r) {
  ApexGrid g;
  if (const Json* a = r.member("apex_grid")) {
    ObjectReader ar(*a, "apex_grid");
    g.levels = int(ar.integer("levels", g.levels, 1, 20));
    g.angular_factor = ar.number("angular_factor", g.angular_factor, 1e-3, 1e4);
    g.max_directions = std::size_t(ar.integer("max_directions", (long long)g.max_directions, 1, 1 << 20));
    ar.finish();
  }
  return g;
}

class WeightParser {
 public:
  explicit WeightParser(const BallConfig& b) : ball_(b) {}
  Weight operator()(const Json& j, const std::string& where) {
    return parse_weight(j, where, [this] {
      if (!ref_) ref_ = ball_.reference();
      return ref_;
    });
  }

 private:
  const BallConfig& ball_;
  std::shared_ptr<const BergmanTree> ref_;
};

struct Pair {
  Weight w, sigma;
};

std::vector<Pair> parse_pairs(ObjectReader& r, WeightParser& wp) {
  std::vector<Pair> out;
  if (const Json* p = r.member("pairs")) {
    if (r.has("pair_alphas")) throw ValidationError("config: give either pairs or pair_alphas");
    if (!p->is_array() || p->empty()) throw ValidationError("config.pairs: expected a non-empty array");
    for (std::size_t k = 0; k < p->size(); ++k) {
      const std::string where = "pairs[" + std::to_string(k) + "]";
      ObjectReader pr((*p)[k], where);
      const Json* w = pr.member("w");
      const Json* s = pr.member("sigma");
      if (!w || !s) throw ValidationError(where + ": requires w and sigma");
      out.push_back({wp(*w, where + ".w"), wp(*s, where + ".sigma")});
      pr.finish();
    }
    return out;
  }
  if (r.has("pair_alphas")) {
    const auto a = r.numbers("pair_alphas", {});
    for (double aw : a)
      for (double as : a) out.push_back({Weight::power_radial(aw), Weight::power_radial(as)});
    return out;
  }
  // default pairs keep alpha_w + alpha_sigma >= 0, where the joint characteristic is finite
  for (auto [aw, as] : {std::pair{0.0, 0.0}, {0.25, -0.25}, {-0.25, 0.25}, {0.25, 0.25}})
    out.push_back({Weight::power_radial(aw), Weight::power_radial(as)});
  return out;
}

std::vector<YoungFunction> parse_young_list(ObjectReader& r, const std::string& key, std::vector<YoungFunction> def) {
  const Json* y = r.member(key);
  if (!y) return def;
  if (!y->is_array() || y->empty()) throw ValidationError("config." + key + ": expected a non-empty array");
  std::vector<YoungFunction> out;
  for (std::size_t k = 0; k < y->size(); ++k) out.push_back(parse_young((*y)[k], key + "[" + std::to_string(k) + "]"));
  return out;
}

// ---- commands ----

int cmd_build_tree(const Common& c, std::ostream& out) {
  const Json cfg = load_config(c);
  ObjectReader r(cfg, "config");
  const std::uint64_t seed = read_seed(r, c);
  const Json* t = r.member("tree");
  BallConfig b;
  b.params = t ? parse_tree(*t, "config.tree") : TreeParams::defaults(1);
  const bool d1 = b.params.dim == 1;
  b.trees = int(r.integer("trees", 1, 1, 16));
  b.scheme = parse_scheme(r.string("scheme", d1 ? "kube-adapted" : "monte-carlo"), "config.scheme");
  if (b.scheme == Scheme::KubeAdapted && !d1) throw ValidationError("config.scheme: kube-adapted requires dim 1");
  b.quadrature_size = std::size_t(r.integer("quadrature_size", d1 ? 20000 : 200000, 16, 50'000'000));
  const auto audit_samples = std::size_t(r.integer("audit_samples", 10000, 0, 100'000'000));
  const auto min_nodes = std::size_t(r.integer("sparsity_min_nodes", 10, 1, 1'000'000));
  const std::string input = r.string("input_tree", "");
  r.finish();

  const fs::path dir(c.out);
  fs::create_directories(dir);
  Json summary{{"command", "build-tree"}, {"seed", seed}, {"params", tree_params_json(b.params)}};
  summary["scheme"] = to_string(b.scheme);
  const BallSetup s = b.setup(b.params.depth, seed);
  Json trees = Json::array();
  for (std::size_t k = 0; k < s.tree_count(); ++k) {
    const BergmanTree& tree = s.tree(k);
    const std::string file = s.tree_count() == 1 ? "tree.json" : "tree_" + std::to_string(k) + ".json";
    write_file(dir / file, tree.to_json());
    std::vector<std::size_t> counts;
    for (int n = 0; n <= tree.depth(); ++n) counts.push_back(tree.level_count(n));
    const PartitionAudit a = audit_partition(tree, audit_samples, seed + k);
    const SparsityCertificate cert = sparsity_certificate(s.index(k), min_nodes);
    trees.push_back(Json{{"file", file},
                         {"rotation", tree.params().rotation},
                         {"stagger", tree.params().stagger},
                         {"radial_offset", tree.params().radial_offset},
                         {"nodes", tree.size()},
                         {"level_counts", counts},
                         {"horizon_radius", tree.horizon_radius()},
                         {"audit", {{"samples", a.samples}, {"violations", a.violations}, {"tiling_gaps", a.tiling_gaps}}},
                         {"sparsity", {{"tau_hat", cert.tau_hat},
                                       {"argmax", node_label(tree, cert.argmax)},
                                       {"depth_used", cert.depth_used},
                                       {"starved", cert.starved},
                                       {"min_nodes_per_kube", cert.min_nodes_per_kube}}}});
    out << file << ": " << tree.size() << " nodes, " << a.violations << " partition violations, tau_hat "
        << num(cert.tau_hat) << "\n";
  }
  summary["trees"] = trees;
  if (!input.empty()) {
    fs::path p(input);
    if (p.is_relative()) p = c.config_dir() / p;
    std::ifstream in(p, std::ios::binary);
    if (!in) throw ValidationError("config.input_tree: cannot read '" + p.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    BergmanTree loaded = [&] {
      try {
        return BergmanTree::from_json(ss.str());
      } catch (const Json::exception& e) {
        throw ValidationError(std::string("config.input_tree: ") + e.what());
      }
    }();
    const std::string text = loaded.to_json();
    const bool round_trip = BergmanTree::from_json(text).to_json() == text;
    const PartitionAudit a = audit_partition(loaded, audit_samples, seed);
    summary["input_tree"] = Json{{"params", tree_params_json(loaded.params())},
                                 {"nodes", loaded.size()},
                                 {"round_trip", round_trip},
                                 {"matches_built", loaded.params() == s.tree(0).params() && text == s.tree(0).to_json()},
                                 {"audit", {{"samples", a.samples}, {"violations", a.violations}}}};
    if (!round_trip) throw NumericalError("input tree does not survive a JSON round trip");
  }
  write_json(dir / "build_summary.json", summary);
  return kExitOk;
}

int cmd_characteristics(const Common& c, std::ostream& out) {
  const Json cfg = load_config(c);
  ObjectReader r(cfg, "config");
  const std::uint64_t seed = read_seed(r, c);
  const BallConfig b = parse_ball(r.member("ball"), "config.ball");
  WeightParser wp(b);
  const Json* wj = r.member("w");
  const Json* sj = r.member("sigma");
  const Weight w = wj ? wp(*wj, "config.w") : Weight::unit();
  const Weight sigma = sj ? wp(*sj, "config.sigma") : Weight::unit();
  const double p = r.number("p", 2.0, 1.0 + 1e-9, 1e3);
  const Json* phj = r.member("phi");
  const Json* psj = r.member("psi");
  const YoungFunction phi = phj ? parse_young(*phj, "config.phi") : YoungFunction::power(1.5);
  const YoungFunction psi = psj ? parse_young(*psj, "config.psi") : YoungFunction::power(1.5);
  const ApexGrid grid = parse_apex(r);
  r.finish();

  std::vector<std::string> names{"joint_bp", "bp_classical", "b_infty_w", "b_infty_sigma", "orlicz_bump"};
  std::vector<std::vector<CharacteristicReport>> per_depth;
  std::string truncation;
  for (int depth : b.depths) {
    const BallSetup s = b.setup(depth, seed);
    const IndexFamily fam = s.family();
    per_depth.push_back({joint_bp_dyadic(w, sigma, p, fam), bp_classical(w, sigma, p, s.index(0), grid),
                         b_infty(w, fam), b_infty(sigma, fam), orlicz_bump(w, sigma, phi, psi, fam)});
    truncation += (truncation.empty() ? "" : " | ") + s.truncation();
  }
  const std::string inputs = "w=" + w.label() + "; sigma=" + sigma.label() + "; p=" + num(p) + "; Phi=" + phi.label() +
                             "; Psi=" + psi.label();
  std::vector<std::string> header{"inputs", "truncation"}, row{inputs, truncation + "; " + grid.label()};
  Json chars = Json::object();
  for (std::size_t k = 0; k < names.size(); ++k) {
    const CharacteristicReport t = with_trend(per_depth[0][k], per_depth[1][k]);
    for (const char* suffix : {"", "_coarse", "_diverged", "_extremal"}) header.push_back(names[k] + suffix);
    row.insert(row.end(), {num(t.value), num(t.trend.front()), t.diverged ? "true" : "false", t.extremal});
    chars[names[k]] = Json{{"value", num_json(t.value)},
                           {"trend", t.trend},
                           {"diverged", t.diverged},
                           {"extremal", t.extremal},
                           {"truncation", t.truncation}};
    out << names[k] << " = " << num(t.value) << (t.diverged ? " (diverged)" : "") << "\n";
  }
  const fs::path dir(c.out);
  fs::create_directories(dir);
  write_file(dir / "characteristics.csv", csv_row(header) + csv_row(row));
  write_json(dir / "characteristics_summary.json", Json{{"command", "characteristics"},
                                                       {"seed", seed},
                                                       {"inputs", inputs},
                                                       {"ball", b.json()},
                                                       {"apex_grid", grid.label()},
                                                       {"characteristics", chars}});
  return kExitOk;
}

const std::vector<std::string> kVerifyExperiments{"mixed-bound",  "bump-bound",  "binfty-vs-bp",
                                                  "tent-testing", "sawyer-ball", "dyadic-vs-classical"};

int cmd_verify(const Common& c, std::ostream& out) {
  const Json cfg = load_config(c);
  ObjectReader r(cfg, "config");
  const std::uint64_t seed = read_seed(r, c);
  const BallConfig b = parse_ball(r.member("ball"), "config.ball");
  WeightParser wp(b);
  const auto experiments = r.strings("experiments", {"mixed-bound"});
  for (const auto& e : experiments)
    if (std::find(kVerifyExperiments.begin(), kVerifyExperiments.end(), e) == kVerifyExperiments.end())
      throw ValidationError("config.experiments: unknown experiment '" + e + "'");
  const auto alphas = r.numbers("alphas", {-0.5, -0.25, 0.0, 0.25, 0.5});
  for (double a : alphas)
    if (!(a > -1.0 && a < 1.0)) throw ValidationError("config.alphas: power-radial exponents must lie in (-1, 1)");
  const auto young = parse_young_list(r, "young", {YoungFunction::power(1.25), YoungFunction::power(1.5),
                                                   YoungFunction::power(1.75)});
  const auto binfty_alphas = r.numbers("binfty_alphas", {0.25, 0.5, 0.75});
  const auto p_values = r.numbers("p_values", {1.5, 2.0, 3.0});
  for (double p : p_values)
    if (!(p > 1.0)) throw ValidationError("config.p_values: each p must exceed 1");
  const auto pairs = parse_pairs(r, wp);
  const ApexGrid grid = parse_apex(r);
  r.finish();

  const BallSetup coarse = b.setup(b.depths[0], seed), fine = b.setup(b.depths[1], seed);
  std::vector<RatioReport> rows;
  auto add = [&](std::vector<RatioReport> v) {
    for (auto& x : v) x.seed = seed;
    rows.insert(rows.end(), v.begin(), v.end());
  };
  for (const auto& e : experiments) {
    if (e == "mixed-bound") add(mixed_bound_sweep(alphas, coarse, fine));
    if (e == "bump-bound") add(bump_bound_sweep(alphas, young, coarse, fine));
    if (e == "binfty-vs-bp")
      for (double a : binfty_alphas)
        for (double p : p_values) add({verify_binfty_vs_bp(Weight::power_radial(a), p, coarse, fine)});
    for (const auto& pr : pairs) {
      if (e == "tent-testing") add({verify_tent_testing(pr.w, pr.sigma, coarse, fine)});
      if (e == "sawyer-ball") add({verify_sawyer_ball(pr.w, pr.sigma, coarse, fine)});
      if (e == "dyadic-vs-classical") add({compare_characteristics(pr.w, pr.sigma, coarse, fine, grid)});
    }
    out << e << ": done\n";
  }
  const fs::path dir(c.out);
  fs::create_directories(dir);
  write_file(dir / "verify.csv", reports_csv(rows));
  Json summary = reports_summary(rows);
  summary["command"] = "verify";
  summary["seed"] = seed;
  summary["ball"] = b.json();
  write_json(dir / "verify_summary.json", summary);
  out << rows.size() << " rows, " << summary["growth_flags"].get<std::size_t>() << " growth flags\n";
  return kExitOk;
}

int cmd_model_oracle(const Common& c, std::ostream& out) {
  const Json cfg = load_config(c);
  ObjectReader r(cfg, "config");
  ModelSuiteOptions o;
  o.seed = read_seed(r, c);
  o.depth = int(r.integer("depth", o.depth, 2, 14));
  o.coarse_depth = int(r.integer("coarse_depth", o.coarse_depth, 1, 14));
  if (o.coarse_depth >= o.depth) throw ValidationError("config.coarse_depth: must be below depth");
  o.seeds = int(r.integer("seeds", o.seeds, 1, 100000));
  o.p = r.number("p", o.p, 1.0 + 1e-9, 1e3);
  std::vector<int> spreads, growth;
  for (auto v : r.integers("spreads", {1, 2, 3}, 0, 30)) spreads.push_back(int(v));
  for (auto v : r.integers("growth_depths", {6, 8, 10}, 1, 14)) growth.push_back(int(v));
  if (!std::is_sorted(growth.begin(), growth.end()) || std::adjacent_find(growth.begin(), growth.end()) != growth.end())
    throw ValidationError("config.growth_depths: expected strictly increasing depths");
  o.spreads = spreads;
  o.growth_depths = growth;
  r.finish();

  const auto rows = model_suite(o);
  const fs::path dir(c.out);
  fs::create_directories(dir);
  write_file(dir / "model.csv", reports_csv(rows));
  Json summary = reports_summary(rows);
  summary["command"] = "model-oracle";
  summary["model"] = "dyadic1d";
  summary["seed"] = o.seed;
  summary["options"] = Json{{"depth", o.depth}, {"coarse_depth", o.coarse_depth}, {"seeds", o.seeds},
                            {"p", o.p},         {"spreads", spreads},            {"growth_depths", growth}};
  std::size_t violations = 0;
  for (const auto& x : rows)
    if (std::isfinite(x.bound) && x.ratio > x.bound) ++violations;
  summary["bound_violations"] = violations;
  write_json(dir / "model_summary.json", summary);
  out << rows.size() << " model rows, " << violations << " bound violations\n";
  return kExitOk;
}

Json stats(const std::vector<double>& v, std::size_t violations) {
  if (v.empty()) return Json{{"count", 0}};
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return Json{{"count", v.size()}, {"min_ratio", *lo}, {"max_ratio", *hi}, {"spread", *hi / *lo}, {"violations", violations}};
}

int cmd_compare(const Common& c, std::ostream& out) {
  const Json cfg = load_config(c);
  ObjectReader r(cfg, "config");
  const std::uint64_t seed = read_seed(r, c);
  const BallConfig b = parse_ball(r.member("ball"), "config.ball");
  WeightParser wp(b);
  const auto pairs = parse_pairs(r, wp);
  const ApexGrid grid = parse_apex(r);
  std::vector<double> radii{0.5, 0.75, 0.9};
  int directions = 8, nodes_per_level = 4;
  if (const Json* cv = r.member("covering")) {
    ObjectReader cr(*cv, "config.covering");
    radii = cr.numbers("apex_radii", radii);
    for (double x : radii)
      if (!(x >= 0.0 && x < 1.0)) throw ValidationError("config.covering.apex_radii: must lie in [0, 1)");
    directions = int(cr.integer("directions", directions, 1, 4096));
    nodes_per_level = int(cr.integer("nodes_per_level", nodes_per_level, 1, 4096));
    cr.finish();
  }
  int fam_trees = 8, fam_depth = b.params.dim == 1 ? 6 : 4;
  if (const Json* fv = r.member("family")) {
    ObjectReader fr(*fv, "config.family");
    fam_trees = int(fr.integer("trees", fam_trees, 1, 16));
    fam_depth = int(fr.integer("depth", fam_depth, 2, 12));
    fr.finish();
  }
  const int samples = int(r.integer("positive_vs_sparse_samples", 100, 0, 1'000'000));
  r.finish();

  const BallSetup coarse = b.setup(b.depths[0], seed), fine = b.setup(b.depths[1], seed);
  std::vector<RatioReport> rows;
  for (const auto& pr : pairs) {
    rows.push_back(compare_characteristics(pr.w, pr.sigma, coarse, fine, grid));
    rows.back().seed = seed;
  }
  Json summary = reports_summary(rows);
  summary["command"] = "compare";
  summary["seed"] = seed;
  summary["ball"] = b.json();
  summary["apex_grid"] = grid.label();

  // covering audits and the pointwise comparison run on a family of shifted trees
  BallConfig bc = b;
  bc.trees = fam_trees;
  const BallSetup fs_ = bc.setup(fam_depth, seed);
  summary["family"] = fs_.truncation();
  const double pi = 3.14159265358979323846;
  std::vector<double> dy, ca;
  std::size_t dy_v = 0, ca_v = 0;
  const IndexFamily fam = fs_.family();
  const int dim = b.params.dim;
  Json per_radius = Json::array();
  double rmax_lo = std::numeric_limits<double>::infinity(), rmax_hi = 0.0;
  for (double rad : radii) {
    double rmax = 0.0;
    for (int k = 0; k < directions; ++k) {
      const double th = 2.0 * pi * (k + 0.5) / directions;
      const BallPoint z = dim == 1 ? BallPoint(std::polar(rad, th))
                                   : BallPoint(std::polar(rad * std::cos(th / 2), th), std::polar(rad * std::sin(th / 2), -th));
      const DyadicCover d = covering_dyadic_tent(fam, CarlesonTent::at(z));
      dy.push_back(d.ratio);
      dy_v += d.violations;
      rmax = std::max(rmax, d.ratio);
    }
    per_radius.push_back(Json{{"radius", rad}, {"max_ratio", rmax}});
    rmax_lo = std::min(rmax_lo, rmax);
    rmax_hi = std::max(rmax_hi, rmax);
  }
  const BergmanTree& t0 = fs_.tree(0);
  for (int n = 1; n + 2 <= t0.depth(); ++n) {
    const auto& lvl = t0.level_nodes(n);
    const std::size_t m = std::min<std::size_t>(lvl.size(), std::size_t(nodes_per_level));
    for (std::size_t i = 0; i < m; ++i) {
      const CarlesonCover cc = covering_carleson_tent(fs_.index(0), lvl[i * lvl.size() / m]);
      ca.push_back(cc.ratio);
      ca_v += cc.violations;
    }
  }
  Json dyj = stats(dy, dy_v);
  dyj["per_radius"] = per_radius;
  dyj["per_radius_max_spread"] = rmax_hi / rmax_lo;
  summary["covering"] = Json{{"dyadic_tent", dyj}, {"carleson_tent", stats(ca, ca_v)}};

  if (dim == 1 && samples > 0) {
    const ComparisonReport cr = positive_vs_sparse(fs_, samples, seed);
    summary["positive_vs_sparse"] = Json{{"samples", cr.ratios.size()}, {"c", cr.c}, {"C", cr.C},
                                         {"spread", cr.C / cr.c}, {"flagged", cr.flagged},
                                         {"truncation", fs_.truncation()}};
  } else {
    summary["positive_vs_sparse"] = nullptr;
  }
  const fs::path dir(c.out);
  fs::create_directories(dir);
  write_file(dir / "compare.csv", reports_csv(rows));
  write_json(dir / "compare_summary.json", summary);
  out << rows.size() << " pairs compared; covering violations " << dy_v + ca_v << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weighted Bergman projection lab: trees, characteristics, verification sweeps"};
  app.name("bergman_lab");
  app.require_subcommand(1);
  app.fallthrough();
  Common c;
  std::uint64_t seed = 0;
  app.add_option("--config", c.config, "JSON config file (defaults used when omitted)");
  app.add_option("--out", c.out, "output directory")->capture_default_str();
  auto* seed_opt = app.add_option("--seed", seed, "seed overriding the config");
  app.add_option("--threads", c.threads, "worker threads (0 = hardware)")->check(CLI::Range(0, 1024));
  using Cmd = int (*)(const Common&, std::ostream&);
  const std::vector<std::tuple<const char*, const char*, Cmd>> cmds{
      {"build-tree", "build Bergman trees, audit the partition and certify sparsity", cmd_build_tree},
      {"characteristics", "joint B_p, classical B_p, B_infinity and Orlicz bump characteristics", cmd_characteristics},
      {"verify", "ratio sweeps on the ball", cmd_verify},
      {"model-oracle", "exact dyadic model suite", cmd_model_oracle},
      {"compare", "dyadic vs classical characteristics, covering audits, positive vs sparse", cmd_compare}};
  for (const auto& [name, desc, fn] : cmds) app.add_subcommand(name, desc);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  if (*seed_opt) c.seed = seed;
  set_default_threads(c.threads > 0 ? c.threads : int(std::max(1u, std::thread::hardware_concurrency())));
  try {
    for (const auto& [name, desc, fn] : cmds)
      if (app.got_subcommand(name)) return fn(c, out);
    return kExitValidation;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const Json::exception& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, out, err);
}

}  // namespace bergman
