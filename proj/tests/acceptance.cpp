// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bergman/bergman_tree.hpp"
#include "bergman/cli.hpp"
#include "bergman/experiments.hpp"
#include "bergman/geometry.hpp"
#include "bergman/operators.hpp"
#include "bergman/orlicz.hpp"

using namespace bergman;
namespace fs = std::filesystem;

namespace {

// Tolerances and budgets.
constexpr double kIdentityTol = 1e-12;
constexpr int kGeometrySamples = 1000;
constexpr double kMassTol = 1e-12;
constexpr double kMomentTol = 1e-3;
constexpr double kProjectionTol = 1e-3;
constexpr std::size_t kAuditSamples = 10000;
constexpr double kSparsityDrift = 0.20;
constexpr double kCoveringSpread = 3.0;
constexpr double kCoveringRadiusMax = 0.9;
constexpr int kCoveringTrees = 8;
constexpr int kCoveringDepth = 6;
constexpr int kCoveringDirections = 64;
constexpr double kLuxembourgTol = 1e-8;
constexpr double kBpTol = 1e-6;
constexpr int kModelDepth = 10;
constexpr int kModelCoarseDepth = 8;
constexpr int kModelSeeds = 50;
constexpr double kPackingDrift = 0.25;
constexpr double kSawyerLo = 0.125, kSawyerHi = 8.0;
constexpr double kPowerDenseTol = 1e-6;
constexpr double kBinftySlack = 1.05;
constexpr double kIdentityRatio = 0.5, kIdentityRel = 0.10;
constexpr double kScalingTol = 1e-10;
constexpr int kCoarseDepth = 6, kFineDepth = 8;

constexpr double kPi = 3.14159265358979323846;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Appends to the detail and folds the condition into the verdict.
void expect(Outcome& o, bool ok, const std::string& what) {
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += what;
  if (!ok) {
    o.detail += " [FAILED]";
    o.pass = false;
  }
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

BallPoint sample_point(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (dim == 1) return BallPoint(std::polar(0.99 * std::sqrt(u(rng)), 2.0 * kPi * u(rng)));
  cplx a(g(rng), g(rng)), b(g(rng), g(rng));
  const double n = std::sqrt(std::norm(a) + std::norm(b)), r = 0.99 * std::pow(u(rng), 0.25);
  return BallPoint(a * (r / n), b * (r / n));
}

double point_gap(const BallPoint& a, const BallPoint& b) {
  return std::sqrt(std::norm(a.c[0] - b.c[0]) + std::norm(a.c[1] - b.c[1]));
}

BallOptions ball(int depth, int trees = 1) {
  BallOptions o;
  o.params = TreeParams::defaults(1);
  o.params.depth = depth;
  o.trees = trees;
  return o;
}

Outcome geometry_identities() {
  Outcome o;
  std::mt19937_64 rng(1);
  double inv = 0, sym = 0;
  std::size_t table_miss = 0;
  for (int dim : {1, 2})
    for (int k = 0; k < kGeometrySamples; ++k) {
      const BallPoint z = sample_point(rng, dim), w = sample_point(rng, dim);
      inv = std::max(inv, point_gap(involution(z, involution(z, w)), w));
      sym = std::max(sym, std::abs(bergman_distance(z, w) - bergman_distance(w, z)));
      // zeta in T_z iff |1 - <zeta, z/|z|>| <= 1 - |z|; on the disc that is the distance from zeta to z/|z|
      const double r = z.norm();
      const cplx u1 = z.c[0] / r, u2 = z.c[1] / r;
      const double gap = dim == 1 ? std::abs(u1 - w.c[0])
                                  : std::abs(1.0 - w.c[0] * std::conj(u1) - w.c[1] * std::conj(u2));
      if (std::abs(gap - (1.0 - r)) > 1e-12 && CarlesonTent::at(z).contains(w) != (gap <= 1.0 - r)) ++table_miss;
    }
  const CarlesonTent half = CarlesonTent::at(BallPoint(cplx(0.5)));
  if (!half.contains(BallPoint(cplx(0.9))) || half.contains(BallPoint(cplx(-0.9)))) ++table_miss;
  expect(o, inv <= kIdentityTol, "involution round trip " + num(inv));
  expect(o, sym <= kIdentityTol, "distance symmetry " + num(sym));
  expect(o, table_miss == 0, "tent table misses " + std::to_string(table_miss));
  return o;
}

Outcome quadrature_sanity() {
  Outcome o;
  const QuadratureRule rule = build_quadrature(1, Scheme::PolarGrid, 128, 0);
  const double one = integrate([](const BallPoint&) { return cplx(1.0); }, rule).value.real();
  const double m2 = integrate([](const BallPoint& z) { return cplx(z.norm2()); }, rule).value.real();
  expect(o, std::abs(one - 1.0) <= kMassTol, "int 1 - 1 = " + num(one - 1.0));
  expect(o, std::abs(m2 - 0.5) <= kMomentTol, "int |z|^2 = " + num(m2));
  double worst = 0;
  for (const BallPoint& z : {BallPoint(cplx(0.0)), BallPoint(cplx(0.3)), BallPoint(std::polar(0.6, kPi / 4))}) {
    worst = std::max(worst, std::abs(bergman_projection([](const BallPoint&) { return cplx(1.0); }, z, rule) - 1.0));
    worst = std::max(worst, std::abs(bergman_projection([](const BallPoint& x) { return std::conj(x.c[0]); }, z, rule)));
    worst = std::max(worst, std::abs(bergman_projection([](const BallPoint& x) { return x.c[0]; }, z, rule) - z.c[0]));
  }
  expect(o, worst <= kProjectionTol, "projection reproduction error " + num(worst));
  return o;
}

Outcome tree_audit() {
  Outcome o;
  TreeParams p = TreeParams::defaults(1);
  p.depth = kFineDepth;
  const BergmanTree fine = BergmanTree::build(p);
  const PartitionAudit a = audit_partition(fine, kAuditSamples, 3);
  expect(o, a.violations == 0 && a.tiling_gaps == 0 && a.samples == kAuditSamples,
         "partition violations " + std::to_string(a.violations) + ", tiling gaps " + std::to_string(a.tiling_gaps));
  p.depth = kCoarseDepth;
  const BergmanTree coarse = BergmanTree::build(p);
  double tau[2];
  bool leaves = true;
  const BergmanTree* trees[2] = {&coarse, &fine};
  for (int k = 0; k < 2; ++k) {
    const KubeAdaptedRule kr = build_kube_rule(*trees[k]);
    const TentIndex ix(*trees[k], kr);
    const SparsityCertificate c = sparsity_certificate(ix);
    tau[k] = c.tau_hat;
    leaves = leaves && !c.starved;
    for (int leaf : trees[k]->level_nodes(trees[k]->depth())) leaves = leaves && c.per_node_ratios[leaf] == 1.0;
  }
  expect(o, tau[0] >= 1.0 && tau[1] >= 1.0, "tau_hat " + num(tau[0]) + " -> " + num(tau[1]));
  expect(o, leaves, "leaf ratios exactly 1");
  expect(o, std::abs(tau[1] / tau[0] - 1.0) < kSparsityDrift, "drift " + num(tau[1] / tau[0] - 1.0));
  return o;
}

Outcome covering() {
  Outcome o;
  const BallSetup fam(ball(kCoveringDepth, kCoveringTrees));
  const IndexFamily indices = fam.family();
  std::size_t viol = 0;
  double lo = 1e300, hi = 0;
  std::string per;
  for (double r : {0.5, 0.75, kCoveringRadiusMax}) {
    double rmax = 0;
    for (int k = 0; k < kCoveringDirections; ++k) {
      const DyadicCover d =
          covering_dyadic_tent(indices, CarlesonTent::at(BallPoint(std::polar(r, 2 * kPi * (k + 0.5) / kCoveringDirections))));
      viol += d.violations;
      rmax = std::max(rmax, d.ratio);
    }
    per += (per.empty() ? "" : "/") + num(rmax);
    lo = std::min(lo, rmax);
    hi = std::max(hi, rmax);
  }
  expect(o, viol == 0 && hi / lo <= kCoveringSpread,
         "dyadic tent per-radius max " + per + ", spread " + num(hi / lo) + ", violations " + std::to_string(viol));
  const BergmanTree& t0 = fam.tree(0);
  std::size_t cviol = 0;
  double clo = 1e300, chi = 0;
  for (int n = 1; n + 2 <= t0.depth(); ++n) {
    const auto& lvl = t0.level_nodes(n);
    for (std::size_t i = 0; i < 4; ++i) {
      const CarlesonCover c = covering_carleson_tent(fam.index(0), lvl[i * lvl.size() / 4]);
      cviol += c.violations;
      clo = std::min(clo, c.ratio);
      chi = std::max(chi, c.ratio);
    }
  }
  expect(o, cviol == 0 && chi / clo <= kCoveringSpread,
         "Carleson tent ratios " + num(clo) + ".." + num(chi) + ", violations " + std::to_string(cviol));
  return o;
}

Outcome orlicz_machinery() {
  Outcome o;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 4.0), m(0.1, 1.0);
  double worst = 0;
  for (double p : {1.25, 1.5, 2.0, 3.0})
    for (int k = 0; k < 50; ++k) {
      std::vector<double> f(64), mass(64);
      double num_ = 0, den = 0;
      for (int i = 0; i < 64; ++i) {
        f[i] = u(rng);
        mass[i] = m(rng);
        num_ += mass[i] * std::pow(f[i], p);
        den += mass[i];
      }
      const double exact = std::pow(num_ / den, 1.0 / p);
      const double solved = luxembourg_average(f, mass, YoungFunction::power(p), false).value;
      worst = std::max(worst, std::abs(solved - exact) / exact);
    }
  expect(o, worst <= kLuxembourgTol, "Luxembourg vs L^p " + num(worst));
  double bp = 0;
  for (double p : {1.5, 2.0, 3.0})
    for (double r : {1.1, 1.25, 1.4}) bp = std::max(bp, std::abs(young_bp_check(YoungFunction::power(r), p).total - 1.0 / (p - r)));
  expect(o, bp <= kBpTol, "B_p integral vs 1/(p-r) " + num(bp));
  bool diverges = true;
  for (double p : {1.5, 2.0, 3.0}) diverges = diverges && !young_bp_check(YoungFunction::power(p), p).converges;
  expect(o, diverges, "t^p diverges");
  return o;
}

Outcome model_oracle() {
  Outcome o;
  ModelSuiteOptions opt;
  opt.depth = kModelDepth;
  opt.coarse_depth = kModelCoarseDepth;
  opt.seeds = kModelSeeds;
  const auto rows = model_suite(opt);
  std::size_t aux1 = 0, pack = 0, edge = 0, saw = 0, pvd = 0;
  for (const RatioReport& r : rows) {
    const double a = r.trend.front(), b = r.trend.back();
    if (r.experiment == "corona-carleson" && !(a <= r.bound && b <= r.bound)) ++aux1;
    if (r.experiment == "bump-packing" && !(std::abs(b / a - 1.0) <= kPackingDrift)) ++pack;
    if (r.experiment == "bump-packing-boundary")
      for (std::size_t i = 1; i < r.trend.size(); ++i)
        if (!(r.trend[i] > r.trend[i - 1])) {
          ++edge;
          break;
        }
    if (r.experiment == "sawyer-testing" && !(std::min(a, b) >= kSawyerLo && std::max(a, b) <= kSawyerHi)) ++saw;
    if (r.experiment == "power-vs-dense" && !(std::max(a, b) <= kPowerDenseTol)) ++pvd;
  }
  expect(o, rows.size() == std::size_t(7 * kModelSeeds), std::to_string(rows.size()) + " rows");
  expect(o, aux1 == 0, "sparse sum bound violations " + std::to_string(aux1));
  expect(o, pack == 0, "packing drift above 25% " + std::to_string(pack));
  expect(o, edge == 0, "boundary packing without monotone growth " + std::to_string(edge));
  expect(o, saw == 0, "Sawyer ratios outside [1/8, 8] " + std::to_string(saw));
  expect(o, pvd == 0, "power vs dense disagreements " + std::to_string(pvd));
  return o;
}

struct Setups {
  BallSetup coarse{ball(kCoarseDepth)};
  BallSetup fine{ball(kFineDepth)};
};

Setups& ball_setups() {
  static Setups s;
  return s;
}

Outcome binfty_vs_bp() {
  Outcome o;
  auto& s = ball_setups();
  double worst = 0;
  for (double alpha : {0.25, 0.5, 0.75})
    for (double p : {1.5, 2.0, 3.0})
      worst = std::max(worst, verify_binfty_vs_bp(Weight::power_radial(alpha), p, s.coarse, s.fine).ratio);
  expect(o, worst <= kBinftySlack, "max B_inf/B_p " + num(worst));
  return o;
}

const std::vector<double> kAlphas{-0.5, -0.25, 0.0, 0.25, 0.5};

Outcome mixed_sweep() {
  Outcome o;
  auto& s = ball_setups();
  const auto rows = mixed_bound_sweep(kAlphas, s.coarse, s.fine);
  std::size_t bad = 0;
  double hi = 0, identity = std::nan("");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!std::isfinite(rows[i].ratio) || rows[i].verdict != Verdict::BoundedEvidence) ++bad;
    hi = std::max(hi, rows[i].ratio);
    if (kAlphas[i / kAlphas.size()] == 0.0 && kAlphas[i % kAlphas.size()] == 0.0) identity = rows[i].ratio;
  }
  expect(o, rows.size() == 25 && bad == 0,
         std::to_string(rows.size()) + " pairs, not bounded " + std::to_string(bad) + ", max ratio " + num(hi));
  expect(o, std::abs(identity / kIdentityRatio - 1.0) <= kIdentityRel, "identity ratio " + num(identity));
  return o;
}

Outcome bump_sweep() {
  Outcome o;
  auto& s = ball_setups();
  const std::vector<YoungFunction> young{YoungFunction::power(1.25), YoungFunction::power(1.5),
                                         YoungFunction::power(1.75)};
  const auto rows = bump_bound_sweep(kAlphas, young, s.coarse, s.fine);
  std::size_t bad = 0;
  double hi = 0;
  for (const RatioReport& r : rows) {
    if (!std::isfinite(r.ratio) || r.verdict != Verdict::BoundedEvidence) ++bad;
    hi = std::max(hi, r.ratio);
  }
  expect(o, rows.size() == 75 && bad == 0,
         std::to_string(rows.size()) + " rows, not bounded " + std::to_string(bad) + ", max ratio " + num(hi));
  double scaling = 0;
  for (auto [aw, as] : {std::pair{0.25, -0.25}, {-0.5, 0.5}, {0.0, 0.25}}) {
    const Weight w = Weight::power_radial(aw), sig = Weight::power_radial(as);
    const double base = verify_bump_bound(w, sig, young[1], young[1], s.coarse, s.fine).ratio;
    const double moved = verify_bump_bound(w.scaled(3.5), sig.scaled(0.2), young[1], young[1], s.coarse, s.fine).ratio;
    scaling = std::max(scaling, std::abs(moved / base - 1.0));
  }
  expect(o, scaling <= kScalingTol, "scaling invariance " + num(scaling));
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

Outcome determinism() {
  Outcome o;
  const fs::path root = fs::temp_directory_path() / "bergman_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  struct Command {
    std::string name, config;
  };
  const std::vector<Command> commands{
      {"build-tree", R"({"tree": {"depth": 5}, "audit_samples": 1000})"},
      {"characteristics", R"({"ball": {"depths": [4, 5]}, "w": {"kind": "power-radial", "alpha": 0.25}})"},
      {"verify", R"({"ball": {"depths": [4, 5]}, "experiments": ["mixed-bound", "sawyer-ball"],
                   "alphas": [-0.25, 0.25], "pair_alphas": [0, 0.25]})"},
      {"model-oracle", R"({"depth": 7, "coarse_depth": 6, "seeds": 4, "growth_depths": [5, 6, 7]})"},
      {"compare", R"({"ball": {"depths": [4, 5]}, "pair_alphas": [0], "family": {"trees": 2, "depth": 4},
                    "covering": {"directions": 4}, "positive_vs_sparse_samples": 10})"}};
  std::size_t files = 0, differing = 0, failed = 0;
  for (const Command& c : commands) {
    const fs::path cfg = root / (c.name + ".json");
    std::ofstream(cfg) << c.config;
    const fs::path a = root / (c.name + "_a"), b = root / (c.name + "_b");
    std::ostringstream sink;
    const int ra = run_cli({c.name, "--config", cfg.string(), "--out", a.string(), "--seed", "11", "--threads", "1"},
                           sink, sink);
    const int rb = run_cli({c.name, "--config", cfg.string(), "--out", b.string(), "--seed", "11", "--threads", "2"},
                           sink, sink);
    if (ra != 0 || rb != 0) {
      ++failed;
      continue;
    }
    for (const auto& e : fs::directory_iterator(a)) {
      ++files;
      if (slurp(e.path()) != slurp(b / e.path().filename())) ++differing;
    }
  }
  fs::remove_all(root);
  expect(o, failed == 0, "commands failed " + std::to_string(failed));
  expect(o, files >= commands.size() * 2 && differing == 0,
         std::to_string(files) + " files compared, differing " + std::to_string(differing));
  return o;
}

struct Criterion {
  int id;
  std::string name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "geometry identities", 5, geometry_identities},
      {2, "quadrature sanity", 30, quadrature_sanity},
      {3, "tree audit and sparsity certificate", 120, tree_audit},
      {4, "covering of Carleson and dyadic tents", 120, covering},
      {5, "Orlicz machinery", 10, orlicz_machinery},
      {6, "dyadic model oracle suite", 300, model_oracle},
      {7, "B_infinity below B_p on the ball", 300, binfty_vs_bp},
      {8, "mixed characteristic sweep", 1200, mixed_sweep},
      {9, "Orlicz bump sweep", 1800, bump_sweep},
      {10, "determinism", 600, determinism},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    expect(o, secs < c.budget_s, "runtime " + num(secs) + " s (budget " + num(c.budget_s) + " s)");
    if (!o.pass) ++failures;
    std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
