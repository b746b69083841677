#include "bergman/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <random>
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

std::vector<std::vector<double>> sample_family(const BallSetup& s, const Weight& w) {
  std::vector<std::vector<double>> out;
  for (std::size_t k = 0; k < s.tree_count(); ++k) out.push_back(sample_weight(s.index(k), w));
  return out;
}

template <class F>
double max_over_trees(const BallSetup& s, F&& f) {
  double best = -1.0;
  for (std::size_t k = 0; k < s.tree_count(); ++k) best = std::max(best, f(k));
  return best;
}

RatioReport finish(RatioReport r, double coarse, double fine, const BallSetup& a, const BallSetup& b) {
  r.trend = {coarse, fine};
  r.ratio = fine;
  r.verdict = verdict_of(coarse, fine);
  r.truncation = a.truncation() + " -> " + b.truncation();
  return r;
}

std::string pair_label(const Weight& w, const Weight& sigma) { return "w=" + w.label() + "; sigma=" + sigma.label(); }

// [w,sigma]_{B_2}^{1/2} ([w]_{B_inf}^{1/2} + [sigma]_{B_inf}^{1/2})
double mixed_rhs(const BallSetup& s, const std::vector<std::vector<double>>& w,
                 const std::vector<std::vector<double>>& sg) {
  const double b2 = max_over_trees(s, [&](std::size_t k) { return joint_bp(s.index(k).sets(), w[k], sg[k], 2.0).value; });
  const double bw = max_over_trees(s, [&](std::size_t k) { return b_infty(s.index(k).sets(), w[k]).value; });
  const double bs = max_over_trees(s, [&](std::size_t k) { return b_infty(s.index(k).sets(), sg[k]).value; });
  return std::sqrt(b2) * (std::sqrt(bw) + std::sqrt(bs));
}

double bump_of(const BallSetup& s, const std::vector<std::vector<double>>& w, const std::vector<std::vector<double>>& sg,
               const YoungFunction& phi, const YoungFunction& psi) {
  return max_over_trees(s, [&](std::size_t k) { return orlicz_bump(s.index(k), w[k], sg[k], phi, psi).value; });
}

void require_b2(const YoungFunction& f) {
  const auto c = young_bp_check(f, 2.0);
  if (!c.converges) throw ValidationError("Young function " + f.label() + " is not in B_2: " + c.reason);
}

}  // namespace

std::string to_string(Verdict v) { return v == Verdict::BoundedEvidence ? "BOUNDED-EVIDENCE" : "GROWTH-FLAG"; }

Verdict verdict_of(double coarse, double fine) {
  if (!std::isfinite(coarse) || !std::isfinite(fine)) return Verdict::GrowthFlag;
  return fine >= 2.0 * coarse ? Verdict::GrowthFlag : Verdict::BoundedEvidence;
}

double RatioReport::growth() const {
  if (trend.size() < 2 || !(trend.front() > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return trend.back() / trend.front();
}

BallSetup::BallSetup(const BallOptions& opt) : opt_(opt) {
  opt_.params.validate();
  if (opt.trees < 1) throw ValidationError("ball setup: at least one tree");
  for (auto& t : build_tree_family(opt_.params, opt.trees)) trees_.push_back(std::make_unique<BergmanTree>(std::move(t)));
  if (opt_.scheme == Scheme::KubeAdapted) {
    if (opt_.params.dim != 1) throw ValidationError("ball setup: the kube-adapted rule needs d = 1");
    for (auto& t : trees_) {
      kube_rules_.push_back(std::make_unique<KubeAdaptedRule>(build_kube_rule(*t, opt_.kube)));
      indices_.push_back(std::make_unique<TentIndex>(*t, *kube_rules_.back()));
    }
  } else {
    shared_rule_ = std::make_unique<QuadratureRule>(
        build_quadrature(opt_.params.dim, opt_.scheme, opt_.quadrature_size, opt_.seed));
    for (auto& t : trees_) indices_.push_back(std::make_unique<TentIndex>(*t, *shared_rule_));
  }
}

IndexFamily BallSetup::family() const {
  IndexFamily f;
  for (const auto& ix : indices_) f.push_back(ix.get());
  return f;
}

double BallSetup::horizon_s() const {
  const double r = trees_.front()->horizon_radius();
  return r * r;
}

std::string BallSetup::truncation() const {
  std::ostringstream os;
  os << "d=" << opt_.params.dim << " depth=" << opt_.params.depth << " trees=" << trees_.size() << " "
     << to_string(opt_.scheme);
  return os.str();
}

NormResult projection_norm(const BallSetup& s, const Weight& sigma, const Weight& w) {
  const auto fw = w.power_radial_form(), fs = sigma.power_radial_form();
  const int d = s.options().params.dim;
  if (fw && fs && fw->second > -1.0 && fs->second > -1.0)
    return radial_projection_norm(d, fw->first, fw->second, fs->first, fs->second, s.horizon_s());
  PolarOptions o;
  if (d == 1) {
    o.n_radial = 8;
    o.grading = 0.6;
    o.angular = AngularMode::Hyperbolic;
    o.hyperbolic_c = 4.0;
  } else {
    o.n_radial = 8;
    o.n_angular = 8;
  }
  const QuadratureRule full = build_polar_grid(d, o);
  std::vector<BallPoint> nodes;
  std::vector<double> masses;
  for (std::size_t i = 0; i < full.size(); ++i)
    if (full.nodes[i].norm2() < s.horizon_s()) {
      nodes.push_back(full.nodes[i]);
      masses.push_back(full.masses[i]);
    }
  // the truncated rule carries less than unit mass, so bypass the normalisation check
  QuadratureRule rule = full;
  rule.nodes = std::move(nodes);
  rule.masses = std::move(masses);
  auto r = operator_norm(KernelKind::P, sigma, w, rule);
  r.method += "/graded-grid";
  return r;
}

RatioReport verify_mixed_bound(const Weight& w, const Weight& sigma, const BallSetup& coarse, const BallSetup& fine) {
  RatioReport r;
  r.experiment = "mixed-bound";
  r.inputs = pair_label(w, sigma);
  double ratios[2];
  const BallSetup* ss[2] = {&coarse, &fine};
  for (int k = 0; k < 2; ++k) {
    const auto wa = sample_family(*ss[k], w), sa = sample_family(*ss[k], sigma);
    r.lhs = projection_norm(*ss[k], sigma, w).value;
    r.rhs = mixed_rhs(*ss[k], wa, sa);
    ratios[k] = r.lhs / r.rhs;
  }
  return finish(std::move(r), ratios[0], ratios[1], coarse, fine);
}

RatioReport verify_bump_bound(const Weight& w, const Weight& sigma, const YoungFunction& phi,
                              const YoungFunction& psi, const BallSetup& coarse, const BallSetup& fine) {
  require_b2(phi);
  require_b2(psi);
  RatioReport r;
  r.experiment = "bump-bound";
  r.inputs = pair_label(w, sigma) + "; Phi=" + phi.label() + "; Psi=" + psi.label();
  double ratios[2];
  const BallSetup* ss[2] = {&coarse, &fine};
  for (int k = 0; k < 2; ++k) {
    const auto wa = sample_family(*ss[k], w), sa = sample_family(*ss[k], sigma);
    r.lhs = projection_norm(*ss[k], sigma, w).value;
    r.rhs = bump_of(*ss[k], wa, sa, phi, psi);
    ratios[k] = r.lhs / r.rhs;
  }
  return finish(std::move(r), ratios[0], ratios[1], coarse, fine);
}

RatioReport verify_binfty_vs_bp(const Weight& sigma, double p, const BallSetup& coarse, const BallSetup& fine) {
  RatioReport r;
  r.experiment = "binfty-vs-bp";
  r.inputs = "sigma=" + sigma.label() + "; p=" + fmt(p);
  r.bound = 1.05;
  const Weight dual = sigma.dual(p);
  double ratios[2];
  const BallSetup* ss[2] = {&coarse, &fine};
  for (int k = 0; k < 2; ++k) {
    const auto sa = sample_family(*ss[k], sigma), da = sample_family(*ss[k], dual);
    const BallSetup& s = *ss[k];
    r.lhs = max_over_trees(s, [&](std::size_t t) { return b_infty(s.index(t).sets(), sa[t]).value; });
    r.rhs = max_over_trees(s, [&](std::size_t t) { return joint_bp(s.index(t).sets(), sa[t], da[t], p).value; });
    ratios[k] = r.lhs / r.rhs;
  }
  return finish(std::move(r), ratios[0], ratios[1], coarse, fine);
}

RatioReport verify_tent_testing(const Weight& w, const Weight& sigma, const BallSetup& coarse, const BallSetup& fine) {
  RatioReport r;
  r.experiment = "tent-testing";
  r.inputs = pair_label(w, sigma);
  double ratios[2];
  const BallSetup* ss[2] = {&coarse, &fine};
  for (int k = 0; k < 2; ++k) {
    const BallSetup& s = *ss[k];
    const auto wa = sample_family(s, w), sa = sample_family(s, sigma);
    double best = -1.0, lhs = 0.0, rhs = 0.0;
    for (std::size_t t = 0; t < s.tree_count(); ++t) {
      const SetTree& st = s.index(t).sets();
      const double b2 = joint_bp(st, sa[t], wa[t], 2.0).value;
      const double bi = b_infty(st, sa[t]).value;
      const auto energy = testing_quotients(st, wa[t], sa[t], 2.0, {}, true);
      const auto smass = st.tent_integrals(sa[t]);
      for (std::size_t i = 0; i < st.size(); ++i) {
        if (!(smass[i] > 0.0)) continue;
        const double q = energy[i] / (b2 * bi * smass[i]);
        if (q > best) {
          best = q;
          lhs = energy[i];
          rhs = b2 * bi * smass[i];
        }
      }
    }
    r.lhs = lhs;
    r.rhs = rhs;
    ratios[k] = best;
  }
  return finish(std::move(r), ratios[0], ratios[1], coarse, fine);
}

RatioReport compare_characteristics(const Weight& w, const Weight& sigma, const BallSetup& coarse,
                                    const BallSetup& fine, const ApexGrid& grid) {
  RatioReport r;
  r.experiment = "dyadic-vs-classical";
  r.inputs = pair_label(w, sigma);
  double ratios[2];
  const BallSetup* ss[2] = {&coarse, &fine};
  for (int k = 0; k < 2; ++k) {
    const BallSetup& s = *ss[k];
    const auto wa = sample_family(s, w), sa = sample_family(s, sigma);
    r.lhs = max_over_trees(s, [&](std::size_t t) { return joint_bp(s.index(t).sets(), wa[t], sa[t], 2.0).value; });
    r.rhs = bp_classical(s.index(0), wa[0], sa[0], 2.0, grid).value;
    ratios[k] = r.lhs / r.rhs;
  }
  r = finish(std::move(r), ratios[0], ratios[1], coarse, fine);
  // comparability bracket decides the verdict here
  const bool inside = r.ratio >= 0.125 && r.ratio <= 8.0;
  r.verdict = inside && r.verdict == Verdict::BoundedEvidence ? Verdict::BoundedEvidence : Verdict::GrowthFlag;
  r.note = inside ? "ratio within [1/8, 8]" : "ratio outside [1/8, 8]";
  return r;
}

SawyerBall sawyer_constants_ball(const Weight& w, const Weight& sigma, const BallSetup& s) {
  SawyerBall best;
  best.ratio = -1.0;
  const auto wa = sample_family(s, w), sa = sample_family(s, sigma);
  for (std::size_t t = 0; t < s.tree_count(); ++t) {
    const SetTree& st = s.index(t).sets();
    SawyerBall b;
    b.tree = int(t);
    const auto q1 = testing_quotients(st, wa[t], sa[t], 2.0);
    const auto q2 = testing_quotients(st, sa[t], wa[t], 2.0);
    b.T = *std::max_element(q1.begin(), q1.end());
    b.T_prime = *std::max_element(q2.begin(), q2.end());
    PowerOptions po;
    po.rel_tol = 1e-10;
    b.norm = lambda_norm(st, {}, sa[t], wa[t], po).value;
    b.ratio = b.norm / (std::sqrt(b.T) + std::sqrt(b.T_prime));
    if (b.ratio > best.ratio) best = b;
  }
  return best;
}

RatioReport verify_sawyer_ball(const Weight& w, const Weight& sigma, const BallSetup& coarse, const BallSetup& fine) {
  RatioReport r;
  r.experiment = "sawyer-ball";
  r.inputs = pair_label(w, sigma);
  const auto a = sawyer_constants_ball(w, sigma, coarse);
  const auto b = sawyer_constants_ball(w, sigma, fine);
  r.lhs = b.norm;
  r.rhs = std::sqrt(b.T) + std::sqrt(b.T_prime);
  r = finish(std::move(r), a.ratio, b.ratio, coarse, fine);
  const bool inside = r.ratio >= 0.125 && r.ratio <= 8.0;
  r.note = "T=" + fmt(b.T) + " T'=" + fmt(b.T_prime) + (inside ? "; within [1/8, 8]" : "; outside [1/8, 8]");
  return r;
}

ComparisonReport positive_vs_sparse(const BallSetup& s, int samples, std::uint64_t seed) {
  if (s.options().params.dim != 1) throw ValidationError("positive_vs_sparse: d = 1 only");
  if (samples < 1) throw ValidationError("positive_vs_sparse: samples must be >= 1");
  const BergmanTree& t0 = s.tree(0);
  const std::size_t depth = std::size_t(t0.depth());
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> level(0, int(depth));
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  ComparisonReport out;
  out.c = std::numeric_limits<double>::infinity();
  out.C = 0.0;
  for (int k = 0; k < samples; ++k) {
    // f: indicator of a random tent, a random step function on kubes, or |z|^j
    std::function<double(const BallPoint&)> f;
    const int kind = k % 3;
    if (kind == 0) {
      const auto& lv = t0.level_nodes(1 + int(u01(rng) * 3.0) % 3);
      const int node = lv[std::size_t(u01(rng) * double(lv.size())) % lv.size()];
      f = [&t0, node](const BallPoint& z) {
        const int id = t0.try_locate(z);
        return id >= 0 && t0.is_ancestor_or_self(node, id) ? 1.0 : 0.0;
      };
    } else if (kind == 1) {
      auto vals = std::make_shared<std::vector<double>>(t0.size());
      for (auto& v : *vals) v = std::exp2(4.0 * u01(rng) - 2.0);
      f = [&t0, vals](const BallPoint& z) {
        const int id = t0.try_locate(z);
        return id >= 0 ? (*vals)[id] : 0.0;
      };
    } else {
      const int j = 1 + k % 4;
      const double hs = s.horizon_s();
      f = [j, hs](const BallPoint& z) { return z.norm2() < hs ? std::pow(z.norm(), j) : 0.0; };
    }
    // z: a random point of a kube at a random level
    const auto& lv = t0.level_nodes(level(rng));
    const int zn = lv[std::size_t(u01(rng) * double(lv.size())) % lv.size()];
    const BallPoint z = t0.node(zn).center;
    const auto& ix0 = s.index(0);
    const auto f0 = ix0.sample(f);
    KahanSum pp;
    const auto& m = ix0.sets().atom_mass();
    for (std::size_t a = 0; a < f0.size(); ++a) {
      const double g = std::abs(1.0 - inner(z, ix0.atom_point(a)));
      pp.add(m[a] * std::abs(f0[a]) / (g * g));
    }
    double lam = 0.0;
    for (std::size_t t = 0; t < s.tree_count(); ++t) {
      const auto& ix = s.index(t);
      const int node = ix.tree().try_locate(z);
      if (node < 0) continue;
      lam += lambda_apply(ix.sets(), t == 0 ? f0 : ix.sample(f))[node];
    }
    const double ratio = pp.value() / lam;
    out.ratios.push_back(ratio);
    out.c = std::min(out.c, ratio);
    out.C = std::max(out.C, ratio);
  }
  out.flagged = out.C > 50.0 * out.c;
  return out;
}

std::vector<RatioReport> mixed_bound_sweep(const std::vector<double>& alphas, const BallSetup& coarse,
                                           const BallSetup& fine) {
  std::vector<RatioReport> out(alphas.size() * alphas.size());
  parallel_for(out.size(), default_threads(), [&](std::size_t k) {
    const double aw = alphas[k / alphas.size()], as = alphas[k % alphas.size()];
    out[k] = verify_mixed_bound(Weight::power_radial(aw), Weight::power_radial(as), coarse, fine);
  });
  return out;
}

std::vector<RatioReport> bump_bound_sweep(const std::vector<double>& alphas, const std::vector<YoungFunction>& young,
                                          const BallSetup& coarse, const BallSetup& fine) {
  const std::size_t n = alphas.size() * alphas.size();
  std::vector<RatioReport> out(n * young.size());
  parallel_for(out.size(), default_threads(), [&](std::size_t k) {
    const std::size_t pair = k % n, y = k / n;
    const double aw = alphas[pair / alphas.size()], as = alphas[pair % alphas.size()];
    out[k] = verify_bump_bound(Weight::power_radial(aw), Weight::power_radial(as), young[y], young[y], coarse, fine);
  });
  return out;
}

namespace {

std::uint64_t seed_mix(std::uint64_t base, std::uint64_t seed, std::uint64_t depth) {
  std::seed_seq seq{std::uint32_t(base), std::uint32_t(base >> 32), std::uint32_t(seed), std::uint32_t(depth)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (std::uint64_t(out[0]) << 32) | out[1];
}

RatioReport model_row(std::string experiment, std::uint64_t seed, std::string inputs, const ModelSuiteOptions& o) {
  RatioReport r;
  r.experiment = std::move(experiment);
  r.model = "dyadic1d";
  r.seed = seed;
  r.inputs = std::move(inputs);
  r.truncation = "depth " + std::to_string(o.coarse_depth) + " -> " + std::to_string(o.depth);
  return r;
}

void set_trend(RatioReport& r, double coarse, double fine) {
  r.trend = {coarse, fine};
  r.ratio = fine;
  r.verdict = verdict_of(coarse, fine);
}

}  // namespace

std::vector<RatioReport> model_suite(const ModelSuiteOptions& o) {
  if (o.seeds < 1 || o.coarse_depth < 2 || o.depth < o.coarse_depth || o.spreads.empty() ||
      o.growth_depths.empty() || *std::min_element(o.growth_depths.begin(), o.growth_depths.end()) < 2)
    throw ValidationError("model suite: bad options");
  const double p = o.p;
  const auto phi = YoungFunction::power(1.5);
  const auto square = YoungFunction::power(2.0);
  const DyadicGrid gc(o.coarse_depth), gf(o.depth);
  const DyadicGrid* grids[2] = {&gc, &gf};
  constexpr int kRows = 7;
  std::vector<RatioReport> rows(std::size_t(o.seeds) * kRows);
  parallel_for(std::size_t(o.seeds), default_threads(), [&](std::size_t sd) {
    const int spread = o.spreads[sd % o.spreads.size()];
    const std::string spr = "spread=" + std::to_string(spread);
    RatioReport aux1 = model_row("corona-carleson", sd, spr + "; p=" + fmt(p), o);
    RatioReport saw = model_row("sawyer-testing", sd, spr + "; p=2", o);
    RatioReport pvd = model_row("power-vs-dense", sd, spr, o);
    RatioReport loc = model_row("localized-testing", sd, spr, o);
    RatioReport bump = model_row("sparse-bump", sd, spr + "; Phi=Psi=" + phi.label(), o);
    double r_aux1[2], r_saw[2], r_pvd[2], r_loc[2], r_bump[2];
    for (int k = 0; k < 2; ++k) {
      const DyadicGrid& g = *grids[k];
      std::mt19937_64 rng(seed_mix(o.seed, sd, std::uint64_t(g.depth())));
      const auto f = random_step_weight(g.depth(), spread, rng);
      const auto sigma = random_step_weight(g.depth(), spread, rng);
      const auto w = random_step_weight(g.depth(), spread, rng);
      const auto family = random_sparse_family(g, rng);

      const auto corona = stopping_family(g.tree(), f, sigma);
      const auto a = model_sparse_sum(g, f, sigma, corona.member, p);
      r_aux1[k] = a.ratio;
      aux1.lhs = a.lhs;
      aux1.rhs = a.rhs;
      aux1.bound = a.bound;

      const auto sc = model_sawyer_constants(g, w, sigma, family, 2.0);
      r_saw[k] = sc.ratio;
      saw.lhs = sc.norm;
      saw.rhs = std::sqrt(sc.T) + std::sqrt(sc.T_prime);
      saw.bound = 8.0;

      PowerOptions po;
      const double pw = lambda_norm(g.tree(), family, sigma, w, po).value;
      r_pvd[k] = std::abs(pw / sc.norm - 1.0);
      pvd.lhs = pw;
      pvd.rhs = sc.norm;
      pvd.bound = 1e-6;

      const auto l = model_localized_testing(g, w, sigma, family);
      r_loc[k] = l.ratio;
      loc.lhs = l.lhs;
      loc.rhs = l.rhs;
      loc.bound = 16.0;

      const double bc = model_bump(g, sigma, w, phi, phi, family);
      r_bump[k] = sc.norm / bc;
      bump.lhs = sc.norm;
      bump.rhs = bc;
    }
    set_trend(aux1, r_aux1[0], r_aux1[1]);
    aux1.note = r_aux1[0] <= aux1.bound && r_aux1[1] <= aux1.bound ? "within tau^(1/p) p'" : "BOUND VIOLATED";
    set_trend(saw, r_saw[0], r_saw[1]);
    saw.note = std::min(r_saw[0], r_saw[1]) >= 0.125 && std::max(r_saw[0], r_saw[1]) <= 8.0 ? "within [1/8, 8]"
                                                                                          : "outside [1/8, 8]";
    set_trend(pvd, r_pvd[0], r_pvd[1]);
    pvd.verdict = Verdict::BoundedEvidence;
    pvd.note = std::max(r_pvd[0], r_pvd[1]) <= 1e-6 ? "relative difference <= 1e-6" : "DISAGREE";
    set_trend(loc, r_loc[0], r_loc[1]);
    loc.note = std::max(r_loc[0], r_loc[1]) <= 16.0 ? "within 16" : "above 16";
    set_trend(bump, r_bump[0], r_bump[1]);

    // packing sums for a spiked weight: inside B_2 and at the boundary t^2
    std::mt19937_64 rng(seed_mix(o.seed, sd, 0));
    const int bg_depth = std::min({6, o.coarse_depth, *std::min_element(o.growth_depths.begin(), o.growth_depths.end())});
    const auto bg = random_step_weight(bg_depth, spread, rng);
    const double x = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    RatioReport pack = model_row("bump-packing", sd, spr + "; spike x=" + fmt(x) + "; Phi=" + phi.label(), o);
    RatioReport edge = model_row("bump-packing-boundary", sd, spr + "; spike x=" + fmt(x) + "; Phi=" + square.label(), o);
    double r_pack[2];
    for (int k = 0; k < 2; ++k) {
      const DyadicGrid& g = *grids[k];
      const auto w = spiked_weight(g.depth(), bg, x, 1.0);
      const auto fam = stopping_family(g.tree(), w, {}).member;
      const auto r = model_packing_sum(g, w, 0, phi, p, fam);
      r_pack[k] = r.ratio;
      pack.lhs = r.lhs;
      pack.rhs = r.rhs;
    }
    set_trend(pack, r_pack[0], r_pack[1]);
    pack.note = std::abs(r_pack[1] / r_pack[0] - 1.0) <= 0.25 ? "stable within 25%" : "drift above 25%";
    std::vector<double> tr;
    for (int d : o.growth_depths) {
      const DyadicGrid g(d);
      const auto w = spiked_weight(d, bg, x, 1.0);
      const auto fam = stopping_family(g.tree(), w, {}).member;
      const auto r = model_packing_sum(g, w, 0, square, p, fam, true);
      tr.push_back(r.ratio);
      edge.lhs = r.lhs;
      edge.rhs = r.rhs;
    }
    edge.trend = tr;
    edge.ratio = tr.back();
    edge.verdict = verdict_of(tr.front(), tr.back());
    bool mono = true;
    for (std::size_t i = 1; i < tr.size(); ++i) mono = mono && tr[i] > tr[i - 1];
    edge.truncation = "depths";
    for (int d : o.growth_depths) edge.truncation += " " + std::to_string(d);
    edge.note = mono ? "monotone growth" : "no monotone growth";

    RatioReport* slot = &rows[sd * kRows];
    slot[0] = std::move(aux1);
    slot[1] = std::move(saw);
    slot[2] = std::move(pvd);
    slot[3] = std::move(loc);
    slot[4] = std::move(bump);
    slot[5] = std::move(pack);
    slot[6] = std::move(edge);
  });
  return rows;
}

}  // namespace bergman
