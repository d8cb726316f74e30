#include "harness/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <optional>

#include "mpass/clarke.hpp"
#include "mpass/classifier.hpp"
#include "mpass/corpus.hpp"
#include "mpass/deformation.hpp"
#include "mpass/minimax.hpp"
#include "mpass/oracle.hpp"
#include "mpass/problem.hpp"
#include "mpass/tangency_sweep.hpp"

namespace mpass::harness {

namespace {

using Clock = std::chrono::steady_clock;

std::string format(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

const std::vector<double> kSweepRadii{10.0, 20.0, 40.0, 80.0, 160.0};

struct SolveResult {
  MinimaxRun run;
  Classification classification;
  double seconds = 0.0;
};

SolveResult solve_instance(const std::string& name, const HarnessOptions& o, int budget) {
  const auto t0 = Clock::now();
  const MountainPassProblem problem = default_problem(name, o.seed);
  MinimaxOptions opt;
  opt.seed = o.seed;
  opt.hull.seed = o.seed;
  opt.workers = o.workers;
  opt.budget = budget;
  SolveResult r{solve(problem, opt), {}, 0.0};
  r.classification = classify(r.run);
  r.seconds = seconds_since(t0);
  return r;
}

double nearest_cluster(const std::vector<LimitCluster>& clusters, double value) {
  double best = std::numeric_limits<double>::quiet_NaN();
  for (const auto& c : clusters) {
    if (std::isnan(best) || std::abs(c.value - value) < std::abs(best - value)) best = c.value;
  }
  return best;
}

// Shared runs between criteria.
class Context {
 public:
  explicit Context(const HarnessOptions& o) : o_(o) {}

  const SolveResult& well(const std::string& name) {
    auto& slot = name == "double_well" ? double_well_ : nonsmooth_well_;
    if (!slot) slot = solve_instance(name, o_, o_.quick ? 200 : 500);
    return *slot;
  }
  const SolveResult& broughton() {
    if (!broughton_) broughton_ = solve_instance("broughton", o_, 500);
    return *broughton_;
  }
  const SweepTrace& broughton_sweep() {
    if (!broughton_sweep_) {
      SweepOptions so;
      so.radii = kSweepRadii;
      so.workers = o_.workers;
      so.seed = o_.seed;
      broughton_sweep_ = sweep(corpus_field("broughton"), so);
    }
    return *broughton_sweep_;
  }
  const HarnessOptions& options() const { return o_; }

 private:
  HarnessOptions o_;
  std::optional<SolveResult> double_well_, nonsmooth_well_, broughton_;
  std::optional<SweepTrace> broughton_sweep_;
};

CriterionResult criterion_oracle(Context& ctx, std::vector<InstanceRow>& rows) {
  CriterionResult r{1, "oracle equivalence for c", true, "", 0.0, 60.0};
  for (const std::string name : {"double_well", "nonsmooth_well"}) {
    const SolveResult& s = ctx.well(name);
    const auto t0 = Clock::now();
    const double oracle = grid_bottleneck_oracle(*s.run.problem, Box::cube(2, 2.0), 101);
    const double seconds = s.seconds + seconds_since(t0);
    const double gap = std::abs(s.run.c_best - oracle);
    rows.push_back({name, s.run.c_best, verdict_name(s.classification.verdict), oracle, gap, seconds});
    if (!(gap <= 5e-2)) r.pass = false;
    r.seconds = std::max(r.seconds, seconds);
    r.detail += format("%s%s c=%.6f oracle=%.6f gap=%.2e", r.detail.empty() ? "" : "; ", name.c_str(), s.run.c_best,
                       oracle, gap);
  }
  return r;
}

CriterionResult criterion_critical(Context& ctx) {
  CriterionResult r{2, "critical branch", true, "", 0.0, 0.0};
  for (const std::string name : {"double_well", "nonsmooth_well"}) {
    const Classification& c = ctx.well(name).classification;
    std::string part = name + " " + verdict_name(c.verdict);
    bool ok = c.verdict == Verdict::Critical && c.critical_witness.has_value();
    if (c.critical_witness) {
      const auto& w = *c.critical_witness;
      const double dist = w.point.norm();
      ok = ok && dist <= 5e-2 && w.residual <= 1e-3 && w.recheck_residual <= 1e-3;
      part += format(" |x|=%.2e residual=%.2e recheck=%.2e", dist, w.residual, w.recheck_residual);
    }
    if (!ok) r.pass = false;
    r.detail += (r.detail.empty() ? "" : "; ") + part;
  }
  return r;
}

CriterionResult criterion_tangency(Context& ctx, std::vector<InstanceRow>& rows) {
  CriterionResult r{3, "tangency branch", true, "", 0.0, 120.0};
  const SolveResult& s = ctx.broughton();
  const auto t0 = Clock::now();
  const SweepTrace& trace = ctx.broughton_sweep();
  r.seconds = s.seconds + seconds_since(t0);
  const Classification& c = s.classification;
  double mean = 0.0;
  for (const auto& e : c.tangency_trace) mean += e.value;
  if (!c.tangency_trace.empty()) mean /= static_cast<double>(c.tangency_trace.size());
  const double cluster = nearest_cluster(trace.clusters, mean);
  double worst_value = 0.0, worst_residual = 0.0;
  for (const auto& e : c.tangency_trace) {
    worst_value = std::max(worst_value, std::abs(e.value - cluster));
    worst_residual = std::max(worst_residual, e.residual);
  }
  r.pass = c.verdict == Verdict::TangencyAtInfinity && !std::isnan(cluster) && worst_value <= 0.1 &&
           worst_residual <= 0.05;
  r.detail = format("broughton %s entries=%zu sweep_cluster=%.3e max|f-cluster|=%.3e max_residual=%.3e",
                    verdict_name(c.verdict), c.tangency_trace.size(), cluster, worst_value, worst_residual);
  rows.push_back({"broughton", s.run.c_best, verdict_name(c.verdict), cluster, std::abs(s.run.c_best - cluster),
                  r.seconds});
  return r;
}

CriterionResult criterion_sweep(Context& ctx, std::vector<InstanceRow>& rows) {
  CriterionResult r{4, "sweep ground truth", true, "", 0.0, 30.0};
  const auto t0 = Clock::now();
  const std::vector<int> resolutions = ctx.options().quick ? std::vector<int>{720, 1440}
                                                            : std::vector<int>{720, 1440, 2880};
  SweepOptions so;
  so.radii = kSweepRadii;
  so.workers = ctx.options().workers;
  so.seed = ctx.options().seed;
  for (int res : resolutions) {
    so.resolution = res;
    const SweepTrace t = sweep(corpus_field("cross_square"), so);
    const bool ok = t.clusters.size() == 1 && std::abs(t.clusters[0].value) <= 1e-6 && t.clusters[0].branch_count == 4;
    if (!ok) r.pass = false;
    r.detail += format("%scross_square@%d clusters=%zu", r.detail.empty() ? "" : "; ", res, t.clusters.size());
    if (!t.clusters.empty()) r.detail += format(" (%.1e, %d)", t.clusters[0].value, t.clusters[0].branch_count);
    if (res == resolutions.front() && !t.clusters.empty()) {
      rows.push_back({"cross_square (sweep)", t.clusters[0].value,
                      format("clusters=%zu branches=%d", t.clusters.size(), t.clusters[0].branch_count), 0.0,
                      std::abs(t.clusters[0].value), 0.0});
    }
  }
  so.resolution = 720;
  const SweepTrace lin = sweep(corpus_field("linear"), so);
  if (!lin.clusters.empty()) r.pass = false;
  r.detail += format("; linear clusters=%zu", lin.clusters.size());
  rows.push_back({"linear (sweep)", 0.0, format("clusters=%zu", lin.clusters.size()), 0.0, 0.0, 0.0});
  r.seconds = seconds_since(t0);
  return r;
}

CriterionResult criterion_pseudo_gradient(const HarnessOptions& o) {
  CriterionResult r{5, "pseudo-gradient contract", true, "", 0.0, 0.0};
  const auto t0 = Clock::now();
  Rng rng(mix_seed(o.seed, 5));
  std::uniform_int_distribution<int> dim_dist(2, 6), count_dist(1, 24);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int hulls = o.quick ? 200 : 1000;
  int violations = 0, tested = 0;
  while (tested < hulls) {
    const int dim = dim_dist(rng);
    const int count = count_dist(rng);
    const Vec center = sample_sphere(rng, dim, 0.2 + 2.0 * unit(rng));
    const double spread = 3.0 * unit(rng);
    std::vector<Vec> gens;
    double scale = 0.0;
    for (int k = 0; k < count; ++k) {
      gens.push_back(sample_ball(rng, center, spread));
      scale = std::max(scale, gens.back().norm());
    }
    const GradientHull hull(Vec::Zero(dim), gens, 1.0);
    const double m = hull.min_norm_point().norm();
    if (m < 1e-3 * scale) continue;  // hull (nearly) contains the origin
    ++tested;
    const double b = 0.5 * m * (0.1 + 0.9 * unit(rng));
    const auto v = pseudo_gradient(hull, b);
    bool ok = v.has_value() && v->norm() < 1.0;
    if (ok) {
      for (const auto& w : gens) ok = ok && w.dot(*v) > b;
    }
    if (!ok) ++violations;
  }
  r.pass = violations == 0;
  r.detail = format("hulls=%d violations=%d", tested, violations);
  r.seconds = seconds_since(t0);
  return r;
}

CriterionResult criterion_descent(const HarnessOptions& o) {
  CriterionResult r{6, "descent contract", true, "", 0.0, 0.0};
  const auto t0 = Clock::now();
  const ScalarField f = corpus_field("double_well");
  Rng rng(mix_seed(o.seed, 6));
  std::uniform_real_distribution<double> ux(-0.8, 0.8), uy(0.2, 0.6);
  std::vector<Vec> centers;
  for (int k = 0; k < 6; ++k) centers.push_back(make_vec({ux(rng), uy(rng)}));
  HullParams hp{1e-3, 0, o.seed};
  double m_min = std::numeric_limits<double>::infinity();
  for (const auto& c : centers) m_min = std::min(m_min, critical_residual(f, c, hp.radius, 0, point_seed(o.seed, c)));
  const double b = 0.25 * m_min;
  DescentParams dp;
  dp.hull = hp;
  const DescentField field = DescentField::build(f, centers, b, make_vec({-1.0, 0.0}), make_vec({1.0, 0.0}), dp);
  const double h = field.h_max();

  const int starts = o.quick ? 50 : 200;
  std::uniform_int_distribution<std::size_t> pick(0, centers.size() - 1);
  int core_violations = 0, free_violations = 0;
  double worst_core = std::numeric_limits<double>::infinity(), worst_free = worst_core, worst_support = worst_core;
  for (int k = 0; k < starts; ++k) {
    const Vec x0 = sample_ball(rng, centers[pick(rng)], field.cutoff_inner());
    const FlowStepReport rep = field.flow(x0, h, mix_seed(o.seed, static_cast<std::uint64_t>(k)));
    const double margin = rep.f_drop - b * h / 2.0;
    worst_core = std::min(worst_core, margin);
    if (margin < -1e-9) ++core_violations;
  }
  // Half of the arbitrary starts fall in the support, where the ramp acts.
  const Box box = Box::cube(2, 2.0);
  for (int k = 0; k < starts; ++k) {
    const Vec x0 = k % 2 == 0 ? sample_ball(rng, centers[pick(rng)], field.cutoff_outer()) : sample_box(rng, box);
    const FlowStepReport rep = field.flow(x0, h, mix_seed(o.seed, 1000 + static_cast<std::uint64_t>(k)));
    worst_free = std::min(worst_free, rep.f_drop);
    if (k % 2 == 0) worst_support = std::min(worst_support, rep.f_drop);
    if (rep.f_drop < -1e-9) ++free_violations;
  }
  r.pass = core_violations == 0 && free_violations == 0;
  r.detail = format("b=%.3e h=%.3e core violations=%d/%d (min margin %.2e) arbitrary violations=%d/%d (min drop %.2e, %.2e in support)",
                    b, h, core_violations, starts, worst_core, free_violations, starts, worst_free, worst_support);
  r.seconds = seconds_since(t0);
  return r;
}

CriterionResult criterion_directional(const HarnessOptions& o) {
  CriterionResult r{7, "generalized directional derivative", true, "", 0.0, 0.0};
  const auto t0 = Clock::now();
  Rng rng(mix_seed(o.seed, 7));
  // Dyadic entries keep every dot product exact in double precision.
  std::uniform_int_distribution<int> entry(-256, 256), dim_dist(2, 5), count_dist(1, 12), t_dist(1, 64);
  auto dyadic = [&](int n) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = entry(rng) / 256.0;
    return v;
  };
  const int tuples = o.quick ? 200 : 1000;
  int sub_fail = 0, hom_fail = 0;
  for (int k = 0; k < tuples; ++k) {
    const int n = dim_dist(rng);
    std::vector<Vec> gens;
    const int count = count_dist(rng);
    for (int j = 0; j < count; ++j) gens.push_back(dyadic(n));
    const GradientHull hull(Vec::Zero(n), gens, 1.0);
    const Vec v = dyadic(n), u = dyadic(n);
    const double t = t_dist(rng) / 8.0;
    if (!(hull.directional_upper(v + u) <= hull.directional_upper(v) + hull.directional_upper(u))) ++sub_fail;
    if (!(hull.directional_upper(t * v) == t * hull.directional_upper(v))) ++hom_fail;
  }

  int mono_fail = 0, points = 0;
  const int per_member = o.quick ? 5 : 20;
  for (const std::string name : {"double_well", "broughton", "cross_square", "linear"}) {
    const ScalarField f = corpus_field(name);
    for (int k = 0; k < per_member; ++k) {
      const Vec x = sample_box(rng, Box::cube(2, 2.0));
      const std::uint64_t s = mix_seed(o.seed, static_cast<std::uint64_t>(k));
      const double d2 = sample_hull(f, x, 1e-2, 0, s).diameter();
      const double d3 = sample_hull(f, x, 1e-3, 0, s).diameter();
      const double d4 = sample_hull(f, x, 1e-4, 0, s).diameter();
      ++points;
      const bool ok = d2 > 0.0 ? (d2 > d3 && d3 > d4) : (d3 == 0.0 && d4 == 0.0);
      if (!ok) ++mono_fail;
    }
  }
  r.pass = sub_fail == 0 && hom_fail == 0 && mono_fail == 0;
  r.detail = format("tuples=%d subadditivity failures=%d homogeneity failures=%d; diameter points=%d non-monotone=%d",
                    tuples, sub_fail, hom_fail, points, mono_fail);
  r.seconds = seconds_since(t0);
  return r;
}

std::string radius_text(const std::optional<double>& R) { return R ? format("%.3g", *R) : std::string("inf"); }

CriterionResult criterion_escape_radius(Context& ctx) {
  CriterionResult r{8, "escape radius monotonicity", true, "", 0.0, 120.0};
  const auto t0 = Clock::now();
  const HarnessOptions& o = ctx.options();
  const std::vector<double> eps{0.5, 0.25, 0.125, 0.0625};
  MinimaxOptions opt;
  opt.seed = o.seed;
  opt.hull.seed = o.seed;
  opt.workers = o.workers;

  const double c_ref = ctx.broughton().run.c_best;
  const std::vector<double> grid{1.85, 2.0, 2.25, 2.5, 2.75};
  const RadiusProfile prof = capped_profile(default_problem("broughton", o.seed), grid, o.quick ? 150 : 300, opt);
  auto index_of = [&](const std::optional<double>& R) {
    return R ? static_cast<int>(std::find(grid.begin(), grid.end(), *R) - grid.begin()) : static_cast<int>(grid.size());
  };
  std::vector<std::optional<double>> Rb;
  for (double e : eps) Rb.push_back(estimate_R(prof, e, c_ref));
  bool monotone = true;
  for (std::size_t i = 1; i < eps.size(); ++i) {
    // eps decreases along the list, so R may only grow (one grid step slack).
    if (index_of(Rb[i]) < index_of(Rb[i - 1]) - 1) monotone = false;
  }
  const bool exceeds = !Rb.back().has_value();

  const double c_well = ctx.well("double_well").run.c_best;
  const std::vector<double> grid_well{1.0, 1.5, 2.0, 3.0, 4.0};
  const RadiusProfile prof_well = capped_profile(default_problem("double_well", o.seed), grid_well, 100, opt);
  bool constant = true;
  std::string well_text;
  for (double e : eps) {
    const auto R = estimate_R(prof_well, e, c_well);
    if (!R || *R != 1.0) constant = false;
    well_text += (well_text.empty() ? "" : ",") + radius_text(R);
  }
  r.pass = monotone && exceeds && constant;
  r.detail = format("broughton c_ref=%.4f R=[", c_ref);
  for (std::size_t i = 0; i < Rb.size(); ++i) r.detail += (i ? "," : "") + radius_text(Rb[i]);
  r.detail += format("] cap=%.3g; double_well R=[%s]", grid.back(), well_text.c_str());
  r.seconds = seconds_since(t0);
  return r;
}

CriterionResult criterion_determinism(const HarnessOptions& o) {
  CriterionResult r{9, "determinism", true, "", 0.0, 0.0};
  const auto t0 = Clock::now();
  HarnessOptions a = o, b = o, c = o;
  a.workers = 1;
  b.workers = 1;
  c.workers = 4;
  const std::string first = instances_csv(probe_instances(a));
  const std::string second = instances_csv(probe_instances(b));
  const std::string third = instances_csv(probe_instances(c));
  r.pass = first == second && first == third;
  r.detail = format("repeat identical=%s workers 1 vs 4 identical=%s", first == second ? "yes" : "no",
                    first == third ? "yes" : "no");
  r.seconds = seconds_since(t0);
  return r;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

}  // namespace

bool AcceptanceReport::all_pass() const {
  return !criteria.empty() && std::all_of(criteria.begin(), criteria.end(), [](const auto& c) { return c.pass; });
}

std::vector<InstanceRow> probe_instances(const HarnessOptions& options) {
  std::vector<InstanceRow> rows;
  for (const std::string name : {"double_well", "nonsmooth_well", "broughton"}) {
    const SolveResult s = solve_instance(name, options, 40);
    rows.push_back({name, s.run.c_best, verdict_name(s.classification.verdict), 0.0, 0.0, s.seconds});
  }
  SweepOptions so;
  so.radii = kSweepRadii;
  so.workers = options.workers;
  so.seed = options.seed;
  const SweepTrace t = sweep(corpus_field("cross_square"), so);
  rows.push_back({"cross_square (sweep)", t.clusters.empty() ? 0.0 : t.clusters[0].value,
                  format("clusters=%zu", t.clusters.size()), 0.0, 0.0, 0.0});
  return rows;
}

AcceptanceReport run_acceptance(const HarnessOptions& options) {
  AcceptanceReport report;
  Context ctx(options);
  report.criteria.push_back(criterion_oracle(ctx, report.instances));
  report.criteria.push_back(criterion_critical(ctx));
  report.criteria.push_back(criterion_tangency(ctx, report.instances));
  report.criteria.push_back(criterion_sweep(ctx, report.instances));
  report.criteria.push_back(criterion_pseudo_gradient(options));
  report.criteria.push_back(criterion_descent(options));
  report.criteria.push_back(criterion_directional(options));
  report.criteria.push_back(criterion_escape_radius(ctx));
  report.criteria.push_back(criterion_determinism(options));
  for (auto& c : report.criteria) {
    if (c.time_limit > 0.0 && c.seconds > c.time_limit) {
      c.pass = false;
      c.detail += format("; over the %.0f s time limit", c.time_limit);
    }
  }
  return report;
}

std::string instances_csv(const std::vector<InstanceRow>& rows) {
  std::string out = "instance,c,verdict,oracle,gap\n";
  for (const auto& r : rows) {
    out += csv_field(r.name) + format(",%.10g,", r.c) + csv_field(r.verdict) + format(",%.10g,%.3e\n", r.oracle, r.gap);
  }
  return out;
}

std::string scoreboard_csv(const AcceptanceReport& report) {
  std::string out = instances_csv(report.instances);
  out += "\ncriterion,name,status,detail\n";
  for (const auto& c : report.criteria) {
    out += format("%d,", c.id) + csv_field(c.name) + (c.pass ? ",PASS," : ",FAIL,") + csv_field(c.detail) + "\n";
  }
  return out;
}

std::string scoreboard_markdown(const AcceptanceReport& report) {
  std::string out = "# Scoreboard\n\n| instance | c | verdict | oracle | gap |\n|---|---|---|---|---|\n";
  for (const auto& r : report.instances) {
    out += format("| %s | %.6g | %s | %.6g | %.2e |\n", r.name.c_str(), r.c, r.verdict.c_str(), r.oracle, r.gap);
  }
  out += "\n| # | criterion | status | detail |\n|---|---|---|---|\n";
  for (const auto& c : report.criteria) {
    out += format("| %d | %s | %s | ", c.id, c.name.c_str(), c.pass ? "PASS" : "FAIL") + c.detail + " |\n";
  }
  out += report.all_pass() ? "\nAll criteria pass.\n" : "\nSome criteria fail.\n";
  return out;
}

}  // namespace mpass::harness
