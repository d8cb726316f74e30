#include "mpass/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mpass/errors.hpp"

namespace mpass {

namespace {

struct Candidate {
  Vec point;
  double value = 0.0;
};

// Single-linkage clusters; returns a cluster id per candidate.
std::vector<int> single_linkage(const std::vector<Candidate>& items, double radius) {
  std::vector<int> parent(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) parent[i] = static_cast<int>(i);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < items.size(); ++i) {
    for (std::size_t j = i + 1; j < items.size(); ++j) {
      if ((items[i].point - items[j].point).norm() <= radius) parent[find(static_cast<int>(i))] = find(static_cast<int>(j));
    }
  }
  std::vector<int> id(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) id[i] = find(static_cast<int>(i));
  return id;
}

double residual_at(const ScalarField& f, const Vec& x, const HullParams& hp) {
  return critical_residual(f, x, hp.radius, hp.count, point_seed(hp.seed, x));
}

// Compass search on the critical residual.
Vec polish_critical(const ScalarField& f, Vec x, const HullParams& hp, double& residual) {
  residual = residual_at(f, x, hp);
  double step = 10.0 * hp.radius;
  const double stop = 1e-2 * hp.radius;
  while (step > stop) {
    bool improved = false;
    for (Eigen::Index d = 0; d < x.size() && !improved; ++d) {
      for (double sign : {1.0, -1.0}) {
        Vec y = x;
        y[d] += sign * step;
        const double r = residual_at(f, y, hp);
        if (r < residual) {
          x = y;
          residual = r;
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return x;
}

bool escaping_branch(const MinimaxRun& run) {
  if (run.escaped) return true;
  for (const auto& rec : run.rounds) {
    if (!rec.R_finite) return true;
  }
  const std::size_t n = run.rounds.size();
  if (n < 3) return false;
  for (std::size_t k = n - 2; k < n; ++k) {
    if (!(run.rounds[k].R_estimate > 1.01 * run.rounds[k - 1].R_estimate)) return false;
  }
  return true;
}

}  // namespace

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Critical: return "Critical";
    case Verdict::TangencyAtInfinity: return "TangencyAtInfinity";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

std::optional<double> tangency_residual(const Vec& x, const Vec& v) {
  const double xx = x.squaredNorm();
  if (!(xx > 0.0)) throw Error("tangency_residual: x must be nonzero");
  if (x.size() != v.size()) throw DimensionMismatch("tangency_residual: x and v differ in length");
  const double vn = v.norm();
  if (vn <= 1e-14) return std::nullopt;
  // Normalising both first makes the value exactly invariant under
  // positive rescaling of x and any nonzero rescaling of v.
  const Vec u = x / std::sqrt(xx);
  const Vec w = v / vn;
  const Vec orth = w - u.dot(w) * u;
  return std::clamp(orth.norm(), 0.0, 1.0);
}

double ps_residual(const ScalarField& field, const Vec& x, const HullParams& hull) {
  return x.norm() * critical_residual(field, x, hull.radius, hull.count, point_seed(hull.seed, x));
}

Classification classify(const MinimaxRun& run, const Tolerances& tol) {
  if (!run.problem || run.rounds.empty()) throw Error("classify: run has no completed rounds");
  const ScalarField& f = run.problem->field();
  const HullParams& hp = run.options.hull;
  Classification out;
  out.tol_tangency = tol.tangency;
  out.tol_value = tol.value > 0.0 ? tol.value : 2.0 * run.rounds.back().epsilon;
  out.diagnostics["rounds"] = static_cast<double>(run.rounds.size());
  out.diagnostics["events"] = static_cast<double>(run.events.size());
  out.diagnostics["c_best"] = run.c_best;
  out.diagnostics["final_R"] = run.rounds.back().R_estimate;

  for (const auto& rec : run.rounds) {
    if (rec.argmax.point.size() > 0) out.ps_residual_trace.push_back(ps_residual(f, rec.argmax.point, hp));
  }

  const bool escaping = escaping_branch(run);
  const bool bounded = !escaping && run.rounds.back().R_estimate < run.r_max / 2.0;

  if (bounded) {
    out.branch = "bounded";
    std::vector<Candidate> pool;
    const int last = static_cast<int>(run.rounds.size()) - 1;
    for (const auto& e : run.events) {
      if (e.round >= last - 1) pool.push_back({e.point, e.value});
    }
    for (int k = std::max(0, last - 1); k <= last; ++k) {
      const auto& rec = run.rounds[static_cast<std::size_t>(k)];
      for (const auto& x : rec.high_set) pool.push_back({x, f.evaluate(x)});
      pool.push_back({rec.argmax.point, rec.argmax.value});
    }
    out.diagnostics["critical_candidates"] = static_cast<double>(pool.size());

    const std::vector<int> ids = single_linkage(pool, tol.cluster_factor * hp.radius);
    std::map<int, std::pair<double, std::size_t>> best_in_cluster;  // id -> (residual, index)
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (std::abs(pool[i].value - run.c_best) > out.tol_value) continue;
      const double r = residual_at(f, pool[i].point, hp);
      auto it = best_in_cluster.find(ids[i]);
      if (it == best_in_cluster.end() || r < it->second.first) best_in_cluster[ids[i]] = {r, i};
    }
    out.diagnostics["critical_clusters"] = static_cast<double>(best_in_cluster.size());

    std::optional<CriticalWitness> best;
    for (const auto& [id, entry] : best_in_cluster) {
      CriticalWitness w;
      w.point = polish_critical(f, pool[entry.second].point, hp, w.residual);
      w.value = f.evaluate(w.point);
      if (!best || w.residual < best->residual) best = w;
    }
    if (best) {
      const GradientHull hull = sample_hull(f, best->point, hp.radius, hp.count, point_seed(hp.seed, best->point));
      double scale = 0.0;
      for (const auto& g : hull.generators()) scale = std::max(scale, g.norm());
      best->tolerance = tol.crit_base * (1.0 + scale);
      best->recheck_residual =
          critical_residual(f, best->point, 0.5 * hp.radius, hp.count, mix_seed(hp.seed, 0x5eed5eedULL));
      out.critical_witness = best;
      const bool ok = best->residual <= best->tolerance && best->recheck_residual <= best->tolerance &&
                      std::abs(best->value - run.c_best) <= out.tol_value;
      out.verdict = ok ? Verdict::Critical : Verdict::Inconclusive;
    }
    return out;
  }

  if (!escaping) {
    out.branch = "undetermined";
    return out;
  }

  out.branch = "escaping";
  int rejected_residual = 0;
  for (std::size_t k = 0; k < run.rounds.size(); ++k) {
    const auto& rec = run.rounds[k];
    const Vec& x = rec.argmax.point;
    if (x.size() == 0 || !rec.path) continue;
    const double value = f.evaluate(x);
    const double spacing = rec.path->mean_spacing();
    if (x.norm() < rec.R_estimate - spacing) continue;
    if (value < run.c_best || value > run.c_best + rec.epsilon) continue;
    const GradientHull hull = sample_hull(f, x, hp.radius, hp.count, point_seed(hp.seed, x));
    const Vec v = hull.min_norm_point();
    const auto residual = tangency_residual(x, v);
    if (!residual || *residual > tol.tangency) {
      ++rejected_residual;
      continue;
    }
    // A round that did not move the path outward adds no new sequence element.
    if (!out.tangency_trace.empty() && !(x.norm() > out.tangency_trace.back().norm)) continue;
    out.tangency_trace.push_back({x, v, value, x.norm(), *residual, static_cast<int>(k)});
  }
  // Entry k places from the end must satisfy |f - c_best| <= tol_val (1 + k);
  // drop leading entries that do not.
  auto& trace = out.tangency_trace;
  std::size_t first = 0;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const double k = static_cast<double>(trace.size() - 1 - i);
    if (std::abs(trace[i].value - run.c_best) > out.tol_value * (1.0 + k)) first = i + 1;
  }
  trace.erase(trace.begin(), trace.begin() + static_cast<std::ptrdiff_t>(first));
  out.diagnostics["tangency_entries"] = static_cast<double>(trace.size());
  out.diagnostics["tangency_rejected_residual"] = rejected_residual;
  out.diagnostics["tangency_rejected_value"] = static_cast<double>(first);
  if (trace.size() >= 3) out.verdict = Verdict::TangencyAtInfinity;
  return out;
}

}  // namespace mpass
