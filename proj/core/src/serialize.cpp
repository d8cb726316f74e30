#include "mpass/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "mpass/errors.hpp"

namespace mpass {

namespace {

using nlohmann::ordered_json;

ordered_json vec_json(const Vec& v) {
  ordered_json a = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

// JSON has no infinity; unbounded estimates are written as null.
ordered_json number_or_null(double x) { return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr); }

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

ordered_json classification_object(const Classification& c) {
  ordered_json j;
  j["verdict"] = verdict_name(c.verdict);
  j["branch"] = c.branch;
  if (c.critical_witness) {
    const auto& w = *c.critical_witness;
    j["witness"] = {{"point", vec_json(w.point)},
                    {"value", w.value},
                    {"residual", w.residual},
                    {"recheck_residual", w.recheck_residual}};
  }
  if (!c.tangency_trace.empty()) {
    ordered_json trace = ordered_json::array();
    for (const auto& e : c.tangency_trace) {
      trace.push_back({{"round", e.round},
                       {"point", vec_json(e.point)},
                       {"v", vec_json(e.v)},
                       {"value", e.value},
                       {"norm", e.norm},
                       {"residual", e.residual}});
    }
    j["trace"] = trace;
  }
  j["ps_residual_trace"] = c.ps_residual_trace;
  j["tolerances"] = {{"critical", c.critical_witness ? c.critical_witness->tolerance : 0.0},
                     {"tangency", c.tol_tangency},
                     {"value", c.tol_value}};
  ordered_json diag = ordered_json::object();
  for (const auto& [k, v] : c.diagnostics) diag[k] = number_or_null(v);
  j["diagnostics"] = diag;
  return j;
}

}  // namespace

std::string classification_json(const Classification& classification) {
  return classification_object(classification).dump(2) + "\n";
}

std::string run_report_json(const MinimaxRun& run, const Classification& classification, const std::string& label) {
  ordered_json j;
  j["schema"] = kSchemaVersion;
  ordered_json problem;
  problem["field"] = label;
  if (run.problem) {
    problem["dim"] = run.problem->dim();
    problem["x_star"] = vec_json(run.problem->x_star());
    problem["y_star"] = vec_json(run.problem->y_star());
    problem["barrier"] = run.problem->barrier_description();
    problem["barrier_min"] = run.problem->barrier_min();
  }
  j["problem"] = problem;
  j["epsilon"] = run.epsilon_schedule;
  j["seed"] = run.options.seed;
  j["hull_radius"] = run.options.hull.radius;
  j["r_max"] = run.r_max;
  j["c_best"] = run.c_best;

  ordered_json rounds = ordered_json::array();
  for (const auto& r : run.rounds) {
    rounds.push_back({{"epsilon", r.epsilon},
                      {"c_upper", r.c_upper},
                      {"c_history", r.c_history},
                      {"radius_used", r.radius_used},
                      {"R_estimate", number_or_null(r.R_estimate)},
                      {"R_finite", r.R_finite},
                      {"iterations", r.iterations},
                      {"accepted", r.accepted},
                      {"rejected", r.rejected},
                      {"stalled", r.stalled},
                      {"escaped", r.escaped},
                      {"h_max", r.last_h_max},
                      {"b", r.last_b}});
  }
  j["rounds"] = rounds;

  ordered_json events = ordered_json::array();
  for (const auto& e : run.events) {
    events.push_back({{"round", e.round},
                      {"iteration", e.iteration},
                      {"point", vec_json(e.point)},
                      {"value", e.value},
                      {"residual", e.residual}});
  }
  j["events"] = events;
  j["classification"] = classification_object(classification);
  return j.dump(2) + "\n";
}

std::string path_csv(const PLPath& path) {
  const Eigen::Index n = path.vertex(0).size();
  std::string out = "t";
  for (Eigen::Index i = 0; i < n; ++i) out += ",x" + std::to_string(i + 1);
  out += ",f\n";
  const std::size_t last = path.size() - 1;
  for (std::size_t k = 0; k < path.size(); ++k) {
    out += num(static_cast<double>(k) / static_cast<double>(last));
    for (Eigen::Index i = 0; i < n; ++i) out += "," + num(path.vertex(k)[i]);
    out += "," + num(path.value(k)) + "\n";
  }
  return out;
}

std::string sweep_csv(const SweepTrace& trace) {
  Eigen::Index n = 0;
  for (const auto& pts : trace.points) {
    if (!pts.empty()) n = pts.front().x.size();
  }
  std::string out = "R,theta";
  for (Eigen::Index i = 0; i < n; ++i) out += ",x" + std::to_string(i + 1);
  out += ",f,residual,branch\n";

  for (std::size_t r = 0; r < trace.points.size(); ++r) {
    std::vector<int> branch_of(trace.points[r].size(), -1);
    for (std::size_t b = 0; b < trace.branches.size(); ++b) {
      const auto& idx = trace.branches[b].point_index;
      if (r < idx.size() && idx[r] >= 0) branch_of[static_cast<std::size_t>(idx[r])] = static_cast<int>(b);
    }
    for (std::size_t k = 0; k < trace.points[r].size(); ++k) {
      const auto& p = trace.points[r][k];
      out += num(trace.radii[r]) + "," + (std::isnan(p.theta) ? std::string() : num(p.theta));
      for (Eigen::Index i = 0; i < n; ++i) out += "," + num(p.x[i]);
      out += "," + num(p.value) + "," + num(p.residual) + "," + std::to_string(branch_of[k]) + "\n";
    }
  }
  return out;
}

std::string clusters_json(const SweepTrace& trace) {
  ordered_json j;
  j["schema"] = kSchemaVersion;
  j["radii"] = trace.radii;
  ordered_json clusters = ordered_json::array();
  for (const auto& c : trace.clusters) {
    clusters.push_back({{"value", c.value}, {"branch_count", c.branch_count}, {"rate", c.rate}});
  }
  j["clusters"] = clusters;
  ordered_json plateaus = ordered_json::array();
  for (std::size_t r = 0; r < trace.radii.size(); ++r) {
    for (const auto& p : trace.plateaus[r]) {
      plateaus.push_back({{"R", trace.radii[r]}, {"theta_lo", p.theta_lo}, {"theta_hi", p.theta_hi}});
    }
    if (r < trace.sphere_plateau.size() && trace.sphere_plateau[r]) plateaus.push_back({{"R", trace.radii[r]}, {"sphere", true}});
  }
  j["plateaus"] = plateaus;
  ordered_json diag = ordered_json::object();
  for (const auto& [k, v] : trace.diagnostics) diag[k] = v;
  j["diagnostics"] = diag;
  return j.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream os(p, std::ios::binary);
  if (!os) throw Error("cannot open " + path + " for writing");
  os << content;
  if (!os) throw Error("failed writing " + path);
}

}  // namespace mpass
