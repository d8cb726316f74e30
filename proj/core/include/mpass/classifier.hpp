#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mpass/clarke.hpp"
#include "mpass/linalg.hpp"
#include "mpass/minimax.hpp"

namespace mpass {

enum class Verdict { Critical, TangencyAtInfinity, Inconclusive };

const char* verdict_name(Verdict v);

/// Relative component of v orthogonal to x, in [0, 1]. std::nullopt when
/// |v| <= 1e-14 (a near-critical point, not a tangency). Throws on x = 0.
std::optional<double> tangency_residual(const Vec& x, const Vec& v);

/// |x| * |min-norm point of the hull at x|.
double ps_residual(const ScalarField& field, const Vec& x, const HullParams& hull);

struct Tolerances {
  double tangency = 0.05;
  double value = 0.0;        // 0: twice the last epsilon of the run
  double crit_base = 1e-3;   // tol_crit = crit_base * (1 + local gradient scale)
  double cluster_factor = 10.0;  // single-linkage radius in hull radii
};

struct CriticalWitness {
  Vec point;
  double value = 0.0;
  double residual = 0.0;
  double recheck_residual = 0.0;  // fresh seed, half the hull radius
  double tolerance = 0.0;
};

struct TangencyEntry {
  Vec point;
  Vec v;
  double value = 0.0;
  double norm = 0.0;
  double residual = 0.0;
  int round = 0;
};

struct Classification {
  Verdict verdict = Verdict::Inconclusive;
  std::string branch;  // "bounded", "escaping" or "undetermined"
  std::optional<CriticalWitness> critical_witness;
  std::vector<TangencyEntry> tangency_trace;
  std::vector<double> ps_residual_trace;
  double tol_tangency = 0.0;
  double tol_value = 0.0;
  std::map<std::string, double> diagnostics;
};

/// Bounded R estimates lead to a search for a critical point among the
/// stalled high vertices; growing R estimates lead to a harvest of
/// near-tangent points on the escaping paths.
Classification classify(const MinimaxRun& run, const Tolerances& tolerances = {});

}  // namespace mpass
