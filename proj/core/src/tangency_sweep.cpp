#include "mpass/tangency_sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mpass/errors.hpp"
#include "mpass/parallel.hpp"

namespace mpass {

namespace {

constexpr double kNearCritical = 1e-8;

Vec safe_gradient(const ScalarField& field, const Vec& x) {
  try {
    return field.gradient(x);
  } catch (const NonsmoothPoint&) {
    return field.finite_difference_gradient(x);
  }
}

Vec circle_point(double R, double base, double offset) {
  const double cb = std::cos(base), sb = std::sin(base);
  const double co = std::cos(offset), so = std::sin(offset);
  Vec x(2);
  x[0] = R * (cb * co - sb * so);
  x[1] = R * (sb * co + cb * so);
  return x;
}

double g_value(const ScalarField& field, const Vec& x) {
  const Vec grad = safe_gradient(field, x);
  return x[0] * grad[1] - x[1] * grad[0];
}

int sign_of(double g, double zero) { return std::abs(g) <= zero ? 0 : (g > 0.0 ? 1 : -1); }

// Orthonormal basis of the tangent space of the unit sphere at y.
std::vector<Vec> tangent_basis(const Vec& y) {
  const int n = static_cast<int>(y.size());
  std::vector<Vec> basis;
  for (int i = 0; i < n && static_cast<int>(basis.size()) < n - 1; ++i) {
    Vec e = Vec::Zero(n);
    e[i] = 1.0;
    e -= y.dot(e) * y;
    for (const auto& b : basis) e -= b.dot(e) * b;
    const double len = e.norm();
    if (len > 1e-6) basis.push_back(e / len);
  }
  return basis;
}

// Levenberg-Marquardt on r(y) = P_y grad f(R y) / scale over the unit
// sphere, stepping in a tangent basis and retracting by normalisation.
template <class Residual>
Vec sphere_least_squares(const Residual& residual, Vec y, int iterations) {
  constexpr double h = 1e-7;
  double lambda = 1e-3;
  Vec r = residual(y);
  for (int it = 0; it < iterations && r.norm() > 1e-15; ++it) {
    const std::vector<Vec> basis = tangent_basis(y);
    Eigen::MatrixXd J(r.size(), static_cast<Eigen::Index>(basis.size()));
    for (std::size_t j = 0; j < basis.size(); ++j) {
      J.col(static_cast<Eigen::Index>(j)) =
          (residual(Vec((y + h * basis[j]).normalized())) - residual(Vec((y - h * basis[j]).normalized()))) / (2.0 * h);
    }
    const Eigen::MatrixXd JtJ = J.transpose() * J;
    const Vec Jtr = J.transpose() * r;
    bool moved = false;
    for (int tries = 0; tries < 30 && !moved; ++tries) {
      Eigen::MatrixXd A = JtJ;
      A.diagonal().array() += lambda * (1.0 + JtJ.diagonal().array());
      const Vec s = A.ldlt().solve(-Jtr);
      Vec step = Vec::Zero(y.size());
      for (std::size_t j = 0; j < basis.size(); ++j) step += s[static_cast<Eigen::Index>(j)] * basis[j];
      const Vec cand = (y + step).normalized();
      const Vec rc = residual(cand);
      if (rc.norm() < r.norm()) {
        y = cand;
        r = rc;
        lambda = std::max(lambda / 3.0, 1e-12);
        moved = true;
      } else {
        lambda *= 4.0;
      }
    }
    if (!moved) break;
  }
  return y;
}

}  // namespace

double sweep_residual(const ScalarField& field, const Vec& x, double gradient_scale) {
  const Vec grad = safe_gradient(field, x);
  const double gn = grad.norm();
  const double scale = std::max(gradient_scale, std::numeric_limits<double>::min());
  if (gn <= kNearCritical * scale) {
    if (x.size() == 2) return std::abs(x[0] * grad[1] - x[1] * grad[0]) / (x.norm() * scale);
    const Vec u = x.normalized();
    return (grad - u.dot(grad) * u).norm() / scale;
  }
  const Vec u = x.normalized();
  return (grad - u.dot(grad) * u).norm() / gn;
}

CircleSweep sweep_circle(const ScalarField& field, double R, int resolution) {
  if (field.dim() != 2) throw DimensionMismatch("sweep_circle: field must be two-dimensional");
  if (!(R > 0.0)) throw Error("sweep_circle: radius must be positive");
  if (resolution < 3) throw Error("sweep_circle: resolution must be at least 3");

  const int n = resolution;
  const double two_pi = 2.0 * std::numbers::pi;
  const double h = two_pi / n;
  std::vector<double> g(static_cast<std::size_t>(n));
  double scale = 0.0;
  for (int k = 0; k < n; ++k) {
    const Vec x = circle_point(R, k * h, 0.0);
    const Vec grad = safe_gradient(field, x);
    scale = std::max(scale, grad.norm());
    g[static_cast<std::size_t>(k)] = x[0] * grad[1] - x[1] * grad[0];
  }
  const double zero = 1e-15 * R * scale;
  std::vector<int> s(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) s[static_cast<std::size_t>(k)] = sign_of(g[static_cast<std::size_t>(k)], zero);

  CircleSweep out;
  auto record = [&](double theta, const Vec& x) {
    const double residual = sweep_residual(field, x, scale);
    if (residual > kCircleTolerance) {
      ++out.rejected;
      return;
    }
    out.points.push_back({theta, x, field.evaluate(x), residual});
  };

  if (std::all_of(s.begin(), s.end(), [](int v) { return v == 0; })) {
    out.plateaus.push_back({0.0, two_pi});
    return out;
  }

  // Zero runs: single samples are roots, longer runs are plateaus. Start
  // scanning just after a nonzero sample so no run wraps around.
  int start = 0;
  while (s[static_cast<std::size_t>(start)] == 0) ++start;
  for (int step = 1; step <= n; ++step) {
    const int k = (start + step) % n;
    if (s[static_cast<std::size_t>(k)] != 0) continue;
    if (s[static_cast<std::size_t>((k - 1 + n) % n)] == 0) continue;  // not the first of its run
    int len = 1;
    while (s[static_cast<std::size_t>((k + len) % n)] == 0) ++len;
    if (len == 1) {
      record(k * h, circle_point(R, k * h, 0.0));
    } else {
      out.plateaus.push_back({k * h, (k + len - 1) * h});
    }
  }

  for (int k = 0; k < n; ++k) {
    const int a = s[static_cast<std::size_t>(k)];
    const int b = s[static_cast<std::size_t>((k + 1) % n)];
    if (a * b >= 0) continue;
    const double base = k * h;
    double lo = 0.0, hi = h;
    double best_offset = 0.5 * h;
    double best_residual = std::numeric_limits<double>::infinity();
    double width = hi - lo;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (!(mid > lo && mid < hi)) break;
      const Vec x = circle_point(R, base, mid);
      const double gm = g_value(field, x);
      const double residual = sweep_residual(field, x, scale);
      if (residual < best_residual) {
        best_residual = residual;
        best_offset = mid;
      }
      if (gm == 0.0) break;
      if ((gm > 0.0 ? 1 : -1) == a) lo = mid;
      else hi = mid;
      const double new_width = hi - lo;
      if (new_width <= 1e-12 && best_residual <= kCircleTolerance) break;
      if (!(new_width < width)) break;
      width = new_width;
    }
    double theta = base + best_offset;
    if (theta >= two_pi) theta -= two_pi;
    record(theta, circle_point(R, base, best_offset));
  }

  std::sort(out.points.begin(), out.points.end(), [](const SweepPoint& p, const SweepPoint& q) { return p.theta < q.theta; });
  return out;
}

SphereSweep sweep_sphere(const ScalarField& field, double R, int starts, std::uint64_t seed) {
  const int n = field.dim();
  if (n < 3) throw DimensionMismatch("sweep_sphere: dimension must be at least 3");
  if (!(R > 0.0)) throw Error("sweep_sphere: radius must be positive");
  if (starts < 1) throw Error("sweep_sphere: starts must be positive");

  Rng rng(mix_seed(seed, 0x5e1eULL));
  std::vector<Vec> y0(static_cast<std::size_t>(starts));
  for (auto& y : y0) y = sample_sphere(rng, n, 1.0);

  double scale = 0.0;
  for (const auto& y : y0) scale = std::max(scale, safe_gradient(field, Vec(R * y)).norm());
  scale = std::max(scale, std::numeric_limits<double>::min());

  SphereSweep out;
  out.starts = starts;
  int tangent_at_start = 0;
  for (const auto& y : y0) {
    if (sweep_residual(field, Vec(R * y), scale) <= kSphereTolerance) ++tangent_at_start;
  }
  out.plateau = tangent_at_start > (9 * starts) / 10;

  std::vector<Vec> finals(y0.size());
  if (out.plateau) {
    finals = y0;
  } else {
    auto orthogonal = [&](const Vec& y) {
      const Vec grad = safe_gradient(field, Vec(R * y));
      return Vec((grad - y.dot(grad) * y) / scale);
    };
    for (std::size_t i = 0; i < y0.size(); ++i) finals[i] = sphere_least_squares(orthogonal, y0[i], 100);
  }

  for (const auto& y : finals) {
    const Vec x = R * y;
    const double residual = sweep_residual(field, x, scale);
    if (residual > kSphereTolerance) continue;
    bool duplicate = false;
    for (auto& p : out.points) {
      const double c = std::clamp(p.x.dot(x) / (R * R), -1.0, 1.0);
      if (std::acos(c) <= 1e-3) {
        duplicate = true;
        if (residual < p.residual) p = {std::numeric_limits<double>::quiet_NaN(), x, field.evaluate(x), residual};
        break;
      }
    }
    if (!duplicate) out.points.push_back({std::numeric_limits<double>::quiet_NaN(), x, field.evaluate(x), residual});
  }
  return out;
}

SweepTrace sweep(const ScalarField& field, const SweepOptions& options) {
  if (options.radii.empty()) throw Error("sweep: at least one radius is required");
  for (std::size_t i = 1; i < options.radii.size(); ++i) {
    if (!(options.radii[i] > options.radii[i - 1])) throw Error("sweep: radii must be strictly increasing");
  }
  SweepTrace trace;
  trace.radii = options.radii;
  const std::size_t m = options.radii.size();
  trace.points.resize(m);
  trace.plateaus.resize(m);
  trace.sphere_plateau.assign(m, false);
  std::vector<int> rejected(m, 0);
  const int starts = options.starts > 0 ? options.starts : 50 * field.dim();

  std::vector<char> plateau_flags(m, 0);
  parallel_for(m, options.workers, [&](std::size_t k) {
    if (field.dim() == 2) {
      CircleSweep c = sweep_circle(field, options.radii[k], options.resolution);
      trace.points[k] = std::move(c.points);
      trace.plateaus[k] = std::move(c.plateaus);
      rejected[k] = c.rejected;
    } else {
      SphereSweep s = sweep_sphere(field, options.radii[k], starts, mix_seed(options.seed, k));
      trace.points[k] = std::move(s.points);
      plateau_flags[k] = s.plateau ? 1 : 0;
    }
  });
  for (std::size_t k = 0; k < m; ++k) trace.sphere_plateau[k] = plateau_flags[k] != 0;
  double total_rejected = 0.0;
  for (int r : rejected) total_rejected += r;
  trace.diagnostics["rejected_roots"] = total_rejected;

  if (m >= 4) cluster_limits(trace);
  return trace;
}

std::vector<LimitCluster> cluster_limits(SweepTrace& trace, double tol_cluster) {
  if (trace.radii.size() < 4) throw Error("cluster_limits: at least four radii are required");
  constexpr double kMatchAngle = 0.35;
  const std::size_t m = trace.radii.size();
  auto angle = [](const Vec& a, const Vec& b) {
    return std::acos(std::clamp(a.normalized().dot(b.normalized()), -1.0, 1.0));
  };

  trace.branches.clear();
  for (std::size_t i = 0; i < trace.points[0].size(); ++i) {
    Branch b;
    b.point_index.push_back(static_cast<int>(i));
    b.values.push_back(trace.points[0][i].value);
    trace.branches.push_back(std::move(b));
  }
  int ambiguous = 0;
  for (std::size_t r = 1; r < m; ++r) {
    const auto& pts = trace.points[r];
    std::vector<int> claim(pts.size(), -1);
    std::vector<int> choice(trace.branches.size(), -1);
    for (std::size_t bi = 0; bi < trace.branches.size(); ++bi) {
      Branch& b = trace.branches[bi];
      if (b.point_index.size() != r || b.ambiguous) continue;
      const Vec& last = trace.points[r - 1][static_cast<std::size_t>(b.point_index.back())].x;
      double best = std::numeric_limits<double>::infinity(), second = best;
      int idx = -1;
      for (std::size_t j = 0; j < pts.size(); ++j) {
        const double a = angle(last, pts[j].x);
        if (a < best) {
          second = best;
          best = a;
          idx = static_cast<int>(j);
        } else if (a < second) {
          second = a;
        }
      }
      if (idx < 0 || best > kMatchAngle) continue;
      if (second <= kMatchAngle && second < 2.0 * best) {
        b.ambiguous = true;
        continue;
      }
      if (claim[static_cast<std::size_t>(idx)] >= 0) {
        b.ambiguous = true;
        trace.branches[static_cast<std::size_t>(claim[static_cast<std::size_t>(idx)])].ambiguous = true;
        continue;
      }
      claim[static_cast<std::size_t>(idx)] = static_cast<int>(bi);
      choice[bi] = idx;
    }
    for (std::size_t bi = 0; bi < trace.branches.size(); ++bi) {
      Branch& b = trace.branches[bi];
      if (choice[bi] < 0 || b.ambiguous) continue;
      b.point_index.push_back(choice[bi]);
      b.values.push_back(pts[static_cast<std::size_t>(choice[bi])].value);
    }
  }

  std::vector<std::pair<double, double>> limits;  // (limit, rate)
  int divergent = 0;
  for (auto& b : trace.branches) {
    if (b.ambiguous) ++ambiguous;
    b.complete = !b.ambiguous && b.values.size() == m;
    if (!b.complete) continue;
    const auto& v = b.values;
    if (std::abs(v.back()) > kDivergenceThreshold) {
      b.divergent = true;
      ++divergent;
      continue;
    }
    double vmax = 1.0;
    for (double x : v) vmax = std::max(vmax, std::abs(x));
    std::vector<double> d;
    for (std::size_t k = 1; k < v.size(); ++k) d.push_back(v[k] - v[k - 1]);
    const bool flat = std::all_of(d.begin(), d.end(), [&](double x) { return std::abs(x) <= 1e-12 * vmax; });
    if (flat) {
      b.limit = v.back();
      b.rate = 0.0;
    } else {
      std::vector<double> ratios;
      for (std::size_t k = 1; k < d.size(); ++k) {
        if (std::abs(d[k - 1]) > 1e-12 * vmax) ratios.push_back(std::abs(d[k]) / std::abs(d[k - 1]));
      }
      if (ratios.empty() || ratios.back() >= 0.9) {
        b.divergent = true;
        ++divergent;
        continue;
      }
      double mean = 0.0;
      for (double q : ratios) mean += q;
      b.rate = mean / static_cast<double>(ratios.size());
      const double q = trace.radii[m - 1] / trace.radii[m - 2];
      b.limit = (q * v[m - 1] - v[m - 2]) / (q - 1.0);
    }
    limits.emplace_back(b.limit, b.rate);
  }

  std::sort(limits.begin(), limits.end());
  std::vector<LimitCluster> clusters;
  std::size_t i = 0;
  while (i < limits.size()) {
    std::size_t j = i + 1;
    while (j < limits.size() && limits[j].first - limits[j - 1].first <= tol_cluster) ++j;
    LimitCluster c;
    double sum = 0.0, rate = 0.0;
    for (std::size_t k = i; k < j; ++k) {
      sum += limits[k].first;
      rate += limits[k].second;
    }
    c.branch_count = static_cast<int>(j - i);
    c.value = sum / c.branch_count;
    c.rate = rate / c.branch_count;
    clusters.push_back(c);
    i = j;
  }
  trace.clusters = clusters;
  trace.diagnostics["ambiguous_branches"] = ambiguous;
  trace.diagnostics["divergent_branches"] = divergent;
  trace.diagnostics["branches"] = static_cast<double>(trace.branches.size());
  return clusters;
}

}  // namespace mpass
