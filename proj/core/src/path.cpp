#include "mpass/path.hpp"

#include <algorithm>
#include <cmath>

#include "mpass/errors.hpp"

namespace mpass {

PLPath::PLPath(const ScalarField& field, std::vector<Vec> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() < 2) throw Error("PLPath: at least two vertices are required");
  values_.reserve(vertices_.size());
  for (const auto& v : vertices_) values_.push_back(field.evaluate(v));
}

PLPath PLPath::straight(const ScalarField& field, const Vec& from, const Vec& to, int vertex_count) {
  if (vertex_count < 2) throw Error("PLPath::straight: need at least two vertices");
  std::vector<Vec> vertices;
  vertices.reserve(static_cast<std::size_t>(vertex_count));
  for (int i = 0; i < vertex_count; ++i) {
    const double s = static_cast<double>(i) / (vertex_count - 1);
    vertices.push_back((1.0 - s) * from + s * to);
  }
  vertices.front() = from;
  vertices.back() = to;
  return PLPath(field, std::move(vertices));
}

void PLPath::move_vertex(std::size_t i, Vec x, const ScalarField& field) {
  if (i == 0 || i + 1 >= vertices_.size()) throw Error("PLPath: endpoints are fixed");
  values_[i] = field.evaluate(x);
  vertices_[i] = std::move(x);
}

void PLPath::insert_vertex(std::size_t i, Vec x, const ScalarField& field) {
  if (i == 0 || i >= vertices_.size()) throw Error("PLPath: insertion must be strictly inside the path");
  values_.insert(values_.begin() + static_cast<std::ptrdiff_t>(i), field.evaluate(x));
  vertices_.insert(vertices_.begin() + static_cast<std::ptrdiff_t>(i), std::move(x));
}

double PLPath::length() const {
  double total = 0.0;
  for (std::size_t i = 1; i < vertices_.size(); ++i) total += (vertices_[i] - vertices_[i - 1]).norm();
  return total;
}

double PLPath::max_norm() const {
  double r = 0.0;
  for (const auto& v : vertices_) r = std::max(r, v.norm());
  return r;
}

Vec PLPath::point_at(double s) const {
  s = std::clamp(s, 0.0, 1.0);
  const double total = length();
  if (total == 0.0) return vertices_.front();
  double target = s * total;
  for (std::size_t i = 1; i < vertices_.size(); ++i) {
    const double seg = (vertices_[i] - vertices_[i - 1]).norm();
    if (target <= seg || i + 1 == vertices_.size()) {
      const double t = seg > 0.0 ? std::min(target / seg, 1.0) : 0.0;
      return vertices_[i - 1] + t * (vertices_[i] - vertices_[i - 1]);
    }
    target -= seg;
  }
  return vertices_.back();
}

PLPath PLPath::respaced(const ScalarField& field, int count) const {
  if (count < 2) throw Error("PLPath::respaced: need at least two vertices");
  std::vector<double> cumulative(vertices_.size(), 0.0);
  for (std::size_t i = 1; i < vertices_.size(); ++i) {
    cumulative[i] = cumulative[i - 1] + (vertices_[i] - vertices_[i - 1]).norm();
  }
  const double total = cumulative.back();
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(count));
  out.push_back(vertices_.front());
  std::size_t seg = 1;
  for (int k = 1; k + 1 < count; ++k) {
    const double target = total * static_cast<double>(k) / (count - 1);
    while (seg + 1 < vertices_.size() && cumulative[seg] < target) ++seg;
    const double len = cumulative[seg] - cumulative[seg - 1];
    const double t = len > 0.0 ? std::clamp((target - cumulative[seg - 1]) / len, 0.0, 1.0) : 0.0;
    out.push_back(vertices_[seg - 1] + t * (vertices_[seg] - vertices_[seg - 1]));
  }
  out.push_back(vertices_.back());
  return PLPath(field, std::move(out));
}

bool PLPath::cache_coherent(const ScalarField& field) const {
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (field.evaluate(vertices_[i]) != values_[i]) return false;
  }
  return true;
}

double path_value(const PLPath& path, const ScalarField& field, int refine) {
  if (refine < 1) throw Error("path_value: refine must be >= 1");
  double best = path.values().front();
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    best = std::max(best, path.value(i + 1));
    const Vec& a = path.vertex(i);
    const Vec& b = path.vertex(i + 1);
    for (int j = 1; j < refine; ++j) {
      const double t = static_cast<double>(j) / refine;
      best = std::max(best, field.evaluate(a + t * (b - a)));
    }
  }
  return best;
}

PathMax path_argmax(const PLPath& path, const ScalarField& field, int refine, bool polish) {
  if (refine < 1) throw Error("path_argmax: refine must be >= 1");
  PathMax best;
  best.value = path.value(0);
  best.segment = 0;
  best.t = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const Vec& a = path.vertex(i);
    const Vec& b = path.vertex(i + 1);
    for (int j = 1; j <= refine; ++j) {
      const double t = static_cast<double>(j) / refine;
      const double v = j == refine ? path.value(i + 1) : field.evaluate(a + t * (b - a));
      if (v > best.value) {
        best.value = v;
        best.segment = i;
        best.t = t;
      }
    }
  }

  auto at = [&](std::size_t seg, double t) -> Vec {
    return path.vertex(seg) + t * (path.vertex(seg + 1) - path.vertex(seg));
  };

  if (polish) {
    // Golden-section on [t - 1/refine, t + 1/refine], split at segment ends.
    const double step = 1.0 / refine;
    struct Interval {
      std::size_t seg;
      double lo, hi;
    };
    std::vector<Interval> intervals;
    if (best.t > 0.0) intervals.push_back({best.segment, std::max(0.0, best.t - step), best.t});
    if (best.t < 1.0) {
      intervals.push_back({best.segment, best.t, std::min(1.0, best.t + step)});
    } else if (best.segment + 2 < path.size()) {
      intervals.push_back({best.segment + 1, 0.0, step});
    }
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    for (const auto& iv : intervals) {
      double lo = iv.lo, hi = iv.hi;
      double x1 = hi - ratio * (hi - lo), x2 = lo + ratio * (hi - lo);
      double f1 = field.evaluate(at(iv.seg, x1)), f2 = field.evaluate(at(iv.seg, x2));
      for (int k = 0; k < 60 && hi - lo > 1e-13; ++k) {
        if (f1 > f2) {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - ratio * (hi - lo);
          f1 = field.evaluate(at(iv.seg, x1));
        } else {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + ratio * (hi - lo);
          f2 = field.evaluate(at(iv.seg, x2));
        }
      }
      const double t = 0.5 * (lo + hi);
      const double v = field.evaluate(at(iv.seg, t));
      if (v > best.value) {
        best.value = v;
        best.segment = iv.seg;
        best.t = t;
      }
    }
  }

  // Normalise "end of segment i" to "start of segment i + 1".
  if (best.t >= 1.0 && best.segment + 2 < path.size()) {
    ++best.segment;
    best.t = 0.0;
  }
  best.point = best.t == 0.0 ? path.vertex(best.segment)
                             : (best.t == 1.0 ? path.vertex(best.segment + 1) : at(best.segment, best.t));
  return best;
}

double path_value_bound(const PLPath& path, const ScalarField& field, int refine) {
  if (refine < 1) throw Error("path_value_bound: refine must be >= 1");
  double bound = path.values().front();
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const Vec& a = path.vertex(i);
    const Vec& b = path.vertex(i + 1);
    const double h = (b - a).norm() / refine;
    double prev = path.value(i);
    double top = prev;
    double slope = 0.0;
    for (int j = 1; j <= refine; ++j) {
      const double t = static_cast<double>(j) / refine;
      const double v = j == refine ? path.value(i + 1) : field.evaluate(a + t * (b - a));
      if (h > 0.0) slope = std::max(slope, std::abs(v - prev) / h);
      top = std::max(top, v);
      prev = v;
    }
    bound = std::max(bound, top + 0.5 * slope * h);
  }
  return bound;
}

bool membership(const PLPath& path, const ScalarField& field, double r, double epsilon, double c_ref, int refine) {
  return path.max_norm() <= r && path_value_bound(path, field, refine) < c_ref + epsilon;
}

}  // namespace mpass
