#pragma once

#include <cstddef>
#include <vector>

#include "mpass/linalg.hpp"
#include "mpass/scalar_field.hpp"

namespace mpass {

/// Piecewise-linear path with fixed endpoints and cached vertex values.
/// Interior vertices may move; the first and last never do.
class PLPath {
 public:
  PLPath(const ScalarField& field, std::vector<Vec> vertices);

  static PLPath straight(const ScalarField& field, const Vec& from, const Vec& to, int vertex_count = 65);

  std::size_t size() const { return vertices_.size(); }
  const std::vector<Vec>& vertices() const { return vertices_; }
  const std::vector<double>& values() const { return values_; }
  const Vec& vertex(std::size_t i) const { return vertices_[i]; }
  double value(std::size_t i) const { return values_[i]; }
  const Vec& front() const { return vertices_.front(); }
  const Vec& back() const { return vertices_.back(); }

  /// Moves an interior vertex and refreshes its cached value.
  void move_vertex(std::size_t i, Vec x, const ScalarField& field);

  /// Inserts a vertex between i-1 and i (1 <= i < size()).
  void insert_vertex(std::size_t i, Vec x, const ScalarField& field);

  double length() const;
  double mean_spacing() const { return length() / static_cast<double>(size() - 1); }

  /// Largest |x| along the path; attained at a vertex since |.| is convex.
  double max_norm() const;

  /// Point at arc-length fraction s in [0, 1].
  Vec point_at(double s) const;

  /// Same curve, `count` vertices uniformly spaced by arc length.
  PLPath respaced(const ScalarField& field, int count) const;

  /// True when cached values match f at every vertex.
  bool cache_coherent(const ScalarField& field) const;

 private:
  std::vector<Vec> vertices_;
  std::vector<double> values_;
};

struct PathMax {
  double value = 0.0;
  std::size_t segment = 0;  // segment index: vertices (segment, segment + 1)
  double t = 0.0;           // position inside the segment, [0, 1]
  Vec point;
};

/// Max of f over the vertices and refine - 1 interior points of each segment.
double path_value(const PLPath& path, const ScalarField& field, int refine);

/// Location of the largest sampled value, optionally polished by
/// golden-section search on the neighbouring sub-intervals.
PathMax path_argmax(const PLPath& path, const ScalarField& field, int refine, bool polish = true);

/// Sampled max plus half a sample spacing times the steepest sampled slope,
/// per segment: an upper estimate of max f over the continuous path.
double path_value_bound(const PLPath& path, const ScalarField& field, int refine);

/// Membership in A(r, eps): path_value_bound < c_ref + eps and max |gamma(t)| <= r.
/// A path whose value is within refinement error of c_ref + eps is outside.
bool membership(const PLPath& path, const ScalarField& field, double r, double epsilon, double c_ref, int refine = 64);

}  // namespace mpass
