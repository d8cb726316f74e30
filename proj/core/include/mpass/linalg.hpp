#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace mpass {

using Vec = Eigen::VectorXd;

/// Axis-aligned box [lower, upper] in R^n.
struct Box {
  Vec lower;
  Vec upper;

  int dim() const { return static_cast<int>(lower.size()); }
  bool contains(const Vec& x) const {
    return (x.array() >= lower.array()).all() && (x.array() <= upper.array()).all();
  }
  static Box cube(int dim, double half_width) {
    return {Vec::Constant(dim, -half_width), Vec::Constant(dim, half_width)};
  }
  static Box around(const Vec& center, double half_width) {
    return {center.array() - half_width, center.array() + half_width};
  }
};

inline Vec make_vec(std::initializer_list<double> values) {
  Vec v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double value : values) v[i++] = value;
  return v;
}

inline Vec make_vec(std::span<const double> values) {
  Vec v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) v[static_cast<Eigen::Index>(i)] = values[i];
  return v;
}

inline std::vector<double> to_std(const Vec& v) { return {v.data(), v.data() + v.size()}; }

// splitmix64 finalizer; used to derive independent streams from one seed.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL + (b << 6) + (b >> 2);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed that depends on the exact bit pattern of a point, so that
/// quantities sampled "at x" are a deterministic function of x.
std::uint64_t point_seed(std::uint64_t base, const Vec& x);

using Rng = std::mt19937_64;

/// Uniform sample from the open ball of given radius around center.
Vec sample_ball(Rng& rng, const Vec& center, double radius);

/// Uniform sample from the sphere of given radius around the origin.
Vec sample_sphere(Rng& rng, int dim, double radius);

Vec sample_box(Rng& rng, const Box& box);

}  // namespace mpass
