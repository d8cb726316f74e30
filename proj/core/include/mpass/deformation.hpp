#pragma once

#include <cstdint>
#include <vector>

#include "mpass/clarke.hpp"
#include "mpass/linalg.hpp"
#include "mpass/scalar_field.hpp"

namespace mpass {

/// C^1 cutoff: 1 for d <= inner, 0 for d >= outer, smoothstep 1 - 3u^2 + 2u^3
/// in between with u = (d - inner) / (outer - inner).
double smoothstep_cutoff(double distance, double inner, double outer);

struct DescentParams {
  HullParams hull;            // hull radius also sets the default cutoff radii
  double cutoff_inner = 0.0;  // r1; 0 selects 2 * hull.radius
  double cutoff_outer = 0.0;  // r2; 0 selects 3 * r1
  int substeps = 32;
  double h0 = 0.0;            // 0: calibrate with epsilon = b / 4
  int constant_samples = 200; // sample budget for the K, K' estimates
  int calibration_probes = 100;
};

struct FieldSample {
  Vec value;
  bool near_critical = false;  // pseudo-gradient failed inside the support
  double residual = 0.0;       // |m| of the hull when near_critical
};

struct FlowStepReport {
  Vec start;
  Vec end;
  double h = 0.0;
  double f_drop = 0.0;
  bool in_core = false;
  int near_critical_events = 0;
  std::vector<Vec> trace;  // filled only when requested
};

/// The cut-off pseudo-gradient field phi(x) * v(x) around a finite high set,
/// with the constants that bound its certified flow step.
class DescentField {
 public:
  /// Throws GeometryError when a high-set point lies within r2 of an endpoint.
  static DescentField build(const ScalarField& field, std::vector<Vec> high_set, double b, const Vec& x_star,
                            const Vec& y_star, const DescentParams& params = {});

  const ScalarField& field() const { return field_; }
  const std::vector<Vec>& region_centers() const { return centers_; }
  bool empty() const { return centers_.empty(); }
  double b() const { return b_; }
  double cutoff_inner() const { return r1_; }
  double cutoff_outer() const { return r2_; }
  double region_radius() const { return r2_; }
  double K() const { return K_; }
  double K_prime() const { return K_prime_; }
  double h0() const { return h0_; }
  /// min(b / (2 K K'), h0).
  double h_max() const { return h_max_; }
  int substeps() const { return params_.substeps; }

  double distance_to_high_set(const Vec& x) const;
  double cutoff(const Vec& x) const;

  FieldSample field_at(const Vec& x, std::uint64_t seed) const;

  /// Explicit Euler for x' = -field(x) over `duration` in `substeps` steps.
  FlowStepReport flow(const Vec& x0, double duration, std::uint64_t seed, bool keep_trace = false) const;

 private:
  DescentField(ScalarField field, std::vector<Vec> centers, double b, const DescentParams& params);
  void estimate_constants();

  ScalarField field_;
  std::vector<Vec> centers_;
  double b_ = 0.0;
  DescentParams params_;
  double r1_ = 0.0;
  double r2_ = 0.0;
  double K_ = 0.0;
  double K_prime_ = 0.0;
  double h0_ = 0.0;
  double h_max_ = 0.0;
};

}  // namespace mpass
