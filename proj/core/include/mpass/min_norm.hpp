#pragma once

#include <span>
#include <vector>

#include "mpass/linalg.hpp"

namespace mpass {

struct MinNormResult {
  Vec point;                  // argmin |w| over co(generators)
  std::vector<double> weights;  // convex weights, one per generator
  int iterations = 0;
  bool converged = false;
};

/// Wolfe's minimum-norm-point algorithm on the convex hull of `generators`.
/// Stops when <w, m> >= |m|^2 - tol * max|w|^2 for every generator.
MinNormResult min_norm_point(std::span<const Vec> generators, double tol = 1e-10, int max_iterations = 200);

}  // namespace mpass
