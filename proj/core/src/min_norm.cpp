#include "mpass/min_norm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mpass/errors.hpp"

namespace mpass {
namespace {

// Minimiser of |sum a_i p_i| over the affine hull of the active set,
// via the bordered Gram system [G 1; 1' 0].
Eigen::VectorXd affine_minimizer(const Eigen::MatrixXd& active) {
  const auto k = active.cols();
  Eigen::MatrixXd system(k + 1, k + 1);
  system.topLeftCorner(k, k) = active.transpose() * active;
  system.topRightCorner(k, 1).setOnes();
  system.bottomLeftCorner(1, k).setOnes();
  system(k, k) = 0.0;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
  rhs[k] = 1.0;
  Eigen::VectorXd sol = system.completeOrthogonalDecomposition().solve(rhs);
  Eigen::VectorXd alpha = sol.head(k);
  const double sum = alpha.sum();
  if (std::abs(sum) > 1e-300) alpha /= sum;
  return alpha;
}

}  // namespace

MinNormResult min_norm_point(std::span<const Vec> generators, double tol, int max_iterations) {
  if (generators.empty()) throw Error("min_norm_point: empty generator set");
  const auto dim = generators.front().size();
  const int m = static_cast<int>(generators.size());

  MinNormResult result;
  result.weights.assign(static_cast<std::size_t>(m), 0.0);

  double scale = 0.0;
  int start = 0;
  for (int j = 0; j < m; ++j) {
    const double sq = generators[static_cast<std::size_t>(j)].squaredNorm();
    scale = std::max(scale, sq);
    if (sq < generators[static_cast<std::size_t>(start)].squaredNorm()) start = j;
  }
  if (m == 1 || scale == 0.0) {
    result.point = generators[static_cast<std::size_t>(start)];
    result.weights[static_cast<std::size_t>(start)] = 1.0;
    result.converged = true;
    return result;
  }

  std::vector<int> active{start};
  std::vector<double> lambda{1.0};
  Vec x = generators[static_cast<std::size_t>(start)];

  auto active_matrix = [&] {
    Eigen::MatrixXd a(dim, static_cast<Eigen::Index>(active.size()));
    for (std::size_t i = 0; i < active.size(); ++i) a.col(static_cast<Eigen::Index>(i)) = generators[static_cast<std::size_t>(active[i])];
    return a;
  };

  for (int iter = 0; iter < max_iterations; ++iter) {
    result.iterations = iter + 1;
    int entering = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < m; ++j) {
      const double d = x.dot(generators[static_cast<std::size_t>(j)]);
      if (d < best) {
        best = d;
        entering = j;
      }
    }
    if (best >= x.squaredNorm() - tol * scale) {
      result.converged = true;
      break;
    }
    if (std::find(active.begin(), active.end(), entering) != active.end()) {
      // Cycling on a degenerate face; the current point is as good as it gets.
      result.converged = true;
      break;
    }
    active.push_back(entering);
    lambda.push_back(0.0);

    for (int minor = 0; minor < 4 * m + 8; ++minor) {
      const Eigen::MatrixXd a = active_matrix();
      const Eigen::VectorXd alpha = affine_minimizer(a);
      bool interior = true;
      for (Eigen::Index i = 0; i < alpha.size(); ++i) {
        if (alpha[i] <= 1e-14) {
          interior = false;
          break;
        }
      }
      if (interior) {
        for (std::size_t i = 0; i < active.size(); ++i) lambda[i] = alpha[static_cast<Eigen::Index>(i)];
        x = a * alpha;
        break;
      }
      // Step from lambda toward alpha until the first weight hits zero.
      double theta = 1.0;
      for (std::size_t i = 0; i < active.size(); ++i) {
        const double ai = alpha[static_cast<Eigen::Index>(i)];
        if (ai <= 1e-14 && lambda[i] - ai > 0.0) theta = std::min(theta, lambda[i] / (lambda[i] - ai));
      }
      for (std::size_t i = 0; i < active.size(); ++i) {
        lambda[i] = lambda[i] + theta * (alpha[static_cast<Eigen::Index>(i)] - lambda[i]);
      }
      std::vector<int> kept_idx;
      std::vector<double> kept_lambda;
      for (std::size_t i = 0; i < active.size(); ++i) {
        if (lambda[i] > 1e-14) {
          kept_idx.push_back(active[i]);
          kept_lambda.push_back(lambda[i]);
        }
      }
      if (kept_idx.empty()) {
        kept_idx.push_back(entering);
        kept_lambda.push_back(1.0);
      }
      double total = 0.0;
      for (double l : kept_lambda) total += l;
      for (double& l : kept_lambda) l /= total;
      active = std::move(kept_idx);
      lambda = std::move(kept_lambda);
      x = active_matrix() * Eigen::Map<const Eigen::VectorXd>(lambda.data(), static_cast<Eigen::Index>(lambda.size()));
    }
  }

  for (std::size_t i = 0; i < active.size(); ++i) result.weights[static_cast<std::size_t>(active[i])] = lambda[i];
  result.point = x;
  return result;
}

}  // namespace mpass
