#include <gtest/gtest.h>

#include <cmath>
#include <queue>

#include "mpass/corpus.hpp"
#include "mpass/errors.hpp"
#include "mpass/expression.hpp"
#include "mpass/minimax.hpp"
#include "mpass/oracle.hpp"
#include "mpass/path.hpp"

namespace mpass {
namespace {

const Vec kLeft = make_vec({-1.0, 0.0});
const Vec kRight = make_vec({1.0, 0.0});

// Bottleneck value by bisection on a threshold plus 8-neighbour flood fill.
double flood_fill_bottleneck(const ScalarField& f, const Vec& a, const Vec& b, double half, int res) {
  auto node = [&](const Vec& x) {
    return std::pair<int, int>{static_cast<int>(std::lround((x[0] + half) / (2 * half) * (res - 1))),
                               static_cast<int>(std::lround((x[1] + half) / (2 * half) * (res - 1)))};
  };
  std::vector<double> value(static_cast<std::size_t>(res * res));
  for (int i = 0; i < res; ++i) {
    for (int j = 0; j < res; ++j) {
      value[static_cast<std::size_t>(i * res + j)] =
          f.evaluate(make_vec({-half + 2 * half * i / (res - 1), -half + 2 * half * j / (res - 1)}));
    }
  }
  const auto [ai, aj] = node(a);
  const auto [bi, bj] = node(b);
  auto connected = [&](double threshold) {
    std::vector<char> seen(value.size(), 0);
    std::queue<std::pair<int, int>> q;
    if (value[static_cast<std::size_t>(ai * res + aj)] > threshold) return false;
    q.push({ai, aj});
    seen[static_cast<std::size_t>(ai * res + aj)] = 1;
    while (!q.empty()) {
      const auto [i, j] = q.front();
      q.pop();
      if (i == bi && j == bj) return true;
      for (int di = -1; di <= 1; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          const int ni = i + di, nj = j + dj;
          if (ni < 0 || nj < 0 || ni >= res || nj >= res) continue;
          const auto k = static_cast<std::size_t>(ni * res + nj);
          if (seen[k] || value[k] > threshold) continue;
          seen[k] = 1;
          q.push({ni, nj});
        }
      }
    }
    return false;
  };
  std::vector<double> sorted = value;
  std::sort(sorted.begin(), sorted.end());
  std::size_t lo = 0, hi = sorted.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (connected(sorted[mid])) hi = mid;
    else lo = mid + 1;
  }
  return sorted[lo];
}

TEST(PathValue, StraightSegments) {
  for (const char* name : {"double_well", "nonsmooth_well"}) {
    const ScalarField f = corpus_field(name);
    const PLPath p = PLPath::straight(f, kLeft, kRight, 2);
    EXPECT_NEAR(path_value(p, f, 64), 1.0, 1e-3) << name;
  }
}

TEST(PathValue, RefinementIsMonotone) {
  const ScalarField f = corpus_field("broughton");
  const PLPath p(f, {make_vec({-1.0, -1.0}), make_vec({-0.3, 0.7}), make_vec({0.4, 1.1}), make_vec({1.0, -1.5})});
  double prev = -std::numeric_limits<double>::infinity();
  for (int refine = 1; refine <= 256; refine *= 2) {
    const double v = path_value(p, f, refine);
    EXPECT_GE(v, prev);
    prev = v;
  }
  EXPECT_GE(path_argmax(p, f, 64).value, path_value(p, f, 64));
}

TEST(PathValue, ArgmaxMatchesDenseScan) {
  const ScalarField f = corpus_field("double_well");
  const PLPath p(f, {kLeft, make_vec({-0.2, 0.5}), make_vec({0.3, 0.2}), kRight});
  double dense = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s + 1 < p.size(); ++s) {
    for (int i = 0; i <= 100000; ++i) {
      const double t = i / 100000.0;
      dense = std::max(dense, f.evaluate((1 - t) * p.vertex(s) + t * p.vertex(s + 1)));
    }
  }
  EXPECT_NEAR(path_argmax(p, f, 32).value, dense, 1e-9);
}

TEST(Path, RespacingKeepsEndpoints) {
  const ScalarField f = corpus_field("double_well");
  const PLPath p(f, {kLeft, make_vec({0.0, 1.0}), kRight});
  const PLPath q = p.respaced(f, 33);
  EXPECT_EQ(q.size(), 33u);
  EXPECT_EQ(q.front(), kLeft);
  EXPECT_EQ(q.back(), kRight);
  EXPECT_NEAR(q.length(), p.length(), 1e-12);
  EXPECT_TRUE(q.cache_coherent(f));
}

TEST(Path, EndpointsAreFixed) {
  const ScalarField f = corpus_field("double_well");
  PLPath p = PLPath::straight(f, kLeft, kRight, 5);
  EXPECT_THROW(p.move_vertex(0, make_vec({0.0, 0.0}), f), Error);
  p.move_vertex(2, make_vec({0.0, 0.5}), f);
  EXPECT_DOUBLE_EQ(p.value(2), f.evaluate(make_vec({0.0, 0.5})));
}

TEST(Membership, SegmentCases) {
  const ScalarField f = corpus_field("double_well");
  const PLPath p = PLPath::straight(f, kLeft, kRight, 2);
  EXPECT_TRUE(membership(p, f, 2.0, 0.1, 1.0));
  EXPECT_FALSE(membership(p, f, 0.5, 0.1, 1.0));
  EXPECT_FALSE(membership(p, f, 2.0, 1e-6, 1.0));
  EXPECT_GE(path_value_bound(p, f, 64), path_value(p, f, 64));
  EXPECT_LE(path_value_bound(p, f, 64), 1.05);
}

TEST(Oracle, WellsAgainstFloodFill) {
  for (const char* name : {"double_well", "nonsmooth_well"}) {
    const ScalarField f = corpus_field(name);
    const double c101 = grid_bottleneck_oracle(f, kLeft, kRight, Box::cube(2, 2.0), 101);
    const double c51 = grid_bottleneck_oracle(f, kLeft, kRight, Box::cube(2, 2.0), 51);
    EXPECT_NEAR(c101, 1.0, 2e-2) << name;
    EXPECT_NEAR(c51, c101, 5e-2) << name;
    EXPECT_DOUBLE_EQ(c101, flood_fill_bottleneck(f, kLeft, kRight, 2.0, 101)) << name;
  }
}

TEST(Oracle, ConvexBowl) {
  const ScalarField f = ScalarField::from_expression(Expression::parse("x1^2 + x2^2", 2));
  EXPECT_DOUBLE_EQ(grid_bottleneck_oracle(f, make_vec({0.0, 0.0}), kRight, Box::cube(2, 2.0), 101), 1.0);
}

TEST(Oracle, ThreeDimensionalLift) {
  const ScalarField f = corpus_field("double_well", 3);
  const double c = grid_bottleneck_oracle(f, make_vec({-1.0, 0.0, 0.0}), make_vec({1.0, 0.0, 0.0}),
                                          Box::cube(3, 2.0), 41);
  EXPECT_NEAR(c, 1.0, 2e-2);
}

TEST(Oracle, RejectsOutsideEndpoints) {
  EXPECT_THROW(grid_bottleneck_oracle(corpus_field("linear"), make_vec({-3.0, 0.0}), kRight, Box::cube(2, 2.0), 11),
               GeometryError);
}

TEST(Problem, GeometryIsValidated) {
  const ScalarField f = corpus_field("double_well");
  EXPECT_NO_THROW(MountainPassProblem::create(f, kLeft, kRight, BallBarrier{kLeft, 0.5}));
  EXPECT_THROW(MountainPassProblem::create(f, kLeft, make_vec({-1.2, 0.0}), BallBarrier{kLeft, 0.5}), GeometryError);
  EXPECT_THROW(MountainPassProblem::create(f, kLeft, make_vec({1.0}), BallBarrier{kLeft, 0.5}), DimensionMismatch);
  try {
    MountainPassProblem::create(corpus_field("linear"), kLeft, kRight, BallBarrier{kLeft, 0.5});
    FAIL() << "expected GeometryError";
  } catch (const GeometryError& e) {
    EXPECT_NE(std::string(e.what()).find("f(x*), f(y*) < inf_{x in dU} f(x)"), std::string::npos);
  }
}

TEST(Schedule, Halves) {
  EXPECT_EQ(epsilon_schedule(0.5, 4), (std::vector<double>{0.5, 0.25, 0.125, 0.0625}));
}

TEST(MinimaxRound, WellsConvergeToSaddle) {
  for (const char* name : {"double_well", "nonsmooth_well"}) {
    const MountainPassProblem problem = default_problem(name);
    MinimaxRun run = start_run(problem);
    minimax_round(run, 0.1, 500);
    ASSERT_EQ(run.rounds.size(), 1u);
    const RoundRecord& r = run.rounds.back();
    EXPECT_NEAR(r.c_upper, 1.0, 1e-3) << name;
    double closest = std::numeric_limits<double>::infinity();
    for (const auto& v : r.path->vertices()) closest = std::min(closest, v.norm());
    EXPECT_LE(closest, 1e-2) << name;
    for (std::size_t i = 1; i < r.c_history.size(); ++i) EXPECT_LE(r.c_history[i], r.c_history[i - 1]);
    EXPECT_EQ(r.path->front(), problem.x_star());
    EXPECT_EQ(r.path->back(), problem.y_star());
  }
}

TEST(EstimateR, DoubleWellFitsTheSegment) {
  const MountainPassProblem problem = default_problem("double_well");
  EXPECT_EQ(estimate_R(problem, 0.1, {1.0, 2.0, 3.0, 4.0}, 50, 1.0), 1.0);
  EXPECT_EQ(estimate_R(problem, 1e3, {1.0, 2.0}, 10, 1.0), 1.0);
}

TEST(EstimateR, BroughtonCapsLowerTheValue) {
  const MountainPassProblem problem = default_problem("broughton");
  const RadiusProfile prof = capped_profile(problem, {1.85, 2.25, 2.75}, 300);
  ASSERT_EQ(prof.values.size(), 3u);
  EXPECT_GT(prof.values[0], prof.values[1]);
  EXPECT_GT(prof.values[1], prof.values[2]);
  const auto coarse = estimate_R(prof, 0.5, 0.0);
  const auto fine = estimate_R(prof, 0.05, 0.0);
  ASSERT_TRUE(coarse.has_value());
  EXPECT_TRUE(!fine.has_value() || *fine >= *coarse);
}

TEST(EstimateR, ProfileLookup) {
  const RadiusProfile prof{{1.0, 2.0, 3.0}, {0.9, 0.5, 0.2}};
  EXPECT_EQ(estimate_R(prof, 1.0, 0.0), 1.0);
  EXPECT_EQ(estimate_R(prof, 0.3, 0.0), 3.0);
  EXPECT_FALSE(estimate_R(prof, 0.1, 0.0).has_value());
}

TEST(RadialRetract, InnerPathUnchanged) {
  const ScalarField f = corpus_field("linear");
  const PLPath p = PLPath::straight(f, make_vec({-1.0, 1.0}), make_vec({1.0, 1.0}), 9);
  RetractReport rep;
  const PLPath q = radial_retract(p, f, 5.0, 1.0, 0.0, 0.5, &rep);
  EXPECT_EQ(rep.moved, 0);
  EXPECT_EQ(q.vertices(), p.vertices());
}

TEST(RadialRetract, HighVerticesUnchanged) {
  const ScalarField f = corpus_field("linear");
  const PLPath p(f, {make_vec({-1.0, 0.0}), make_vec({10.4, 0.0}), make_vec({1.0, 0.0})});
  const PLPath q = radial_retract(p, f, 10.0, 1.0, 0.0, 1.0);
  EXPECT_EQ(q.vertex(1), p.vertex(1));
}

TEST(RadialRetract, PullsLowVertexToLevelSet) {
  const ScalarField f = corpus_field("linear");
  const Vec beta = make_vec({0.0, 10.5});
  const double level = 0.5, eps_prime = 1.0;
  // Distance to {f >= level} from a 10^4-point cloud around beta.
  Rng rng(2);
  double d_cloud = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 10000; ++k) {
    const Vec y = sample_ball(rng, beta, eps_prime);
    if (f.evaluate(y) >= level) d_cloud = std::min(d_cloud, (y - beta).norm());
  }
  const PLPath p(f, {make_vec({-1.0, 0.0}), beta, make_vec({1.0, 0.0})});
  RetractReport rep;
  const PLPath q = radial_retract(p, f, 10.0, 1.0, 0.0, eps_prime, &rep);
  EXPECT_EQ(rep.moved, 1);
  const double new_norm = q.vertex(1).norm();
  EXPECT_GE(new_norm, 10.0 - eps_prime);
  EXPECT_NEAR(new_norm, beta.norm() - d_cloud, 0.03);
  EXPECT_NEAR(level_set_distance(f, beta, level, 1.0), d_cloud, 0.03);
}

}  // namespace
}  // namespace mpass
