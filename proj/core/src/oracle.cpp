#include "mpass/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

#include "mpass/errors.hpp"

namespace mpass {

double grid_bottleneck_oracle(const ScalarField& field, const Vec& a, const Vec& b, const Box& box, int resolution) {
  const int dim = field.dim();
  if (dim != 2 && dim != 3) throw Error("grid oracle: dimension must be 2 or 3");
  if (box.dim() != dim || a.size() != dim || b.size() != dim) throw DimensionMismatch("grid oracle: dimension mismatch");
  if (resolution < 2 || resolution > 201) throw Error("grid oracle: resolution must be in [2, 201]");
  if (!box.contains(a) || !box.contains(b)) throw GeometryError("grid oracle: endpoints must lie inside the box");

  const int res = resolution;
  std::array<int, 3> extent{res, res, dim == 3 ? res : 1};
  const std::size_t total = static_cast<std::size_t>(extent[0]) * extent[1] * extent[2];
  const Vec step = (box.upper - box.lower) / (res - 1);

  auto node_point = [&](std::size_t id) {
    Vec x(dim);
    std::size_t rest = id;
    for (int d = 0; d < dim; ++d) {
      const int k = static_cast<int>(rest % extent[d]);
      rest /= extent[d];
      x[d] = box.lower[d] + k * step[d];
    }
    return x;
  };
  auto nearest = [&](const Vec& x) {
    std::size_t id = 0, stride = 1;
    for (int d = 0; d < dim; ++d) {
      const int k = std::clamp(static_cast<int>(std::lround((x[d] - box.lower[d]) / step[d])), 0, res - 1);
      id += stride * static_cast<std::size_t>(k);
      stride *= static_cast<std::size_t>(extent[d]);
    }
    return id;
  };

  std::vector<double> value(total);
  for (std::size_t id = 0; id < total; ++id) value[id] = field.evaluate(node_point(id));

  const std::size_t source = nearest(a);
  const std::size_t target = nearest(b);
  std::vector<double> best(total, std::numeric_limits<double>::infinity());
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  best[source] = value[source];
  queue.emplace(best[source], source);

  while (!queue.empty()) {
    const auto [level, id] = queue.top();
    queue.pop();
    if (level > best[id]) continue;
    if (id == target) return level;
    std::array<int, 3> c{static_cast<int>(id % extent[0]), static_cast<int>((id / extent[0]) % extent[1]),
                         static_cast<int>(id / (static_cast<std::size_t>(extent[0]) * extent[1]))};
    const int dz = dim == 3 ? 1 : 0;
    for (int i = -1; i <= 1; ++i) {
      for (int j = -1; j <= 1; ++j) {
        for (int k = -dz; k <= dz; ++k) {
          if (i == 0 && j == 0 && k == 0) continue;
          const int x = c[0] + i, y = c[1] + j, z = c[2] + k;
          if (x < 0 || y < 0 || z < 0 || x >= extent[0] || y >= extent[1] || z >= extent[2]) continue;
          const std::size_t nb =
              static_cast<std::size_t>(x) + static_cast<std::size_t>(extent[0]) * (y + static_cast<std::size_t>(extent[1]) * z);
          const double cand = std::max(level, value[nb]);
          if (cand < best[nb]) {
            best[nb] = cand;
            queue.emplace(cand, nb);
          }
        }
      }
    }
  }
  return best[target];
}

double grid_bottleneck_oracle(const MountainPassProblem& problem, const Box& box, int resolution) {
  return grid_bottleneck_oracle(problem.field(), problem.x_star(), problem.y_star(), box, resolution);
}

}  // namespace mpass
