#pragma once

#include "mpass/linalg.hpp"
#include "mpass/problem.hpp"
#include "mpass/scalar_field.hpp"

namespace mpass {

/// Min over lattice paths from a to b of the max node value, on a uniform
/// grid over `box` with `resolution` nodes per axis and 8 (2-D) or 26 (3-D)
/// neighbours. Endpoints snap to their nearest nodes.
double grid_bottleneck_oracle(const ScalarField& field, const Vec& a, const Vec& b, const Box& box, int resolution);

double grid_bottleneck_oracle(const MountainPassProblem& problem, const Box& box, int resolution);

}  // namespace mpass
