#include "mpass/scalar_field.hpp"

#include <cmath>
#include <cstring>
#include <limits>

#include "mpass/errors.hpp"

namespace mpass {

std::uint64_t point_seed(std::uint64_t base, const Vec& x) {
  std::uint64_t h = mix_seed(base, static_cast<std::uint64_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    double v = x[i];
    if (v == 0.0) v = 0.0;  // fold -0.0 into +0.0
    std::uint64_t bits;
    static_assert(sizeof bits == sizeof v);
    std::memcpy(&bits, &v, sizeof bits);
    h = mix_seed(h, bits);
  }
  return h;
}

Vec sample_ball(Rng& rng, const Vec& center, double radius) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit;
  const auto n = center.size();
  Vec dir(n);
  double norm = 0.0;
  do {
    for (Eigen::Index i = 0; i < n; ++i) dir[i] = normal(rng);
    norm = dir.norm();
  } while (norm == 0.0);
  const double r = radius * std::pow(unit(rng), 1.0 / static_cast<double>(n));
  return center + dir * (r / norm);
}

Vec sample_sphere(Rng& rng, int dim, double radius) {
  std::normal_distribution<double> normal;
  Vec dir(dim);
  double norm = 0.0;
  do {
    for (int i = 0; i < dim; ++i) dir[i] = normal(rng);
    norm = dir.norm();
  } while (norm == 0.0);
  return dir * (radius / norm);
}

Vec sample_box(Rng& rng, const Box& box) {
  std::uniform_real_distribution<double> unit;
  Vec x(box.dim());
  for (int i = 0; i < box.dim(); ++i) x[i] = box.lower[i] + (box.upper[i] - box.lower[i]) * unit(rng);
  return x;
}

double finite_difference_step(const Vec& x) {
  return (1.0 + x.norm()) * std::cbrt(std::numeric_limits<double>::epsilon());
}

ScalarField::ScalarField(Spec spec) {
  if (spec.dim < 1) throw Error("ScalarField: dimension must be positive");
  if (!spec.eval) throw Error("ScalarField: missing evaluation function");
  impl_ = std::make_shared<const Impl>(Impl{std::move(spec)});
}

ScalarField ScalarField::from_expression(const Expression& expr, std::string name) {
  Spec spec;
  spec.name = name.empty() ? expr.to_string() : std::move(name);
  spec.dim = expr.dim();
  spec.eval = [expr](const Vec& x) { return expr.evaluate(x); };
  spec.grad = [expr](const Vec& x) {
    Vec g;
    expr.evaluate_with_gradient(x, g);
    return g;
  };
  spec.nonsmooth_locus = [expr](const Vec& x) { return expr.near_kink(x); };
  spec.warnings = expr.warnings();
  return ScalarField(std::move(spec));
}

void ScalarField::check_dim(const Vec& x) const {
  if (x.size() != dim()) {
    throw DimensionMismatch("field '" + name() + "' has dimension " + std::to_string(dim()) + ", got a point of length " +
                            std::to_string(x.size()));
  }
}

double ScalarField::evaluate(const Vec& x) const {
  check_dim(x);
  const double value = impl_->spec.eval(x);
  if (!std::isfinite(value)) throw DomainError("field '" + name() + "' is not finite at the query point");
  return value;
}

bool ScalarField::is_nonsmooth_at(const Vec& x) const {
  check_dim(x);
  return impl_->spec.nonsmooth_locus && impl_->spec.nonsmooth_locus(x);
}

Vec ScalarField::gradient(const Vec& x) const {
  if (is_nonsmooth_at(x)) throw NonsmoothPoint("field '" + name() + "' is not differentiable at the query point");
  if (impl_->spec.grad) return impl_->spec.grad(x);
  return finite_difference_gradient(x);
}

Vec ScalarField::finite_difference_gradient(const Vec& x) const {
  check_dim(x);
  const double h = finite_difference_step(x);
  Vec g(dim());
  Vec probe = x;
  for (int i = 0; i < dim(); ++i) {
    probe[i] = x[i] + h;
    const double up = impl_->spec.eval(probe);
    probe[i] = x[i] - h;
    const double down = impl_->spec.eval(probe);
    probe[i] = x[i];
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

double ScalarField::lipschitz_bound_on(const Box& box, std::uint64_t seed, int pairs) const {
  if (box.dim() != dim()) throw DimensionMismatch("lipschitz_bound_on: box dimension mismatch");
  Rng rng(mix_seed(seed, 0x4c495053ULL));
  double best = 0.0;
  for (int k = 0; k < pairs; ++k) {
    const Vec a = sample_box(rng, box);
    const Vec b = sample_box(rng, box);
    const double dist = (a - b).norm();
    if (dist == 0.0) continue;
    best = std::max(best, std::abs(evaluate(a) - evaluate(b)) / dist);
  }
  return 1.5 * best;
}

ScalarField ScalarField::lifted(int target_dim) const {
  const int base_dim = dim();
  if (target_dim < base_dim) throw DimensionMismatch("lifted: target dimension below field dimension");
  if (target_dim == base_dim) return *this;
  const ScalarField base = *this;
  Spec spec;
  spec.name = name() + "_" + std::to_string(target_dim) + "d";
  spec.dim = target_dim;
  spec.eval = [base, base_dim](const Vec& x) {
    return base.evaluate(x.head(base_dim)) + x.tail(x.size() - base_dim).squaredNorm();
  };
  if (has_exact_gradient()) {
    spec.grad = [base, base_dim](const Vec& x) {
      Vec g(x.size());
      g.head(base_dim) = base.gradient(x.head(base_dim));
      g.tail(x.size() - base_dim) = 2.0 * x.tail(x.size() - base_dim);
      return g;
    };
  }
  if (has_nonsmooth_locus()) {
    spec.nonsmooth_locus = [base, base_dim](const Vec& x) { return base.is_nonsmooth_at(x.head(base_dim)); };
  }
  spec.warnings = warnings();
  return ScalarField(std::move(spec));
}

}  // namespace mpass
