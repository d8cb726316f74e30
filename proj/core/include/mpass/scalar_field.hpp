#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mpass/expression.hpp"
#include "mpass/linalg.hpp"

namespace mpass {

/// A locally Lipschitz function R^n -> R with an optional exact gradient
/// and an optional predicate for its nonsmooth locus.
///
/// ScalarField is an immutable value type: copies share the same callables
/// and every member function is safe to call concurrently.
class ScalarField {
 public:
  using EvalFn = std::function<double(const Vec&)>;
  using GradFn = std::function<Vec(const Vec&)>;
  using LocusFn = std::function<bool(const Vec&)>;

  struct Spec {
    std::string name;
    int dim = 0;
    EvalFn eval;
    GradFn grad;                  // empty: central finite differences
    LocusFn nonsmooth_locus;      // empty: smooth everywhere
    std::vector<std::string> warnings;
  };

  explicit ScalarField(Spec spec);

  /// Field backed by a parsed expression; exact gradients come from
  /// forward-mode evaluation of the AST.
  static ScalarField from_expression(const Expression& expr, std::string name = {});

  const std::string& name() const { return impl_->spec.name; }
  int dim() const { return impl_->spec.dim; }
  bool has_exact_gradient() const { return static_cast<bool>(impl_->spec.grad); }
  bool has_nonsmooth_locus() const { return static_cast<bool>(impl_->spec.nonsmooth_locus); }
  const std::vector<std::string>& warnings() const { return impl_->spec.warnings; }
  bool lipschitz_clean() const { return impl_->spec.warnings.empty(); }

  /// f(x). Throws DimensionMismatch, DomainError, or DomainError on a non-finite result.
  double evaluate(const Vec& x) const;

  /// Exact gradient when available, else central differences with step
  /// (1 + |x|) * eps^(1/3). Throws NonsmoothPoint on the declared locus.
  Vec gradient(const Vec& x) const;

  Vec finite_difference_gradient(const Vec& x) const;

  bool is_nonsmooth_at(const Vec& x) const;

  /// Largest difference quotient over 2000 random pairs in the box,
  /// inflated by 1.5.
  double lipschitz_bound_on(const Box& box, std::uint64_t seed = 0, int pairs = 2000) const;

  /// Adds sum_{i > dim()} x_i^2 to lift the field into `target_dim` dimensions.
  ScalarField lifted(int target_dim) const;

 private:
  struct Impl {
    Spec spec;
  };
  void check_dim(const Vec& x) const;

  std::shared_ptr<const Impl> impl_;
};

/// Central-difference step used by ScalarField::finite_difference_gradient.
double finite_difference_step(const Vec& x);

}  // namespace mpass
