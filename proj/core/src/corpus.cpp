#include "mpass/corpus.hpp"

#include <cmath>

#include "mpass/errors.hpp"

namespace mpass {
namespace {

bool near_zero(double v) { return std::abs(v) <= 1e-9 * (1.0 + std::abs(v)); }

ScalarField double_well() {
  ScalarField::Spec s;
  s.name = "double_well";
  s.dim = 2;
  s.eval = [](const Vec& x) {
    const double u = x[0] * x[0] - 1.0;
    return u * u + x[1] * x[1];
  };
  s.grad = [](const Vec& x) { return make_vec({4.0 * x[0] * (x[0] * x[0] - 1.0), 2.0 * x[1]}); };
  return ScalarField(std::move(s));
}

ScalarField nonsmooth_well() {
  ScalarField::Spec s;
  s.name = "nonsmooth_well";
  s.dim = 2;
  s.eval = [](const Vec& x) { return std::abs(x[0] * x[0] - 1.0) + x[1] * x[1]; };
  s.grad = [](const Vec& x) {
    const double u = x[0] * x[0] - 1.0;
    const double sign = u > 0.0 ? 1.0 : (u < 0.0 ? -1.0 : 0.0);
    return make_vec({2.0 * sign * x[0], 2.0 * x[1]});
  };
  s.nonsmooth_locus = [](const Vec& x) { return near_zero(x[0] * x[0] - 1.0); };
  return ScalarField(std::move(s));
}

ScalarField broughton() {
  ScalarField::Spec s;
  s.name = "broughton";
  s.dim = 2;
  s.eval = [](const Vec& x) { return x[0] + x[0] * x[0] * x[1]; };
  s.grad = [](const Vec& x) { return make_vec({1.0 + 2.0 * x[0] * x[1], x[0] * x[0]}); };
  return ScalarField(std::move(s));
}

ScalarField cross_square() {
  ScalarField::Spec s;
  s.name = "cross_square";
  s.dim = 2;
  s.eval = [](const Vec& x) { return x[0] * x[0] * x[1] * x[1]; };
  s.grad = [](const Vec& x) { return make_vec({2.0 * x[0] * x[1] * x[1], 2.0 * x[0] * x[0] * x[1]}); };
  return ScalarField(std::move(s));
}

ScalarField linear() {
  ScalarField::Spec s;
  s.name = "linear";
  s.dim = 2;
  s.eval = [](const Vec& x) { return x[0]; };
  s.grad = [](const Vec&) { return make_vec({1.0, 0.0}); };
  return ScalarField(std::move(s));
}

}  // namespace

const std::vector<CorpusInfo>& corpus_catalog() {
  static const std::vector<CorpusInfo> catalog = {
      {"double_well", "(x1^2 - 1)^2 + x2^2", "Critical, c = 1 at (0,0)"},
      {"nonsmooth_well", "abs(x1^2 - 1) + x2^2", "Critical (nonsmooth wells), c = 1 at (0,0)"},
      {"broughton", "x1 + x1^2*x2", "TangencyAtInfinity, c = 0 (escaping)"},
      {"cross_square", "x1^2*x2^2", "sweep: T_inf = {0}, 4 axis branches"},
      {"linear", "x1", "sweep: T_inf empty"},
  };
  return catalog;
}

bool is_corpus_name(std::string_view name) {
  for (const auto& info : corpus_catalog()) {
    if (info.name == name) return true;
  }
  return false;
}

ScalarField corpus_field(std::string_view name, int dim) {
  if (dim < 2) throw DimensionMismatch("corpus fields need dimension >= 2");
  ScalarField base = [&] {
    if (name == "double_well") return double_well();
    if (name == "nonsmooth_well") return nonsmooth_well();
    if (name == "broughton") return broughton();
    if (name == "cross_square") return cross_square();
    if (name == "linear") return linear();
    throw Error("unknown corpus function '" + std::string(name) + "'");
  }();
  return base.lifted(dim);
}

}  // namespace mpass
