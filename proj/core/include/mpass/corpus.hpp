#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mpass/scalar_field.hpp"

namespace mpass {

struct CorpusInfo {
  std::string name;
  std::string formula;
  std::string expected;  // known classification, for `corpus list`
};

/// Built-in test functions:
///   double_well     (x1^2 - 1)^2 + x2^2     critical pass value 1 at the origin
///   nonsmooth_well  |x1^2 - 1| + x2^2       nonsmooth wells, critical pass value 1
///   broughton       x1 + x1^2 x2            no critical points, tangency value 0 at infinity
///   cross_square    x1^2 x2^2               tangency sweep target, T_inf = {0}
///   linear          x1                      T_inf empty
/// `dim` > 2 lifts the field by adding sum_{i>=3} x_i^2.
ScalarField corpus_field(std::string_view name, int dim = 2);

const std::vector<CorpusInfo>& corpus_catalog();

bool is_corpus_name(std::string_view name);

}  // namespace mpass
