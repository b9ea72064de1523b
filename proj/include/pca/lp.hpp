#pragma once

#include <vector>

#include "pca/rational.hpp"

namespace pca {

struct LpResult {
  Rat value;
  std::vector<Rat> x;
};

// max c.x subject to A x <= b, x >= 0, in exact rationals.
// Requires b >= 0 (slack basis is feasible), which all callers satisfy:
// every constraint is a capacity or a conservation equality split into
// two <= 0 rows. Bland's rule, so termination is guaranteed and results
// are deterministic. Throws on unbounded problems.
LpResult lp_maximize(const std::vector<std::vector<Rat>>& A,
                     const std::vector<Rat>& b, const std::vector<Rat>& c);

}  // namespace pca
