#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pca/lp.hpp"

using namespace pca;

TEST_CASE("simple bounded maximum") {
  // max x + y s.t. x <= 2, y <= 3, x + y <= 4
  LpResult r = lp_maximize({{1, 0}, {0, 1}, {1, 1}}, {2, 3, 4}, {1, 1});
  CHECK(r.value == 4);
  CHECK(r.x[0] + r.x[1] == 4);
}

TEST_CASE("fractional optimum stays exact") {
  // max 3x + 2y s.t. 2x + y <= 3, x + 3y <= 5
  LpResult r = lp_maximize({{2, 1}, {1, 3}}, {3, 5}, {3, 2});
  CHECK(r.value == Rat(26) / 5);
  CHECK(r.x[0] == Rat(4) / 5);
  CHECK(r.x[1] == Rat(7) / 5);
}

TEST_CASE("zero objective and empty feasible direction") {
  LpResult r = lp_maximize({{1}}, {5}, {0});
  CHECK(r.value == 0);
}

TEST_CASE("degenerate constraints terminate under Bland's rule") {
  LpResult r = lp_maximize({{1, 1}, {1, 1}, {1, 0}}, {1, 1, 1}, {1, 1});
  CHECK(r.value == 1);
}

TEST_CASE("unbounded problems throw") {
  CHECK_THROWS(lp_maximize({{0, 1}}, {1}, {1, 0}));
}

TEST_CASE("negative rhs is rejected") {
  CHECK_THROWS(lp_maximize({{1}}, {-1}, {1}));
}
