#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "markets.hpp"
#include "pca/market_io.hpp"

using namespace pca;
using pca::testing::two_by_two;

TEST_CASE("budget curve validation and evaluation") {
  BudgetCurve c({{2, 6}, {5, 9}});
  CHECK(c.eval(0) == 0);
  CHECK(c.eval(1) == 3);
  CHECK(c.eval(2) == 6);
  CHECK(c.eval(4) == 8);
  CHECK(c.eval(7) == 11);  // final slope 1 extends
  CHECK_THROWS(BudgetCurve({{2, 3}, {2, 4}}));  // x not increasing
  CHECK_THROWS(BudgetCurve({{1, 1}, {2, 4}}));  // convex kink
  CHECK_THROWS(BudgetCurve({{1, 2}, {2, 1}}));  // decreasing
}

TEST_CASE("budget curve max_affordable") {
  BudgetCurve c({{2, 6}, {5, 9}});
  // paid 0, price 2, from 0 goods: 2z <= c(z): z=3 gives 6 <= c(3)=7, z=7/? ...
  ExtRat z = c.max_affordable(0, 2, 0);
  REQUIRE(z.is_finite());
  CHECK(c.eval(z.value()) == 2 * z.value());
  CHECK(c.max_affordable(0, Rat(1) / 2, 0).is_infinite());  // price below final slope
  CHECK(c.max_affordable(0, 0, 0).is_infinite());
  CHECK(c.max_affordable(9, 5, 5) == ExtRat(Rat(0)));  // fully spent at 5 goods
}

TEST_CASE("market validation") {
  Market m = two_by_two();
  CHECK_NOTHROW(m.validate());
  Market dup = two_by_two();
  dup.edges.push_back({9, 1, 101});
  CHECK_THROWS(dup.validate());  // duplicate (buyer,seller) pair
  CHECK(m.buyer_edge_ids(1) == std::vector<int>{1, 2});
  CHECK(m.seller_edge_ids(102) == std::vector<int>{2, 4});
}

TEST_CASE("virtual buyers extend the market") {
  Market m = two_by_two();
  Market pre = add_virtual_buyers(m);
  CHECK(pre.buyers.size() == 4);
  CHECK(pre.edges.size() == 6);
  CHECK(pre.has_virtual());
  CHECK_THROWS(add_virtual_buyers(pre));
  for (auto& b : pre.buyers) {
    if (!b.is_virtual) continue;
    CHECK(b.budget.is_infinite());
    CHECK(b.bid == pre.seller(b.virtual_seller).reserve);
    // the virtual edge alone stands for the full stock
    std::vector<int> ve = pre.buyer_edge_ids(b.id);
    REQUIRE(ve.size() == 1);
    const Seller& s = pre.seller(b.virtual_seller);
    CHECK(s.constraint.eval(ve) == s.constraint.eval(pre.seller_edge_ids(s.id)));
    CHECK(verify_submodular(s.constraint).all());
  }
  Market empty;
  CHECK(add_virtual_buyers(empty).buyers.empty());
}

TEST_CASE("one-sided reduction") {
  Market pre = add_virtual_buyers(two_by_two());
  SubmodularOracle g = reduce_to_one_sided(pre);
  CHECK(g.eval({}) == 0);
  CHECK(g.eval({1}) == 15);  // buyer 1 reaches both sellers
  std::vector<int> all = g.ground().elems();
  CHECK(g.eval(all) == 15);
  CHECK(verify_submodular(g).all());
}

TEST_CASE("strip_virtual reclassifies unsold goods and preserves balance") {
  Market pre = add_virtual_buyers(two_by_two());
  Allocation a;
  int vb = -1, ve = -1;
  for (auto& b : pre.buyers)
    if (b.is_virtual && b.virtual_seller == 101) {
      vb = b.id;
      ve = pre.buyer_edge_ids(b.id)[0];
    }
  a.w.set(1, 3);
  a.w.set(ve, 4);
  a.p[1] = 6;
  a.p[vb] = 2;
  a.r[101] = 8;
  a.r[102] = 0;
  Allocation out = strip_virtual(a, pre);
  CHECK(out.r.at(101) == 6);
  CHECK(out.p.count(vb) == 0);
  CHECK(out.w[ve] == 0);
  CHECK(out.w[1] == 3);
  // sum(p) - sum(r) is invariant
  Rat before = a.p.at(1) + a.p.at(vb) - a.r.at(101) - a.r.at(102);
  Rat after = out.p.at(1) - out.r.at(101) - out.r.at(102);
  CHECK(before == after);

  Allocation bad = a;
  bad.p[vb] = 100;
  CHECK_THROWS(strip_virtual(bad, pre));
}

TEST_CASE("market files round-trip") {
  Market m = two_by_two();
  std::string text = market_to_json(m);
  Market back = parse_market(text);
  CHECK(market_to_json(back) == text);
  CHECK(back.buyers.size() == 2);
  CHECK(back.sellers.size() == 2);
  CHECK(back.edges.size() == 4);
  CHECK(back.buyer(1).budget == ExtRat(Rat(12)));
  CHECK(back.seller(102).constraint.eval(back.seller_edge_ids(102)) == 8);
}

TEST_CASE("schema errors carry field context") {
  CHECK_THROWS_WITH_AS(parse_market("{"), doctest::Contains("market file"),
                       std::invalid_argument);
  // duplicate edge
  std::string dup = R"({"buyers":[{"id":1,"bid":1,"budget":1}],
    "sellers":[{"id":2,"reserve":0,"constraint":{"family":"stock","params":{"stock":1}}}],
    "edges":[{"id":5,"buyer":1,"seller":2},{"id":5,"buyer":1,"seller":2}]})";
  CHECK_THROWS(parse_market(dup));
  // non-concave budget curve
  std::string curve = R"({"buyers":[{"id":1,"bid":1,"budget_curve":[[1,1],[2,4]]}],
    "sellers":[],"edges":[]})";
  CHECK_THROWS_WITH_AS(parse_market(curve), doctest::Contains("budget_curve"),
                       std::invalid_argument);
}

TEST_CASE("allocation files round-trip") {
  Market m = two_by_two();
  Allocation a;
  a.w.set(1, Rat(7) / 8);
  a.p[1] = 8;
  a.r[101] = Rat(35) / 4;
  std::string path = "alloc_roundtrip_test.json";
  save_allocation(a, m, path);
  Allocation back = load_allocation(path, m);
  CHECK(back.w[1] == Rat(7) / 8);
  CHECK(back.p.at(1) == 8);
  CHECK(back.r.at(101) == Rat(35) / 4);
  std::remove(path.c_str());
}
