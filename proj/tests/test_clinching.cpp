#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "markets.hpp"
#include "pca/clinching.hpp"

using namespace pca;
using pca::testing::two_by_two;

namespace {

RemnantContext l5_context() {
  static Market pre = add_virtual_buyers(two_by_two());
  std::map<int, ExtRat> d;
  for (auto& b : pre.buyers)
    d[b.id] = b.is_virtual ? ExtRat(Rat(0)) : ExtRat(Rat(b.id == 1 ? 12 : 11));
  return RemnantContext(pre, Vec(), d);
}

}  // namespace

TEST_CASE("rule parsing") {
  CHECK(ClinchRule::parse("midpoint").kind == RuleKind::midpoint);
  ClinchRule o = ClinchRule::parse("ordered:102,101");
  CHECK(o.kind == RuleKind::ordered);
  CHECK(o.seller_order == std::vector<int>{102, 101});
  ClinchRule r = ClinchRule::parse("random:99");
  CHECK(r.kind == RuleKind::random_order);
  CHECK(r.seed == 99);
  CHECK_THROWS(ClinchRule::parse("ordered:"));
  CHECK_THROWS(ClinchRule::parse("nonsense"));
}

TEST_CASE("first-clinch polytope of the worked example") {
  RemnantContext ctx = l5_context();
  ClinchPolytope cp = build_clinch_polytope(ctx, 1);
  // total clinch 4, per-seller caps 7 and 8 minus the other buyer's claim
  CHECK(cp.h.eval(ctx.market().buyer_edge_ids(1)) == 4);
  CHECK(verify_submodular(cp.h).all());
  CHECK(clinch_total(ctx, 1) == 4);
  CHECK(clinch_total(ctx, 2) == 3);

  std::mt19937_64 rng(1);
  Vec mid = max_clinch(cp, ctx.market(), ClinchRule::parse("midpoint"), rng);
  CHECK(mid[1] == 2);  // edge 1 = (buyer 1, seller 101)
  CHECK(mid[2] == 2);
}

TEST_CASE("zero demand means no clinch") {
  Market pre = add_virtual_buyers(two_by_two());
  std::map<int, ExtRat> d;
  for (auto& b : pre.buyers) d[b.id] = ExtRat(Rat(0));
  d[2] = ExtRat(Rat(11));
  RemnantContext ctx(pre, Vec(), d);
  ClinchPolytope cp = build_clinch_polytope(ctx, 1);
  Mask full = cp.h.ground().full_mask();
  for (Mask F = 0; F <= full; ++F) CHECK(cp.h.eval_mask(F) == 0);
}

TEST_CASE("every rule clinches the same total") {
  RemnantContext ctx = l5_context();
  for (int buyer : {1, 2}) {
    ClinchPolytope cp = build_clinch_polytope(ctx, buyer);
    Rat total = clinch_total(ctx, buyer);
    for (std::string spec :
         {"midpoint", "ordered:101,102", "ordered:102,101", "random:7", "random:8"}) {
      std::mt19937_64 rng(3);
      Vec xi = max_clinch(cp, ctx.market(), ClinchRule::parse(spec), rng);
      CHECK(xi.sum() == total);
      CHECK(member(cp.h, xi));
    }
  }
}

TEST_CASE("ordered rule saturates the listed seller first") {
  RemnantContext ctx = l5_context();
  ClinchPolytope cp = build_clinch_polytope(ctx, 1);
  std::mt19937_64 rng(3);
  Vec first101 = max_clinch(cp, ctx.market(), ClinchRule::parse("ordered:101,102"), rng);
  CHECK(first101[1] == 4);  // all four units from seller 101
  CHECK(first101[2] == 0);
  Vec first102 = max_clinch(cp, ctx.market(), ClinchRule::parse("ordered:102,101"), rng);
  CHECK(first102[1] == 0);
  CHECK(first102[2] == 4);
}

TEST_CASE("clinching leaves the remnant polytope for others unchanged") {
  // P^i_{w,d}(xi) = P^i_{w,d}(0): the post-clinch oracle over Y <= N-i matches
  RemnantContext ctx = l5_context();
  ClinchPolytope cp = build_clinch_polytope(ctx, 1);
  std::mt19937_64 rng(9);
  Vec xi = max_clinch(cp, ctx.market(), ClinchRule::parse("midpoint"), rng);

  const Market& pre = ctx.market();
  Vec w2 = ctx.w() + xi;
  std::map<int, ExtRat> d2 = ctx.d();
  d2[1] = d2.at(1) - ExtRat(xi.sum());
  RemnantContext after(pre, w2, d2);

  std::vector<int> others;
  for (auto& b : pre.buyers)
    if (b.id != 1) others.push_back(b.id);
  for (Mask Y = 0; Y < (Mask(1) << others.size()); ++Y) {
    std::vector<int> sel;
    for (size_t k = 0; k < others.size(); ++k)
      if (Y & (Mask(1) << k)) sel.push_back(others[k]);
    Mask ey = ctx.edges_of_buyers(sel);
    CHECK(ctx.f_wd(ey) == after.f_wd(ey));
  }
}
