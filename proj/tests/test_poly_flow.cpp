#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "markets.hpp"
#include "pca/audit.hpp"
#include "pca/poly_flow.hpp"

using namespace pca;
using pca::testing::two_by_two;

namespace {

// remnant context at the first clinch of the worked example: no transactions,
// virtual demands exhausted, real demands 12 and 11
RemnantContext l5_context() {
  static Market pre = add_virtual_buyers(two_by_two());
  std::map<int, ExtRat> d;
  for (auto& b : pre.buyers)
    d[b.id] = b.is_virtual ? ExtRat(Rat(0)) : ExtRat(Rat(b.id == 1 ? 12 : 11));
  return RemnantContext(pre, Vec(), d);
}

}  // namespace

TEST_CASE("f_wd at the first clinch") {
  RemnantContext ctx = l5_context();
  Mask full = ctx.edge_ground().full_mask();
  CHECK(ctx.f_wd(Mask(0)) == 0);
  // buyer 1's total clinch: f_wd(E) - f_wd(E \ E_1) = 15 - 11 = 4
  Mask e1 = ctx.buyer_edges(1);
  CHECK(ctx.f_wd(full) - ctx.f_wd(full & ~e1) == 4);
  Mask e2 = ctx.buyer_edges(2);
  CHECK(ctx.f_wd(full) - ctx.f_wd(full & ~e2) == 3);
}

TEST_CASE("f_wd with infinite demands reduces to f_w") {
  Market pre = add_virtual_buyers(two_by_two());
  std::map<int, ExtRat> d;
  for (auto& b : pre.buyers) d[b.id] = ExtRat::infinity();
  RemnantContext ctx(pre, Vec(), d);
  Mask full = ctx.edge_ground().full_mask();
  for (Mask F = 0; F <= full; ++F) CHECK(ctx.f_wd(F) == ctx.f_w().eval_mask(F));
}

TEST_CASE("f_wd matches the LP brute force on random contexts") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    Market m = gen_random_market(rng, 3, 2);
    Market pre = add_virtual_buyers(m);
    if (pre.edges.size() > 8) continue;
    std::map<int, ExtRat> d;
    Vec w;
    for (auto& b : pre.buyers) {
      switch (rng() % 3) {
        case 0: d[b.id] = ExtRat(Rat(0)); break;
        case 1: d[b.id] = ExtRat(Rat(static_cast<int>(rng() % 9))); break;
        default: d[b.id] = ExtRat::infinity();
      }
    }
    RemnantContext ctx(pre, w, d);
    Mask full = ctx.edge_ground().full_mask();
    for (Mask F = 0; F <= full; ++F) CHECK(ctx.f_wd(F) == ctx.f_wd_bruteforce(F));
  }
}

TEST_CASE("g_wd equals f_wd on buyer-induced edge sets") {
  Market pre = add_virtual_buyers(two_by_two());
  SubmodularOracle g = reduce_to_one_sided(pre);
  std::map<int, ExtRat> d;
  for (auto& b : pre.buyers)
    d[b.id] = b.is_virtual ? ExtRat(Rat(0)) : ExtRat(Rat(b.id == 1 ? 12 : 11));
  RemnantContext ctx(pre, Vec(), d);
  std::vector<int> ids = g.ground().elems();
  for (Mask X = 0; X < (Mask(1) << ids.size()); ++X) {
    std::vector<int> sel;
    for (size_t k = 0; k < ids.size(); ++k)
      if (X & (Mask(1) << k)) sel.push_back(ids[k]);
    CHECK(g_wd(g, Vec(), d, sel) == ctx.f_wd(ctx.edges_of_buyers(sel)));
  }
}

TEST_CASE("clinching oracle curvature on the edge ground") {
  // for fixed X subseteq N-i, G -> f_wd(E_X u G) - f_wd(E_X) is monotone submodular
  RemnantContext ctx = l5_context();
  Mask e1 = ctx.buyer_edges(1);
  GroundSet g1(ctx.edge_ground().elems_of(e1));
  std::vector<int> others;
  for (auto& b : ctx.market().buyers)
    if (b.id != 1) others.push_back(b.id);
  for (Mask X = 0; X < (Mask(1) << others.size()); ++X) {
    std::vector<int> sel;
    for (size_t k = 0; k < others.size(); ++k)
      if (X & (Mask(1) << k)) sel.push_back(others[k]);
    Mask ex = ctx.edges_of_buyers(sel);
    Rat base = ctx.f_wd(ex);
    SubmodularOracle h(g1, [&, ex, base](Mask F) {
      Mask lifted = ctx.edge_ground().mask_of(g1.elems_of(F));
      return ctx.f_wd(ex | lifted) - base;
    });
    CHECK(verify_submodular(h).all());
  }
}

TEST_CASE("max flow agrees with the enumerated min cut") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    // source -> 1..k -> sink with random capacities and an out-polymatroid
    // at the source, in-polymatroid at the sink
    int k = 2 + static_cast<int>(rng() % 3);
    PolyNetwork net;
    net.num_nodes = k + 2;
    net.source = 0;
    net.sink = k + 1;
    std::vector<int> src_edges, snk_edges;
    int id = 0;
    for (int v = 1; v <= k; ++v) {
      net.edges.push_back({++id, 0, v, ExtRat(Rat(static_cast<int>(rng() % 5) + 1))});
      src_edges.push_back(id);
      net.edges.push_back({++id, v, k + 1, ExtRat(Rat(static_cast<int>(rng() % 5) + 1))});
      snk_edges.push_back(id);
    }
    if (rng() % 2)
      net.out_poly.emplace(0, stock_oracle(GroundSet(src_edges),
                                           Rat(static_cast<int>(rng() % 7) + 1)));
    if (rng() % 2)
      net.in_poly.emplace(k + 1, stock_oracle(GroundSet(snk_edges),
                                              Rat(static_cast<int>(rng() % 7) + 1)));
    FlowResult f = max_flow(net);
    ExtRat cut = min_cut_enumerate(net);
    REQUIRE(cut.is_finite());
    CHECK(f.value == cut.value());
  }
}

TEST_CASE("transaction recovery hits exact row and column structure") {
  Market pre = add_virtual_buyers(two_by_two());
  std::map<int, Rat> y{{1, 6}, {2, 9}};
  for (auto& b : pre.buyers)
    if (b.is_virtual) y[b.id] = 0;
  Vec w = recover_transactions(pre, y);
  CHECK(w[1] + w[2] == 6);
  CHECK(w[3] + w[4] == 9);
  for (auto& s : pre.sellers) {
    Vec wj;
    for (int e : pre.seller_edge_ids(s.id)) wj.set(e, w[e]);
    CHECK(member(s.constraint, wj));
  }

  std::map<int, Rat> bad{{1, 100}, {2, 0}};
  for (auto& b : pre.buyers)
    if (b.is_virtual) bad[b.id] = 0;
  CHECK_THROWS(recover_transactions(pre, bad));
}

TEST_CASE("single-seller recovery is forced") {
  Market m;
  Buyer b;
  b.id = 1;
  b.bid = 1;
  b.budget = ExtRat(Rat(5));
  m.buyers.push_back(b);
  Seller s;
  s.id = 2;
  s.reserve = 0;
  s.spec.family = "stock";
  s.spec.stock = 4;
  m.sellers.push_back(s);
  m.edges = {{7, 1, 2}};
  m.sellers[0].constraint = build_constraint(m.sellers[0].spec, GroundSet({7}));
  Vec w = recover_transactions(m, {{1, 3}});
  CHECK(w[7] == 3);
}
