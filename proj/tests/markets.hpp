#pragma once

#include "pca/market.hpp"

namespace pca::testing {

// Worked example: B=(12,11), bids (3,3), reserves (1,1), stocks (7,8),
// complete bipartite. Edge ids: 1=(1,101) 2=(1,102) 3=(2,101) 4=(2,102).
inline Market two_by_two() {
  Market m;
  for (int i = 1; i <= 2; ++i) {
    Buyer b;
    b.id = i;
    b.bid = 3;
    b.valuation = 3;
    b.budget = ExtRat(Rat(i == 1 ? 12 : 11));
    m.buyers.push_back(b);
  }
  for (int j = 0; j < 2; ++j) {
    Seller s;
    s.id = 101 + j;
    s.reserve = 1;
    s.spec.family = "stock";
    s.spec.stock = j == 0 ? 7 : 8;
    m.sellers.push_back(s);
  }
  int e = 0;
  for (int i = 1; i <= 2; ++i)
    for (int j = 0; j < 2; ++j) m.edges.push_back({++e, i, 101 + j});
  for (auto& s : m.sellers)
    s.constraint = build_constraint(s.spec, GroundSet(m.seller_edge_ids(s.id)));
  m.validate();
  return m;
}

// Figure-of-merit instance for revenue (non-)monotonicity: stocks (1,1),
// reserves (0,0), buyer 1 linked to both sellers (budget 1, bid 2), buyer 2
// linked only to seller 2 (no budget limit, bid 1).
inline Market two_sellers_chain() {
  Market m;
  Buyer b1;
  b1.id = 1;
  b1.bid = 2;
  b1.valuation = 2;
  b1.budget = ExtRat(Rat(1));
  Buyer b2;
  b2.id = 2;
  b2.bid = 1;
  b2.valuation = 1;
  b2.budget = ExtRat::infinity();
  m.buyers = {b1, b2};
  for (int j = 0; j < 2; ++j) {
    Seller s;
    s.id = 101 + j;
    s.reserve = 0;
    s.spec.family = "stock";
    s.spec.stock = 1;
    m.sellers.push_back(s);
  }
  m.edges = {{1, 1, 101}, {2, 1, 102}, {3, 2, 102}};
  for (auto& s : m.sellers)
    s.constraint = build_constraint(s.spec, GroundSet(m.seller_edge_ids(s.id)));
  m.validate();
  return m;
}

inline Rat buyer_goods(const Allocation& a, const Market& m, int buyer_id) {
  Rat s = 0;
  for (int e : m.buyer_edge_ids(buyer_id)) s += a.w[e];
  return s;
}

inline Rat seller_sold(const Allocation& a, const Market& m, int seller_id) {
  Rat s = 0;
  for (int e : m.seller_edge_ids(seller_id)) s += a.w[e];
  return s;
}

}  // namespace pca::testing
