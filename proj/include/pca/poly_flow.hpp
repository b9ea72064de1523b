#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <vector>

#include "pca/market.hpp"

namespace pca {

/// Immutable snapshot (market, transactions w, demands d) giving access to the
/// remnant-supply function f_{w,d}. Values are memoized per context.
class RemnantContext {
 public:
  RemnantContext(const Market& m, Vec w, std::map<int, ExtRat> d);

  const Market& market() const { return *market_; }
  const Vec& w() const { return w_; }
  const std::map<int, ExtRat>& d() const { return d_; }
  const GroundSet& edge_ground() const { return ground_; }

  // f_w = direct sum of per-seller contractions, on the full edge ground.
  const SubmodularOracle& f_w() const { return fw_; }

  // min over X of buyers touching F of f_w(E_X & F) + d(rest)
  Rat f_wd(Mask F) const;
  Rat f_wd(const std::vector<int>& edge_ids) const;

  // same value via exact LP over the explicit inequality description of
  // P_{w,d}; differential oracle, |E| <= 12
  Rat f_wd_bruteforce(Mask F) const;

  Mask edges_of_buyers(const std::vector<int>& buyer_ids) const;  // E_X
  Mask buyer_edges(int buyer_id) const;                           // E_i

 private:
  std::shared_ptr<const Market> market_;
  Vec w_;
  std::map<int, ExtRat> d_;
  GroundSet ground_;
  SubmodularOracle fw_;
  std::vector<int> buyer_ids_;            // market buyer order
  std::vector<Mask> buyer_edge_masks_;    // aligned with buyer_ids_
  struct Cache {
    std::mutex mu;
    std::map<Mask, Rat> memo;
  };
  std::shared_ptr<Cache> cache_;  // shared across copies of the context
};

// One-sided analogue: min over Z of contract(g, y)(Z) + d(X \ Z),
// with X, Z subsets of the buyer ground of g.
Rat g_wd(const SubmodularOracle& g, const Vec& y, const std::map<int, ExtRat>& d,
         const std::vector<int>& X);

/// Directed network with per-edge capacities and optional per-node
/// polymatroids on the entering/leaving edge sets.
struct PolyNetwork {
  struct NetEdge {
    int id;
    int from;
    int to;
    ExtRat cap;
  };
  int num_nodes = 0;
  int source = 0;
  int sink = 0;
  std::vector<NetEdge> edges;
  std::map<int, SubmodularOracle> out_poly;  // node -> oracle on leaving edge ids
  std::map<int, SubmodularOracle> in_poly;   // node -> oracle on entering edge ids
};

struct FlowResult {
  Rat value;
  Vec flow;  // edge id -> amount
};

// Exact max flow via LP over the explicit constraint system.
FlowResult max_flow(const PolyNetwork& net);

// Enumerated min over U and bipartitions {A,B} of the cut expression;
// test oracle for max_flow.
ExtRat min_cut_enumerate(const PolyNetwork& net);

// w on E with w(E_i) = y_i and w|_{E_j} in P_j; throws if y is infeasible.
Vec recover_transactions(const Market& m, const std::map<int, Rat>& y);

}  // namespace pca
