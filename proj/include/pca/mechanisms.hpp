#pragma once

#include "pca/clinching.hpp"

namespace pca {

/// One clinch event: buyer `buyer_id` took `xi` (on E_i) at clock `clock`
/// during iteration `iter`. Seller j's revenue from the event is clock*xi_ij.
struct ClinchRecord {
  int iter = 0;
  int buyer_id = 0;
  Rat clock;
  Vec xi;
};

/// Per-iteration record, sufficient to reprint the worked-example table and
/// to replay the run: clock/demand snapshots at the start of the iteration,
/// all clinches, per-seller revenue increments, stocks after the iteration.
struct IterRecord {
  int iter = 0;
  int bumped_buyer = 0;  // clock raised at the end of this iteration
  std::map<int, Rat> clocks;
  std::map<int, ExtRat> demands;        // at iteration start
  std::map<int, ExtRat> demands_after;  // after all clinches of the iteration
  std::vector<ClinchRecord> clinches;
  std::map<int, Rat> dr;          // seller id -> revenue increment
  std::map<int, Rat> stocks_end;  // seller id -> f_j(E_j) - w(E_j)
};

struct Trace {
  std::vector<IterRecord> iters;
};

// Demand at clock c given payment so far and goods so far. Hard budgets use
// (B - paid)/c; a budget curve solves max z with paid + c z <= phi(goods+z).
// Zero once c >= bid; infinite at c = 0 (while c < bid).
ExtRat demand(const Buyer& b, const Rat& c, const Rat& paid, const Rat& goods);

// Throws unless every bid (including virtual bids) is a multiple of eps.
void check_epsilon(const Market& m, const Rat& eps);

struct Algo1Result {
  std::map<int, Rat> y;   // buyer id -> goods
  std::map<int, Rat> pi;  // buyer id -> payment
  // clinch totals per iteration, aligned with iters of the one-sided run
  std::vector<std::map<int, Rat>> zeta;
  std::vector<int> bumped;          // buyer whose clock rose per iteration
};

// One-sided clinching auction on the reduced oracle g (ground: buyer ids).
Algo1Result run_algorithm1(const SubmodularOracle& g, const std::vector<Buyer>& buyers,
                           const Rat& eps);

struct Algo2Result {
  Vec w;
  std::map<int, Rat> p;
  std::map<int, Rat> r;
  Trace trace;
};

// Two-sided clinching auction on a preprocessed market.
// `observer`, when set, sees every clinch polytope before the clinch (used by
// property tests); it must not mutate anything.
using ClinchObserver =
    std::function<void(const RemnantContext&, const ClinchPolytope&, const Vec& xi)>;
Algo2Result run_algorithm2(const Market& m, const Rat& eps, const ClinchRule& rule,
                           const ClinchObserver& observer = nullptr);

struct RevenuePolicy {
  enum Kind { from_mechanism2, proportional, explicit_split } kind = from_mechanism2;
  std::map<int, Rat> explicit_r;  // seller id -> revenue, for explicit_split

  static RevenuePolicy parse(const std::string& spec);
};

struct MechanismResult {
  Market preprocessed;       // market with virtual buyers
  Allocation pre_strip;      // allocation including virtual buyers
  Allocation alloc;          // final allocation (virtual stripped)
  Trace trace;               // two-sided trace (mechanism 2 only)
  std::map<int, Rat> unsold; // seller id -> goods kept (virtual purchases)
};

MechanismResult mechanism1(const Market& m, const Rat& eps, const ClinchRule& rule,
                           const RevenuePolicy& policy);
MechanismResult mechanism2(const Market& m, const Rat& eps, const ClinchRule& rule,
                           const ClinchObserver& observer = nullptr);

}  // namespace pca
