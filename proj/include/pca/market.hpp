#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pca/submodular.hpp"

namespace pca {

/// Concave nondecreasing piecewise-linear budget curve through (0,0).
/// Beyond the last breakpoint the final slope extends indefinitely.
class BudgetCurve {
 public:
  BudgetCurve() = default;
  // breakpoints (x, y), x strictly increasing, starting after the implicit (0,0)
  explicit BudgetCurve(std::vector<std::pair<Rat, Rat>> pts);

  Rat eval(const Rat& x) const;
  const std::vector<std::pair<Rat, Rat>>& points() const { return pts_; }

  // max z >= 0 with paid + price*z <= eval(goods + z); infinity if unbounded
  ExtRat max_affordable(const Rat& paid, const Rat& price, const Rat& goods) const;

 private:
  std::vector<std::pair<Rat, Rat>> pts_;  // includes (0,0)
};

struct Buyer {
  int id = 0;
  Rat bid;                        // v'_i, per unit
  std::optional<Rat> valuation;   // v_i, audit only
  ExtRat budget;                  // B_i
  std::optional<BudgetCurve> budget_curve;
  bool is_virtual = false;
  int virtual_seller = -1;  // seller id when is_virtual
};

/// Declarative oracle description, kept alongside the oracle so markets
/// round-trip through files. Exactly the fields of `family` are meaningful.
struct ConstraintSpec {
  std::string family;  // stock | page_based | quality_based | paged_quality | capacity
  Rat stock;
  std::vector<int> page_slots;
  std::vector<Rat> beta;
  std::vector<std::vector<Rat>> page_betas;
  std::vector<Rat> caps;  // aligned with E_j order
};

SubmodularOracle build_constraint(const ConstraintSpec& spec, const GroundSet& ej);

struct Seller {
  int id = 0;
  Rat reserve;  // rho_j, per unit
  SubmodularOracle constraint;  // f_j on E_j
  ConstraintSpec spec;
};

struct EdgeRec {
  int id = 0;
  int buyer = 0;
  int seller = 0;
};

/// Bipartite market. Buyer order is the processing order of the mechanisms;
/// virtual buyers, when present, follow the original buyers in seller order.
class Market {
 public:
  std::vector<Buyer> buyers;
  std::vector<Seller> sellers;
  std::vector<EdgeRec> edges;

  void validate() const;  // throws on structural violations

  const Buyer& buyer(int id) const;
  const Seller& seller(int id) const;
  const EdgeRec& edge(int id) const;

  std::vector<int> buyer_edge_ids(int buyer_id) const;   // E_i
  std::vector<int> seller_edge_ids(int seller_id) const; // E_j
  GroundSet all_edges() const;                           // E, in listed order
  bool has_virtual() const;
};

struct Allocation {
  Vec w;                  // transactions on E
  std::map<int, Rat> p;   // buyer id -> payment
  std::map<int, Rat> r;   // seller id -> revenue
};

// One virtual buyer per seller: infinite budget, bid rho_j, single new edge,
// seller oracle extended so the virtual edge stands for the full stock.
Market add_virtual_buyers(const Market& m);

// g(X) = sum_j f_j(E_X & E_j) on the buyer ground (buyer ids).
SubmodularOracle reduce_to_one_sided(const Market& m);

// Reclassify virtual transactions as unsold stock: r_j -= p_{n+j}, drop
// virtual entries from w and p. Throws if a revenue would go negative.
Allocation strip_virtual(const Allocation& a, const Market& m);

}  // namespace pca
