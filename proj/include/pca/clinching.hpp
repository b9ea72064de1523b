#pragma once

#include <random>
#include <string>

#include "pca/poly_flow.hpp"

namespace pca {

/// Oracle of the clinching polytope of one buyer:
/// h(F) = f_{w,d}(E_{N-i} u F) - f_{w,d}(E_{N-i}) on E_i.
struct ClinchPolytope {
  int buyer_id = 0;
  SubmodularOracle h;  // ground: E_i in market edge order
};

enum class RuleKind { midpoint, ordered, random_order };

/// Strategy for picking a maximal (base) vector of the clinching polytope.
/// Spec strings: "midpoint", "ordered:<seller ids>", "random:<seed>".
struct ClinchRule {
  RuleKind kind = RuleKind::midpoint;
  std::vector<int> seller_order;  // ordered: earlier sellers filled first
  uint64_t seed = 0;              // random

  static ClinchRule parse(const std::string& spec);
};

ClinchPolytope build_clinch_polytope(const RemnantContext& ctx, int buyer_id);

// Base point of the clinching polytope chosen per rule. `rng` drives the
// random rule (and sampling for midpoint on grounds larger than 6); it is
// owned by the caller so a whole run stays deterministic under one seed.
Vec max_clinch(const ClinchPolytope& cp, const Market& m, const ClinchRule& rule,
               std::mt19937_64& rng);

// Rule-independent clinch amount f_{w,d}(E) - f_{w,d}(E \ E_i).
Rat clinch_total(const RemnantContext& ctx, int buyer_id);

}  // namespace pca
