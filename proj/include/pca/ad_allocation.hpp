#pragma once

#include <map>
#include <vector>

#include "pca/submodular.hpp"

namespace pca {

/// Probability distribution over displayable slot assignments.
/// Page mode: `members` is the set of buyers shown on the page.
/// Quality mode: `slot` maps a buyer (edge id) to a 1-based slot rank.
struct SlotDistribution {
  struct Entry {
    std::vector<int> members;
    std::map<int, int> slot;
    Rat prob;
  };
  std::vector<Entry> support;

  Rat total_prob() const;
  // marginal probability of id appearing (page), or expected quality (quality)
  Rat page_marginal(int id) const;
  Rat quality_marginal(int id, const std::vector<Rat>& beta) const;
};

// Rounds fractional impressions q (sum exactly t, each in [0,1]) into a
// distribution over t-subsets with exact marginals. Pad q with dummies first
// if the raw impressions do not sum to the slot count.
SlotDistribution page_distribution(const std::map<int, Rat>& q, int t);

// Writes w (a point of the quality polymatroid for beta, sorted descending)
// as an exact convex combination of extreme points, each assigning distinct
// top slots to a subset of ids. Leftover mass goes to the empty assignment.
SlotDistribution quality_decompose(const std::map<int, Rat>& w,
                                   const std::vector<Rat>& beta);

// Splits w across per-page polymatroids (all on the same edge ground) so that
// each page's share is feasible and the shares sum to w per edge. Throws if w
// is not in the Minkowski sum of the page polytopes.
std::map<int, std::vector<Rat>> per_page_split(const std::map<int, Rat>& w,
                                               const std::vector<SubmodularOracle>& pages);

}  // namespace pca
