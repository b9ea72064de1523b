#include "pca/ad_allocation.hpp"

#include <algorithm>
#include <stdexcept>

#include "pca/lp.hpp"

namespace pca {

Rat SlotDistribution::total_prob() const {
  Rat s = 0;
  for (auto& e : support) s += e.prob;
  return s;
}

Rat SlotDistribution::page_marginal(int id) const {
  Rat s = 0;
  for (auto& e : support)
    if (std::find(e.members.begin(), e.members.end(), id) != e.members.end())
      s += e.prob;
  return s;
}

Rat SlotDistribution::quality_marginal(int id, const std::vector<Rat>& beta) const {
  Rat s = 0;
  for (auto& e : support) {
    auto it = e.slot.find(id);
    if (it != e.slot.end()) s += e.prob * beta[static_cast<size_t>(it->second - 1)];
  }
  return s;
}

SlotDistribution page_distribution(const std::map<int, Rat>& q, int t) {
  if (t < 0) throw std::domain_error("page_distribution: negative slot count");
  Rat total = 0;
  for (auto& [i, v] : q) {
    if (v < 0 || v > 1) throw std::domain_error("page_distribution: q out of [0,1]");
    total += v;
  }
  if (total != t) throw std::domain_error("page_distribution: sum(q) != t");

  std::vector<std::pair<int, Rat>> rem(q.begin(), q.end());
  SlotDistribution out;
  Rat mu = 1;  // probability mass still to place
  size_t guard = rem.size() + static_cast<size_t>(t) + 2;
  while (mu > 0) {
    if (guard-- == 0) throw std::logic_error("page_distribution: did not terminate");
    std::sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) {
      return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    // X = the t largest remainders; gamma limited by keeping every q_i >= 0
    // inside X and q_i <= mu - gamma outside X
    Rat gamma = mu;
    for (size_t k = 0; k < rem.size(); ++k) {
      if (k < static_cast<size_t>(t))
        gamma = std::min(gamma, rem[k].second);
      else
        gamma = std::min(gamma, Rat(mu - rem[k].second));
    }
    if (gamma <= 0) throw std::logic_error("page_distribution: stalled");
    SlotDistribution::Entry e;
    for (size_t k = 0; k < std::min(rem.size(), static_cast<size_t>(t)); ++k) {
      e.members.push_back(rem[k].first);
      rem[k].second -= gamma;
    }
    std::sort(e.members.begin(), e.members.end());
    e.prob = gamma;
    out.support.push_back(std::move(e));
    mu -= gamma;
  }
  for (auto& [i, v] : rem)
    if (v != 0) throw std::logic_error("page_distribution: nonzero remainder");
  return out;
}

SlotDistribution quality_decompose(const std::map<int, Rat>& w,
                                   const std::vector<Rat>& beta) {
  for (size_t k = 1; k < beta.size(); ++k)
    if (beta[k] > beta[k - 1])
      throw std::domain_error("quality_decompose: beta not sorted descending");
  std::vector<int> ids;
  for (auto& [i, v] : w) {
    if (v < 0) throw std::domain_error("quality_decompose: negative w");
    ids.push_back(i);
  }
  GroundSet g(ids);
  SubmodularOracle f = quality_based_oracle(g, beta);
  Vec wv;
  for (auto& [i, v] : w) wv.set(i, v);
  if (!member(f, wv)) throw std::domain_error("quality_decompose: w infeasible");

  std::map<int, Rat> rem = w;
  Rat mu = 1;  // invariant: rem is in mu * P
  SlotDistribution out;
  size_t guard = (size_t(1) << std::min<size_t>(ids.size(), 16)) + 2 * ids.size() + 4;
  while (true) {
    std::vector<std::pair<int, Rat>> pos;
    for (auto& [i, v] : rem)
      if (v > 0) pos.emplace_back(i, v);
    if (pos.empty()) break;
    if (guard-- == 0) throw std::logic_error("quality_decompose: did not terminate");
    std::sort(pos.begin(), pos.end(), [](const auto& a, const auto& b) {
      return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    // extreme point aligned with the sorted order: largest remainder gets
    // slot 1; remainders beyond the slot count wait for a later extreme point
    SlotDistribution::Entry e;
    std::map<int, Rat> xi;
    for (size_t k = 0; k < std::min(pos.size(), beta.size()); ++k) {
      e.slot[pos[k].first] = static_cast<int>(k) + 1;
      xi[pos[k].first] = beta[k];
    }
    // largest gamma keeping rem - gamma*xi inside (mu - gamma) * P
    Rat gamma = mu;
    for (auto& [i, v] : xi) gamma = std::min(gamma, Rat(rem[i] / v));
    Mask full = g.full_mask();
    for (Mask F = 1; F <= full; ++F) {
      Rat fF = f.eval_mask(F), xiF = 0, remF = 0;
      for (int i : g.elems_of(F)) {
        auto it = xi.find(i);
        if (it != xi.end()) xiF += it->second;
        remF += rem[i];
      }
      if (xiF < fF) gamma = std::min(gamma, Rat((mu * fF - remF) / (fF - xiF)));
    }
    if (gamma <= 0) throw std::logic_error("quality_decompose: stalled");
    for (auto& [i, v] : xi) rem[i] -= gamma * v;
    mu -= gamma;
    e.prob = gamma;
    out.support.push_back(std::move(e));
  }
  if (mu > 0) {
    SlotDistribution::Entry empty;
    empty.prob = mu;
    out.support.push_back(std::move(empty));
  }
  return out;
}

std::map<int, std::vector<Rat>> per_page_split(const std::map<int, Rat>& w,
                                               const std::vector<SubmodularOracle>& pages) {
  if (pages.empty()) throw std::domain_error("per_page_split: no pages");
  const GroundSet& g = pages[0].ground();
  for (auto& p : pages)
    if (p.ground().elems() != g.elems())
      throw std::domain_error("per_page_split: page grounds differ");
  size_t n = static_cast<size_t>(g.size()), m = pages.size();
  // variables x[i*m + k] = share of edge i on page k
  std::vector<std::vector<Rat>> A;
  std::vector<Rat> b;
  Rat total = 0;
  for (int i = 0; i < g.size(); ++i) {
    std::vector<Rat> row(n * m, Rat(0));
    for (size_t k = 0; k < m; ++k) row[static_cast<size_t>(i) * m + k] = 1;
    auto it = w.find(g.at(i));
    Rat wi = it == w.end() ? Rat(0) : it->second;
    if (wi < 0) throw std::domain_error("per_page_split: negative w");
    A.push_back(std::move(row));
    b.push_back(wi);
    total += wi;
  }
  for (size_t k = 0; k < m; ++k) {
    Mask full = g.full_mask();
    for (Mask S = full; S; S = (S - 1) & full) {
      std::vector<Rat> row(n * m, Rat(0));
      for (int i = 0; i < g.size(); ++i)
        if (S & (Mask(1) << i)) row[static_cast<size_t>(i) * m + k] = 1;
      A.push_back(std::move(row));
      b.push_back(pages[k].eval_mask(S));
    }
  }
  std::vector<Rat> c(n * m, Rat(1));
  LpResult lp = lp_maximize(A, b, c);
  if (lp.value != total)
    throw std::domain_error("per_page_split: w not splittable across the pages");
  std::map<int, std::vector<Rat>> out;
  for (int i = 0; i < g.size(); ++i) {
    std::vector<Rat> shares;
    for (size_t k = 0; k < m; ++k) shares.push_back(lp.x[static_cast<size_t>(i) * m + k]);
    out[g.at(i)] = std::move(shares);
  }
  return out;
}

}  // namespace pca
