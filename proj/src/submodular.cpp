#include "pca/submodular.hpp"

#include <algorithm>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace pca {

GroundSet::GroundSet(std::vector<int> elems) : elems_(std::move(elems)) {
  for (int i = 0; i < size(); ++i) {
    if (!index_.emplace(elems_[static_cast<size_t>(i)], i).second)
      throw std::invalid_argument("duplicate ground element");
  }
  if (size() > 31) throw std::invalid_argument("ground set too large (>31)");
}

int GroundSet::index_of(int e) const {
  auto it = index_.find(e);
  return it == index_.end() ? -1 : it->second;
}

Mask GroundSet::mask_of(const std::vector<int>& elems) const {
  Mask m = 0;
  for (int e : elems) {
    int i = index_of(e);
    if (i < 0) throw std::domain_error("element outside ground set");
    m |= Mask(1) << i;
  }
  return m;
}

std::vector<int> GroundSet::elems_of(Mask m) const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (m & (Mask(1) << i)) out.push_back(elems_[static_cast<size_t>(i)]);
  return out;
}

const Rat& Vec::operator[](int e) const {
  static const Rat zero(0);
  auto it = entries_.find(e);
  return it == entries_.end() ? zero : it->second;
}

void Vec::set(int e, Rat v) {
  if (v == 0)
    entries_.erase(e);
  else
    entries_[e] = std::move(v);
}

void Vec::add(int e, const Rat& v) { set(e, (*this)[e] + v); }

Rat Vec::sum() const {
  Rat s = 0;
  for (auto& [e, v] : entries_) s += v;
  return s;
}

Rat Vec::sum(const GroundSet& g, Mask m) const {
  Rat s = 0;
  for (int i = 0; i < g.size(); ++i)
    if (m & (Mask(1) << i)) s += (*this)[g.at(i)];
  return s;
}

Vec operator+(const Vec& a, const Vec& b) {
  Vec out = a;
  for (auto& [e, v] : b.entries_) out.add(e, v);
  return out;
}

bool Vec::operator==(const Vec& o) const { return entries_ == o.entries_; }

struct SubmodularOracle::Impl {
  GroundSet ground;
  std::function<Rat(Mask)> fn;
  mutable std::mutex mu;
  mutable std::unordered_map<Mask, Rat> memo;
};

SubmodularOracle::SubmodularOracle(GroundSet ground, std::function<Rat(Mask)> fn)
    : impl_(std::make_shared<Impl>()) {
  impl_->ground = std::move(ground);
  impl_->fn = std::move(fn);
}

const GroundSet& SubmodularOracle::ground() const { return impl_->ground; }

Rat SubmodularOracle::eval_mask(Mask F) const {
  if (F & ~impl_->ground.full_mask()) throw std::domain_error("mask outside ground");
  {
    std::lock_guard<std::mutex> lk(impl_->mu);
    auto it = impl_->memo.find(F);
    if (it != impl_->memo.end()) return it->second;
  }
  Rat v = impl_->fn(F);
  std::lock_guard<std::mutex> lk(impl_->mu);
  return impl_->memo.emplace(F, std::move(v)).first->second;
}

Rat SubmodularOracle::eval(const std::vector<int>& elems) const {
  return eval_mask(impl_->ground.mask_of(elems));
}

SubmodularReport verify_submodular(const SubmodularOracle& f) {
  int n = f.ground().size();
  if (n > 20) throw std::invalid_argument("verify_submodular: ground set too large");
  Mask full = f.ground().full_mask();
  SubmodularReport rep;
  rep.normalized = f.eval_mask(0) == 0;
  rep.monotone = true;
  for (Mask F = 0; F <= full && rep.monotone; ++F) {
    Rat fv = f.eval_mask(F);
    if (fv < 0) rep.monotone = false;
    for (int i = 0; i < n; ++i) {
      Mask b = Mask(1) << i;
      if ((F & b) == 0 && f.eval_mask(F | b) < fv) {
        rep.monotone = false;
        break;
      }
    }
    if (F == full) break;
  }
  rep.submodular = true;
  for (Mask S = 0; S <= full && rep.submodular; ++S) {
    for (Mask T = S + 1; T <= full; ++T) {
      if (f.eval_mask(S) + f.eval_mask(T) <
          f.eval_mask(S & T) + f.eval_mask(S | T)) {
        rep.submodular = false;
        break;
      }
      if (T == full) break;
    }
    if (S == full) break;
  }
  return rep;
}

bool member(const SubmodularOracle& f, const Vec& x) {
  for (auto& [e, v] : x.entries()) {
    if (v < 0) throw std::domain_error("member: negative entry");
    if (!f.ground().contains(e)) throw std::domain_error("member: element outside ground");
  }
  Mask full = f.ground().full_mask();
  for (Mask F = 1; F != 0 && F <= full; ++F) {
    if (x.sum(f.ground(), F) > f.eval_mask(F)) return false;
    if (F == full) break;
  }
  return true;
}

Vec greedy_base(const SubmodularOracle& f, const std::vector<int>& order) {
  if (order.size() != static_cast<size_t>(f.ground().size()))
    throw std::invalid_argument("greedy_base: order is not a permutation");
  Vec out;
  Mask cur = 0;
  Rat prev = 0;
  for (int e : order) {
    int i = f.ground().index_of(e);
    if (i < 0 || (cur & (Mask(1) << i)))
      throw std::invalid_argument("greedy_base: order is not a permutation");
    cur |= Mask(1) << i;
    Rat v = f.eval_mask(cur);
    out.set(e, v - prev);
    prev = std::move(v);
  }
  return out;
}

SubmodularOracle contract(const SubmodularOracle& f, const Vec& w) {
  if (!member(f, w)) throw std::invalid_argument("contract: w outside polymatroid");
  GroundSet g = f.ground();
  Mask full = g.full_mask();
  return SubmodularOracle(g, [f, w, g, full](Mask F) {
    // min over supersets F' of F: iterate complements of F
    Mask rest = full & ~F;
    Rat best;
    bool first = true;
    for (Mask sub = rest;; sub = (sub - 1) & rest) {
      Mask Fp = F | sub;
      Rat v = f.eval_mask(Fp) - w.sum(g, Fp);
      if (first || v < best) {
        best = std::move(v);
        first = false;
      }
      if (sub == 0) break;
    }
    return best;
  });
}

SubmodularOracle direct_sum(const std::vector<SubmodularOracle>& oracles) {
  std::vector<int> elems;
  for (auto& f : oracles)
    for (int e : f.ground().elems()) elems.push_back(e);
  GroundSet g(elems);  // duplicate check rejects overlapping grounds
  auto parts = oracles;
  return SubmodularOracle(g, [parts, g](Mask F) {
    std::vector<int> sel = g.elems_of(F);
    Rat s = 0;
    for (auto& f : parts) {
      std::vector<int> mine;
      for (int e : sel)
        if (f.ground().contains(e)) mine.push_back(e);
      s += f.eval(mine);
    }
    return s;
  });
}

SubmodularOracle restrict(const SubmodularOracle& f, const GroundSet& sub) {
  for (int e : sub.elems())
    if (!f.ground().contains(e)) throw std::domain_error("restrict: element outside ground");
  return SubmodularOracle(sub, [f, sub](Mask F) { return f.eval(sub.elems_of(F)); });
}

SubmodularOracle stock_oracle(GroundSet g, Rat s) {
  if (s < 0) throw std::invalid_argument("negative stock");
  return SubmodularOracle(std::move(g), [s](Mask F) { return F ? s : Rat(0); });
}

SubmodularOracle page_based_oracle(GroundSet g, std::vector<int> page_slots) {
  for (int t : page_slots)
    if (t < 0) throw std::invalid_argument("negative slot count");
  return SubmodularOracle(std::move(g), [page_slots](Mask F) {
    int k = popcount(F);
    Rat s = 0;
    for (int t : page_slots) s += std::min(t, k);
    return s;
  });
}

SubmodularOracle quality_based_oracle(GroundSet g, std::vector<Rat> beta) {
  for (size_t i = 0; i < beta.size(); ++i) {
    if (beta[i] < 0) throw std::invalid_argument("negative quality");
    if (i > 0 && beta[i] > beta[i - 1])
      throw std::invalid_argument("qualities must be nonincreasing");
  }
  return SubmodularOracle(std::move(g), [beta](Mask F) {
    size_t k = std::min(static_cast<size_t>(popcount(F)), beta.size());
    Rat s = 0;
    for (size_t l = 0; l < k; ++l) s += beta[l];
    return s;
  });
}

SubmodularOracle paged_quality_oracle(GroundSet g, std::vector<std::vector<Rat>> page_betas) {
  std::vector<SubmodularOracle> pages;
  for (auto& b : page_betas) pages.push_back(quality_based_oracle(g, b));
  return SubmodularOracle(std::move(g), [pages](Mask F) {
    Rat s = 0;
    for (auto& p : pages) s += p.eval_mask(F);
    return s;
  });
}

SubmodularOracle capacity_oracle(GroundSet g, std::vector<Rat> caps) {
  if (caps.size() != static_cast<size_t>(g.size()))
    throw std::invalid_argument("capacity count mismatch");
  for (auto& c : caps)
    if (c < 0) throw std::invalid_argument("negative capacity");
  return SubmodularOracle(g, [g, caps](Mask F) {
    Rat s = 0;
    for (int i = 0; i < g.size(); ++i)
      if (F & (Mask(1) << i)) s += caps[static_cast<size_t>(i)];
    return s;
  });
}

}  // namespace pca
