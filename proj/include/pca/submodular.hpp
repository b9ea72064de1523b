#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "pca/rational.hpp"

namespace pca {

// Subsets of a ground set are bitmasks over the ground's local element order.
using Mask = uint32_t;

inline int popcount(Mask m) { return __builtin_popcount(m); }

/// Ordered set of edge ids. Iteration/bit order is fixed at construction.
class GroundSet {
 public:
  GroundSet() = default;
  explicit GroundSet(std::vector<int> elems);

  int size() const { return static_cast<int>(elems_.size()); }
  const std::vector<int>& elems() const { return elems_; }
  int at(int pos) const { return elems_[static_cast<size_t>(pos)]; }
  // -1 if absent
  int index_of(int e) const;
  bool contains(int e) const { return index_of(e) >= 0; }
  Mask full_mask() const { return size() >= 32 ? ~Mask(0) : (Mask(1) << size()) - 1; }
  Mask mask_of(const std::vector<int>& elems) const;  // throws on foreign element
  std::vector<int> elems_of(Mask m) const;

 private:
  std::vector<int> elems_;
  std::map<int, int> index_;
};

/// Sparse nonnegative vector over edge ids; missing key reads as 0.
class Vec {
 public:
  Vec() = default;

  const Rat& operator[](int e) const;
  void set(int e, Rat v);
  void add(int e, const Rat& v);
  Rat sum() const;
  Rat sum(const GroundSet& g, Mask m) const;  // x(F)
  const std::map<int, Rat>& entries() const { return entries_; }

  friend Vec operator+(const Vec& a, const Vec& b);
  bool operator==(const Vec& o) const;

 private:
  std::map<int, Rat> entries_;
};

/// Monotone submodular value oracle. Copies share the same memo cache and
/// are safe to evaluate from concurrent readers.
class SubmodularOracle {
 public:
  SubmodularOracle() = default;
  SubmodularOracle(GroundSet ground, std::function<Rat(Mask)> fn);

  const GroundSet& ground() const;
  Rat eval_mask(Mask F) const;  // memoized
  Rat eval(const std::vector<int>& elems) const;

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

struct SubmodularReport {
  bool normalized = false;
  bool monotone = false;
  bool submodular = false;
  bool all() const { return normalized && monotone && submodular; }
};

// Exhaustive check over all subset pairs; refuses grounds larger than 20.
SubmodularReport verify_submodular(const SubmodularOracle& f);

// x(F) <= f(F) for all F, checked by enumeration. Rejects negative entries.
bool member(const SubmodularOracle& f, const Vec& x);

// Base point from marginal gains along `order` (a permutation of the ground).
Vec greedy_base(const SubmodularOracle& f, const std::vector<int>& order);

// F -> min_{F' >= F} f(F') - w(F'); requires member(f, w).
SubmodularOracle contract(const SubmodularOracle& f, const Vec& w);

// Disjoint-ground union, F -> sum_j f_j(F & E_j).
SubmodularOracle direct_sum(const std::vector<SubmodularOracle>& oracles);

// Restriction of f to a sub-ground (elements must belong to f's ground).
SubmodularOracle restrict(const SubmodularOracle& f, const GroundSet& sub);

// Built-in families.
SubmodularOracle stock_oracle(GroundSet g, Rat s);
SubmodularOracle page_based_oracle(GroundSet g, std::vector<int> page_slots);
SubmodularOracle quality_based_oracle(GroundSet g, std::vector<Rat> beta);
SubmodularOracle paged_quality_oracle(GroundSet g, std::vector<std::vector<Rat>> page_betas);
SubmodularOracle capacity_oracle(GroundSet g, std::vector<Rat> caps);

}  // namespace pca
