#include "pca/market.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace pca {

BudgetCurve::BudgetCurve(std::vector<std::pair<Rat, Rat>> pts) {
  pts_.emplace_back(0, 0);
  for (auto& p : pts) pts_.push_back(p);
  Rat prev_slope;
  bool have_prev = false;
  for (size_t k = 1; k < pts_.size(); ++k) {
    auto& [x0, y0] = pts_[k - 1];
    auto& [x1, y1] = pts_[k];
    if (x1 <= x0) throw std::invalid_argument("budget curve: x not increasing");
    if (y1 < y0) throw std::invalid_argument("budget curve: not nondecreasing");
    Rat slope = (y1 - y0) / (x1 - x0);
    if (have_prev && slope > prev_slope)
      throw std::invalid_argument("budget curve: not concave");
    prev_slope = slope;
    have_prev = true;
  }
}

Rat BudgetCurve::eval(const Rat& x) const {
  if (x < 0) throw std::domain_error("budget curve: negative argument");
  if (pts_.size() == 1) return Rat(0);
  for (size_t k = 1; k < pts_.size(); ++k) {
    if (x <= pts_[k].first) {
      auto& [x0, y0] = pts_[k - 1];
      auto& [x1, y1] = pts_[k];
      return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
    }
  }
  auto& [x0, y0] = pts_[pts_.size() - 2];
  auto& [x1, y1] = pts_.back();
  return y1 + (y1 - y0) / (x1 - x0) * (x - x1);
}

ExtRat BudgetCurve::max_affordable(const Rat& paid, const Rat& price,
                                   const Rat& goods) const {
  if (price == 0) {
    // affordable as long as the curve never dips below what is already paid
    return ExtRat::infinity();
  }
  // slack(z) = eval(goods+z) - paid - price*z is concave in z; find the
  // largest z >= 0 with slack(z) >= 0 by walking segments past `goods`.
  if (eval(goods) < paid) return ExtRat(Rat(0));
  Rat z = 0;
  Rat x = goods, y = eval(goods);
  size_t k = 1;
  while (k < pts_.size() && pts_[k].first <= goods) ++k;
  for (;; ++k) {
    bool last = k >= pts_.size();
    Rat x1 = last ? x : pts_[k].first;
    Rat y1 = last ? y : pts_[k].second;
    Rat slope;
    if (last) {
      if (pts_.size() < 2) return ExtRat(z);
      auto& [a0, b0] = pts_[pts_.size() - 2];
      auto& [a1, b1] = pts_.back();
      slope = (b1 - b0) / (a1 - a0);
      if (slope >= price) return ExtRat::infinity();
      // y - paid - price*z + (slope - price)*t = 0
      Rat slack = y - paid - price * z;
      return ExtRat(z + slack / (price - slope));
    }
    slope = (y1 - y) / (x1 - x);
    Rat seg = x1 - x;
    Rat slack_end = (y + slope * seg) - paid - price * (z + seg);
    if (slack_end >= 0) {
      z += seg;
      x = x1;
      y = y1;
      continue;
    }
    if (slope >= price) return ExtRat(z + seg);  // cannot happen with concavity
    Rat slack = y - paid - price * z;
    return ExtRat(z + slack / (price - slope));
  }
}

SubmodularOracle build_constraint(const ConstraintSpec& spec, const GroundSet& ej) {
  if (spec.family == "stock") return stock_oracle(ej, spec.stock);
  if (spec.family == "page_based") return page_based_oracle(ej, spec.page_slots);
  if (spec.family == "quality_based") return quality_based_oracle(ej, spec.beta);
  if (spec.family == "paged_quality") return paged_quality_oracle(ej, spec.page_betas);
  if (spec.family == "capacity") return capacity_oracle(ej, spec.caps);
  throw std::invalid_argument("unknown constraint family: " + spec.family);
}

void Market::validate() const {
  std::set<int> bids, sids, eids;
  for (auto& b : buyers) {
    if (!bids.insert(b.id).second) throw std::invalid_argument("duplicate buyer id");
    if (b.bid < 0) throw std::invalid_argument("negative bid");
    if (b.budget < ExtRat(0)) throw std::invalid_argument("negative budget");
  }
  for (auto& s : sellers) {
    if (!sids.insert(s.id).second) throw std::invalid_argument("duplicate seller id");
    if (s.reserve < 0) throw std::invalid_argument("negative reserve");
  }
  std::set<std::pair<int, int>> pairs;
  for (auto& e : edges) {
    if (!eids.insert(e.id).second) throw std::invalid_argument("duplicate edge id");
    if (!bids.count(e.buyer)) throw std::invalid_argument("edge references unknown buyer");
    if (!sids.count(e.seller)) throw std::invalid_argument("edge references unknown seller");
    if (!pairs.emplace(e.buyer, e.seller).second)
      throw std::invalid_argument("duplicate edge (buyer,seller)");
  }
  for (auto& s : sellers) {
    auto ej = seller_edge_ids(s.id);
    GroundSet g = s.constraint.ground();
    if (g.size() != static_cast<int>(ej.size()))
      throw std::invalid_argument("seller oracle ground does not match E_j");
    for (int e : ej)
      if (!g.contains(e))
        throw std::invalid_argument("seller oracle ground does not match E_j");
  }
}

const Buyer& Market::buyer(int id) const {
  for (auto& b : buyers)
    if (b.id == id) return b;
  throw std::out_of_range("unknown buyer id");
}

const Seller& Market::seller(int id) const {
  for (auto& s : sellers)
    if (s.id == id) return s;
  throw std::out_of_range("unknown seller id");
}

const EdgeRec& Market::edge(int id) const {
  for (auto& e : edges)
    if (e.id == id) return e;
  throw std::out_of_range("unknown edge id");
}

std::vector<int> Market::buyer_edge_ids(int buyer_id) const {
  std::vector<int> out;
  for (auto& e : edges)
    if (e.buyer == buyer_id) out.push_back(e.id);
  return out;
}

std::vector<int> Market::seller_edge_ids(int seller_id) const {
  std::vector<int> out;
  for (auto& e : edges)
    if (e.seller == seller_id) out.push_back(e.id);
  return out;
}

GroundSet Market::all_edges() const {
  std::vector<int> ids;
  for (auto& e : edges) ids.push_back(e.id);
  return GroundSet(ids);
}

bool Market::has_virtual() const {
  return std::any_of(buyers.begin(), buyers.end(),
                     [](const Buyer& b) { return b.is_virtual; });
}

Market add_virtual_buyers(const Market& m) {
  if (m.has_virtual()) throw std::invalid_argument("market already preprocessed");
  Market out = m;
  int next_buyer = 0, next_edge = 0;
  for (auto& b : m.buyers) next_buyer = std::max(next_buyer, b.id);
  for (auto& e : m.edges) next_edge = std::max(next_edge, e.id);
  for (auto& s : m.sellers) next_buyer = std::max(next_buyer, s.id);
  for (auto& s : out.sellers) {
    Buyer vb;
    vb.id = ++next_buyer;
    vb.bid = s.reserve;
    vb.valuation = s.reserve;
    vb.budget = ExtRat::infinity();
    vb.is_virtual = true;
    vb.virtual_seller = s.id;
    out.buyers.push_back(vb);

    EdgeRec ve{++next_edge, vb.id, s.id};
    out.edges.push_back(ve);

    std::vector<int> g_elems = m.seller_edge_ids(s.id);
    g_elems.push_back(ve.id);
    GroundSet g(g_elems);
    SubmodularOracle base = s.constraint;
    Mask vbit = Mask(1) << g.index_of(ve.id);
    Mask base_full = base.ground().full_mask();
    s.constraint = SubmodularOracle(g, [base, g, vbit, base_full](Mask F) {
      if (F & vbit) return base.eval_mask(base_full);
      return base.eval(g.elems_of(F));
    });
  }
  out.validate();
  return out;
}

SubmodularOracle reduce_to_one_sided(const Market& m) {
  std::vector<int> buyer_ids;
  for (auto& b : m.buyers) buyer_ids.push_back(b.id);
  GroundSet g(buyer_ids);
  Market mm = m;
  return SubmodularOracle(g, [mm, g](Mask X) {
    std::vector<int> sel = g.elems_of(X);
    Rat s = 0;
    for (auto& sj : mm.sellers) {
      std::vector<int> f;
      for (auto& e : mm.edges)
        if (e.seller == sj.id &&
            std::find(sel.begin(), sel.end(), e.buyer) != sel.end())
          f.push_back(e.id);
      s += sj.constraint.eval(f);
    }
    return s;
  });
}

Allocation strip_virtual(const Allocation& a, const Market& m) {
  Allocation out;
  out.r = a.r;
  for (auto& b : m.buyers) {
    if (b.is_virtual) {
      Rat pay = a.p.count(b.id) ? a.p.at(b.id) : Rat(0);
      out.r[b.virtual_seller] -= pay;
      if (out.r[b.virtual_seller] < 0)
        throw std::logic_error("strip_virtual: negative revenue");
    } else if (a.p.count(b.id)) {
      out.p[b.id] = a.p.at(b.id);
    }
  }
  for (auto& [e, v] : a.w.entries()) {
    if (!m.buyer(m.edge(e).buyer).is_virtual) out.w.set(e, v);
  }
  return out;
}

}  // namespace pca
