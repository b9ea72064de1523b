#include "pca/poly_flow.hpp"

#include <algorithm>
#include <stdexcept>

#include "pca/lp.hpp"

namespace pca {

RemnantContext::RemnantContext(const Market& m, Vec w, std::map<int, ExtRat> d)
    : market_(std::make_shared<Market>(m)),
      w_(std::move(w)),
      d_(std::move(d)),
      ground_(m.all_edges()),
      cache_(std::make_shared<Cache>()) {
  std::vector<SubmodularOracle> parts;
  for (auto& s : m.sellers) {
    Vec wj;
    for (int e : m.seller_edge_ids(s.id)) {
      if (w_[e] != 0) wj.set(e, w_[e]);
    }
    parts.push_back(contract(s.constraint, wj));
  }
  fw_ = direct_sum(parts);
  // direct_sum orders elements by seller; rebuild on the market edge order
  SubmodularOracle by_seller = fw_;
  GroundSet g = ground_;
  fw_ = SubmodularOracle(g, [by_seller, g](Mask F) {
    return by_seller.eval(g.elems_of(F));
  });
  for (auto& b : m.buyers) {
    buyer_ids_.push_back(b.id);
    buyer_edge_masks_.push_back(ground_.mask_of(m.buyer_edge_ids(b.id)));
    if (!d_.count(b.id)) throw std::invalid_argument("missing demand for buyer");
  }
}

Mask RemnantContext::buyer_edges(int buyer_id) const {
  for (size_t k = 0; k < buyer_ids_.size(); ++k)
    if (buyer_ids_[k] == buyer_id) return buyer_edge_masks_[k];
  throw std::out_of_range("unknown buyer id");
}

Mask RemnantContext::edges_of_buyers(const std::vector<int>& buyer_ids) const {
  Mask m = 0;
  for (int i : buyer_ids) m |= buyer_edges(i);
  return m;
}

Rat RemnantContext::f_wd(const std::vector<int>& edge_ids) const {
  return f_wd(ground_.mask_of(edge_ids));
}

Rat RemnantContext::f_wd(Mask F) const {
  {
    std::lock_guard<std::mutex> lk(cache_->mu);
    auto it = cache_->memo.find(F);
    if (it != cache_->memo.end()) return it->second;
  }
  // buyers incident to F
  std::vector<size_t> nf;
  for (size_t k = 0; k < buyer_ids_.size(); ++k)
    if (buyer_edge_masks_[k] & F) nf.push_back(k);
  size_t t = nf.size();
  Rat best;
  bool first = true;
  for (Mask X = 0; X < (Mask(1) << t); ++X) {
    ExtRat val(Rat(0));
    Mask ex = 0;
    for (size_t k = 0; k < t; ++k) {
      if (X & (Mask(1) << k))
        ex |= buyer_edge_masks_[nf[k]];
      else
        val += d_.at(buyer_ids_[nf[k]]);
    }
    if (val.is_infinite()) continue;
    Rat v = fw_.eval_mask(ex & F) + val.value();
    if (first || v < best) {
      best = std::move(v);
      first = false;
    }
  }
  if (first) throw std::logic_error("f_wd: no finite term");  // X = N_F is finite
  std::lock_guard<std::mutex> lk(cache_->mu);
  return cache_->memo.emplace(F, std::move(best)).first->second;
}

Rat RemnantContext::f_wd_bruteforce(Mask F) const {
  int n = ground_.size();
  if (n > 12) throw std::invalid_argument("f_wd_bruteforce: too many edges");
  std::vector<std::vector<Rat>> A;
  std::vector<Rat> b;
  for (auto& s : market_->sellers) {
    Mask ej = ground_.mask_of(market_->seller_edge_ids(s.id));
    for (Mask S = ej;; S = (S - 1) & ej) {
      if (S) {
        std::vector<Rat> row(static_cast<size_t>(n), Rat(0));
        for (int k = 0; k < n; ++k)
          if (S & (Mask(1) << k)) row[static_cast<size_t>(k)] = 1;
        A.push_back(std::move(row));
        b.push_back(fw_.eval_mask(S));
      }
      if (S == 0) break;
    }
  }
  for (size_t k = 0; k < buyer_ids_.size(); ++k) {
    const ExtRat& di = d_.at(buyer_ids_[k]);
    if (di.is_infinite()) continue;
    std::vector<Rat> row(static_cast<size_t>(n), Rat(0));
    for (int j = 0; j < n; ++j)
      if (buyer_edge_masks_[k] & (Mask(1) << j)) row[static_cast<size_t>(j)] = 1;
    A.push_back(std::move(row));
    b.push_back(di.value());
  }
  std::vector<Rat> c(static_cast<size_t>(n), Rat(0));
  for (int k = 0; k < n; ++k)
    if (F & (Mask(1) << k)) c[static_cast<size_t>(k)] = 1;
  return lp_maximize(A, b, c).value;
}

Rat g_wd(const SubmodularOracle& g, const Vec& y, const std::map<int, ExtRat>& d,
         const std::vector<int>& X) {
  SubmodularOracle gy = contract(g, y);
  Mask xm = g.ground().mask_of(X);
  Rat best;
  bool first = true;
  for (Mask Z = xm;; Z = (Z - 1) & xm) {
    ExtRat rest(Rat(0));
    for (int i : g.ground().elems_of(xm & ~Z)) rest += d.at(i);
    if (!rest.is_infinite()) {
      Rat v = gy.eval_mask(Z) + rest.value();
      if (first || v < best) {
        best = std::move(v);
        first = false;
      }
    }
    if (Z == 0) break;
  }
  if (first) throw std::logic_error("g_wd: no finite term");
  return best;
}

namespace {

ExtRat node_cut_value(const PolyNetwork& net, int node, bool outgoing,
                      const std::vector<int>& edge_ids) {
  const auto& polys = outgoing ? net.out_poly : net.in_poly;
  auto it = polys.find(node);
  if (it != polys.end()) return ExtRat(it->second.eval(edge_ids));
  ExtRat s(Rat(0));
  for (int id : edge_ids)
    for (auto& e : net.edges)
      if (e.id == id) s += e.cap;
  return s;
}

}  // namespace

FlowResult max_flow(const PolyNetwork& net) {
  size_t n = net.edges.size();
  std::map<int, size_t> col;
  for (size_t k = 0; k < n; ++k) col[net.edges[k].id] = k;

  std::vector<std::vector<Rat>> A;
  std::vector<Rat> b;
  auto add_row = [&](const std::vector<Rat>& row, Rat rhs) {
    A.push_back(row);
    b.push_back(std::move(rhs));
  };
  for (size_t k = 0; k < n; ++k) {
    if (net.edges[k].cap.is_infinite()) continue;
    std::vector<Rat> row(n, Rat(0));
    row[k] = 1;
    add_row(row, net.edges[k].cap.value());
  }
  for (int v = 0; v < net.num_nodes; ++v) {
    if (v == net.source || v == net.sink) continue;
    std::vector<Rat> row(n, Rat(0));
    for (size_t k = 0; k < n; ++k) {
      if (net.edges[k].from == v) row[k] += 1;
      if (net.edges[k].to == v) row[k] -= 1;
    }
    add_row(row, Rat(0));
    for (auto& x : row) x = -x;
    add_row(row, Rat(0));
  }
  for (int dir = 0; dir < 2; ++dir) {
    for (auto& [v, f] : (dir ? net.out_poly : net.in_poly)) {
      const GroundSet& g = f.ground();
      Mask full = g.full_mask();
      for (Mask S = full;; S = (S - 1) & full) {
        if (S) {
          std::vector<Rat> row(n, Rat(0));
          for (int i : g.elems_of(S)) row[col.at(i)] = 1;
          add_row(row, f.eval_mask(S));
        }
        if (S == 0) break;
      }
    }
  }
  std::vector<Rat> c(n, Rat(0));
  for (size_t k = 0; k < n; ++k) {
    if (net.edges[k].from == net.source) c[k] += 1;
    if (net.edges[k].to == net.source) c[k] -= 1;
  }
  LpResult lp = lp_maximize(A, b, c);
  FlowResult out;
  out.value = lp.value;
  for (size_t k = 0; k < n; ++k) out.flow.set(net.edges[k].id, lp.x[k]);
  return out;
}

ExtRat min_cut_enumerate(const PolyNetwork& net) {
  std::vector<int> mid;
  for (int v = 0; v < net.num_nodes; ++v)
    if (v != net.source && v != net.sink) mid.push_back(v);
  if (mid.size() > 20) throw std::invalid_argument("min_cut_enumerate: too large");
  ExtRat best = ExtRat::infinity();
  for (Mask um = 0; um < (Mask(1) << mid.size()); ++um) {
    std::vector<bool> in_u(static_cast<size_t>(net.num_nodes), false);
    in_u[static_cast<size_t>(net.source)] = true;
    for (size_t k = 0; k < mid.size(); ++k)
      if (um & (Mask(1) << k)) in_u[static_cast<size_t>(mid[k])] = true;
    std::vector<size_t> cut;
    for (size_t k = 0; k < net.edges.size(); ++k)
      if (in_u[static_cast<size_t>(net.edges[k].from)] &&
          !in_u[static_cast<size_t>(net.edges[k].to)])
        cut.push_back(k);
    if (cut.size() > 20) throw std::invalid_argument("min_cut_enumerate: cut too large");
    for (Mask am = 0; am < (Mask(1) << cut.size()); ++am) {
      // A = cut edges with bit set (charged at head), B = rest (charged at tail)
      std::map<int, std::vector<int>> a_by_head, b_by_tail;
      for (size_t k = 0; k < cut.size(); ++k) {
        const auto& e = net.edges[cut[k]];
        if (am & (Mask(1) << k))
          a_by_head[e.to].push_back(e.id);
        else
          b_by_tail[e.from].push_back(e.id);
      }
      ExtRat total(Rat(0));
      for (auto& [v, ids] : a_by_head) total += node_cut_value(net, v, false, ids);
      for (auto& [v, ids] : b_by_tail) total += node_cut_value(net, v, true, ids);
      best = min(best, total);
    }
  }
  return best;
}

Vec recover_transactions(const Market& m, const std::map<int, Rat>& y) {
  GroundSet ground = m.all_edges();
  size_t n = static_cast<size_t>(ground.size());
  std::vector<std::vector<Rat>> A;
  std::vector<Rat> b;
  Rat total = 0;
  for (auto& buyer : m.buyers) {
    std::vector<Rat> row(n, Rat(0));
    for (int e : m.buyer_edge_ids(buyer.id))
      row[static_cast<size_t>(ground.index_of(e))] = 1;
    Rat yi = y.count(buyer.id) ? y.at(buyer.id) : Rat(0);
    if (yi < 0) throw std::invalid_argument("recover_transactions: negative y");
    A.push_back(std::move(row));
    b.push_back(yi);
    total += yi;
  }
  for (auto& s : m.sellers) {
    GroundSet ej(m.seller_edge_ids(s.id));
    Mask full = ej.full_mask();
    for (Mask S = full;; S = (S - 1) & full) {
      if (S) {
        std::vector<Rat> row(n, Rat(0));
        for (int e : ej.elems_of(S)) row[static_cast<size_t>(ground.index_of(e))] = 1;
        A.push_back(std::move(row));
        b.push_back(s.constraint.eval(ej.elems_of(S)));
      }
      if (S == 0) break;
    }
  }
  std::vector<Rat> c(n, Rat(1));
  LpResult lp = lp_maximize(A, b, c);
  if (lp.value != total)
    throw std::invalid_argument("recover_transactions: y not in the reduced polymatroid");
  Vec out;
  for (size_t k = 0; k < n; ++k) out.set(ground.at(static_cast<int>(k)), lp.x[k]);
  return out;
}

}  // namespace pca
