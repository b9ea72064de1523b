#include "pca/audit.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace pca {

bool AuditReport::all_ok() const {
  if (!irb.ok || !irs.ok || !sbb.ok) return false;
  if (icb && !icb->ok) return false;
  if (po && !po->ok) return false;
  if (equivalence && !equivalence->ok) return false;
  return true;
}

namespace {

Rat goods_of(const Allocation& a, const Market& m, int buyer_id) {
  Rat s = 0;
  for (int e : m.buyer_edge_ids(buyer_id)) s += a.w[e];
  return s;
}

Rat sold_of(const Allocation& a, const Market& m, int seller_id) {
  Rat s = 0;
  for (int e : m.seller_edge_ids(seller_id)) s += a.w[e];
  return s;
}

Rat valuation_of(const Buyer& b) { return b.valuation ? *b.valuation : b.bid; }

}  // namespace

Verdict check_irb(const Allocation& a, const Market& m) {
  for (auto& b : m.buyers) {
    if (b.is_virtual) continue;
    Rat p = a.p.count(b.id) ? a.p.at(b.id) : Rat(0);
    Rat u = valuation_of(b) * goods_of(a, m, b.id) - p;
    if (u < 0)
      return {false, "buyer " + std::to_string(b.id) + " utility " + format_rat(u)};
  }
  return {true, ""};
}

Verdict check_irs(const Allocation& a, const Market& m) {
  for (auto& s : m.sellers) {
    Rat r = a.r.count(s.id) ? a.r.at(s.id) : Rat(0);
    Rat sold = sold_of(a, m, s.id);
    if (r < s.reserve * sold)
      return {false, "seller " + std::to_string(s.id) + " revenue " + format_rat(r) +
                         " below " + format_rat(Rat(s.reserve * sold))};
  }
  return {true, ""};
}

Verdict check_sbb(const Allocation& a) {
  Rat p = 0, r = 0;
  for (auto& [i, v] : a.p) p += v;
  for (auto& [j, v] : a.r) r += v;
  if (p != r)
    return {false, "payments " + format_rat(p) + " != revenues " + format_rat(r)};
  return {true, ""};
}

Verdict check_icb_empirical(const Market& m, const Rat& eps, const ClinchRule& rule) {
  MechanismResult truthful = mechanism2(m, eps, rule);
  std::map<int, Rat> base_u;
  for (auto& b : m.buyers) {
    Rat p = truthful.alloc.p.count(b.id) ? truthful.alloc.p.at(b.id) : Rat(0);
    base_u[b.id] = valuation_of(b) * goods_of(truthful.alloc, m, b.id) - p;
  }
  for (auto& b : m.buyers) {
    for (Rat bid = 0; bid <= 2 * valuation_of(b); bid += eps) {
      if (bid == b.bid) continue;
      Market dev = m;
      for (auto& db : dev.buyers)
        if (db.id == b.id) db.bid = bid;
      MechanismResult r = mechanism2(dev, eps, rule);
      Rat p = r.alloc.p.count(b.id) ? r.alloc.p.at(b.id) : Rat(0);
      Rat u = valuation_of(b) * goods_of(r.alloc, m, b.id) - p;
      if (u > base_u[b.id])
        return {false, "buyer " + std::to_string(b.id) + " gains " +
                           format_rat(Rat(u - base_u[b.id])) + " by bidding " +
                           format_rat(bid)};
    }
  }
  return {true, ""};
}

Verdict check_po_exhaustive(const Allocation& a, const Market& m, const Rat& h) {
  if (m.edges.size() > 4) throw std::invalid_argument("check_po_exhaustive: too many edges");
  if (h <= 0) throw std::invalid_argument("check_po_exhaustive: bad grid step");

  std::map<int, Rat> u_buyer, u_seller, stock;
  for (auto& b : m.buyers) {
    Rat p = a.p.count(b.id) ? a.p.at(b.id) : Rat(0);
    u_buyer[b.id] = valuation_of(b) * goods_of(a, m, b.id) - p;
  }
  for (auto& s : m.sellers) {
    stock[s.id] = s.constraint.eval(m.seller_edge_ids(s.id));
    Rat r = a.r.count(s.id) ? a.r.at(s.id) : Rat(0);
    u_seller[s.id] = r + s.reserve * (stock[s.id] - sold_of(a, m, s.id));
  }

  // Phase 1: per seller, enumerate the feasible grid points of its own
  // polytope. This prunes the joint grid to the product of feasible lists.
  struct SellerChoice {
    std::map<int, Rat> w;        // edge id -> transaction
    std::map<int, Rat> goods;    // buyer id -> goods contribution
    Rat need;                    // revenue this choice forces the seller to ask
  };
  std::vector<std::vector<SellerChoice>> choices;
  double combos = 1;
  for (auto& s : m.sellers) {
    std::vector<int> ej = m.seller_edge_ids(s.id);
    std::vector<long> steps;
    for (int e : ej) {
      Rat q = s.constraint.eval({e}) / h;
      Int whole = numerator(q) / denominator(q);
      steps.push_back(whole.convert_to<long>() + 1);
    }
    std::vector<SellerChoice> list;
    std::vector<long> idx(ej.size(), 0);
    while (true) {
      Vec wj;
      Rat sold = 0;
      for (size_t k = 0; k < ej.size(); ++k) {
        wj.set(ej[k], h * idx[k]);
        sold += h * idx[k];
      }
      if (member(s.constraint, wj)) {
        SellerChoice sc;
        for (size_t k = 0; k < ej.size(); ++k) {
          sc.w[ej[k]] = h * idx[k];
          sc.goods[m.edge(ej[k]).buyer] += h * idx[k];
        }
        sc.need = std::max(Rat(0), Rat(u_seller[s.id] - s.reserve * (stock[s.id] - sold)));
        list.push_back(std::move(sc));
      }
      size_t k = 0;
      while (k < idx.size() && ++idx[k] == steps[k]) idx[k++] = 0;
      if (k == idx.size()) break;
    }
    combos *= static_cast<double>(list.size());
    if (combos > 2e7) throw std::invalid_argument("check_po_exhaustive: grid too large");
    choices.push_back(std::move(list));
  }

  // Phase 2: scan the product in scaled integer arithmetic. All quantities
  // are multiples of 1/D, so caps and revenue floors compare exactly as Ints.
  Int D = 1;
  auto fold = [&D](const Rat& r) { D = lcm(D, denominator(r)); };
  std::vector<int> buyer_ids;
  bool has_curve = false;
  for (auto& b : m.buyers) {
    buyer_ids.push_back(b.id);
    fold(u_buyer[b.id]);
    fold(valuation_of(b) * h);
    if (b.budget.is_finite()) fold(b.budget.value());
    if (b.budget_curve) has_curve = true;
  }
  for (auto& list : choices)
    for (auto& sc : list) fold(sc.need);
  auto scaled = [&D](const Rat& r) { return Int(numerator(r) * (D / denominator(r))); };

  size_t nb = buyer_ids.size(), ns = m.sellers.size();
  std::map<int, size_t> buyer_pos;
  for (size_t i = 0; i < nb; ++i) buyer_pos[buyer_ids[i]] = i;
  // per choice: scaled v_i * goods contribution per buyer, scaled need
  struct ScaledChoice {
    std::vector<Int> pay;    // v_i * goods contribution
    std::vector<Rat> goods;  // kept rational for budget-curve buyers
    Int need;
  };
  std::vector<std::vector<ScaledChoice>> sch(ns);
  for (size_t j = 0; j < ns; ++j)
    for (auto& sc : choices[j]) {
      ScaledChoice s;
      s.pay.assign(nb, 0);
      s.goods.assign(nb, Rat(0));
      for (auto& [bid, g] : sc.goods) {
        size_t i = buyer_pos.at(bid);
        s.pay[i] = scaled(valuation_of(m.buyer(bid)) * g);
        s.goods[i] = g;
      }
      s.need = scaled(sc.need);
      sch[j].push_back(std::move(s));
    }
  std::vector<Int> u_s(nb), budget_s(nb, -1);
  for (size_t i = 0; i < nb; ++i) {
    const Buyer& b = m.buyer(buyer_ids[i]);
    u_s[i] = scaled(u_buyer[b.id]);
    if (!b.budget_curve && b.budget.is_finite()) budget_s[i] = scaled(b.budget.value());
  }

  std::vector<size_t> pick(ns, 0);
  std::vector<Int> pay(nb);
  std::vector<Rat> goods(nb);
  while (true) {
    Int need_total = 0;
    for (size_t i = 0; i < nb; ++i) pay[i] = -u_s[i];
    for (size_t j = 0; j < ns; ++j) {
      const ScaledChoice& s = sch[j][pick[j]];
      for (size_t i = 0; i < nb; ++i) pay[i] += s.pay[i];
      need_total += s.need;
    }
    bool ok = true;
    Int max_pay = 0;
    Rat curve_pay = 0;  // exact caps of budget-curve buyers, in 1/D units
    for (size_t i = 0; i < nb && ok; ++i) {
      if (pay[i] < 0) {
        ok = false;
        break;
      }
      Int cap = pay[i];
      if (budget_s[i] >= 0 && budget_s[i] < cap) cap = budget_s[i];
      if (has_curve) {
        const Buyer& b = m.buyer(buyer_ids[i]);
        if (b.budget_curve) {
          Rat g = 0;
          for (size_t j = 0; j < ns; ++j) g += sch[j][pick[j]].goods[i];
          Rat cc = b.budget_curve->eval(g) * D;
          if (cc < cap) {
            curve_pay += cc;
            continue;
          }
        }
      }
      max_pay += cap;
    }
    if (ok && (curve_pay == 0 ? max_pay > need_total
                              : Rat(max_pay) + curve_pay > Rat(need_total))) {
      std::string wtn = "dominating transactions:";
      for (size_t j = 0; j < ns; ++j)
        for (auto& [e, v] : choices[j][pick[j]].w)
          wtn += " e" + std::to_string(e) + "=" + format_rat(v);
      return {false, wtn};
    }
    size_t j = 0;
    while (j < ns && ++pick[j] == sch[j].size()) pick[j++] = 0;
    if (j == ns) break;
  }
  return {true, ""};
}

Verdict check_equivalence(const Market& m, const Rat& eps, const ClinchRule& rule) {
  Market pre = add_virtual_buyers(m);
  SubmodularOracle g = reduce_to_one_sided(pre);
  Algo1Result a1 = run_algorithm1(g, pre.buyers, eps);
  Algo2Result a2 = run_algorithm2(pre, eps, rule);
  for (auto& b : pre.buyers) {
    Rat goods = 0;
    for (int e : pre.buyer_edge_ids(b.id)) goods += a2.w[e];
    if (goods != a1.y.at(b.id))
      return {false, "buyer " + std::to_string(b.id) + " goods " + format_rat(goods) +
                         " vs " + format_rat(a1.y.at(b.id))};
    if (a2.p.at(b.id) != a1.pi.at(b.id))
      return {false, "buyer " + std::to_string(b.id) + " payment " +
                         format_rat(a2.p.at(b.id)) + " vs " + format_rat(a1.pi.at(b.id))};
  }
  if (a1.zeta.size() != a2.trace.iters.size())
    return {false, "iteration counts differ: " + std::to_string(a1.zeta.size()) + " vs " +
                       std::to_string(a2.trace.iters.size())};
  for (size_t k = 0; k < a1.zeta.size(); ++k) {
    for (auto& b : pre.buyers) {
      Rat tot = 0;
      for (auto& cr : a2.trace.iters[k].clinches)
        if (cr.buyer_id == b.id) tot += cr.xi.sum();
      if (tot != a1.zeta[k].at(b.id))
        return {false, "iteration " + std::to_string(k + 1) + " buyer " +
                           std::to_string(b.id) + " clinch " + format_rat(tot) + " vs " +
                           format_rat(a1.zeta[k].at(b.id))};
    }
  }
  return {true, ""};
}

Rat envy_alpha(const Trace& trace, const Market& pre) {
  // E_j: all clinch events (i, l) of buyers adjacent to j; r_j(i, l) is the
  // revenue j took from the event (possibly zero).
  struct Event {
    int buyer, iter;
    std::map<int, Rat> rev;  // seller -> clock * xi(E_j)
  };
  std::vector<Event> events;
  for (auto& it : trace.iters) {
    for (auto& cr : it.clinches) {
      if (cr.xi.sum() == 0) continue;
      Event ev{cr.buyer_id, cr.iter, {}};
      for (auto& [e, v] : cr.xi.entries()) ev.rev[pre.edge(e).seller] += cr.clock * v;
      events.push_back(std::move(ev));
    }
  }
  auto adjacent = [&](int buyer, int seller) {
    for (auto& e : pre.edges)
      if (e.buyer == buyer && e.seller == seller) return true;
    return false;
  };
  bool constrained = false;
  Rat alpha;
  for (auto& sj : pre.sellers) {
    for (auto& sj2 : pre.sellers) {
      if (sj.id == sj2.id) continue;
      Rat lhs = 0, shared = 0;
      std::set<int> with_j;  // buyers transacting with j
      for (auto& ev : events) {
        bool in_j = adjacent(ev.buyer, sj.id);
        if (in_j && ev.rev.count(sj.id)) {
          lhs += ev.rev.at(sj.id);
          if (ev.rev.at(sj.id) != 0) with_j.insert(ev.buyer);
        }
        if (in_j && adjacent(ev.buyer, sj2.id) && ev.rev.count(sj2.id))
          shared += ev.rev.at(sj2.id);
      }
      if (shared == 0) continue;
      std::vector<int> ej2j;  // E_{j',j}: j' edges to buyers transacting with j
      for (int e : pre.seller_edge_ids(sj2.id))
        if (with_j.count(pre.edge(e).buyer)) ej2j.push_back(e);
      Rat fj = sj.constraint.eval(pre.seller_edge_ids(sj.id));
      Rat fj2 = sj2.constraint.eval(ej2j);
      Rat scale = fj2 == 0 ? Rat(1) : std::min(Rat(1), Rat(fj / fj2));
      if (scale == 0) continue;
      Rat bound = lhs / (scale * shared);
      if (!constrained || bound < alpha) {
        alpha = bound;
        constrained = true;
      }
    }
  }
  return constrained ? alpha : Rat(1);
}

Market gen_random_market(std::mt19937_64& rng, int max_n, int max_m) {
  auto uni = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  Market m;
  int n = max_n > 0 ? uni(1, max_n) : 0;
  int sm = max_m > 0 ? uni(1, max_m) : 0;
  for (int i = 1; i <= n; ++i) {
    Buyer b;
    b.id = i;
    b.bid = uni(0, 8);
    b.valuation = b.bid;
    b.budget = ExtRat(Rat(uni(1, 8)));
    m.buyers.push_back(b);
  }
  int next_edge = 0;
  for (int j = 0; j < sm; ++j) {
    Seller s;
    s.id = 101 + j;
    s.reserve = uni(0, 2);
    std::vector<int> ej;
    for (int i = 1; i <= n; ++i)
      if (uni(0, 1)) {
        EdgeRec e{++next_edge, i, s.id};
        m.edges.push_back(e);
        ej.push_back(e.id);
      }
    GroundSet g(ej);
    if (!ej.empty() && uni(0, 3) == 0) {
      s.spec.family = "capacity";
      for (size_t k = 0; k < ej.size(); ++k) s.spec.caps.push_back(uni(1, 8));
    } else {
      s.spec.family = "stock";
      s.spec.stock = uni(1, 8);
    }
    s.constraint = build_constraint(s.spec, g);
    m.sellers.push_back(s);
  }
  m.validate();
  return m;
}

AuditReport audit_run(const Market& m, const Rat& eps, const ClinchRule& rule,
                      bool with_icb, bool with_po, bool with_equivalence) {
  AuditReport rep;
  MechanismResult res = mechanism2(m, eps, rule);
  rep.irb = check_irb(res.alloc, m);
  rep.irs = check_irs(res.alloc, m);
  rep.sbb = check_sbb(res.alloc);
  rep.alpha = envy_alpha(res.trace, res.preprocessed);
  if (with_icb) rep.icb = check_icb_empirical(m, eps, rule);
  if (with_po && m.edges.size() <= 4)
    rep.po = check_po_exhaustive(res.alloc, m, Rat(1) / 8);
  if (with_equivalence) rep.equivalence = check_equivalence(m, eps, rule);
  return rep;
}

}  // namespace pca
