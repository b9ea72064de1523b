#include "pca/mechanisms.hpp"

#include <stdexcept>

namespace pca {

ExtRat demand(const Buyer& b, const Rat& c, const Rat& paid, const Rat& goods) {
  if (c >= b.bid) return ExtRat(Rat(0));
  if (b.budget_curve) return b.budget_curve->max_affordable(paid, c, goods);
  if (b.budget.is_infinite()) return ExtRat::infinity();
  Rat left = b.budget.value() - paid;
  if (left <= 0) return ExtRat(Rat(0));
  if (c == 0) return ExtRat::infinity();
  return ExtRat(left / c);
}

void check_epsilon(const Market& m, const Rat& eps) {
  if (eps <= 0) throw std::invalid_argument("epsilon must be positive");
  for (auto& b : m.buyers) {
    if (b.is_virtual) continue;  // virtual bids equal reserves, checked below
    Rat q = b.bid / eps;
    if (denominator(q) != 1)
      throw std::invalid_argument("bid of buyer " + std::to_string(b.id) +
                                  " is not a multiple of epsilon");
  }
  for (auto& s : m.sellers) {
    Rat q = s.reserve / eps;
    if (denominator(q) != 1)
      throw std::invalid_argument("reserve of seller " + std::to_string(s.id) +
                                  " is not a multiple of epsilon");
  }
}

namespace {

long iteration_guard(const std::vector<Buyer>& buyers, const Rat& eps) {
  // every v'_i/eps full clock cycles all demands are provably zero
  Int steps = 0;
  for (auto& b : buyers) {
    Rat q = b.bid / eps;
    Int k = numerator(q) / denominator(q) + 1;
    if (k > steps) steps = k;
  }
  long n = static_cast<long>(buyers.size());
  return (steps.convert_to<long>() + 2) * n + 8;
}

bool all_zero(const std::map<int, ExtRat>& d) {
  for (auto& [i, v] : d)
    if (v != ExtRat(Rat(0))) return false;
  return true;
}

}  // namespace

Algo1Result run_algorithm1(const SubmodularOracle& g, const std::vector<Buyer>& buyers,
                           const Rat& eps) {
  if (eps <= 0) throw std::invalid_argument("epsilon must be positive");
  for (auto& b : buyers)
    if (denominator(Rat(b.bid / eps)) != 1)
      throw std::invalid_argument("bid of buyer " + std::to_string(b.id) +
                                  " is not a multiple of epsilon");
  Algo1Result res;
  std::map<int, Rat> c;
  std::map<int, ExtRat> d;
  for (auto& b : buyers) {
    res.y[b.id] = 0;
    res.pi[b.id] = 0;
    c[b.id] = 0;
    d[b.id] = demand(b, Rat(0), Rat(0), Rat(0));
  }
  if (buyers.empty()) return res;
  size_t l = 0;
  long guard = iteration_guard(buyers, eps);
  std::vector<int> all_ids = g.ground().elems();
  while (!all_zero(d)) {
    if (--guard < 0) throw std::logic_error("algorithm 1 exceeded iteration bound");
    Vec y_vec;
    for (auto& [i, v] : res.y) y_vec.set(i, v);
    Rat total = g_wd(g, y_vec, d, all_ids);
    std::map<int, Rat> zeta;
    for (auto& b : buyers) {
      std::vector<int> rest;
      for (int k : all_ids)
        if (k != b.id) rest.push_back(k);
      zeta[b.id] = total - g_wd(g, y_vec, d, rest);
    }
    for (auto& b : buyers) {
      res.y[b.id] += zeta[b.id];
      res.pi[b.id] += c[b.id] * zeta[b.id];
    }
    const Buyer& bl = buyers[l];
    c[bl.id] += eps;
    for (auto& b : buyers) d[b.id] = demand(b, c[b.id], res.pi[b.id], res.y[b.id]);
    res.zeta.push_back(std::move(zeta));
    res.bumped.push_back(bl.id);
    l = (l + 1) % buyers.size();
  }
  return res;
}

Algo2Result run_algorithm2(const Market& m, const Rat& eps, const ClinchRule& rule,
                           const ClinchObserver& observer) {
  check_epsilon(m, eps);
  Algo2Result res;
  std::map<int, Rat> c, goods;
  std::map<int, ExtRat> d;
  for (auto& b : m.buyers) {
    res.p[b.id] = 0;
    c[b.id] = 0;
    goods[b.id] = 0;
    d[b.id] = demand(b, Rat(0), Rat(0), Rat(0));
  }
  for (auto& s : m.sellers) res.r[s.id] = 0;
  if (m.buyers.empty()) return res;

  std::mt19937_64 rng(rule.seed);
  size_t l = 0;
  int iter = 0;
  long guard = iteration_guard(m.buyers, eps);
  while (!all_zero(d)) {
    if (--guard < 0) throw std::logic_error("algorithm 2 exceeded iteration bound");
    ++iter;
    IterRecord rec;
    rec.iter = iter;
    rec.clocks = c;
    rec.demands = d;
    for (auto& s : m.sellers) rec.dr[s.id] = 0;
    for (auto& b : m.buyers) {
      RemnantContext ctx(m, res.w, d);
      ClinchPolytope cp = build_clinch_polytope(ctx, b.id);
      Vec xi = max_clinch(cp, m, rule, rng);
      if (observer) observer(ctx, cp, xi);
      Rat got = xi.sum();
      if (got != 0 || !xi.entries().empty()) {
        for (auto& [e, v] : xi.entries()) {
          res.w.add(e, v);
          rec.dr[m.edge(e).seller] += c[b.id] * v;
          res.r[m.edge(e).seller] += c[b.id] * v;
        }
        goods[b.id] += got;
        res.p[b.id] += c[b.id] * got;
        ClinchRecord cr;
        cr.iter = iter;
        cr.buyer_id = b.id;
        cr.clock = c[b.id];
        cr.xi = xi;
        rec.clinches.push_back(std::move(cr));
      }
      d[b.id] = demand(b, c[b.id], res.p[b.id], goods[b.id]);
    }
    rec.demands_after = d;
    const Buyer& bl = m.buyers[l];
    rec.bumped_buyer = bl.id;
    c[bl.id] += eps;
    d[bl.id] = demand(bl, c[bl.id], res.p[bl.id], goods[bl.id]);
    l = (l + 1) % m.buyers.size();
    for (auto& s : m.sellers) {
      Rat sold = 0;
      for (int e : m.seller_edge_ids(s.id)) sold += res.w[e];
      rec.stocks_end[s.id] = s.constraint.eval(m.seller_edge_ids(s.id)) - sold;
    }
    res.trace.iters.push_back(std::move(rec));
  }
  return res;
}

RevenuePolicy RevenuePolicy::parse(const std::string& spec) {
  RevenuePolicy p;
  if (spec == "from_mechanism2") {
    p.kind = from_mechanism2;
    return p;
  }
  if (spec == "proportional") {
    p.kind = proportional;
    return p;
  }
  if (spec.rfind("explicit:", 0) == 0) {
    p.kind = explicit_split;
    std::string rest = spec.substr(9);
    size_t pos = 0;
    while (pos < rest.size()) {
      size_t comma = rest.find(',', pos);
      std::string item = rest.substr(pos, comma == std::string::npos ? comma : comma - pos);
      size_t eq = item.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("explicit policy expects seller=value pairs");
      p.explicit_r[std::stoi(item.substr(0, eq))] = parse_rat(item.substr(eq + 1));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    return p;
  }
  throw std::invalid_argument("unknown revenue policy: " + spec);
}

MechanismResult mechanism1(const Market& m, const Rat& eps, const ClinchRule& rule,
                           const RevenuePolicy& policy) {
  MechanismResult out;
  out.preprocessed = add_virtual_buyers(m);
  check_epsilon(out.preprocessed, eps);
  SubmodularOracle g = reduce_to_one_sided(out.preprocessed);
  Algo1Result a1 = run_algorithm1(g, out.preprocessed.buyers, eps);
  out.pre_strip.w = recover_transactions(out.preprocessed, a1.y);
  out.pre_strip.p = a1.pi;

  // floors from (IRs): r_j >= rho_j f_j(E_j) - rho_j y_{n+j} + p_{n+j}
  std::map<int, Rat> floor, stock;
  Rat total_p = 0, total_floor = 0;
  for (auto& [i, v] : a1.pi) total_p += v;
  for (auto& s : m.sellers) {
    const Buyer* vb = nullptr;
    for (auto& b : out.preprocessed.buyers)
      if (b.is_virtual && b.virtual_seller == s.id) vb = &b;
    stock[s.id] = s.constraint.eval(m.seller_edge_ids(s.id));
    floor[s.id] = s.reserve * stock[s.id] - s.reserve * a1.y.at(vb->id) + a1.pi.at(vb->id);
    total_floor += floor[s.id];
  }

  switch (policy.kind) {
    case RevenuePolicy::from_mechanism2: {
      Algo2Result a2 = run_algorithm2(out.preprocessed, eps, rule);
      out.pre_strip.r = a2.r;
      break;
    }
    case RevenuePolicy::proportional: {
      Rat surplus = total_p - total_floor;
      Rat wsum = 0;
      std::map<int, Rat> weight;
      for (auto& s : m.sellers) {
        weight[s.id] = floor[s.id] + stock[s.id];
        wsum += weight[s.id];
      }
      for (auto& s : m.sellers) {
        Rat share = wsum == 0 ? surplus / Rat(static_cast<int>(m.sellers.size()))
                              : surplus * weight[s.id] / wsum;
        out.pre_strip.r[s.id] = floor[s.id] + share;
      }
      break;
    }
    case RevenuePolicy::explicit_split: {
      Rat total_r = 0;
      for (auto& s : m.sellers) {
        if (!policy.explicit_r.count(s.id))
          throw std::invalid_argument("explicit policy missing seller " +
                                      std::to_string(s.id));
        Rat rj = policy.explicit_r.at(s.id);
        if (rj < floor[s.id])
          throw std::invalid_argument("explicit revenue for seller " +
                                      std::to_string(s.id) +
                                      " violates seller rationality floor " +
                                      format_rat(floor[s.id]));
        out.pre_strip.r[s.id] = rj;
        total_r += rj;
      }
      if (total_r != total_p)
        throw std::invalid_argument("explicit revenues do not balance payments (" +
                                    format_rat(total_r) + " vs " + format_rat(total_p) + ")");
      break;
    }
  }
  out.alloc = strip_virtual(out.pre_strip, out.preprocessed);
  for (auto& b : out.preprocessed.buyers)
    if (b.is_virtual) out.unsold[b.virtual_seller] = a1.y.at(b.id);
  return out;
}

MechanismResult mechanism2(const Market& m, const Rat& eps, const ClinchRule& rule,
                           const ClinchObserver& observer) {
  MechanismResult out;
  out.preprocessed = add_virtual_buyers(m);
  Algo2Result a2 = run_algorithm2(out.preprocessed, eps, rule, observer);
  out.pre_strip.w = a2.w;
  out.pre_strip.p = a2.p;
  out.pre_strip.r = a2.r;
  out.trace = a2.trace;
  out.alloc = strip_virtual(out.pre_strip, out.preprocessed);
  for (auto& b : out.preprocessed.buyers) {
    if (b.is_virtual) {
      Rat got = 0;
      for (int e : out.preprocessed.buyer_edge_ids(b.id)) got += a2.w[e];
      out.unsold[b.virtual_seller] = got;
    }
  }
  return out;
}

}  // namespace pca
