#include "pca/clinching.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace pca {

ClinchRule ClinchRule::parse(const std::string& spec) {
  ClinchRule r;
  if (spec == "midpoint") {
    r.kind = RuleKind::midpoint;
    return r;
  }
  if (spec.rfind("ordered:", 0) == 0) {
    r.kind = RuleKind::ordered;
    std::stringstream ss(spec.substr(8));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (!tok.empty()) r.seller_order.push_back(std::stoi(tok));
    }
    if (r.seller_order.empty())
      throw std::invalid_argument("ordered rule needs seller ids");
    return r;
  }
  if (spec.rfind("random:", 0) == 0) {
    r.kind = RuleKind::random_order;
    r.seed = std::stoull(spec.substr(7));
    return r;
  }
  throw std::invalid_argument("unknown clinch rule: " + spec);
}

ClinchPolytope build_clinch_polytope(const RemnantContext& ctx, int buyer_id) {
  Mask ei = ctx.buyer_edges(buyer_id);
  Mask rest = ctx.edge_ground().full_mask() & ~ei;
  Rat base = ctx.f_wd(rest);
  GroundSet g(ctx.edge_ground().elems_of(ei));
  RemnantContext c = ctx;
  ClinchPolytope cp;
  cp.buyer_id = buyer_id;
  cp.h = SubmodularOracle(g, [c, g, rest, base](Mask F) {
    Mask full = c.edge_ground().mask_of(g.elems_of(F));
    return c.f_wd(rest | full) - base;
  });
  return cp;
}

Rat clinch_total(const RemnantContext& ctx, int buyer_id) {
  Mask full = ctx.edge_ground().full_mask();
  return ctx.f_wd(full) - ctx.f_wd(full & ~ctx.buyer_edges(buyer_id));
}

namespace {

Vec average(const std::vector<Vec>& pts) {
  Vec sum;
  for (auto& p : pts)
    for (auto& [e, v] : p.entries()) sum.add(e, v);
  Vec out;
  Rat k(static_cast<int>(pts.size()));
  for (auto& [e, v] : sum.entries()) out.set(e, v / k);
  return out;
}

}  // namespace

Vec max_clinch(const ClinchPolytope& cp, const Market& m, const ClinchRule& rule,
               std::mt19937_64& rng) {
  std::vector<int> order = cp.h.ground().elems();
  if (order.empty()) return Vec();
  switch (rule.kind) {
    case RuleKind::ordered: {
      auto rank = [&](int e) {
        int sid = m.edge(e).seller;
        auto it = std::find(rule.seller_order.begin(), rule.seller_order.end(), sid);
        return std::make_pair(
            static_cast<int>(it - rule.seller_order.begin()),
            cp.h.ground().index_of(e));
      };
      std::sort(order.begin(), order.end(),
                [&](int a, int b) { return rank(a) < rank(b); });
      return greedy_base(cp.h, order);
    }
    case RuleKind::random_order:
      std::shuffle(order.begin(), order.end(), rng);
      return greedy_base(cp.h, order);
    case RuleKind::midpoint: {
      std::vector<Vec> pts;
      if (order.size() <= 6) {
        std::sort(order.begin(), order.end());
        do {
          pts.push_back(greedy_base(cp.h, order));
        } while (std::next_permutation(order.begin(), order.end()));
      } else {
        for (int k = 0; k < 720; ++k) {
          std::shuffle(order.begin(), order.end(), rng);
          pts.push_back(greedy_base(cp.h, order));
        }
      }
      return average(pts);
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace pca
