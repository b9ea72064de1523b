#include <fstream>
#include <iostream>
#include <random>

#include "CLI11.hpp"
#include "json.hpp"
#include "pca/ad_allocation.hpp"
#include "pca/audit.hpp"
#include "pca/market_io.hpp"
#include "pca/trace_format.hpp"

using namespace pca;

namespace {

void print_allocation(const MechanismResult& res, const Market& m) {
  std::cout << allocation_to_json(res.alloc, res.preprocessed);
  nlohmann::json extra;
  for (auto& [j, v] : res.unsold)
    extra["unsold"][std::to_string(j)] = {{"value", format_rat(v)},
                                          {"approx", format_decimal(v)}};
  for (auto& b : m.buyers) {
    if (b.is_virtual) continue;
    Rat goods = 0;
    for (int e : m.buyer_edge_ids(b.id)) goods += res.alloc.w[e];
    extra["goods"][std::to_string(b.id)] = format_rat(goods);
  }
  std::cout << extra.dump(2) << "\n";
}

void print_verdict(const std::string& name, const Verdict& v, int& exit_code) {
  std::cout << name << ": " << (v.ok ? "ok" : "FAIL " + v.witness) << "\n";
  if (!v.ok) exit_code = 1;
}

int cmd_run(const std::string& market_path, int mechanism, const std::string& eps_s,
            const std::string& rule_s, const std::string& policy_s,
            const std::string& trace_fmt, bool audit_flag) {
  Market m = load_market(market_path);
  Rat eps = parse_rat(eps_s);
  ClinchRule rule = ClinchRule::parse(rule_s);
  MechanismResult res;
  if (mechanism == 1)
    res = mechanism1(m, eps, rule, RevenuePolicy::parse(policy_s));
  else
    res = mechanism2(m, eps, rule);
  if (trace_fmt == "table")
    std::cout << trace_table(res.trace, res.preprocessed);
  else if (trace_fmt == "json")
    std::cout << trace_json(res.trace, res.preprocessed);
  print_allocation(res, m);
  int exit_code = 0;
  if (audit_flag) {
    AuditReport rep = audit_run(m, eps, rule);
    print_verdict("irb", rep.irb, exit_code);
    print_verdict("irs", rep.irs, exit_code);
    print_verdict("sbb", rep.sbb, exit_code);
    if (rep.alpha)
      std::cout << "envy_alpha: " << format_rat(*rep.alpha) << " ("
                << format_decimal(*rep.alpha, 3) << ")\n";
  }
  return exit_code;
}

int cmd_slot(const std::string& market_path, const std::string& alloc_path,
             int seller_id, const std::string& mode) {
  Market m = load_market(market_path);
  Allocation a = load_allocation(alloc_path, m);
  const Seller& s = m.seller(seller_id);
  if (mode == "page") {
    if (s.spec.family != "page_based" || s.spec.page_slots.size() != 1)
      throw std::invalid_argument("page mode needs a single-page page_based seller");
    int t = s.spec.page_slots[0];
    std::map<int, Rat> q;
    Rat total = 0;
    for (int e : m.seller_edge_ids(seller_id)) {
      q[m.edge(e).buyer] = a.w[e];
      total += a.w[e];
    }
    // dummy buyers (negative ids) pad the impressions up to the slot count
    int dummy = 0;
    Rat missing = Rat(t) - total;
    while (missing > 0) {
      Rat take = std::min(missing, Rat(1));
      q[--dummy] = take;
      missing -= take;
    }
    SlotDistribution d = page_distribution(q, t);
    for (auto& e : d.support) {
      std::cout << format_rat(e.prob) << "  {";
      bool first = true;
      for (int i : e.members) {
        if (i < 0) continue;  // dummy
        std::cout << (first ? "" : ", ") << i;
        first = false;
      }
      std::cout << "}\n";
    }
    return 0;
  }
  if (mode == "quality") {
    if (s.spec.family != "quality_based")
      throw std::invalid_argument("quality mode needs a quality_based seller");
    std::map<int, Rat> w;
    for (int e : m.seller_edge_ids(seller_id)) w[m.edge(e).buyer] = a.w[e];
    SlotDistribution d = quality_decompose(w, s.spec.beta);
    for (auto& e : d.support) {
      std::cout << format_rat(e.prob) << "  {";
      bool first = true;
      for (auto& [i, slot] : e.slot) {
        std::cout << (first ? "" : ", ") << i << "->slot" << slot;
        first = false;
      }
      std::cout << "}\n";
    }
    return 0;
  }
  throw std::invalid_argument("mode must be page or quality");
}

int cmd_audit(const std::string& market_path, const std::string& suite,
              uint64_t seed, int count) {
  int exit_code = 0;
  bool icb = suite == "icb" || suite == "all";
  bool equiv = suite == "equivalence" || suite == "all";
  if (!market_path.empty()) {
    Market m = load_market(market_path);
    AuditReport rep = audit_run(m, 1, ClinchRule::parse("midpoint"), icb, false, equiv);
    print_verdict("irb", rep.irb, exit_code);
    print_verdict("irs", rep.irs, exit_code);
    print_verdict("sbb", rep.sbb, exit_code);
    if (rep.icb) print_verdict("icb", *rep.icb, exit_code);
    if (rep.equivalence) print_verdict("equivalence", *rep.equivalence, exit_code);
    return exit_code;
  }
  std::mt19937_64 rng(seed);
  for (int k = 0; k < count; ++k) {
    Market m = gen_random_market(rng, 3, 3);
    ClinchRule rule = ClinchRule::parse("random:" + std::to_string(seed + k));
    AuditReport rep = audit_run(m, 1, rule, icb, false, equiv);
    std::string tag = "instance " + std::to_string(k);
    if (!rep.all_ok()) {
      exit_code = 1;
      std::cout << tag << ": FAIL";
      if (!rep.irb.ok) std::cout << " irb(" << rep.irb.witness << ")";
      if (!rep.irs.ok) std::cout << " irs(" << rep.irs.witness << ")";
      if (!rep.sbb.ok) std::cout << " sbb(" << rep.sbb.witness << ")";
      if (rep.icb && !rep.icb->ok) std::cout << " icb(" << rep.icb->witness << ")";
      if (rep.equivalence && !rep.equivalence->ok)
        std::cout << " equivalence(" << rep.equivalence->witness << ")";
      std::cout << "\n";
    }
  }
  std::cout << (exit_code ? "suite FAILED" : "suite ok (" + std::to_string(count) +
                                                 " instances)")
            << "\n";
  return exit_code;
}

int cmd_gen(uint64_t seed, int max_n, int max_m, const std::string& out) {
  std::mt19937_64 rng(seed);
  Market m = gen_random_market(rng, max_n, max_m);
  if (out.empty())
    std::cout << market_to_json(m);
  else
    save_market(m, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polyhedral clinching auctions for two-sided markets"};
  app.require_subcommand(1);

  std::string market_path, alloc_path, eps_s = "1", rule_s = "midpoint";
  std::string policy_s = "from_mechanism2", trace_fmt = "none", suite = "all", out;
  int mechanism = 2, seller_id = 0, count = 100, max_n = 3, max_m = 3;
  uint64_t seed = 1;
  bool audit_flag = false;

  auto* run = app.add_subcommand("run", "run a mechanism on a market file");
  run->add_option("--market", market_path)->required();
  run->add_option("--mechanism", mechanism)->check(CLI::IsMember({1, 2}));
  run->add_option("--epsilon", eps_s);
  run->add_option("--rule", rule_s);
  run->add_option("--revenue-policy", policy_s);
  run->add_option("--trace", trace_fmt)->check(CLI::IsMember({"table", "json", "none"}));
  run->add_flag("--audit", audit_flag);

  auto* slot = app.add_subcommand("slot", "round an allocation into slot assignments");
  slot->add_option("--market", market_path)->required();
  slot->add_option("--allocation", alloc_path)->required();
  slot->add_option("--seller", seller_id)->required();
  std::string mode = "page";
  slot->add_option("--mode", mode)->check(CLI::IsMember({"page", "quality"}));

  auto* audit = app.add_subcommand("audit", "property suites on random or given markets");
  audit->add_option("--market", market_path);
  audit->add_option("--suite", suite)->check(CLI::IsMember({"icb", "equivalence", "all"}));
  audit->add_option("--seed", seed);
  audit->add_option("--count", count);

  auto* gen = app.add_subcommand("gen", "generate a random market file");
  gen->add_option("--seed", seed);
  gen->add_option("--max-buyers", max_n);
  gen->add_option("--max-sellers", max_m);
  gen->add_option("--out", out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return cmd_run(market_path, mechanism, eps_s, rule_s, policy_s, trace_fmt,
                     audit_flag);
    if (slot->parsed()) return cmd_slot(market_path, alloc_path, seller_id, mode);
    if (audit->parsed())
      return cmd_audit(audit->count("--market") ? market_path : "", suite, seed, count);
    if (gen->parsed()) return cmd_gen(seed, max_n, max_m, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
