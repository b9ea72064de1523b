#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "markets.hpp"
#include "pca/audit.hpp"

using namespace pca;
using pca::testing::two_by_two;
using pca::testing::two_sellers_chain;

namespace {

Market one_by_one() {
  Market m;
  Buyer b;
  b.id = 1;
  b.bid = 2;
  b.valuation = 2;
  b.budget = ExtRat(Rat(4));
  m.buyers.push_back(b);
  Seller s;
  s.id = 101;
  s.reserve = 1;
  s.spec.family = "stock";
  s.spec.stock = 2;
  m.sellers.push_back(s);
  m.edges = {{1, 1, 101}};
  m.sellers[0].constraint = build_constraint(m.sellers[0].spec, GroundSet({1}));
  m.validate();
  return m;
}

}  // namespace

TEST_CASE("basic verdicts on the worked example") {
  Market m = two_by_two();
  MechanismResult res = mechanism2(m, 1, ClinchRule::parse("midpoint"));
  CHECK(check_irb(res.alloc, m).ok);
  CHECK(check_irs(res.alloc, m).ok);
  CHECK(check_sbb(res.alloc).ok);
}

TEST_CASE("violations carry witnesses") {
  Market m = two_by_two();
  MechanismResult res = mechanism2(m, 1, ClinchRule::parse("midpoint"));

  Allocation greedy = res.alloc;
  greedy.p[1] = 100;  // buyer 1 pays more than the goods are worth
  Verdict v = check_irb(greedy, m);
  CHECK_FALSE(v.ok);
  CHECK(v.witness.find("buyer 1") != std::string::npos);

  Allocation cheap = res.alloc;
  cheap.r[102] = 0;  // seller 102 paid below reserve
  Verdict s = check_irs(cheap, m);
  CHECK_FALSE(s.ok);
  CHECK(s.witness.find("seller 102") != std::string::npos);

  CHECK_FALSE(check_sbb(cheap).ok);
}

TEST_CASE("incentive check passes on small instances") {
  CHECK(check_icb_empirical(one_by_one(), 1, ClinchRule::parse("midpoint")).ok);
  CHECK(check_icb_empirical(two_sellers_chain(), 1, ClinchRule::parse("midpoint")).ok);
}

TEST_CASE("pareto check accepts the auction outcome and refutes corruption") {
  Market m = one_by_one();
  MechanismResult res = mechanism2(m, 1, ClinchRule::parse("midpoint"));
  CHECK(check_po_exhaustive(res.alloc, m, Rat(1) / 4).ok);

  // throwing away the trade leaves room for a dominating reallocation
  Allocation wasted = res.alloc;
  for (auto& [e, v] : res.alloc.w.entries()) wasted.w.set(e, 0);
  wasted.p[1] = 0;
  wasted.r[101] = 0;
  Verdict v = check_po_exhaustive(wasted, m, Rat(1) / 4);
  CHECK_FALSE(v.ok);
  CHECK(v.witness.find("dominating") != std::string::npos);
}

TEST_CASE("pareto check rejects oversized instances") {
  Market m = two_by_two();
  Market big = m;
  big.buyers.push_back(big.buyers[0]);
  big.buyers.back().id = 3;
  big.edges.push_back({5, 3, 101});
  Allocation a;
  CHECK_THROWS(check_po_exhaustive(a, big, Rat(1) / 4));
}

TEST_CASE("equivalence of the two auction forms") {
  CHECK(check_equivalence(two_by_two(), 1, ClinchRule::parse("midpoint")).ok);
  CHECK(check_equivalence(two_by_two(), 1, ClinchRule::parse("ordered:102,101")).ok);
  CHECK(check_equivalence(two_sellers_chain(), 1, ClinchRule::parse("midpoint")).ok);
  CHECK(check_equivalence(Market{}, 1, ClinchRule::parse("midpoint")).ok);
}

TEST_CASE("envy bound on the worked example") {
  Market m = two_by_two();
  MechanismResult mid = mechanism2(m, 1, ClinchRule::parse("midpoint"));
  CHECK(envy_alpha(mid.trace, mid.preprocessed) == Rat(40) / 41);
  MechanismResult o1 = mechanism2(m, 1, ClinchRule::parse("ordered:101,102"));
  CHECK(envy_alpha(o1.trace, o1.preprocessed) == Rat(2) / 3);
  MechanismResult o2 = mechanism2(m, 1, ClinchRule::parse("ordered:102,101"));
  CHECK(envy_alpha(o2.trace, o2.preprocessed) == Rat(8) / 11);
}

TEST_CASE("envy bound degenerates to one with a single seller") {
  Market m = one_by_one();
  MechanismResult res = mechanism2(m, 1, ClinchRule::parse("midpoint"));
  CHECK(envy_alpha(res.trace, res.preprocessed) == 1);
}

TEST_CASE("random markets are deterministic in the seed") {
  std::mt19937_64 a(42), b(42), c(43);
  Market ma = gen_random_market(a, 4, 3);
  Market mb = gen_random_market(b, 4, 3);
  CHECK(ma.buyers.size() == mb.buyers.size());
  CHECK(ma.edges.size() == mb.edges.size());
  for (size_t k = 0; k < ma.buyers.size(); ++k) {
    CHECK(ma.buyers[k].bid == mb.buyers[k].bid);
    CHECK(ma.buyers[k].budget == mb.buyers[k].budget);
  }
  CHECK_NOTHROW(ma.validate());
  CHECK_NOTHROW(gen_random_market(c, 4, 3).validate());
}

TEST_CASE("full audit of a truthful run") {
  AuditReport rep = audit_run(two_by_two(), 1, ClinchRule::parse("midpoint"),
                              /*with_icb=*/false, /*with_po=*/false,
                              /*with_equivalence=*/true);
  CHECK(rep.all_ok());
  REQUIRE(rep.alpha.has_value());
  CHECK(*rep.alpha == Rat(40) / 41);

  AuditReport small = audit_run(one_by_one(), 1, ClinchRule::parse("midpoint"),
                                /*with_icb=*/true, /*with_po=*/true,
                                /*with_equivalence=*/true);
  CHECK(small.all_ok());
}
