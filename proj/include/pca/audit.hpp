#pragma once

#include <random>
#include <string>

#include "pca/mechanisms.hpp"

namespace pca {

/// Single property verdict; `witness` names the violating party/deviation
/// whenever ok is false.
struct Verdict {
  bool ok = true;
  std::string witness;
};

struct AuditReport {
  Verdict irb, irs, sbb;
  std::optional<Verdict> icb;
  std::optional<Verdict> po;
  std::optional<Verdict> equivalence;
  std::optional<Rat> alpha;

  bool all_ok() const;
};

// v_i * w(E_i) - p_i >= 0 for every nonvirtual buyer (valuations required).
Verdict check_irb(const Allocation& a, const Market& m);

// r_j >= rho_j * w(E_j) for every seller.
Verdict check_irs(const Allocation& a, const Market& m);

// sum of payments equals sum of revenues, exactly.
Verdict check_sbb(const Allocation& a);

// Reruns the auction once per buyer and per deviating bid (all eps-multiples
// up to 2*v_i) and compares utilities against the truthful run.
Verdict check_icb_empirical(const Market& m, const Rat& eps, const ClinchRule& rule);

// Grid search (step h) over feasible transaction vectors for an allocation
// that Pareto-dominates `a` under the utility model with unsold goods valued
// at the reserve. Refuses instances with more than 4 edges.
Verdict check_po_exhaustive(const Allocation& a, const Market& m, const Rat& h);

// Runs both auction forms and compares per-buyer goods and payments exactly,
// plus per-iteration clinch totals.
Verdict check_equivalence(const Market& m, const Rat& eps, const ClinchRule& rule);

// Largest alpha such that every seller pair (j, j') satisfies the
// supply-scaled revenue-share inequality over the trace's clinch events.
// 1 when no pair imposes a constraint.
Rat envy_alpha(const Trace& trace, const Market& preprocessed);

// Deterministic random instance: up to max_n buyers, max_m sellers, integer
// stocks/budgets/bids <= 8, every bid a multiple of 1, truthful valuations.
Market gen_random_market(std::mt19937_64& rng, int max_n, int max_m);

// Full audit of a truthful mechanism-2 run (with optional slow checks).
AuditReport audit_run(const Market& m, const Rat& eps, const ClinchRule& rule,
                      bool with_icb = false, bool with_po = false,
                      bool with_equivalence = false);

}  // namespace pca
