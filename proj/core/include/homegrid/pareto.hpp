#pragma once

#include "homegrid/bb.hpp"
#include "homegrid/scenario.hpp"
#include "homegrid/solution.hpp"

#include <limits>
#include <vector>

namespace homegrid {

// Phase 1 of the trading workflow: every household solved stand-alone. The
// per-household total cost is the ceiling that household will accept in the
// traded model; a household that times out with an incumbent still yields a
// valid (achieved) ceiling.
struct NoTradeBounds {
  std::vector<Solution> solutions;  // one per household
  std::vector<double> costs;        // recomputed energy + delay cost; NaN when unsolved

  bool all_usable() const {
    for (const Solution& s : solutions)
      if (s.status != SolveStatus::Optimal && s.status != SolveStatus::TimeoutWithIncumbent)
        return false;
    return !solutions.empty();
  }
};

NoTradeBounds compute_no_trade_bounds(const Scenario& s, const SolverOptions& opt = {});

struct HouseholdCost {
  double energy = 0.0;
  double disutility = 0.0;
  double total = 0.0;
};

struct ParetoOptions {
  SolverOptions solver;
  // With ceilings on, no household may end up above its stand-alone cost; with
  // them off the combined cost is minimized unconditionally (some households
  // may be exploited, which is the point of keeping the flag available).
  bool enforce_cost_ceilings = true;
  // Experimental: subtract this from every ceiling to force strict improvement.
  double ceiling_shrink = 0.0;
};

struct ParetoResult {
  std::vector<double> no_trade_costs;
  std::vector<SolveStatus> no_trade_status;
  std::vector<SolveStats> no_trade_stats;
  Solution traded;
  std::vector<HouseholdCost> household_costs;  // recomputed from the assignment
  std::vector<double> micro_prices;            // market price per slot
  std::vector<double> ceilings_used;           // empty when ceilings were off
  double total = std::numeric_limits<double>::quiet_NaN();
  int infeasible_household = -1;  // set when phase 1 proves a household infeasible
};

// Two-phase workflow: stand-alone bounds, then combined minimization under the
// per-household ceilings. Throws std::runtime_error if the traded model comes
// back infeasible or worse than the concatenated stand-alone solutions while
// ceilings are intact - both would mean a solver defect, not a bad instance.
ParetoResult solve_pareto(const Scenario& s, const ParetoOptions& opt = {});

struct HouseholdVerification {
  double bound_excess = 0.0;       // max(0, realized total - stand-alone cost)
  double balance_residual = 0.0;   // worst energy-balance row residual
  double storage_violation = 0.0;  // worst storage carry/level violation
};

struct ParetoVerification {
  std::vector<HouseholdVerification> households;
  std::vector<double> trade_residual;    // per slot |sum of traded energy|
  std::vector<double> payment_residual;  // per slot |sum of price * traded energy|
  double worst = 0.0;
  bool pass = false;  // everything within 1e-6
};

// Recomputes every acceptability condition from the raw assignment: nothing is
// trusted from the solver. `s` must be the scenario the result was produced from.
ParetoVerification verify_pareto(const ParetoResult& r, const Scenario& s);

}  // namespace homegrid
