#pragma once

#include "homegrid/scenario.hpp"
#include "homegrid/solution.hpp"

#include <vector>

namespace homegrid {

// Brute-force reference solver for tiny instances. Correctness over speed: it
// enumerates schedules, charge patterns, end slots, and (for the traded model)
// a grid of market price levels, rejecting infeasible combinations directly
// from the constraint definitions and solving a small residual LP for the
// continuous variables. Shares nothing with the branch-and-bound solver except
// the LP engine.
struct OracleOptions {
  // Refuses when the product of per-dimension choice counts (schedules per
  // appliance times charge-flag masks) exceeds 2^max_booleans. Hard cap 20.
  int max_booleans = 14;
  // Market price levels per slot: {0, 1/(G-1), ..., 1} times the grid price.
  int price_levels = 5;
};

// Exhaustive optimum of one household's stand-alone scheduling problem.
// Returns status Infeasible when no combination satisfies the constraints.
// The assignment is left empty: only the objective is meaningful.
Solution enumerate_no_trade(const Scenario& s, int household, const OracleOptions& opt = {});

// Exhaustive upper bound for the traded model over all households, with market
// prices restricted to the level grid. `cost_ceilings` is either empty (no
// per-household cost caps) or one cap per household. The true optimum is never
// above the returned value by more than LP tolerance.
Solution enumerate_unified(const Scenario& s, const std::vector<double>& cost_ceilings,
                           const OracleOptions& opt = {});

}  // namespace homegrid
