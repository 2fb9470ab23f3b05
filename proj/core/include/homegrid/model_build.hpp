#pragma once

#include "homegrid/model.hpp"
#include "homegrid/scenario.hpp"

namespace homegrid {

// Single-household scheduling model: the household covers its loads from grid,
// storage and its own renewables, with no neighborhood trading. Minimizes grid
// cost plus delay disutility. Throws std::invalid_argument on scenarios that fail
// validate_scenario(), on out-of-range household indices, and on appliances with
// more than one pending request (expand_virtual_appliances first).
ModelInstance build_no_trade_model(const Scenario& s, int household);

// All households plus the neighborhood market: per-slot trades net to zero, a
// shared per-slot clearing price is bounded by the grid price, and each household's
// realized cost (grid + market payments + disutility) is capped by `cost_ceilings`.
// The ceiling rows carry one price*trade product per household and slot; these are
// the model's only bilinear terms. Ceilings must be finite (throws otherwise).
ModelInstance build_unified_model(const Scenario& s, const std::vector<double>& cost_ceilings);

// Same trading model without the per-household cost ceilings (and therefore with no
// bilinear terms): minimizes total cost alone, leaving the cost split unconstrained.
ModelInstance build_unified_model(const Scenario& s);

}  // namespace homegrid
