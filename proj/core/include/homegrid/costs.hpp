#pragma once

#include "homegrid/model.hpp"
#include "homegrid/scenario.hpp"

#include <vector>

namespace homegrid {

// Realized energy cost of one household under the assignment `x`: grid purchases at
// grid prices plus (when the model trades) net market purchases at the clearing
// price. `s` must be the scenario the model was built from.
double energy_cost(const ModelInstance& m, const std::vector<double>& x, const Scenario& s,
                   int household);

// Delay penalty: per appliance, disutility_factor times how far the end slot sits
// past the earliest possible finish.
double disutility_cost(const ModelInstance& m, const std::vector<double>& x, const Scenario& s,
                       int household);

// Storage level per slot recomputed from the charge flags and draws alone, i.e.
// without looking at the model's level variables. Useful as an independent check.
std::vector<double> storage_trajectory(const ModelInstance& m, const std::vector<double>& x,
                                       const Scenario& s, int household);

// Linear objective plus any bilinear objective terms evaluated at `x`.
double objective_value(const ModelInstance& m, const std::vector<double>& x);

}  // namespace homegrid
