#pragma once

#include "homegrid/lp.hpp"
#include "homegrid/model.hpp"

#include <vector>

namespace homegrid {

// Bound override for one variable, used by branch-and-bound nodes. Overrides
// may only tighten the model's own bounds; a widening override is a fault.
struct BoundOverride {
  int var = -1;
  double lower = 0.0;
  double upper = 0.0;
};

struct RelaxedModel {
  LpInstance lp;
  // Product variables are appended after the model's own variables: the w for
  // bilinear term i has id product_offset + i.
  int product_offset = 0;
};

// Linear relaxation of a model instance: integrality dropped, and every
// bilinear product a*b replaced by a fresh variable w bounded by the product's
// range over the current factor box and tied to a and b by the four-row
// convex-hull envelope. Throws std::invalid_argument when an override widens a
// bound or a bilinear factor is unbounded.
RelaxedModel relax(const ModelInstance& m, const std::vector<BoundOverride>& overrides = {});

}  // namespace homegrid
