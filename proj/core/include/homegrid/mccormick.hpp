#pragma once

#include "homegrid/lp.hpp"

#include <array>
#include <utility>

namespace homegrid {

// Bounding box for the two factors of one product term.
struct FactorBox {
  double a_lo = 0.0;
  double a_hi = 0.0;
  double b_lo = 0.0;
  double b_hi = 0.0;
};

// Convex-hull linearization of w = a*b over the box: two underestimates and two
// overestimates. Exact at the box corners, and exact everywhere when either
// factor's interval has zero width. Throws std::invalid_argument when the box
// has a non-finite or inverted side.
std::array<LpRow, 4> mccormick_rows(int w, int a, int b, const FactorBox& box);

// Range of a*b over the box: (min, max) of the four corner products.
std::pair<double, double> product_range(const FactorBox& box);

}  // namespace homegrid
