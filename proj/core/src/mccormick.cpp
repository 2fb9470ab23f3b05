#include "homegrid/mccormick.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace homegrid {

static void require_box(const FactorBox& box) {
  if (!std::isfinite(box.a_lo) || !std::isfinite(box.a_hi) || !std::isfinite(box.b_lo) ||
      !std::isfinite(box.b_hi))
    throw std::invalid_argument("product envelope requires finite factor bounds");
  if (box.a_lo > box.a_hi || box.b_lo > box.b_hi)
    throw std::invalid_argument("product envelope given an inverted factor box");
}

std::array<LpRow, 4> mccormick_rows(int w, int a, int b, const FactorBox& box) {
  require_box(box);
  const auto row = [&](double ca, double cb, double cw, double rhs) {
    LpRow r;
    r.terms = {{a, ca}, {b, cb}, {w, cw}};
    r.rel = Relation::Le;
    r.rhs = rhs;
    return r;
  };
  return {
      // w >= a_lo*b + b_lo*a - a_lo*b_lo
      row(box.b_lo, box.a_lo, -1.0, box.a_lo * box.b_lo),
      // w >= a_hi*b + b_hi*a - a_hi*b_hi
      row(box.b_hi, box.a_hi, -1.0, box.a_hi * box.b_hi),
      // w <= a_hi*b + b_lo*a - a_hi*b_lo
      row(-box.b_lo, -box.a_hi, 1.0, -box.a_hi * box.b_lo),
      // w <= a_lo*b + b_hi*a - a_lo*b_hi
      row(-box.b_hi, -box.a_lo, 1.0, -box.a_lo * box.b_hi),
  };
}

std::pair<double, double> product_range(const FactorBox& box) {
  require_box(box);
  const double c[4] = {box.a_lo * box.b_lo, box.a_lo * box.b_hi, box.a_hi * box.b_lo,
                       box.a_hi * box.b_hi};
  return {*std::min_element(c, c + 4), *std::max_element(c, c + 4)};
}

}  // namespace homegrid
