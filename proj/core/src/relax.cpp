#include "homegrid/relax.hpp"

#include "homegrid/mccormick.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace homegrid {

RelaxedModel relax(const ModelInstance& m, const std::vector<BoundOverride>& overrides) {
  const int n = static_cast<int>(m.variables.size());
  RelaxedModel out;
  out.lp.vars.reserve(m.variables.size() + m.bilinear_terms.size());
  for (const Variable& v : m.variables) out.lp.vars.push_back({v.lower, v.upper});

  constexpr double kSlop = 1e-9;
  for (const BoundOverride& o : overrides) {
    if (o.var < 0 || o.var >= n)
      throw std::invalid_argument("bound override references unknown variable " +
                                  std::to_string(o.var));
    const Variable& orig = m.variables[o.var];
    if (o.lower < orig.lower - kSlop || o.upper > orig.upper + kSlop)
      throw std::invalid_argument("bound override widens variable " + std::to_string(o.var));
    out.lp.vars[o.var].lower = o.lower;
    out.lp.vars[o.var].upper = o.upper;
  }

  out.lp.rows.reserve(m.rows.size() + 4 * m.bilinear_terms.size());
  for (const LinearRow& r : m.rows) out.lp.rows.push_back({r.terms, r.rel, r.rhs});
  out.lp.objective = m.objective;
  out.lp.objective_offset = m.objective_offset;

  out.product_offset = n;
  for (std::size_t i = 0; i < m.bilinear_terms.size(); ++i) {
    const BilinearTerm& t = m.bilinear_terms[i];
    if (t.a < 0 || t.a >= n || t.b < 0 || t.b >= n)
      throw std::invalid_argument("bilinear term references unknown variable");
    if (t.row < -1 || t.row >= static_cast<int>(m.rows.size()))
      throw std::invalid_argument("bilinear term references unknown row");
    const LpVar& a = out.lp.vars[t.a];
    const LpVar& b = out.lp.vars[t.b];
    FactorBox box{a.lower, a.upper, b.lower, b.upper};
    if (!std::isfinite(box.a_lo) || !std::isfinite(box.a_hi) || !std::isfinite(box.b_lo) ||
        !std::isfinite(box.b_hi))
      throw std::invalid_argument("bilinear factor has an unbounded domain");

    const int w = static_cast<int>(out.lp.vars.size());
    const auto [w_lo, w_hi] = product_range(box);
    out.lp.vars.push_back({w_lo, w_hi});
    for (LpRow& row : mccormick_rows(w, t.a, t.b, box)) out.lp.rows.push_back(std::move(row));

    if (t.row < 0) out.lp.objective.emplace_back(w, t.coeff);
    else out.lp.rows[t.row].terms.emplace_back(w, t.coeff);
  }
  return out;
}

}  // namespace homegrid
