#include "homegrid/check.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace homegrid {

AssignmentCheck check_assignment(const ModelInstance& m, const std::vector<double>& x) {
  if (x.size() != m.variables.size())
    throw std::invalid_argument("assignment size does not match variable count");

  AssignmentCheck c;

  for (std::size_t i = 0; i < m.variables.size(); ++i) {
    const Variable& v = m.variables[i];
    double viol = std::max(v.lower - x[i], x[i] - v.upper);
    c.max_bound_violation = std::max(c.max_bound_violation, std::max(viol, 0.0));
    if (v.kind != VarKind::Continuous)
      c.max_integrality_gap = std::max(c.max_integrality_gap, std::fabs(x[i] - std::round(x[i])));
  }

  std::vector<double> activity(m.rows.size(), 0.0);
  for (std::size_t r = 0; r < m.rows.size(); ++r)
    for (const auto& [id, coeff] : m.rows[r].terms)
      activity[r] += coeff * x[static_cast<std::size_t>(id)];
  for (const BilinearTerm& t : m.bilinear_terms)
    if (t.row >= 0)
      activity[static_cast<std::size_t>(t.row)] +=
          t.coeff * x[static_cast<std::size_t>(t.a)] * x[static_cast<std::size_t>(t.b)];

  for (std::size_t r = 0; r < m.rows.size(); ++r) {
    const LinearRow& row = m.rows[r];
    double resid = 0.0;
    switch (row.rel) {
      case Relation::Le: resid = std::max(0.0, activity[r] - row.rhs); break;
      case Relation::Ge: resid = std::max(0.0, row.rhs - activity[r]); break;
      case Relation::Eq: resid = std::fabs(activity[r] - row.rhs); break;
    }
    if (resid > c.max_row_residual) {
      c.max_row_residual = resid;
      c.worst_row = static_cast<int>(r);
    }
  }

  return c;
}

}  // namespace homegrid
