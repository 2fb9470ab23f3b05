#pragma once

#include "homegrid/model.hpp"

#include <vector>

namespace homegrid {

// Result of re-checking an assignment directly against a ModelInstance. Row
// activities include the true products of any bilinear terms, so this is a
// nonlinear feasibility check that does not trust envelope variables.
struct AssignmentCheck {
  double max_row_residual = 0.0;
  double max_bound_violation = 0.0;
  double max_integrality_gap = 0.0;
  int worst_row = -1;  // row index attaining max_row_residual, -1 if none

  bool within(double tol) const {
    return max_row_residual <= tol && max_bound_violation <= tol && max_integrality_gap <= tol;
  }
};

AssignmentCheck check_assignment(const ModelInstance& m, const std::vector<double>& x);

}  // namespace homegrid
