#pragma once

#include "homegrid/model.hpp"

#include <cstdint>
#include <vector>

namespace homegrid {

struct LpVar {
  double lower = 0.0;
  double upper = 0.0;  // may be +inf; lower may be -inf
};

struct LpRow {
  std::vector<std::pair<int, double>> terms;
  Relation rel = Relation::Eq;
  double rhs = 0.0;
};

struct LpInstance {
  std::vector<LpVar> vars;
  std::vector<LpRow> rows;
  std::vector<std::pair<int, double>> objective;  // minimized
  double objective_offset = 0.0;
};

enum class LpStatus : std::uint8_t { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;  // basic solution when Optimal (also a ray start when Unbounded: empty)
  double objective = 0.0;
  std::int64_t iterations = 0;
};

struct SimplexOptions {
  double feas_tol = 1e-8;          // bound/row feasibility
  double opt_tol = 1e-9;           // reduced-cost optimality
  int refactor_interval = 50;      // pivots between basis refactorizations
  std::int64_t max_iterations = 1000000;
};

// Bounded-variable two-phase primal simplex with a dense LU basis factorization.
// Deterministic for identical input. Throws std::invalid_argument on non-finite
// coefficients and std::runtime_error on numerical breakdown (never returns a
// wrong status silently).
LpResult solve_lp(const LpInstance& lp, const SimplexOptions& opt = {});

}  // namespace homegrid
