#pragma once

#include <cstdint>
#include <limits>
#include <vector>

namespace homegrid {

enum class SolveStatus : std::uint8_t {
  Optimal,
  Infeasible,
  TimeoutWithIncumbent,
  TimeoutNoIncumbent,
};

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::TimeoutWithIncumbent: return "timeout-with-incumbent";
    case SolveStatus::TimeoutNoIncumbent: return "timeout-no-incumbent";
  }
  return "unknown";
}

struct SolveStats {
  std::int64_t nodes = 0;
  std::int64_t lp_solves = 0;
  std::int64_t lp_iterations = 0;
  std::int64_t integer_branches = 0;
  std::int64_t spatial_branches = 0;
  double best_bound = -std::numeric_limits<double>::infinity();
  double wall_time_s = 0.0;
};

struct Solution {
  SolveStatus status = SolveStatus::Infeasible;
  std::vector<double> assignment;  // by variable id; empty when there is no incumbent
  double objective = std::numeric_limits<double>::quiet_NaN();
  double gap = std::numeric_limits<double>::infinity();
  SolveStats stats;
};

}  // namespace homegrid
