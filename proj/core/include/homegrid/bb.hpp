#pragma once

#include "homegrid/model.hpp"
#include "homegrid/relax.hpp"
#include "homegrid/solution.hpp"

#include <cstdint>
#include <vector>

namespace homegrid {

struct SolverOptions {
  double abs_gap = 1e-6;        // stop when incumbent - bound <= abs_gap
  double rel_gap = 1e-6;        // ... or <= rel_gap * max(1, |incumbent|)
  double bilinear_tol = 1e-6;   // |w - a*b| accepted as satisfied at a leaf
  double time_limit_s = 600.0;  // wall-clock budget per solve
  int workers = 1;              // node evaluations run in parallel when > 1
  bool deterministic = true;    // forces single-worker, fully reproducible runs
  std::uint64_t seed = 0;       // reserved for randomized strategies; unused today
};

enum class BranchKind : std::uint8_t {
  Leaf,     // integral and all products tight: incumbent candidate
  Integer,  // round a fractional boolean/integer variable up and down
  Spatial,  // split a product factor's interval to tighten its envelopes
};

struct BranchDecision {
  BranchKind kind = BranchKind::Leaf;
  int var = -1;        // variable to branch on; -1 for a leaf
  double point = 0.0;  // relaxation value (Integer) or clamped split point (Spatial)
};

// Branching rule, exposed for direct testing. Prefers the most fractional
// boolean/integer variable (ties to the lowest id); otherwise the widest-interval
// factor among products violated beyond opt.bilinear_tol (ties prefer price over
// traded energy, then the lowest slot, then the lowest id); otherwise Leaf.
// `x` is the relaxation point of `rel`, which carries the node's bounds.
BranchDecision select_branch(const ModelInstance& m, const RelaxedModel& rel,
                             const std::vector<double>& x, const SolverOptions& opt);

// One frontier entry as seen by the node-selection rule: the node's lower bound
// and its insertion sequence number.
struct FrontierEntry {
  double bound = 0.0;
  std::uint64_t seq = 0;
};

// Index of the node a best-bound-first search expands next: lowest bound, ties
// to the earliest insertion. Returns frontier.size() when the frontier is empty
// (search complete). Exposed for direct testing; solve() follows this order.
std::size_t node_order(const std::vector<FrontierEntry>& frontier);

// Global minimization of a ModelInstance by LP-based branch-and-bound with
// product-envelope relaxations and spatial branching. Incumbents are accepted
// only after an independent recheck of the original rows (true products, no
// envelope variables). Deterministic runs are bit-reproducible.
Solution solve(const ModelInstance& m, const SolverOptions& opt = {});

}  // namespace homegrid
