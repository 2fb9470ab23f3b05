#include "homegrid/bb.hpp"

#include "homegrid/check.hpp"
#include "homegrid/costs.hpp"
#include "homegrid/lp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <exception>
#include <limits>
#include <queue>
#include <stdexcept>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

namespace homegrid {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kIntTol = 1e-6;          // integrality threshold for branching
constexpr double kMinSplitWidth = 1e-9;   // intervals narrower than this never split
constexpr double kAcceptTol = 1e-6;       // independent-checker gate for incumbents
constexpr double kHeuristicGate = 0.25;   // max fractionality for the rounding heuristic
constexpr double kSplitMargin = 0.2;      // spatial split keeps 20% of the width per side

int role_rank(VarRole r) {
  if (r == VarRole::TradePrice) return 0;
  if (r == VarRole::TradeEnergy) return 1;
  return 2;
}

}  // namespace

BranchDecision select_branch(const ModelInstance& m, const RelaxedModel& rel,
                             const std::vector<double>& x, const SolverOptions& opt) {
  if (x.size() < rel.lp.vars.size())
    throw std::invalid_argument("relaxation point is shorter than the relaxation");

  const int n = static_cast<int>(m.variables.size());
  int frac_var = -1;
  double frac_best = kIntTol;
  for (int j = 0; j < n; ++j) {
    if (m.variables[j].kind == VarKind::Continuous) continue;
    const double f = std::fabs(x[j] - std::round(x[j]));
    if (f > frac_best) {
      frac_best = f;
      frac_var = j;
    }
  }
  if (frac_var >= 0) return {BranchKind::Integer, frac_var, x[frac_var]};

  // All integral: look for a product whose envelope value strays from the true
  // product, and pick the widest splittable factor over all such terms. Width
  // ties prefer price over traded energy, then the lower slot, then the lower id.
  int factor = -1;
  double factor_width = 0.0;
  const auto consider = [&](int cand) {
    const double width = rel.lp.vars[cand].upper - rel.lp.vars[cand].lower;
    if (width < kMinSplitWidth || cand == factor) return;
    bool better = factor < 0 || width > factor_width;
    if (!better && width == factor_width) {
      const VarMeta& cm = m.variables[cand].meta;
      const VarMeta& fm = m.variables[factor].meta;
      better = std::make_tuple(role_rank(cm.role), cm.slot, cand) <
               std::make_tuple(role_rank(fm.role), fm.slot, factor);
    }
    if (better) {
      factor = cand;
      factor_width = width;
    }
  };
  for (std::size_t i = 0; i < m.bilinear_terms.size(); ++i) {
    const BilinearTerm& t = m.bilinear_terms[i];
    const double w = x[rel.product_offset + static_cast<int>(i)];
    if (std::fabs(w - x[t.a] * x[t.b]) <= opt.bilinear_tol) continue;
    consider(t.a);
    consider(t.b);
  }
  if (factor >= 0) {
    const double lo = rel.lp.vars[factor].lower;
    const double hi = rel.lp.vars[factor].upper;
    const double width = hi - lo;
    const double p =
        std::clamp(x[factor], lo + kSplitMargin * width, hi - kSplitMargin * width);
    return {BranchKind::Spatial, factor, p};
  }
  return {};
}

std::size_t node_order(const std::vector<FrontierEntry>& frontier) {
  std::size_t best = frontier.size();
  for (std::size_t i = 0; i < frontier.size(); ++i) {
    if (best == frontier.size() || frontier[i].bound < frontier[best].bound ||
        (frontier[i].bound == frontier[best].bound && frontier[i].seq < frontier[best].seq))
      best = i;
  }
  return best;
}

namespace {

struct Node {
  std::vector<BoundOverride> overrides;
  double bound = -kInf;  // parent relaxation objective; valid for the whole subtree
  int depth = 0;
};

void set_override(std::vector<BoundOverride>& ovr, int var, double lo, double hi) {
  for (BoundOverride& o : ovr)
    if (o.var == var) {
      o.lower = lo;
      o.upper = hi;
      return;
    }
  ovr.push_back({var, lo, hi});
}

struct EvalResult {
  bool infeasible = false;
  bool unbounded = false;
  double obj = 0.0;
  BranchDecision dec;
  double eff_lo = 0.0, eff_hi = 0.0;  // node bounds of dec.var
  bool has_candidate = false;
  double cand_obj = 0.0;
  std::vector<double> cand_x;
  std::int64_t lps = 0;
  std::int64_t iters = 0;
};

class Solver {
 public:
  Solver(const ModelInstance& m, const SolverOptions& opt) : m_(m), opt_(opt) {
    if (!(opt.abs_gap > 0.0) || !(opt.rel_gap > 0.0) || !(opt.bilinear_tol > 0.0))
      throw std::invalid_argument("solver tolerances must be positive");
    if (!(opt.time_limit_s > 0.0))
      throw std::invalid_argument("solver time limit must be positive");
    workers_ = opt.deterministic ? 1 : std::max(1, opt.workers);
    workers_ = std::min(workers_, 64);
    for (int j = 0; j < static_cast<int>(m.variables.size()); ++j)
      if (m.variables[j].kind != VarKind::Continuous) int_ids_.push_back(j);
    for (const BilinearTerm& t : m.bilinear_terms)
      if (std::find(price_ids_.begin(), price_ids_.end(), t.a) == price_ids_.end())
        price_ids_.push_back(t.a);
    std::sort(price_ids_.begin(), price_ids_.end());
  }

  Solution run() {
    const auto start = std::chrono::steady_clock::now();
    const auto elapsed = [&] {
      return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };

    push_node({}, -kInf, 0);
    bool timed_out = false;
    while (!pq_.empty()) {
      const double top = pq_.top().bound;
      if (top > bound_) bound_ = top;
      if (has_inc_ && top >= inc_obj_ - slack()) break;
      if (elapsed() >= opt_.time_limit_s) {
        timed_out = true;
        break;
      }

      std::vector<int> batch;
      while (!pq_.empty() && static_cast<int>(batch.size()) < workers_) {
        const PQE e = pq_.top();
        if (has_inc_ && e.bound >= inc_obj_ - slack()) break;
        pq_.pop();
        batch.push_back(e.id);
      }

      std::vector<EvalResult> results(batch.size());
      if (batch.size() == 1) {
        results[0] = evaluate(nodes_[batch[0]]);
      } else {
        std::vector<std::exception_ptr> errors(batch.size());
        std::vector<std::thread> threads;
        threads.reserve(batch.size());
        for (std::size_t i = 0; i < batch.size(); ++i)
          threads.emplace_back([&, i] {
            try {
              results[i] = evaluate(nodes_[batch[i]]);
            } catch (...) {
              errors[i] = std::current_exception();
            }
          });
        for (std::thread& t : threads) t.join();
        for (const std::exception_ptr& e : errors)
          if (e) std::rethrow_exception(e);
      }
      for (std::size_t i = 0; i < batch.size(); ++i) process(batch[i], results[i]);
    }

    Solution sol;
    sol.stats = stats_;
    sol.stats.wall_time_s = elapsed();
    if (timed_out) {
      if (has_inc_) {
        sol.status = SolveStatus::TimeoutWithIncumbent;
        finish_with_incumbent(sol, std::min(bound_, inc_obj_));
      } else {
        sol.status = SolveStatus::TimeoutNoIncumbent;
        sol.stats.best_bound = bound_;
      }
    } else if (has_inc_) {
      sol.status = SolveStatus::Optimal;
      finish_with_incumbent(sol, pq_.empty() ? inc_obj_ : std::min(bound_, inc_obj_));
    } else {
      sol.status = SolveStatus::Infeasible;
      sol.stats.best_bound = kInf;
    }
    return sol;
  }

 private:
  struct PQE {
    double bound;
    int id;
  };
  struct PQCmp {
    bool operator()(const PQE& a, const PQE& b) const {
      if (a.bound != b.bound) return a.bound > b.bound;
      return a.id > b.id;  // FIFO among equal bounds
    }
  };

  double slack() const {
    return std::min(opt_.abs_gap, opt_.rel_gap * std::max(1.0, std::fabs(inc_obj_)));
  }

  void finish_with_incumbent(Solution& sol, double bound) {
    sol.assignment = inc_x_;
    sol.objective = inc_obj_;
    sol.stats.best_bound = bound;
    sol.gap = std::max(0.0, (inc_obj_ - bound) / std::max(1.0, std::fabs(inc_obj_)));
  }

  int push_node(std::vector<BoundOverride> ovr, double bound, int depth) {
    nodes_.push_back({std::move(ovr), bound, depth});
    const int id = static_cast<int>(nodes_.size()) - 1;
    pq_.push({bound, id});
    return id;
  }

  EvalResult evaluate(const Node& node) const {
    EvalResult r;
    const RelaxedModel rel = relax(m_, node.overrides);
    const LpResult lr = solve_lp(rel.lp);
    ++r.lps;
    r.iters += lr.iterations;
    if (lr.status == LpStatus::Infeasible) {
      r.infeasible = true;
      return r;
    }
    if (lr.status == LpStatus::Unbounded) {
      r.unbounded = true;
      return r;
    }
    r.obj = lr.objective;
    r.dec = select_branch(m_, rel, lr.x, opt_);
    if (r.dec.var >= 0) {
      r.eff_lo = rel.lp.vars[r.dec.var].lower;
      r.eff_hi = rel.lp.vars[r.dec.var].upper;
    }
    const bool try_candidate =
        r.dec.kind == BranchKind::Leaf || r.dec.kind == BranchKind::Spatial ||
        node.depth == 0 ||
        (r.dec.kind == BranchKind::Integer &&
         std::fabs(r.dec.point - std::round(r.dec.point)) <= kHeuristicGate);
    if (try_candidate) polish(node, rel, lr.x, r);
    return r;
  }

  // Rounding/polish heuristic: fix every integer at its rounded value and every
  // price factor at its relaxation value, re-solve the now-exact LP, and recheck
  // the original model. Zero-width price intervals make all envelopes exact, so
  // a feasible polished point carries true products.
  void polish(const Node& node, const RelaxedModel& rel, const std::vector<double>& x,
              EvalResult& r) const {
    std::vector<BoundOverride> ovr = node.overrides;
    for (const int j : int_ids_) {
      const double v =
          std::clamp(std::round(x[j]), rel.lp.vars[j].lower, rel.lp.vars[j].upper);
      set_override(ovr, j, v, v);
    }
    for (const int a : price_ids_) {
      const double v = std::clamp(x[a], rel.lp.vars[a].lower, rel.lp.vars[a].upper);
      set_override(ovr, a, v, v);
    }
    const RelaxedModel fixed = relax(m_, ovr);
    const LpResult lr = solve_lp(fixed.lp);
    ++r.lps;
    r.iters += lr.iterations;
    if (lr.status != LpStatus::Optimal) return;
    std::vector<double> xm(lr.x.begin(), lr.x.begin() + m_.variables.size());
    for (const int j : int_ids_) xm[j] = std::round(xm[j]);
    if (!check_assignment(m_, xm).within(kAcceptTol)) return;
    r.has_candidate = true;
    r.cand_obj = objective_value(m_, xm);
    r.cand_x = std::move(xm);
  }

  void process(int id, EvalResult& r) {
    Node& node = nodes_[id];
    ++stats_.nodes;
    stats_.lp_solves += r.lps;
    stats_.lp_iterations += r.iters;
    if (r.unbounded)
      throw std::runtime_error("branch-and-bound: relaxation is unbounded from below");
    if (!r.infeasible) {
      if (r.has_candidate && (!has_inc_ || r.cand_obj < inc_obj_)) {
        has_inc_ = true;
        inc_obj_ = r.cand_obj;
        inc_x_ = std::move(r.cand_x);
      }
      const bool pruned = has_inc_ && r.obj >= inc_obj_ - slack();
      if (!pruned && r.dec.kind == BranchKind::Integer) {
        ++stats_.integer_branches;
        const double p = std::clamp(r.dec.point, r.eff_lo, r.eff_hi);
        std::vector<BoundOverride> down = node.overrides;
        set_override(down, r.dec.var, r.eff_lo, std::floor(p));
        push_node(std::move(down), r.obj, node.depth + 1);
        std::vector<BoundOverride> up = node.overrides;
        set_override(up, r.dec.var, std::ceil(p), r.eff_hi);
        push_node(std::move(up), r.obj, node.depth + 1);
      } else if (!pruned && r.dec.kind == BranchKind::Spatial) {
        ++stats_.spatial_branches;
        std::vector<BoundOverride> left = node.overrides;
        set_override(left, r.dec.var, r.eff_lo, r.dec.point);
        push_node(std::move(left), r.obj, node.depth + 1);
        std::vector<BoundOverride> right = node.overrides;
        set_override(right, r.dec.var, r.dec.point, r.eff_hi);
        push_node(std::move(right), r.obj, node.depth + 1);
      }
    }
    std::vector<BoundOverride>().swap(node.overrides);
  }

  const ModelInstance& m_;
  const SolverOptions opt_;
  int workers_ = 1;
  std::vector<int> int_ids_;
  std::vector<int> price_ids_;

  std::deque<Node> nodes_;
  std::priority_queue<PQE, std::vector<PQE>, PQCmp> pq_;
  double bound_ = -kInf;
  bool has_inc_ = false;
  double inc_obj_ = kInf;
  std::vector<double> inc_x_;
  SolveStats stats_;
};

}  // namespace

Solution solve(const ModelInstance& m, const SolverOptions& opt) {
  Solver s(m, opt);
  return s.run();
}

}  // namespace homegrid
