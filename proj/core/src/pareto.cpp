#include "homegrid/pareto.hpp"

#include "homegrid/costs.hpp"
#include "homegrid/model_build.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace homegrid {

namespace {

constexpr double kTol = 1e-6;

double row_residual(const LinearRow& row, const std::vector<double>& x) {
  double act = 0.0;
  for (const auto& [id, c] : row.terms) act += c * x[id];
  switch (row.rel) {
    case Relation::Eq: return std::fabs(act - row.rhs);
    case Relation::Le: return std::max(0.0, act - row.rhs);
    case Relation::Ge: return std::max(0.0, row.rhs - act);
  }
  return 0.0;
}

}  // namespace

NoTradeBounds compute_no_trade_bounds(const Scenario& s, const SolverOptions& opt) {
  NoTradeBounds out;
  for (int k = 0; k < static_cast<int>(s.households.size()); ++k) {
    const ModelInstance m = build_no_trade_model(s, k);
    Solution sol = solve(m, opt);
    double cost = std::numeric_limits<double>::quiet_NaN();
    if (!sol.assignment.empty())
      cost = energy_cost(m, sol.assignment, s, k) + disutility_cost(m, sol.assignment, s, k);
    out.solutions.push_back(std::move(sol));
    out.costs.push_back(cost);
  }
  return out;
}

ParetoResult solve_pareto(const Scenario& s, const ParetoOptions& opt) {
  ParetoResult r;
  NoTradeBounds phase1 = compute_no_trade_bounds(s, opt.solver);
  r.no_trade_costs = phase1.costs;
  for (std::size_t k = 0; k < phase1.solutions.size(); ++k) {
    r.no_trade_status.push_back(phase1.solutions[k].status);
    r.no_trade_stats.push_back(phase1.solutions[k].stats);
    if (phase1.solutions[k].status == SolveStatus::Infeasible && r.infeasible_household < 0)
      r.infeasible_household = static_cast<int>(k);
  }
  if (r.infeasible_household >= 0 || !phase1.all_usable()) return r;

  ModelInstance m;
  if (opt.enforce_cost_ceilings) {
    r.ceilings_used = phase1.costs;
    for (double& c : r.ceilings_used) c -= opt.ceiling_shrink;
    m = build_unified_model(s, r.ceilings_used);
  } else {
    m = build_unified_model(s);
  }
  r.traded = solve(m, opt.solver);

  if (r.traded.status == SolveStatus::Infeasible) {
    if (opt.ceiling_shrink == 0.0)
      throw std::runtime_error(
          "pareto workflow: traded model infeasible although every stand-alone schedule "
          "stays feasible under its own cost ceiling");
    return r;
  }
  if (r.traded.assignment.empty()) return r;  // timed out before any incumbent

  const int n = s.horizon_slots;
  double sum_bounds = 0.0, total = 0.0;
  for (int k = 0; k < static_cast<int>(s.households.size()); ++k) {
    HouseholdCost hc;
    hc.energy = energy_cost(m, r.traded.assignment, s, k);
    hc.disutility = disutility_cost(m, r.traded.assignment, s, k);
    hc.total = hc.energy + hc.disutility;
    r.household_costs.push_back(hc);
    sum_bounds += phase1.costs[k];
    total += hc.total;
  }
  r.total = total;
  r.micro_prices.resize(n, 0.0);
  for (int h = 1; h <= n; ++h) {
    const int mp = m.find_var(VarRole::TradePrice, -1, -1, h);
    if (mp >= 0) r.micro_prices[h - 1] = r.traded.assignment[mp];
  }

  // Concatenating the stand-alone solutions with zero trade is always feasible
  // for the traded model, so its optimum can never be worse than their sum.
  if (r.traded.status == SolveStatus::Optimal && opt.ceiling_shrink == 0.0 &&
      r.total > sum_bounds + kTol)
    throw std::runtime_error(
        "pareto workflow: traded optimum " + std::to_string(r.total) +
        " exceeds the stand-alone total " + std::to_string(sum_bounds));
  return r;
}

ParetoVerification verify_pareto(const ParetoResult& r, const Scenario& s) {
  const ModelInstance m = r.ceilings_used.empty() ? build_unified_model(s)
                                                  : build_unified_model(s, r.ceilings_used);
  if (r.traded.assignment.size() != m.variables.size())
    throw std::invalid_argument("verify_pareto: assignment does not match the scenario");
  const std::vector<double>& x = r.traded.assignment;
  const int n = s.horizon_slots;
  const int nk = static_cast<int>(s.households.size());

  ParetoVerification v;
  v.households.resize(nk);
  v.trade_residual.assign(n, 0.0);
  v.payment_residual.assign(n, 0.0);

  for (int k = 0; k < nk; ++k) {
    HouseholdVerification& hv = v.households[k];
    const double total = energy_cost(m, x, s, k) + disutility_cost(m, x, s, k);
    if (k < static_cast<int>(r.no_trade_costs.size()))
      hv.bound_excess = std::max(0.0, total - r.no_trade_costs[k]);
    for (const LinearRow& row : m.rows) {
      if (row.meta.household != k) continue;
      if (row.meta.role == RowRole::EnergyBalance)
        hv.balance_residual = std::max(hv.balance_residual, row_residual(row, x));
      else if (row.meta.role == RowRole::StorageInit || row.meta.role == RowRole::StorageCarry ||
               row.meta.role == RowRole::StorageCap || row.meta.role == RowRole::StorageFloor)
        hv.storage_violation = std::max(hv.storage_violation, row_residual(row, x));
    }
  }

  for (int h = 1; h <= n; ++h) {
    double traded_sum = 0.0, payment_sum = 0.0;
    const int mp = m.find_var(VarRole::TradePrice, -1, -1, h);
    const double price = mp >= 0 ? x[mp] : 0.0;
    for (int k = 0; k < nk; ++k) {
      const int me = m.find_var(VarRole::TradeEnergy, k, -1, h);
      if (me < 0) continue;
      traded_sum += x[me];
      payment_sum += price * x[me];
    }
    v.trade_residual[h - 1] = std::fabs(traded_sum);
    v.payment_residual[h - 1] = std::fabs(payment_sum);
  }

  v.worst = 0.0;
  for (const HouseholdVerification& hv : v.households)
    v.worst = std::max({v.worst, hv.bound_excess, hv.balance_residual, hv.storage_violation});
  for (int h = 0; h < n; ++h)
    v.worst = std::max({v.worst, v.trade_residual[h], v.payment_residual[h]});
  v.pass = v.worst <= kTol;
  return v;
}

}  // namespace homegrid
