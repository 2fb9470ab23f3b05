#include "homegrid/oracle.hpp"

#include "homegrid/lp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace homegrid {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kUnifiedBudget = 1e6;  // LP solves allowed per unified enumeration

// One admissible run pattern of one appliance: bit h-1 set = runs in slot h.
struct RunPattern {
  std::uint32_t mask = 0;
  int first = 0;  // first and last run slot, 1-based
  int last = 0;
};

struct AppChoices {
  const Appliance* app = nullptr;
  std::vector<RunPattern> patterns;
};

struct HouseholdChoices {
  const Household* hh = nullptr;
  std::vector<AppChoices> apps;
  std::vector<std::uint32_t> charge_masks;
};

void require_usable(const Scenario& s, const OracleOptions& opt) {
  if (opt.max_booleans < 1 || opt.max_booleans > 20)
    throw std::invalid_argument("oracle: max_booleans must be in [1, 20]");
  if (opt.price_levels < 2) throw std::invalid_argument("oracle: price_levels must be >= 2");
  if (s.horizon_slots > 20) throw std::invalid_argument("oracle: horizon too long to enumerate");
  const auto problems = validate_scenario(s);
  if (!problems.empty()) throw std::invalid_argument("oracle: " + to_string(problems.front()));
  for (const Household& hh : s.households)
    for (const Appliance& a : hh.appliances)
      if (a.requests.size() > 1)
        throw std::invalid_argument(
            "oracle: expand_virtual_appliances must be applied before enumeration");
}

// Every run pattern that satisfies the reservation, the run-count, the
// contiguity rule for uninterruptible appliances, and leaves a nonempty end
// slot range. mask bits below reservation_slot are rejected, matching the
// no-run-before-reservation rows.
std::vector<RunPattern> app_patterns(const Appliance& a, int n) {
  std::vector<RunPattern> out;
  const std::uint32_t below_res = (1u << (a.reservation_slot - 1)) - 1u;
  if (a.interruptible) {
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      if (static_cast<int>(__builtin_popcount(mask)) != a.duration) continue;
      if ((mask & below_res) != 0u) continue;
      RunPattern p;
      p.mask = mask;
      p.first = __builtin_ctz(mask) + 1;
      p.last = 32 - __builtin_clz(mask);
      if (p.last > a.max_end) continue;  // end slot range would be empty
      out.push_back(p);
    }
  } else {
    for (int start = a.reservation_slot; start + a.duration - 1 <= n; ++start) {
      RunPattern p;
      p.mask = ((1u << a.duration) - 1u) << (start - 1);
      p.first = start;
      p.last = start + a.duration - 1;
      if (p.last > a.max_end) continue;
      out.push_back(p);
    }
  }
  return out;
}

HouseholdChoices build_choices(const Household& hh, int n) {
  HouseholdChoices c;
  c.hh = &hh;
  for (const Appliance& a : hh.appliances) c.apps.push_back({&a, app_patterns(a, n)});
  if (hh.storage.charge_power > 0.0) {
    c.charge_masks.resize(1u << n);
    for (std::uint32_t m = 0; m < (1u << n); ++m) c.charge_masks[m] = m;
  } else {
    c.charge_masks = {0u};
  }
  return c;
}

double choice_count(const HouseholdChoices& c) {
  double total = static_cast<double>(c.charge_masks.size());
  for (const AppChoices& a : c.apps) total *= static_cast<double>(a.patterns.size());
  return total;
}

// Iterates an index vector over mixed radices; returns false after the last one.
bool advance(std::vector<int>& idx, const std::vector<int>& radix) {
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (++idx[i] < radix[i]) return true;
    idx[i] = 0;
  }
  return false;
}

// Minimum total delay penalty over all end-slot assignments consistent with the
// chosen run patterns, enumerated exhaustively: tau_i in [last run slot, max_end],
// and a predecessor's end slot must precede the successor's first run slot.
// Returns +inf when no assignment is feasible.
double best_delay_penalty(const std::vector<const RunPattern*>& picked,
                          const std::vector<AppChoices>& apps) {
  const int na = static_cast<int>(apps.size());
  std::vector<int> tau(na), lo(na), radix(na);
  for (int i = 0; i < na; ++i) {
    lo[i] = picked[i]->last;
    radix[i] = apps[i].app->max_end - lo[i] + 1;
    if (radix[i] <= 0) return kInf;
  }
  double best = kInf;
  std::vector<int> idx(na, 0);
  do {
    double cost = 0.0;
    bool ok = true;
    for (int i = 0; i < na && ok; ++i) tau[i] = lo[i] + idx[i];
    for (int i = 0; i < na && ok; ++i) {
      const Appliance& a = *apps[i].app;
      if (a.predecessor >= 0 && tau[a.predecessor] > picked[i]->first - 1) ok = false;
      cost += a.disutility_factor * (tau[i] - (a.reservation_slot + a.duration - 1));
    }
    if (ok) best = std::min(best, cost);
  } while (advance(idx, radix));
  return best;
}

// Residual LP of one household once run patterns and charge flags are fixed:
// grid purchases, storage draws, renewable use, and storage levels per slot.
// Returns +inf when infeasible.
double residual_cost(const Scenario& s, const Household& hh,
                     const std::vector<double>& loads, std::uint32_t charge_mask,
                     std::int64_t& lp_solves) {
  const int n = s.horizon_slots;
  const StorageSpec& st = hh.storage;
  LpInstance lp;
  const int grid = 0, draw = n, renew = 2 * n, level = 3 * n;
  lp.vars.resize(4 * n);
  for (int h = 0; h < n; ++h) {
    lp.vars[grid + h] = {0.0, hh.grid_limit};
    lp.vars[draw + h] = {0.0, kInf};
    lp.vars[renew + h] = {0.0, hh.renewable[h]};
    lp.vars[level + h] = {st.min_capacity, st.max_capacity};
    lp.objective.emplace_back(grid + h, s.grid_price[h]);
  }
  for (int h = 0; h < n; ++h) {
    LpRow balance;
    balance.terms = {{grid + h, 1.0}, {draw + h, 1.0}, {renew + h, 1.0}};
    balance.rel = Relation::Eq;
    balance.rhs = loads[h];
    lp.rows.push_back(std::move(balance));

    const double charged =
        ((charge_mask >> h) & 1u) ? st.charge_power * st.efficiency : 0.0;
    LpRow carry;
    if (h == 0) {
      carry.terms = {{level + h, 1.0}, {draw + h, 1.0}};
      carry.rhs = st.retention * st.initial_energy + charged;
    } else {
      carry.terms = {{level + h, 1.0}, {level + h - 1, -st.retention}, {draw + h, 1.0}};
      carry.rhs = charged;
    }
    carry.rel = Relation::Eq;
    lp.rows.push_back(std::move(carry));
  }
  ++lp_solves;
  const LpResult r = solve_lp(lp);
  return r.status == LpStatus::Optimal ? r.objective : kInf;
}

std::vector<double> slot_loads(const Scenario& s, const HouseholdChoices& c,
                               const std::vector<const RunPattern*>& picked,
                               std::uint32_t charge_mask) {
  std::vector<double> loads(s.horizon_slots, 0.0);
  for (int h = 0; h < s.horizon_slots; ++h) {
    for (std::size_t i = 0; i < c.apps.size(); ++i)
      if ((picked[i]->mask >> h) & 1u) loads[h] += c.apps[i].app->power;
    if ((charge_mask >> h) & 1u) loads[h] += c.hh->storage.charge_power;
  }
  return loads;
}

Solution finish(double best, std::int64_t lp_solves,
                std::chrono::steady_clock::time_point start) {
  Solution sol;
  sol.stats.lp_solves = lp_solves;
  sol.stats.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (best < kInf) {
    sol.status = SolveStatus::Optimal;
    sol.objective = best;
    sol.gap = 0.0;
    sol.stats.best_bound = best;
  } else {
    sol.status = SolveStatus::Infeasible;
    sol.stats.best_bound = kInf;
  }
  return sol;
}

}  // namespace

Solution enumerate_no_trade(const Scenario& s, int household, const OracleOptions& opt) {
  require_usable(s, opt);
  if (household < 0 || household >= static_cast<int>(s.households.size()))
    throw std::invalid_argument("oracle: household index out of range");
  const auto start = std::chrono::steady_clock::now();

  const HouseholdChoices c = build_choices(s.households[household], s.horizon_slots);
  if (choice_count(c) > std::ldexp(1.0, opt.max_booleans))
    throw std::invalid_argument("oracle: boolean combination count exceeds 2^" +
                                std::to_string(opt.max_booleans));

  const int na = static_cast<int>(c.apps.size());
  std::vector<int> radix;
  radix.reserve(na + 1);
  for (const AppChoices& a : c.apps) radix.push_back(static_cast<int>(a.patterns.size()));
  radix.push_back(static_cast<int>(c.charge_masks.size()));
  for (const int r : radix)
    if (r == 0) return finish(kInf, 0, start);

  double best = kInf;
  std::int64_t lp_solves = 0;
  std::vector<int> idx(radix.size(), 0);
  std::vector<const RunPattern*> picked(na);
  do {
    for (int i = 0; i < na; ++i) picked[i] = &c.apps[i].patterns[idx[i]];
    const double delay = best_delay_penalty(picked, c.apps);
    if (delay == kInf) continue;
    const std::uint32_t charge_mask = c.charge_masks[idx[na]];
    const auto loads = slot_loads(s, c, picked, charge_mask);
    const double energy =
        residual_cost(s, s.households[household], loads, charge_mask, lp_solves);
    if (energy == kInf) continue;
    best = std::min(best, energy + delay);
  } while (advance(idx, radix));

  return finish(best, lp_solves, start);
}

Solution enumerate_unified(const Scenario& s, const std::vector<double>& cost_ceilings,
                           const OracleOptions& opt) {
  require_usable(s, opt);
  const int n = s.horizon_slots;
  const int nk = static_cast<int>(s.households.size());
  if (!cost_ceilings.empty() && static_cast<int>(cost_ceilings.size()) != nk)
    throw std::invalid_argument("oracle: need one cost ceiling per household (or none)");
  const auto start = std::chrono::steady_clock::now();

  std::vector<HouseholdChoices> choices;
  double combos = 1.0;
  for (const Household& hh : s.households) {
    choices.push_back(build_choices(hh, n));
    combos *= choice_count(choices.back());
  }
  if (combos > std::ldexp(1.0, opt.max_booleans))
    throw std::invalid_argument("oracle: boolean combination count exceeds 2^" +
                                std::to_string(opt.max_booleans));

  double tau_combos = 1.0;
  for (const HouseholdChoices& c : choices)
    for (const AppChoices& a : c.apps)
      tau_combos *= std::max(1, a.app->max_end - (a.app->reservation_slot + a.app->duration - 1) + 1);
  const double price_combos = std::pow(static_cast<double>(opt.price_levels), n);
  if (combos * tau_combos * price_combos > kUnifiedBudget)
    throw std::invalid_argument("oracle: combination budget exceeded");

  // Flattened odometer: per household all run patterns, then its charge mask.
  std::vector<int> radix;
  for (const HouseholdChoices& c : choices) {
    for (const AppChoices& a : c.apps) {
      if (a.patterns.empty()) return finish(kInf, 0, start);
      radix.push_back(static_cast<int>(a.patterns.size()));
    }
    radix.push_back(static_cast<int>(c.charge_masks.size()));
  }

  double best = kInf;
  std::int64_t lp_solves = 0;
  std::vector<int> idx(radix.size(), 0);
  do {
    // Decode the pick and precompute per-household loads and end-slot ranges.
    std::vector<std::vector<const RunPattern*>> picked(nk);
    std::vector<std::uint32_t> charge(nk);
    std::vector<std::vector<double>> loads(nk);
    int cursor = 0;
    for (int k = 0; k < nk; ++k) {
      for (const AppChoices& a : choices[k].apps)
        picked[k].push_back(&a.patterns[idx[cursor++]]);
      charge[k] = choices[k].charge_masks[idx[cursor++]];
      loads[k] = slot_loads(s, choices[k], picked[k], charge[k]);
    }

    // End-slot odometer across all appliances of all households.
    std::vector<int> tau_lo, tau_radix;
    std::vector<std::pair<int, int>> owner;  // (household, appliance)
    bool degenerate = false;
    for (int k = 0; k < nk; ++k)
      for (std::size_t i = 0; i < choices[k].apps.size(); ++i) {
        const Appliance& a = *choices[k].apps[i].app;
        const int lo = picked[k][i]->last;
        if (a.max_end - lo + 1 <= 0) degenerate = true;
        tau_lo.push_back(lo);
        tau_radix.push_back(a.max_end - lo + 1);
        owner.emplace_back(k, static_cast<int>(i));
      }
    if (degenerate) continue;

    std::vector<int> tau_idx(tau_lo.size(), 0);
    do {
      std::vector<double> delay(nk, 0.0);
      bool ok = true;
      for (std::size_t t = 0; t < tau_lo.size() && ok; ++t) {
        const auto [k, i] = owner[t];
        const Appliance& a = *choices[k].apps[i].app;
        const int tau = tau_lo[t] + tau_idx[t];
        if (a.predecessor >= 0) {
          // Predecessor end slots appear earlier in the odometer (expansion
          // orders copies before their successors within a household).
          int pred_pos = -1;
          for (std::size_t u = 0; u < owner.size(); ++u)
            if (owner[u].first == k && owner[u].second == a.predecessor)
              pred_pos = static_cast<int>(u);
          if (pred_pos < 0 || tau_lo[pred_pos] + tau_idx[pred_pos] > picked[k][i]->first - 1)
            ok = false;
        }
        delay[k] += a.disutility_factor * (tau - (a.reservation_slot + a.duration - 1));
      }
      if (!ok) continue;

      // Price odometer: one level index per slot.
      std::vector<int> price_idx(n, 0);
      const std::vector<int> price_radix(n, opt.price_levels);
      do {
        std::vector<double> price(n);
        for (int h = 0; h < n; ++h)
          price[h] =
              s.grid_price[h] * price_idx[h] / static_cast<double>(opt.price_levels - 1);

        // Residual LP across all households with trading at the fixed prices.
        LpInstance lp;
        const int per = 6 * n;  // grid, draw, renew, level, traded, quota per household
        lp.vars.resize(static_cast<std::size_t>(nk) * per);
        for (int k = 0; k < nk; ++k) {
          const Household& hh = s.households[k];
          const StorageSpec& st = hh.storage;
          const int grid = k * per, draw = grid + n, renew = grid + 2 * n,
                    level = grid + 3 * n, traded = grid + 4 * n, quota = grid + 5 * n;
          for (int h = 0; h < n; ++h) {
            const double trade_cap =
                hh.grid_limit + st.max_capacity - st.min_capacity + hh.renewable[h];
            lp.vars[grid + h] = {0.0, hh.grid_limit};
            lp.vars[draw + h] = {0.0, kInf};
            lp.vars[renew + h] = {0.0, hh.renewable[h]};
            lp.vars[level + h] = {st.min_capacity, st.max_capacity};
            lp.vars[traded + h] = {-trade_cap, trade_cap};
            lp.vars[quota + h] = {-kInf, kInf};
            lp.objective.emplace_back(grid + h, s.grid_price[h]);

            LpRow balance;  // load = grid + draw + renew + bought
            balance.terms = {
                {grid + h, 1.0}, {draw + h, 1.0}, {renew + h, 1.0}, {traded + h, 1.0}};
            balance.rel = Relation::Eq;
            balance.rhs = loads[k][h];
            lp.rows.push_back(std::move(balance));

            const double charged =
                ((charge[k] >> h) & 1u) ? st.charge_power * st.efficiency : 0.0;
            LpRow carry;
            if (h == 0) {
              carry.terms = {{level + h, 1.0}, {draw + h, 1.0}};
              carry.rhs = st.retention * st.initial_energy + charged;
            } else {
              carry.terms = {{level + h, 1.0}, {level + h - 1, -st.retention}, {draw + h, 1.0}};
              carry.rhs = charged;
            }
            carry.rel = Relation::Eq;
            lp.rows.push_back(std::move(carry));

            LpRow quota_def;  // quota = load + min level - renewable cap - grid - level - draw
            quota_def.terms = {{quota + h, 1.0},
                               {grid + h, 1.0},
                               {level + h, 1.0},
                               {draw + h, 1.0}};
            quota_def.rel = Relation::Eq;
            quota_def.rhs = loads[k][h] + st.min_capacity - hh.renewable[h];
            lp.rows.push_back(std::move(quota_def));

            LpRow quota_floor;  // traded >= quota
            quota_floor.terms = {{traded + h, 1.0}, {quota + h, -1.0}};
            quota_floor.rel = Relation::Ge;
            quota_floor.rhs = 0.0;
            lp.rows.push_back(std::move(quota_floor));
          }
          if (!cost_ceilings.empty()) {
            LpRow ceiling;  // energy spend incl. trades stays under the cap
            for (int h = 0; h < n; ++h) {
              ceiling.terms.emplace_back(grid + h, s.grid_price[h]);
              if (price[h] != 0.0) ceiling.terms.emplace_back(traded + h, price[h]);
            }
            ceiling.rel = Relation::Le;
            ceiling.rhs = cost_ceilings[k] - delay[k];
            lp.rows.push_back(std::move(ceiling));
          }
        }
        for (int h = 0; h < n; ++h) {
          LpRow clearing;  // the microgrid nets to zero per slot
          for (int k = 0; k < nk; ++k) clearing.terms.emplace_back(k * per + 4 * n + h, 1.0);
          clearing.rel = Relation::Eq;
          clearing.rhs = 0.0;
          lp.rows.push_back(std::move(clearing));
        }

        ++lp_solves;
        const LpResult r = solve_lp(lp);
        if (r.status == LpStatus::Optimal) {
          double total = r.objective;
          for (int k = 0; k < nk; ++k) total += delay[k];
          best = std::min(best, total);
        }
      } while (advance(price_idx, price_radix));
    } while (advance(tau_idx, tau_radix));
  } while (advance(idx, radix));

  return finish(best, lp_solves, start);
}

}  // namespace homegrid
