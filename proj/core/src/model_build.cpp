#include "homegrid/model_build.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace homegrid {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_buildable(const Scenario& s) {
  auto violations = validate_scenario(s);
  if (!violations.empty())
    throw std::invalid_argument("invalid scenario: " + to_string(violations.front()));
  for (const Household& hh : s.households)
    for (const Appliance& a : hh.appliances)
      if (a.requests.size() > 1)
        throw std::invalid_argument(
            "appliance has multiple pending requests; call expand_virtual_appliances first");
}

// Ids of one household's variables inside a ModelInstance.
struct HouseholdVars {
  std::vector<int> ge, be, re, se, ic;        // per slot
  std::vector<std::vector<int>> run;          // [appliance][slot]
  std::vector<std::vector<int>> start;        // [appliance][start slot], empty if interruptible
  std::vector<int> end_slot;                  // per appliance
};

int add_var(ModelInstance& m, VarKind kind, double lo, double hi, VarMeta meta) {
  m.variables.push_back({kind, lo, hi, meta});
  return static_cast<int>(m.variables.size()) - 1;
}

HouseholdVars add_household_vars(ModelInstance& m, const Scenario& s, int k) {
  const Household& hh = s.households[k];
  const int n = s.horizon_slots;
  HouseholdVars v;
  for (int h = 1; h <= n; ++h)
    v.ge.push_back(add_var(m, VarKind::Continuous, 0.0, kInf, {VarRole::GridEnergy, k, -1, h}));
  for (int h = 1; h <= n; ++h)
    v.be.push_back(add_var(m, VarKind::Continuous, 0.0, kInf, {VarRole::StorageDraw, k, -1, h}));
  for (int h = 1; h <= n; ++h)
    v.re.push_back(
        add_var(m, VarKind::Continuous, 0.0, kInf, {VarRole::RenewableUsed, k, -1, h}));
  for (int h = 1; h <= n; ++h)
    v.se.push_back(add_var(m, VarKind::Continuous, 0.0, kInf, {VarRole::StoredEnergy, k, -1, h}));
  for (int h = 1; h <= n; ++h)
    v.ic.push_back(add_var(m, VarKind::Boolean, 0.0, 1.0, {VarRole::ChargeFlag, k, -1, h}));
  for (std::size_t i = 0; i < hh.appliances.size(); ++i) {
    const Appliance& a = hh.appliances[i];
    const int ai = static_cast<int>(i);
    std::vector<int> run;
    for (int h = 1; h <= n; ++h)
      run.push_back(add_var(m, VarKind::Boolean, 0.0, 1.0, {VarRole::RunFlag, k, ai, h}));
    v.run.push_back(std::move(run));
    std::vector<int> start;
    if (!a.interruptible) {
      for (int h = 1; h <= n - a.duration + 1; ++h)
        start.push_back(add_var(m, VarKind::Boolean, 0.0, 1.0, {VarRole::StartFlag, k, ai, h}));
    }
    v.start.push_back(std::move(start));
    v.end_slot.push_back(add_var(m, VarKind::Integer, 1.0, static_cast<double>(n),
                                 {VarRole::EndSlot, k, ai, -1}));
  }
  return v;
}

LinearRow& add_row(ModelInstance& m, Relation rel, double rhs, RowMeta meta) {
  m.rows.push_back({{}, rel, rhs, meta});
  return m.rows.back();
}

// Appends one household's scheduling/storage rows. `trade` (id of the household's
// per-slot net market purchase) is negative for the no-trade model.
void add_household_rows(ModelInstance& m, const Scenario& s, int k, const HouseholdVars& v,
                        const std::vector<int>* trade) {
  const Household& hh = s.households[k];
  const StorageSpec& st = hh.storage;
  const int n = s.horizon_slots;

  for (int h = 1; h <= n; ++h) {
    LinearRow& r = add_row(m, Relation::Eq, 0.0, {RowRole::EnergyBalance, k, -1, h});
    for (std::size_t i = 0; i < hh.appliances.size(); ++i)
      r.terms.emplace_back(v.run[i][h - 1], hh.appliances[i].power);
    r.terms.emplace_back(v.ic[h - 1], st.charge_power);
    r.terms.emplace_back(v.ge[h - 1], -1.0);
    r.terms.emplace_back(v.be[h - 1], -1.0);
    r.terms.emplace_back(v.re[h - 1], -1.0);
    if (trade) r.terms.emplace_back((*trade)[h - 1], -1.0);
  }

  {
    LinearRow& r = add_row(m, Relation::Eq, st.initial_energy * st.retention,
                           {RowRole::StorageInit, k, -1, 1});
    r.terms.emplace_back(v.se[0], 1.0);
    r.terms.emplace_back(v.ic[0], -st.charge_power * st.efficiency);
    r.terms.emplace_back(v.be[0], 1.0);
  }
  for (int h = 2; h <= n; ++h) {
    LinearRow& r = add_row(m, Relation::Eq, 0.0, {RowRole::StorageCarry, k, -1, h});
    r.terms.emplace_back(v.se[h - 1], 1.0);
    r.terms.emplace_back(v.se[h - 2], -st.retention);
    r.terms.emplace_back(v.ic[h - 1], -st.charge_power * st.efficiency);
    r.terms.emplace_back(v.be[h - 1], 1.0);
  }
  for (int h = 1; h <= n; ++h) {
    LinearRow& r = add_row(m, Relation::Le, st.max_capacity, {RowRole::StorageCap, k, -1, h});
    r.terms.emplace_back(v.se[h - 1], 1.0);
  }
  for (int h = 1; h <= n; ++h) {
    LinearRow& r = add_row(m, Relation::Ge, st.min_capacity, {RowRole::StorageFloor, k, -1, h});
    r.terms.emplace_back(v.se[h - 1], 1.0);
  }

  for (std::size_t i = 0; i < hh.appliances.size(); ++i) {
    const Appliance& a = hh.appliances[i];
    const int ai = static_cast<int>(i);
    LinearRow& r = add_row(m, Relation::Eq, static_cast<double>(a.duration),
                           {RowRole::RunTotal, k, ai, -1});
    for (int h = 1; h <= n; ++h) r.terms.emplace_back(v.run[i][h - 1], 1.0);
  }

  for (int h = 1; h <= n; ++h) {
    LinearRow& r = add_row(m, Relation::Le, hh.renewable[h - 1], {RowRole::RenewableCap, k, -1, h});
    r.terms.emplace_back(v.re[h - 1], 1.0);
  }

  for (std::size_t i = 0; i < hh.appliances.size(); ++i) {
    const Appliance& a = hh.appliances[i];
    LinearRow& r =
        add_row(m, Relation::Eq, 0.0, {RowRole::NoRunBeforeReservation, k, static_cast<int>(i), -1});
    for (int h = 1; h < a.reservation_slot; ++h) r.terms.emplace_back(v.run[i][h - 1], 1.0);
  }

  for (std::size_t i = 0; i < hh.appliances.size(); ++i) {
    const int ai = static_cast<int>(i);
    for (int h = 1; h <= n; ++h) {
      LinearRow& r = add_row(m, Relation::Le, 0.0, {RowRole::EndCoversRun, k, ai, h});
      r.terms.emplace_back(v.run[i][h - 1], static_cast<double>(h));
      r.terms.emplace_back(v.end_slot[i], -1.0);
    }
  }

  for (std::size_t i = 0; i < hh.appliances.size(); ++i) {
    const Appliance& a = hh.appliances[i];
    LinearRow& r = add_row(m, Relation::Le, static_cast<double>(a.max_end),
                           {RowRole::EndWithinDeadline, k, static_cast<int>(i), -1});
    r.terms.emplace_back(v.end_slot[i], 1.0);
  }

  for (std::size_t i = 0; i < hh.appliances.size(); ++i) {
    const Appliance& a = hh.appliances[i];
    if (a.interruptible) continue;
    const int ai = static_cast<int>(i);
    for (int h = 1; h <= n - a.duration + 1; ++h) {
      LinearRow& r = add_row(m, Relation::Ge, 0.0, {RowRole::BlockCover, k, ai, h});
      for (int d = 0; d < a.duration; ++d) r.terms.emplace_back(v.run[i][h + d - 1], 1.0);
      r.terms.emplace_back(v.start[i][h - 1], -static_cast<double>(a.duration));
    }
    LinearRow& once = add_row(m, Relation::Eq, 1.0, {RowRole::StartOnce, k, ai, -1});
    for (int id : v.start[i]) once.terms.emplace_back(id, 1.0);
  }

  for (int h = 1; h <= n; ++h) {
    LinearRow& r = add_row(m, Relation::Le, hh.grid_limit, {RowRole::GridCap, k, -1, h});
    r.terms.emplace_back(v.ge[h - 1], 1.0);
  }

  // A request instance may only run strictly after its predecessor's end slot:
  // end[prev] + n*run[i][h] <= n + h - 1 for every slot h.
  for (std::size_t i = 0; i < hh.appliances.size(); ++i) {
    const Appliance& a = hh.appliances[i];
    if (a.predecessor < 0) continue;
    if (a.predecessor >= static_cast<int>(hh.appliances.size()))
      throw std::invalid_argument("appliance predecessor index out of range");
    const int ai = static_cast<int>(i);
    for (int h = 1; h <= n; ++h) {
      LinearRow& r = add_row(m, Relation::Le, static_cast<double>(n + h - 1),
                             {RowRole::RequestOrder, k, ai, h});
      r.terms.emplace_back(v.end_slot[a.predecessor], 1.0);
      r.terms.emplace_back(v.run[i][h - 1], static_cast<double>(n));
    }
  }
}

// Grid cost plus delay disutility for one household; the constant part of the
// disutility (earliest possible end) goes into the objective offset.
void add_household_objective(ModelInstance& m, const Scenario& s, int k, const HouseholdVars& v) {
  const Household& hh = s.households[k];
  for (int h = 1; h <= s.horizon_slots; ++h)
    if (s.grid_price[h - 1] != 0.0)
      m.objective.emplace_back(v.ge[h - 1], s.grid_price[h - 1]);
  for (std::size_t i = 0; i < hh.appliances.size(); ++i) {
    const Appliance& a = hh.appliances[i];
    if (a.disutility_factor == 0.0) continue;
    m.objective.emplace_back(v.end_slot[i], a.disutility_factor);
    m.objective_offset -= a.disutility_factor * (a.reservation_slot + a.duration - 1);
  }
}

ModelInstance build_unified(const Scenario& s, const std::vector<double>* ceilings) {
  require_buildable(s);
  if (ceilings) {
    if (ceilings->size() != s.households.size())
      throw std::invalid_argument("one cost ceiling per household required");
    for (double c : *ceilings)
      if (!std::isfinite(c)) throw std::invalid_argument("cost ceilings must be finite");
  }

  const int n = s.horizon_slots;
  const int nk = static_cast<int>(s.households.size());
  ModelInstance m;

  std::vector<HouseholdVars> vars;
  vars.reserve(nk);
  for (int k = 0; k < nk; ++k) vars.push_back(add_household_vars(m, s, k));

  std::vector<std::vector<int>> trade(nk), quota(nk);
  for (int k = 0; k < nk; ++k) {
    const Household& hh = s.households[k];
    for (int h = 1; h <= n; ++h) {
      const double reach = hh.grid_limit + hh.storage.max_capacity - hh.storage.min_capacity +
                           hh.renewable[h - 1];
      trade[k].push_back(
          add_var(m, VarKind::Continuous, -reach, reach, {VarRole::TradeEnergy, k, -1, h}));
    }
  }
  for (int k = 0; k < nk; ++k)
    for (int h = 1; h <= n; ++h)
      quota[k].push_back(
          add_var(m, VarKind::Continuous, -kInf, kInf, {VarRole::TradeQuota, k, -1, h}));
  std::vector<int> price;
  for (int h = 1; h <= n; ++h)
    price.push_back(add_var(m, VarKind::Continuous, 0.0, s.grid_price[h - 1],
                            {VarRole::TradePrice, -1, -1, h}));

  for (int k = 0; k < nk; ++k) add_household_rows(m, s, k, vars[k], &trade[k]);

  for (int h = 1; h <= n; ++h) {
    LinearRow& r = add_row(m, Relation::Eq, 0.0, {RowRole::TradeClearing, -1, -1, h});
    for (int k = 0; k < nk; ++k) r.terms.emplace_back(trade[k][h - 1], 1.0);
  }

  for (int k = 0; k < nk; ++k) {
    const Household& hh = s.households[k];
    const StorageSpec& st = hh.storage;
    for (int h = 1; h <= n; ++h) {
      LinearRow& r = add_row(m, Relation::Eq, st.min_capacity - hh.renewable[h - 1],
                             {RowRole::QuotaDefinition, k, -1, h});
      r.terms.emplace_back(quota[k][h - 1], 1.0);
      for (std::size_t i = 0; i < hh.appliances.size(); ++i)
        r.terms.emplace_back(vars[k].run[i][h - 1], -hh.appliances[i].power);
      r.terms.emplace_back(vars[k].ic[h - 1], -st.charge_power);
      r.terms.emplace_back(vars[k].ge[h - 1], 1.0);
      r.terms.emplace_back(vars[k].se[h - 1], 1.0);
      r.terms.emplace_back(vars[k].be[h - 1], 1.0);
    }
    for (int h = 1; h <= n; ++h) {
      LinearRow& r = add_row(m, Relation::Ge, 0.0, {RowRole::QuotaFloor, k, -1, h});
      r.terms.emplace_back(trade[k][h - 1], 1.0);
      r.terms.emplace_back(quota[k][h - 1], -1.0);
    }
  }

  if (ceilings) {
    for (int k = 0; k < nk; ++k) {
      const Household& hh = s.households[k];
      double earliest_end_charge = 0.0;
      for (const Appliance& a : hh.appliances)
        earliest_end_charge += a.disutility_factor * (a.reservation_slot + a.duration - 1);
      LinearRow& r = add_row(m, Relation::Le, (*ceilings)[k] + earliest_end_charge,
                             {RowRole::CostCeiling, k, -1, -1});
      for (int h = 1; h <= n; ++h)
        r.terms.emplace_back(vars[k].ge[h - 1], s.grid_price[h - 1]);
      for (std::size_t i = 0; i < hh.appliances.size(); ++i)
        if (hh.appliances[i].disutility_factor != 0.0)
          r.terms.emplace_back(vars[k].end_slot[i], hh.appliances[i].disutility_factor);
      const int row_id = static_cast<int>(m.rows.size()) - 1;
      for (int h = 1; h <= n; ++h)
        m.bilinear_terms.push_back({1.0, price[h - 1], trade[k][h - 1], row_id});
    }
  }

  for (int k = 0; k < nk; ++k) add_household_objective(m, s, k, vars[k]);
  return m;
}

}  // namespace

ModelInstance build_no_trade_model(const Scenario& s, int household) {
  require_buildable(s);
  if (household < 0 || household >= static_cast<int>(s.households.size()))
    throw std::invalid_argument("household index out of range: " + std::to_string(household));
  ModelInstance m;
  HouseholdVars v = add_household_vars(m, s, household);
  add_household_rows(m, s, household, v, nullptr);
  add_household_objective(m, s, household, v);
  return m;
}

ModelInstance build_unified_model(const Scenario& s, const std::vector<double>& cost_ceilings) {
  return build_unified(s, &cost_ceilings);
}

ModelInstance build_unified_model(const Scenario& s) { return build_unified(s, nullptr); }

}  // namespace homegrid
