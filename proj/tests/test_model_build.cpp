#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <homegrid/costs.hpp>
#include <homegrid/check.hpp>
#include <homegrid/instance_gen.hpp>
#include <homegrid/model_build.hpp>
#include <homegrid/scenario.hpp>
#include <homegrid/scenario_json.hpp>

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "helpers.hpp"

using namespace homegrid;

namespace {

// Closed-form variable count for one household's stand-alone model.
std::size_t household_var_count(const Scenario& s, std::size_t k) {
  const std::size_t n = static_cast<std::size_t>(s.horizon_slots);
  const Household& hh = s.households[k];
  std::size_t count = 5 * n;  // grid, storage draw, renewable, level, charge flag
  for (const Appliance& a : hh.appliances) {
    count += n;  // run flags
    if (!a.interruptible) count += n - static_cast<std::size_t>(a.duration) + 1;
    count += 1;  // end slot
  }
  return count;
}

std::size_t household_row_count(const Scenario& s, std::size_t k) {
  const std::size_t n = static_cast<std::size_t>(s.horizon_slots);
  const Household& hh = s.households[k];
  std::size_t count = 0;
  count += n;      // energy balance
  count += 1;      // storage initial link
  count += n - 1;  // storage carry
  count += n;      // storage ceiling
  count += n;      // storage floor
  count += n;      // renewable availability
  count += n;      // grid import limit
  for (const Appliance& a : hh.appliances) {
    count += 1;  // total runtime
    count += 1;  // no run before reservation (present even when trivially empty)
    count += n;  // end covers every run slot
    count += 1;  // end within deadline
    if (!a.interruptible) count += (n - static_cast<std::size_t>(a.duration) + 1) + 1;
    if (a.predecessor >= 0) count += n;
  }
  return count;
}

std::size_t count_role(const ModelInstance& m, VarRole role) {
  std::size_t c = 0;
  for (const auto& v : m.variables)
    if (v.meta.role == role) ++c;
  return c;
}

double objective_coeff(const ModelInstance& m, int var) {
  double c = 0.0;
  for (const auto& [id, coeff] : m.objective)
    if (id == var) c += coeff;
  return c;
}

}  // namespace

TEST_CASE("fixture household 1 has the expected shape") {
  Scenario s = load_scenario(fixture_path());
  ModelInstance m = build_no_trade_model(s, 0);

  // 5*8 slot vars + (8 run + 1 end) + (8 run + 7 starts + 1 end)
  CHECK(m.variables.size() == 65);
  CHECK(m.rows.size() == 68);
  CHECK(m.bilinear_terms.empty());

  CHECK(count_role(m, VarRole::GridEnergy) == 8);
  CHECK(count_role(m, VarRole::StorageDraw) == 8);
  CHECK(count_role(m, VarRole::RenewableUsed) == 8);
  CHECK(count_role(m, VarRole::StoredEnergy) == 8);
  CHECK(count_role(m, VarRole::ChargeFlag) == 8);
  CHECK(count_role(m, VarRole::RunFlag) == 16);
  CHECK(count_role(m, VarRole::StartFlag) == 7);
  CHECK(count_role(m, VarRole::EndSlot) == 2);

  CHECK(m.count_rows(RowRole::EnergyBalance) == 8);
  CHECK(m.count_rows(RowRole::StorageInit) == 1);
  CHECK(m.count_rows(RowRole::StorageCarry) == 7);
  CHECK(m.count_rows(RowRole::StorageCap) == 8);
  CHECK(m.count_rows(RowRole::StorageFloor) == 8);
  CHECK(m.count_rows(RowRole::RunTotal) == 2);
  CHECK(m.count_rows(RowRole::RenewableCap) == 8);
  CHECK(m.count_rows(RowRole::GridCap) == 8);
  CHECK(m.count_rows(RowRole::NoRunBeforeReservation) == 2);
  CHECK(m.count_rows(RowRole::EndCoversRun) == 16);
  CHECK(m.count_rows(RowRole::EndWithinDeadline) == 2);
  CHECK(m.count_rows(RowRole::BlockCover) == 7);
  CHECK(m.count_rows(RowRole::StartOnce) == 1);
  CHECK(m.count_rows(RowRole::RequestOrder) == 0);

  CHECK(household_var_count(s, 0) == m.variables.size());
  CHECK(household_row_count(s, 0) == m.rows.size());
}

TEST_CASE("fixture spot checks: bounds, rhs and objective") {
  Scenario s = load_scenario(fixture_path());
  ModelInstance m = build_no_trade_model(s, 0);

  int ge1 = m.find_var(VarRole::GridEnergy, 0, -1, 1);
  REQUIRE(ge1 >= 0);
  CHECK(m.variables[ge1].kind == VarKind::Continuous);
  CHECK(m.variables[ge1].lower == 0.0);
  CHECK(std::isinf(m.variables[ge1].upper));

  // the grid import limit shows up as a row bound, not a variable bound
  std::size_t caps = 0;
  for (const auto& r : m.rows) {
    if (r.meta.role != RowRole::GridCap) continue;
    CHECK(r.rel == Relation::Le);
    CHECK(r.rhs == doctest::Approx(20.0));
    ++caps;
  }
  CHECK(caps == 8);

  // end slots are integers in [1, horizon]
  int end0 = m.find_var(VarRole::EndSlot, 0, 0, -1);
  REQUIRE(end0 >= 0);
  CHECK(m.variables[end0].kind == VarKind::Integer);
  CHECK(m.variables[end0].lower == doctest::Approx(1.0));
  CHECK(m.variables[end0].upper == doctest::Approx(8.0));

  // objective offset credits each appliance with its earliest possible finish
  double earliest = 0.0;
  for (const Appliance& a : s.households[0].appliances)
    earliest += a.disutility_factor *
                static_cast<double>(a.reservation_slot + a.duration - 1);
  CHECK(m.objective_offset == doctest::Approx(-earliest));

  // grid energy carries the tariff, end slots the delay charge
  CHECK(objective_coeff(m, ge1) == doctest::Approx(0.7));
  CHECK(objective_coeff(m, m.find_var(VarRole::GridEnergy, 0, -1, 5)) == doctest::Approx(2.0));
  CHECK(objective_coeff(m, end0) == doctest::Approx(0.01));
}

TEST_CASE("counts follow the closed forms on random scenarios") {
  for (std::uint64_t seed = 40; seed < 50; ++seed) {
    InstanceDims dims;
    dims.appliances = 1 + static_cast<int>(seed % 3);
    dims.timeslots = 3 + static_cast<int>(seed % 4);
    dims.households = 2 + static_cast<int>(seed % 2);
    Scenario s = generate_instance(dims, seed);

    std::size_t var_sum = 0;
    std::size_t row_sum = 0;
    for (std::size_t k = 0; k < s.households.size(); ++k) {
      ModelInstance hh = build_no_trade_model(s, static_cast<int>(k));
      CHECK(hh.variables.size() == household_var_count(s, k));
      CHECK(hh.rows.size() == household_row_count(s, k));
      var_sum += hh.variables.size();
      row_sum += hh.rows.size();
    }

    const std::size_t n = static_cast<std::size_t>(s.horizon_slots);
    const std::size_t nk = s.households.size();

    ModelInstance u = build_unified_model(s);
    CHECK(u.variables.size() == var_sum + 2 * nk * n + n);
    CHECK(u.rows.size() == row_sum + n + 2 * nk * n);
    CHECK(u.bilinear_terms.empty());

    std::vector<double> ceilings(nk, 100.0);
    ModelInstance c = build_unified_model(s, ceilings);
    CHECK(c.variables.size() == u.variables.size());
    CHECK(c.rows.size() == u.rows.size() + nk);
    CHECK(c.bilinear_terms.size() == nk * n);
  }
}

TEST_CASE("unified model wiring") {
  Scenario s = load_scenario(fixture_path());
  ModelInstance m = build_unified_model(s);

  // shared price variables, one per slot, bounded by the tariff
  for (int h = 1; h <= s.horizon_slots; ++h) {
    int p = m.find_var(VarRole::TradePrice, -1, -1, h);
    REQUIRE(p >= 0);
    CHECK(m.variables[p].kind == VarKind::Continuous);
    CHECK(m.variables[p].lower == doctest::Approx(0.0));
    CHECK(m.variables[p].upper == doctest::Approx(s.grid_price[h - 1]));
  }

  // trade bounds cover the worst case in either direction, slot by slot
  for (std::size_t k = 0; k < s.households.size(); ++k) {
    const Household& hh = s.households[k];
    for (int h = 1; h <= s.horizon_slots; ++h) {
      const double reach = hh.grid_limit + hh.storage.max_capacity -
                           hh.storage.min_capacity + hh.renewable[h - 1];
      int t = m.find_var(VarRole::TradeEnergy, static_cast<int>(k), -1, h);
      REQUIRE(t >= 0);
      CHECK(m.variables[t].lower == doctest::Approx(-reach));
      CHECK(m.variables[t].upper == doctest::Approx(reach));
    }
  }

  CHECK(m.count_rows(RowRole::TradeClearing) == 8);
  CHECK(m.count_rows(RowRole::QuotaDefinition) == 16);
  CHECK(m.count_rows(RowRole::QuotaFloor) == 16);
  CHECK(m.count_rows(RowRole::CostCeiling) == 0);
}

TEST_CASE("cost ceilings attach bilinear payment terms") {
  Scenario s = load_scenario(fixture_path());
  std::vector<double> ceilings = {6.99, 7.57};
  ModelInstance m = build_unified_model(s, ceilings);

  CHECK(m.count_rows(RowRole::CostCeiling) == 2);
  CHECK(m.bilinear_terms.size() == 16);

  // every term pairs the slot price with that household's trade volume
  for (const BilinearTerm& t : m.bilinear_terms) {
    CHECK(t.coeff == doctest::Approx(1.0));
    const Variable& a = m.variables[static_cast<std::size_t>(t.a)];
    const Variable& b = m.variables[static_cast<std::size_t>(t.b)];
    CHECK(a.meta.role == VarRole::TradePrice);
    CHECK(b.meta.role == VarRole::TradeEnergy);
    CHECK(a.meta.slot == b.meta.slot);
    REQUIRE(t.row >= 0);
    CHECK(m.rows[static_cast<std::size_t>(t.row)].meta.role == RowRole::CostCeiling);
    CHECK(m.rows[static_cast<std::size_t>(t.row)].meta.household == b.meta.household);
  }

  // ceiling rhs restates the cap in the shifted delay convention
  std::size_t seen = 0;
  for (const auto& r : m.rows) {
    if (r.meta.role != RowRole::CostCeiling) continue;
    const std::size_t k = static_cast<std::size_t>(r.meta.household);
    double earliest = 0.0;
    for (const Appliance& a : s.households[k].appliances)
      earliest += a.disutility_factor *
                  static_cast<double>(a.reservation_slot + a.duration - 1);
    CHECK(r.rel == Relation::Le);
    CHECK(r.rhs == doctest::Approx(ceilings[k] + earliest));
    ++seen;
  }
  CHECK(seen == 2);
}

TEST_CASE("builder rejects bad input") {
  Scenario s = load_scenario(fixture_path());

  CHECK_THROWS_AS((void)build_no_trade_model(s, 7), std::invalid_argument);
  CHECK_THROWS_AS((void)build_no_trade_model(s, -1), std::invalid_argument);

  CHECK_THROWS_AS((void)build_unified_model(s, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(
      (void)build_unified_model(s, {1.0, std::numeric_limits<double>::quiet_NaN()}),
      std::invalid_argument);

  // multi-request appliances must be expanded first
  Scenario multi = s;
  multi.households[0].appliances[1].requests = {1, 5};
  CHECK_THROWS_AS((void)build_no_trade_model(multi, 0), std::invalid_argument);
  Scenario expanded = expand_virtual_appliances(multi);
  CHECK(validate_scenario(expanded).empty());
  CHECK_NOTHROW((void)build_no_trade_model(expanded, 0));
  ModelInstance em = build_no_trade_model(expanded, 0);
  CHECK(em.count_rows(RowRole::RequestOrder) == 8);

  Scenario broken = s;
  broken.grid_price[0] = -1.0;
  CHECK_THROWS_AS((void)build_no_trade_model(broken, 0), std::invalid_argument);
}

TEST_CASE("storage trajectory and costs agree with hand accounting") {
  // one slot, one appliance that must run, store charges in the same slot
  Scenario s = bare_house(1, {2.0});
  s.households[0].appliances.push_back(make_appliance(1, 3.0, 0.5, 1, 1, true));
  s.households[0].storage.charge_power = 1.0;
  s.households[0].storage.efficiency = 0.8;
  s.households[0].storage.retention = 0.5;
  s.households[0].storage.max_capacity = 4.0;
  s.households[0].storage.min_capacity = 0.0;
  s.households[0].storage.initial_energy = 2.0;
  REQUIRE(validate_scenario(s).empty());

  ModelInstance m = build_no_trade_model(s, 0);
  std::vector<double> x(m.variables.size(), 0.0);
  auto set = [&](VarRole role, int app, int slot, double v) {
    int id = m.find_var(role, 0, app, slot);
    REQUIRE(id >= 0);
    x[static_cast<std::size_t>(id)] = v;
  };
  set(VarRole::RunFlag, 0, 1, 1.0);
  set(VarRole::EndSlot, 0, -1, 1.0);
  set(VarRole::ChargeFlag, -1, 1, 1.0);
  // grid covers the 3.0 appliance load plus the full 1.0 charge draw;
  // only 0.8 of the draw lands in the store, on top of 0.5 * 2.0 retained
  set(VarRole::GridEnergy, -1, 1, 4.0);
  set(VarRole::StoredEnergy, -1, 1, 1.8);

  AssignmentCheck rep = check_assignment(m, x);
  CHECK(rep.within(1e-9));

  std::vector<double> level = storage_trajectory(m, x, s, 0);
  REQUIRE(level.size() == 1);
  CHECK(level[0] == doctest::Approx(1.8));

  CHECK(energy_cost(m, x, s, 0) == doctest::Approx(8.0));
  CHECK(disutility_cost(m, x, s, 0) == doctest::Approx(0.0));
  CHECK(objective_value(m, x) == doctest::Approx(8.0));
}

TEST_CASE("delay cost charges end slots past the earliest finish") {
  Scenario s = bare_house(3, {1.0, 1.0, 1.0});
  s.households[0].appliances.push_back(make_appliance(1, 2.0, 0.25, 1, 3, true));
  REQUIRE(validate_scenario(s).empty());

  ModelInstance m = build_no_trade_model(s, 0);
  std::vector<double> x(m.variables.size(), 0.0);
  int run3 = m.find_var(VarRole::RunFlag, 0, 0, 3);
  int end0 = m.find_var(VarRole::EndSlot, 0, 0, -1);
  int ge3 = m.find_var(VarRole::GridEnergy, 0, -1, 3);
  REQUIRE(run3 >= 0);
  REQUIRE(end0 >= 0);
  REQUIRE(ge3 >= 0);
  x[static_cast<std::size_t>(run3)] = 1.0;
  x[static_cast<std::size_t>(end0)] = 3.0;
  x[static_cast<std::size_t>(ge3)] = 2.0;
  CHECK(check_assignment(m, x).within(1e-9));

  CHECK(energy_cost(m, x, s, 0) == doctest::Approx(2.0));
  CHECK(disutility_cost(m, x, s, 0) == doctest::Approx(0.25 * 2.0));
  CHECK(objective_value(m, x) == doctest::Approx(2.5));
}
