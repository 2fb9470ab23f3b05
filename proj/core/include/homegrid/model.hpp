#pragma once

#include <cstdint>
#include <vector>

namespace homegrid {

enum class VarKind : std::uint8_t { Continuous, Boolean, Integer };

// What a decision variable means in the household energy model.
enum class VarRole : std::uint8_t {
  GridEnergy,     // energy bought from the grid in a slot
  StorageDraw,    // energy taken out of storage in a slot
  RenewableUsed,  // renewable energy consumed in a slot
  StoredEnergy,   // storage level at the end of a slot
  ChargeFlag,     // 1 when the store charges during a slot
  RunFlag,        // 1 when an appliance runs in a slot
  StartFlag,      // 1 when an uninterruptible appliance starts its block at a slot
  EndSlot,        // integer end-of-operation slot, used to price delay
  TradeEnergy,    // net energy bought (+) or sold (-) on the neighborhood market
  TradeQuota,     // per-slot net-position expression a household must cover
  TradePrice,     // per-slot market clearing price
};

struct VarMeta {
  VarRole role = VarRole::GridEnergy;
  int household = -1;  // index into Scenario::households, -1 if shared
  int appliance = -1;  // index into Household::appliances, -1 if not appliance-scoped
  int slot = -1;       // 1-based timeslot, -1 if not slot-scoped
};

struct Variable {
  VarKind kind = VarKind::Continuous;
  double lower = 0.0;
  double upper = 0.0;
  VarMeta meta;
};

enum class Relation : std::uint8_t { Le, Eq, Ge };

// Which constraint family a row belongs to (used by tests, reports and diagnostics).
enum class RowRole : std::uint8_t {
  EnergyBalance,      // per-slot sources == loads
  StorageInit,        // first-slot storage level link
  StorageCarry,       // slot-to-slot storage level link
  StorageCap,         // level <= max capacity
  StorageFloor,       // level >= min capacity
  RunTotal,           // appliance runs exactly `duration` slots
  RenewableCap,       // renewable use <= availability
  NoRunBeforeReservation,
  EndCoversRun,       // end slot >= every slot the appliance runs in
  EndWithinDeadline,  // end slot <= max_end
  BlockCover,         // uninterruptible: started block forces a full run
  StartOnce,          // uninterruptible: exactly one block start
  GridCap,            // grid purchase <= household limit
  RequestOrder,       // later request instance waits for its predecessor
  TradeClearing,      // per-slot market trades net to zero
  QuotaDefinition,    // defines the per-slot trade quota expression
  QuotaFloor,         // trade >= quota
  CostCeiling,        // household cost no worse than its solo optimum
};

struct RowMeta {
  RowRole role = RowRole::EnergyBalance;
  int household = -1;
  int appliance = -1;
  int slot = -1;
};

struct LinearRow {
  std::vector<std::pair<int, double>> terms;  // (variable id, coefficient)
  Relation rel = Relation::Eq;
  double rhs = 0.0;
  RowMeta meta;
};

// coeff * x[a] * x[b], added into row `row` (or the objective when row == -1).
struct BilinearTerm {
  double coeff = 0.0;
  int a = -1;
  int b = -1;
  int row = -1;
};

struct ModelInstance {
  std::vector<Variable> variables;
  std::vector<LinearRow> rows;
  std::vector<BilinearTerm> bilinear_terms;
  std::vector<std::pair<int, double>> objective;  // linear, minimized
  double objective_offset = 0.0;

  // -1 when absent. Match fields set to -1 act as wildcards only where the builder
  // never assigns them; lookups are exact.
  int find_var(VarRole role, int household, int appliance, int slot) const;
  std::size_t count_rows(RowRole role) const;
};

}  // namespace homegrid
