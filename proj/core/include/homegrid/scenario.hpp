#pragma once

#include <string>
#include <vector>

namespace homegrid {

// One schedulable task. `duration` consecutive-or-not active slots (depending on
// `interruptible`), each drawing `power` units of energy. Execution may not start
// before `reservation_slot` and must have finished by `max_end`. Delay beyond the
// earliest possible finish is charged at `disutility_factor` per slot.
struct Appliance {
  int duration = 1;
  double power = 0.0;
  double disutility_factor = 0.0;
  int reservation_slot = 1;
  int max_end = 1;
  bool interruptible = false;

  // All reservation slots when the same appliance is requested several times over
  // the horizon. Empty (or a single entry equal to reservation_slot) means one
  // request. Multi-request appliances must go through expand_virtual_appliances()
  // before model building.
  std::vector<int> requests;

  // Index (within the household, after expansion) of the request instance that has
  // to finish before this one may run. -1 when unconstrained.
  int predecessor = -1;
};

// Battery-style store. `efficiency` is the fraction of charged energy that actually
// lands in the store; `retention` is the fraction of the level carried into the next
// slot (1 - self-discharge).
struct StorageSpec {
  double initial_energy = 0.0;
  double charge_power = 0.0;
  double efficiency = 1.0;
  double retention = 1.0;
  double max_capacity = 0.0;
  double min_capacity = 0.0;
};

struct Household {
  std::vector<Appliance> appliances;
  StorageSpec storage;
  std::vector<double> renewable;  // available renewable energy per slot, length = horizon
  double grid_limit = 0.0;        // max grid purchase per slot
};

struct Scenario {
  int horizon_slots = 0;
  std::vector<Household> households;
  std::vector<double> grid_price;  // per slot, length = horizon
};

struct Violation {
  std::string path;     // e.g. "households[1].appliances[0]"
  std::string message;
};

std::string to_string(const Violation& v);

// Structural checks only; an empty result means the scenario can be handed to the
// model builders. Never throws: problems come back as data.
std::vector<Violation> validate_scenario(const Scenario& s);

// Rewrites every multi-request appliance into one single-request copy per entry of
// `requests`, chained so each copy may only run after its predecessor finished.
// Single-request appliances pass through unchanged.
Scenario expand_virtual_appliances(const Scenario& s);

}  // namespace homegrid
