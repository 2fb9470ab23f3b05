#pragma once

#include "homegrid/scenario.hpp"

#include <string>
#include <utility>
#include <vector>

// Small scenario builders shared by the test binaries.

inline std::string fixture_path() {
  return std::string(HOMEGRID_FIXTURE_DIR) + "/paper_2house.json";
}

// One household, no storage headroom, no renewables: scheduling + grid only.
inline homegrid::Scenario bare_house(int slots, std::vector<double> prices) {
  homegrid::Scenario s;
  s.horizon_slots = slots;
  s.grid_price = std::move(prices);
  homegrid::Household hh;
  hh.grid_limit = 1000.0;
  hh.renewable.assign(slots, 0.0);
  hh.storage.efficiency = 1.0;
  hh.storage.retention = 1.0;
  s.households.push_back(std::move(hh));
  return s;
}

inline homegrid::Appliance make_appliance(int duration, double power, double disutility,
                                          int reservation, int max_end, bool interruptible) {
  homegrid::Appliance a;
  a.duration = duration;
  a.power = power;
  a.disutility_factor = disutility;
  a.reservation_slot = reservation;
  a.max_end = max_end;
  a.interruptible = interruptible;
  return a;
}

// Two households, one single-slot appliance each, a renewable surplus on the
// first: the smallest scenario where microgrid trading can matter.
inline homegrid::Scenario tiny_market() {
  homegrid::Scenario s = bare_house(2, {2.0, 1.0});
  s.households[0].appliances.push_back(make_appliance(1, 1.0, 0.0, 1, 2, true));
  s.households[0].renewable = {3.0, 0.0};
  homegrid::Household h2 = s.households[0];
  h2.appliances[0].power = 2.0;
  h2.renewable = {0.0, 0.0};
  s.households.push_back(std::move(h2));
  return s;
}
