#include "homegrid/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace homegrid {

std::string to_string(const Violation& v) { return v.path + ": " + v.message; }

namespace {

std::string idx(const std::string& base, std::size_t i) {
  std::ostringstream os;
  os << base << '[' << i << ']';
  return os.str();
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

std::vector<Violation> validate_scenario(const Scenario& s) {
  std::vector<Violation> out;
  auto add = [&out](std::string path, std::string msg) {
    out.push_back({std::move(path), std::move(msg)});
  };

  const int n = s.horizon_slots;
  if (n < 1) add("horizon", "must be at least 1 slot");
  if (s.households.empty()) add("households", "at least one household required");

  if (n >= 1) {
    if (static_cast<int>(s.grid_price.size()) != n) {
      add("grid_price", "expected " + std::to_string(n) + " entries, got " +
                            std::to_string(s.grid_price.size()));
    }
    for (std::size_t h = 0; h < s.grid_price.size(); ++h) {
      if (!finite(s.grid_price[h]) || s.grid_price[h] < 0.0)
        add(idx("grid_price", h), "price must be finite and non-negative");
    }
  }

  for (std::size_t k = 0; k < s.households.size(); ++k) {
    const Household& hh = s.households[k];
    const std::string base = idx("households", k);

    if (!finite(hh.grid_limit) || hh.grid_limit <= 0.0)
      add(base + ".grid_limit", "must be finite and positive");

    if (n >= 1 && static_cast<int>(hh.renewable.size()) != n) {
      add(base + ".renewable", "expected " + std::to_string(n) + " entries, got " +
                                   std::to_string(hh.renewable.size()));
    }
    for (std::size_t h = 0; h < hh.renewable.size(); ++h) {
      if (!finite(hh.renewable[h]) || hh.renewable[h] < 0.0)
        add(idx(base + ".renewable", h), "must be finite and non-negative");
    }

    const StorageSpec& st = hh.storage;
    const std::string sb = base + ".storage";
    if (!finite(st.charge_power) || st.charge_power < 0.0)
      add(sb + ".charge_power", "must be finite and non-negative");
    if (!finite(st.efficiency) || st.efficiency <= 0.0 || st.efficiency > 1.0)
      add(sb + ".efficiency", "must lie in (0, 1]");
    if (!finite(st.retention) || st.retention <= 0.0 || st.retention > 1.0)
      add(sb + ".retention", "must lie in (0, 1]");
    if (!finite(st.min_capacity) || st.min_capacity < 0.0)
      add(sb + ".min_capacity", "must be finite and non-negative");
    if (!finite(st.max_capacity) || st.max_capacity < 0.0)
      add(sb + ".max_capacity", "must be finite and non-negative");
    if (st.min_capacity > st.max_capacity)
      add(sb, "min_capacity exceeds max_capacity");
    if (st.initial_energy < st.min_capacity || st.initial_energy > st.max_capacity)
      add(sb + ".initial", "initial energy must lie within [min_capacity, max_capacity]");

    for (std::size_t i = 0; i < hh.appliances.size(); ++i) {
      const Appliance& a = hh.appliances[i];
      const std::string ab = idx(base + ".appliances", i);
      if (a.duration < 1) add(ab + ".duration", "must be at least 1");
      if (!finite(a.power) || a.power <= 0.0) add(ab + ".power", "must be finite and positive");
      if (!finite(a.disutility_factor) || a.disutility_factor < 0.0)
        add(ab + ".disutility_factor", "must be finite and non-negative");
      if (n >= 1) {
        if (a.reservation_slot < 1 || a.reservation_slot > n)
          add(ab + ".reservation_slot", "must lie in [1, " + std::to_string(n) + "]");
        if (a.max_end > n)
          add(ab + ".max_end", "must not exceed the horizon (" + std::to_string(n) + ")");
        if (a.reservation_slot + a.duration - 1 > a.max_end)
          add(ab, "cannot finish by max_end " + std::to_string(a.max_end) +
                      " when reserved at slot " + std::to_string(a.reservation_slot) +
                      " with duration " + std::to_string(a.duration));
        if (!a.requests.empty()) {
          if (a.requests.front() != a.reservation_slot)
            add(ab + ".requests", "first request must equal reservation_slot");
          for (std::size_t r = 0; r < a.requests.size(); ++r) {
            const int slot = a.requests[r];
            if (slot < 1 || slot > n)
              add(idx(ab + ".requests", r), "must lie in [1, " + std::to_string(n) + "]");
            if (r > 0 && slot <= a.requests[r - 1])
              add(idx(ab + ".requests", r), "requests must be strictly increasing");
            if (slot + a.duration - 1 > a.max_end)
              add(idx(ab + ".requests", r),
                  "request cannot finish by max_end " + std::to_string(a.max_end));
          }
        }
      }
    }
  }

  return out;
}

Scenario expand_virtual_appliances(const Scenario& s) {
  Scenario out = s;
  for (Household& hh : out.households) {
    std::vector<Appliance> expanded;
    expanded.reserve(hh.appliances.size());
    for (const Appliance& a : hh.appliances) {
      if (a.requests.size() <= 1) {
        expanded.push_back(a);
        continue;
      }
      int prev = -1;
      for (int slot : a.requests) {
        Appliance copy = a;
        copy.reservation_slot = slot;
        copy.requests.clear();
        copy.predecessor = prev;
        prev = static_cast<int>(expanded.size());
        expanded.push_back(std::move(copy));
      }
    }
    hh.appliances = std::move(expanded);
  }
  return out;
}

}  // namespace homegrid
