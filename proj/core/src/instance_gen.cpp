#include "homegrid/instance_gen.hpp"

#include <cmath>
#include <stdexcept>

namespace homegrid {

namespace {

// splitmix64: tiny, seedable, identical everywhere. std::mt19937 with
// std::uniform_real_distribution would tie generated fixtures to one standard
// library's distribution internals.
class SplitMix {
 public:
  explicit SplitMix(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97f4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  double uniform(double lo, double hi) {
    const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
    return std::round((lo + (hi - lo) * u) * 1e6) / 1e6;
  }

  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::uint64_t state_;
};

}  // namespace

Scenario generate_instance(const InstanceDims& dims, std::uint64_t seed) {
  if (dims.appliances < 1) throw std::invalid_argument("generate_instance: appliances must be >= 1");
  if (dims.timeslots < 1) throw std::invalid_argument("generate_instance: timeslots must be >= 1");
  if (dims.households < 2)
    throw std::invalid_argument("generate_instance: a microgrid needs at least 2 households");

  SplitMix rng(seed);
  const int n = dims.timeslots;

  Scenario s;
  s.horizon_slots = n;
  s.grid_price.reserve(n);
  for (int h = 0; h < n; ++h) s.grid_price.push_back(rng.uniform(0.1, 5.0));

  s.households.resize(dims.households);
  for (Household& hh : s.households) {
    hh.appliances.resize(dims.appliances);
    for (int i = 0; i < dims.appliances; ++i) {
      Appliance& a = hh.appliances[i];
      a.duration = rng.uniform_int(1, n);
      a.power = rng.uniform(0.5, 15.0);
      a.disutility_factor = rng.uniform(0.01, 10.0);
      a.reservation_slot = 1;
      a.max_end = n;
      a.interruptible = (i % 2) == 0;
    }
    hh.storage.charge_power = rng.uniform(2.0, 5.0);
    hh.storage.min_capacity = rng.uniform(0.0, 2.0);
    hh.storage.max_capacity = rng.uniform(5.0, 10.0);
    hh.storage.efficiency = 0.9;
    hh.storage.retention = 0.99;
    hh.storage.initial_energy = 5.0;
    hh.renewable.reserve(n);
    for (int h = 0; h < n; ++h) hh.renewable.push_back(rng.uniform(0.0, 10.0));
    hh.grid_limit = 200000.0;
  }
  return s;
}

}  // namespace homegrid
