#pragma once

#include "homegrid/scenario.hpp"

#include <cstdint>

namespace homegrid {

struct InstanceDims {
  int appliances = 2;
  int timeslots = 3;
  int households = 2;
};

// Deterministic random scenario for a given seed. Static fields are fixed
// (efficiency 0.9, retention 0.99, initial energy 5, reservation slot 1,
// max_end = horizon, grid limit 200000); the rest is drawn uniformly from
// fixed ranges. Appliances alternate interruptible/uninterruptible starting
// with an interruptible one. Throws std::invalid_argument when a dimension is
// below its minimum (1 appliance, 1 timeslot, 2 households).
Scenario generate_instance(const InstanceDims& dims, std::uint64_t seed);

}  // namespace homegrid
