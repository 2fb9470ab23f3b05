#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace homegrid {

struct BenchmarkRecord {
  std::string dimension;  // "appliances", "timeslots" or "households"
  int size = 0;
  std::uint64_t seed = 0;  // regenerate the exact instance with generate_instance
  double time_s = 0.0;
  std::int64_t nodes = 0;  // summed over both phases; -1 when the solve faulted
  bool timed_out = false;
};

struct BenchmarkSummary {
  std::string dimension;
  int size = 0;
  double median_s = 0.0;  // timed-out runs enter at the cutoff value
  double timeout_fraction = 0.0;
};

struct BenchmarkOptions {
  int repetitions = 5;     // >= 3
  double cutoff_s = 60.0;  // per solve phase, > 0
  std::uint64_t seed = 0;  // run r uses seed + r
};

struct BenchmarkResult {
  std::vector<BenchmarkRecord> records;  // sorted by (size, seed)
  std::vector<BenchmarkSummary> summary;
};

// Scaling sweep: hold the other dimensions at their minimums (2 appliances,
// 3 timeslots, 2 households), sweep `dimension` over `sizes`, and run the full
// two-phase workflow on `repetitions` seeded random instances per size. Solve
// faults are recorded (nodes = -1), never propagated. Throws
// std::invalid_argument on an unknown dimension, empty sizes, repetitions < 3
// or cutoff <= 0.
BenchmarkResult run_benchmark(const std::string& dimension, const std::vector<int>& sizes,
                              const BenchmarkOptions& opt = {});

// CSV with header dimension,size,seed,time_s,nodes,timed_out (bools as 1/0).
std::string benchmark_csv(const std::vector<BenchmarkRecord>& records);

// Static SVG line chart of median time against size.
std::string benchmark_svg(const BenchmarkResult& result);

}  // namespace homegrid
