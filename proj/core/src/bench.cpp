#include "homegrid/bench.hpp"

#include "homegrid/instance_gen.hpp"
#include "homegrid/pareto.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace homegrid {

namespace {

bool is_timeout(SolveStatus st) {
  return st == SolveStatus::TimeoutWithIncumbent || st == SolveStatus::TimeoutNoIncumbent;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

BenchmarkRecord run_one(const std::string& dimension, int size, std::uint64_t seed,
                        double cutoff_s) {
  InstanceDims dims;
  if (dimension == "appliances") dims.appliances = size;
  else if (dimension == "timeslots") dims.timeslots = size;
  else dims.households = size;

  BenchmarkRecord rec;
  rec.dimension = dimension;
  rec.size = size;
  rec.seed = seed;

  const auto t0 = std::chrono::steady_clock::now();
  try {
    const Scenario s = generate_instance(dims, seed);
    ParetoOptions opt;
    opt.solver.time_limit_s = cutoff_s;
    const ParetoResult r = solve_pareto(s, opt);
    for (const SolveStats& st : r.no_trade_stats) rec.nodes += st.nodes;
    rec.nodes += r.traded.stats.nodes;
    rec.timed_out = is_timeout(r.traded.status);
    for (SolveStatus st : r.no_trade_status) rec.timed_out = rec.timed_out || is_timeout(st);
  } catch (const std::exception&) {
    rec.nodes = -1;
  }
  rec.time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

}  // namespace

BenchmarkResult run_benchmark(const std::string& dimension, const std::vector<int>& sizes,
                              const BenchmarkOptions& opt) {
  if (dimension != "appliances" && dimension != "timeslots" && dimension != "households")
    throw std::invalid_argument("run_benchmark: unknown dimension '" + dimension + "'");
  if (sizes.empty()) throw std::invalid_argument("run_benchmark: no sizes given");
  if (opt.repetitions < 3) throw std::invalid_argument("run_benchmark: need at least 3 repetitions");
  if (!(opt.cutoff_s > 0.0)) throw std::invalid_argument("run_benchmark: cutoff must be positive");
  const int minimum = dimension == "timeslots" ? 1 : dimension == "households" ? 2 : 1;
  for (int size : sizes)
    if (size < minimum)
      throw std::invalid_argument("run_benchmark: size below the minimum for " + dimension);

  std::vector<int> ordered = sizes;
  std::sort(ordered.begin(), ordered.end());
  ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());

  BenchmarkResult out;
  for (int size : ordered) {
    std::vector<double> times;
    int timeouts = 0;
    for (int r = 0; r < opt.repetitions; ++r) {
      BenchmarkRecord rec = run_one(dimension, size, opt.seed + static_cast<std::uint64_t>(r),
                                    opt.cutoff_s);
      times.push_back(rec.timed_out ? opt.cutoff_s : rec.time_s);
      timeouts += rec.timed_out ? 1 : 0;
      out.records.push_back(std::move(rec));
    }
    BenchmarkSummary sum;
    sum.dimension = dimension;
    sum.size = size;
    sum.median_s = median(std::move(times));
    sum.timeout_fraction = static_cast<double>(timeouts) / opt.repetitions;
    out.summary.push_back(std::move(sum));
  }
  return out;
}

std::string benchmark_csv(const std::vector<BenchmarkRecord>& records) {
  std::ostringstream out;
  out.precision(9);
  out << "dimension,size,seed,time_s,nodes,timed_out\n";
  for (const BenchmarkRecord& r : records)
    out << r.dimension << ',' << r.size << ',' << r.seed << ',' << r.time_s << ',' << r.nodes
        << ',' << (r.timed_out ? 1 : 0) << "\n";
  return out.str();
}

std::string benchmark_svg(const BenchmarkResult& result) {
  const int w = 640, h = 400, ml = 70, mr = 30, mt = 40, mb = 50;
  const double px = w - ml - mr, py = h - mt - mb;

  double max_y = 0.0;
  int min_x = 0, max_x = 0;
  if (!result.summary.empty()) {
    min_x = result.summary.front().size;
    max_x = result.summary.back().size;
    for (const BenchmarkSummary& s : result.summary) max_y = std::max(max_y, s.median_s);
  }
  if (max_y <= 0.0) max_y = 1.0;
  const double span_x = std::max(1, max_x - min_x);

  const auto sx = [&](double size) { return ml + px * (size - min_x) / span_x; };
  const auto sy = [&](double t) { return mt + py * (1.0 - t / max_y); };

  std::ostringstream out;
  out.precision(6);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\" viewBox=\"0 0 " << w << " " << h << "\">\n"
      << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n"
      << "<line x1=\"" << ml << "\" y1=\"" << mt + py << "\" x2=\"" << ml + px << "\" y2=\""
      << mt + py << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + py
      << "\" stroke=\"black\"/>\n";
  const std::string dim = result.summary.empty() ? "size" : result.summary.front().dimension;
  out << "<text x=\"" << ml + px / 2 << "\" y=\"" << h - 12
      << "\" text-anchor=\"middle\" font-size=\"14\">" << dim << "</text>\n"
      << "<text x=\"18\" y=\"" << mt + py / 2
      << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 18 " << mt + py / 2
      << ")\">median time (s)</text>\n"
      << "<text x=\"" << ml + px / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
      << "median solve time vs " << dim << "</text>\n";

  if (!result.summary.empty()) {
    out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
    for (const BenchmarkSummary& s : result.summary)
      out << sx(s.size) << ',' << sy(s.median_s) << ' ';
    out << "\"/>\n";
    for (const BenchmarkSummary& s : result.summary) {
      out << "<circle cx=\"" << sx(s.size) << "\" cy=\"" << sy(s.median_s)
          << "\" r=\"3.5\" fill=\"#1f77b4\"/>\n";
      out << "<text x=\"" << sx(s.size) << "\" y=\"" << mt + py + 18
          << "\" text-anchor=\"middle\" font-size=\"12\">" << s.size << "</text>\n";
    }
    out << "<text x=\"" << ml - 8 << "\" y=\"" << sy(max_y) + 4
        << "\" text-anchor=\"end\" font-size=\"12\">" << max_y << "</text>\n"
        << "<text x=\"" << ml - 8 << "\" y=\"" << sy(0.0) + 4
        << "\" text-anchor=\"end\" font-size=\"12\">0</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace homegrid
