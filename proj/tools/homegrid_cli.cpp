#include "homegrid/bench.hpp"
#include "homegrid/check.hpp"
#include "homegrid/costs.hpp"
#include "homegrid/instance_gen.hpp"
#include "homegrid/model_build.hpp"
#include "homegrid/oracle.hpp"
#include "homegrid/pareto.hpp"
#include "homegrid/report.hpp"
#include "homegrid/scenario_json.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace {

using namespace homegrid;
using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitTimeout = 2;
constexpr int kExitInputError = 3;

struct CommonArgs {
  std::string scenario_path;
  double time_limit = 600.0;
  double gap = 1e-6;
  std::uint64_t seed = 0;
  int workers = 1;
  bool deterministic = true;
  ReportFormat format = ReportFormat::Table;
};

SolverOptions solver_options(const CommonArgs& a) {
  SolverOptions o;
  o.time_limit_s = a.time_limit;
  o.rel_gap = a.gap;
  o.seed = a.seed;
  o.workers = a.workers;
  o.deterministic = a.deterministic;
  return o;
}

int exit_code(SolveStatus st) {
  switch (st) {
    case SolveStatus::Optimal:
    case SolveStatus::TimeoutWithIncumbent: return kExitOk;
    case SolveStatus::Infeasible: return kExitInfeasible;
    case SolveStatus::TimeoutNoIncumbent: return kExitTimeout;
  }
  return kExitInputError;
}

ordered_json solution_json(const Solution& sol) {
  ordered_json j;
  j["status"] = to_string(sol.status);
  j["objective"] = sol.objective;
  j["best_bound"] = sol.stats.best_bound;
  j["gap"] = sol.gap;
  j["nodes"] = sol.stats.nodes;
  j["lp_solves"] = sol.stats.lp_solves;
  j["wall_time_s"] = sol.stats.wall_time_s;
  return j;
}

int emit_solve(const ModelInstance& m, const Solution& sol, const Scenario& s,
               const CommonArgs& args) {
  if (args.format == ReportFormat::Json) {
    ordered_json doc = solution_json(sol);
    if (!sol.assignment.empty())
      doc["report"] = nlohmann::json::parse(emit_report(m, sol.assignment, s, ReportFormat::Json));
    std::cout << doc.dump(2) << "\n";
    return exit_code(sol.status);
  }
  if (sol.assignment.empty()) {
    std::cout << "status: " << to_string(sol.status) << "\n";
    return exit_code(sol.status);
  }
  if (args.format == ReportFormat::Csv) {
    std::cout << emit_report(m, sol.assignment, s, ReportFormat::Csv);
    return exit_code(sol.status);
  }
  std::printf("status: %s   objective: %.6f   bound: %.6f   gap: %.2e   nodes: %lld\n\n",
              to_string(sol.status), sol.objective, sol.stats.best_bound, sol.gap,
              static_cast<long long>(sol.stats.nodes));
  std::cout << emit_report(m, sol.assignment, s, ReportFormat::Table);
  return exit_code(sol.status);
}

int pareto_exit(const ParetoResult& r) {
  if (r.infeasible_household >= 0) return kExitInfeasible;
  for (SolveStatus st : r.no_trade_status)
    if (st == SolveStatus::TimeoutNoIncumbent) return kExitTimeout;
  return exit_code(r.traded.status);
}

int run_pareto(const Scenario& s, const ParetoOptions& opt, const CommonArgs& args,
               bool report_only) {
  const ParetoResult r = solve_pareto(s, opt);
  if (r.infeasible_household >= 0) {
    std::cerr << "household " << r.infeasible_household + 1 << " is infeasible stand-alone\n";
    return kExitInfeasible;
  }
  if (r.traded.assignment.empty()) {
    std::cerr << "traded solve ended without a schedule: " << to_string(r.traded.status) << "\n";
    return pareto_exit(r);
  }
  const ParetoVerification v = verify_pareto(r, s);

  if (args.format == ReportFormat::Json) {
    ordered_json doc;
    doc["stand_alone_costs"] = r.no_trade_costs;
    doc["ceilings"] = r.ceilings_used;
    doc["traded"] = solution_json(r.traded);
    doc["household_costs"] = ordered_json::array();
    for (const HouseholdCost& hc : r.household_costs)
      doc["household_costs"].push_back(
          {{"energy", hc.energy}, {"disutility", hc.disutility}, {"total", hc.total}});
    doc["market_prices"] = r.micro_prices;
    doc["total"] = r.total;
    doc["verification"] = {{"pass", v.pass}, {"worst_residual", v.worst}};
    doc["report"] = nlohmann::json::parse(emit_report(r, s, ReportFormat::Json));
    std::cout << doc.dump(2) << "\n";
    return pareto_exit(r);
  }
  if (args.format == ReportFormat::Csv) {
    std::cout << emit_report(r, s, ReportFormat::Csv);
    return pareto_exit(r);
  }
  if (!report_only) {
    std::printf("traded status: %s   objective: %.6f   gap: %.2e   nodes: %lld\n",
                to_string(r.traded.status), r.traded.objective, r.traded.gap,
                static_cast<long long>(r.traded.stats.nodes));
    for (std::size_t k = 0; k < r.household_costs.size(); ++k)
      std::printf("household %zu: stand-alone %.4f -> traded %.4f\n", k + 1, r.no_trade_costs[k],
                  r.household_costs[k].total);
    std::printf("combined total: %.4f\n", r.total);
    std::printf("verification: %s (worst residual %.2e)\n\n", v.pass ? "pass" : "FAIL", v.worst);
  }
  std::cout << emit_report(r, s, ReportFormat::Table);
  return pareto_exit(r);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"residential energy scheduling with storage, renewables and microgrid trading"};
  app.require_subcommand(1);

  CommonArgs args;
  app.add_option("--scenario", args.scenario_path, "scenario JSON file");
  app.add_option("--time-limit", args.time_limit, "solver time limit in seconds per solve");
  app.add_option("--gap", args.gap, "relative optimality gap");
  app.add_option("--seed", args.seed, "random seed");
  app.add_option("--workers", args.workers, "parallel workers (needs --no-deterministic)");
  app.add_flag("--deterministic,!--no-deterministic", args.deterministic,
               "single-worker reproducible mode (default on)");
  const std::map<std::string, ReportFormat> format_names{{"table", ReportFormat::Table},
                                                         {"csv", ReportFormat::Csv},
                                                         {"json", ReportFormat::Json}};
  app.add_option("--format", args.format, "output format")
      ->transform(CLI::CheckedTransformer(format_names, CLI::ignore_case));

  CLI::App* c_validate = app.add_subcommand("validate", "parse and validate a scenario file");
  CLI::App* c_notrade =
      app.add_subcommand("solve-notrade", "optimal stand-alone schedule for one household");
  int household = 1;
  c_notrade->add_option("--household", household, "household number, starting at 1")->required();
  CLI::App* c_unified =
      app.add_subcommand("solve-unified", "combined minimum-cost schedule with trading");
  CLI::App* c_pareto =
      app.add_subcommand("pareto", "two-phase trading workflow with per-household cost ceilings");
  bool no_ceilings = false;
  double shrink = 0.0;
  c_pareto->add_flag("--no-ceilings", no_ceilings, "drop the stand-alone cost ceilings");
  c_pareto->add_option("--shrink", shrink, "tighten every ceiling by this amount");
  CLI::App* c_oracle =
      app.add_subcommand("oracle", "brute-force reference optimum for tiny scenarios");
  int oracle_household = -1;
  bool oracle_unified = false;
  OracleOptions oracle_opt;
  std::vector<double> oracle_ceilings;
  c_oracle->add_option("--household", oracle_household, "household number, starting at 1");
  c_oracle->add_flag("--unified", oracle_unified, "enumerate the traded model instead");
  c_oracle->add_option("--max-booleans", oracle_opt.max_booleans,
                       "refuse above 2^B schedule combinations");
  c_oracle->add_option("--price-levels", oracle_opt.price_levels, "market price grid size");
  c_oracle->add_option("--ceilings", oracle_ceilings, "per-household cost caps (traded model)");
  CLI::App* c_bench = app.add_subcommand("bench", "scaling sweep over random instances");
  std::string dimension = "appliances";
  std::vector<int> sizes;
  BenchmarkOptions bench_opt;
  std::string csv_path, svg_path;
  c_bench->add_option("--dimension", dimension, "appliances, timeslots or households");
  c_bench->add_option("--sizes", sizes, "sizes to sweep")->required();
  c_bench->add_option("--repetitions", bench_opt.repetitions, "instances per size (>= 3)");
  c_bench->add_option("--cutoff", bench_opt.cutoff_s, "per-solve timeout in seconds");
  c_bench->add_option("--csv", csv_path, "write records CSV here instead of stdout");
  c_bench->add_option("--svg", svg_path, "write a median-time chart here");
  CLI::App* c_report =
      app.add_subcommand("report", "solve and print only the schedule ledger");
  int report_household = 0;
  c_report->add_option("--household", report_household,
                       "report this household's stand-alone schedule instead");

  for (CLI::App* sub : {c_validate, c_notrade, c_unified, c_pareto, c_oracle, c_bench, c_report})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    const auto need_scenario = [&]() -> Scenario {
      if (args.scenario_path.empty())
        throw std::invalid_argument("--scenario is required for this command");
      return load_scenario(args.scenario_path);
    };

    if (c_validate->parsed()) {
      const Scenario s = need_scenario();
      int appliances = 0;
      for (const Household& hh : s.households)
        appliances += static_cast<int>(hh.appliances.size());
      std::cout << "ok: " << s.households.size() << " households, " << s.horizon_slots
                << " timeslots, " << appliances << " appliances\n";
      return kExitOk;
    }
    if (c_notrade->parsed()) {
      const Scenario s = need_scenario();
      if (household < 1 || household > static_cast<int>(s.households.size()))
        throw std::invalid_argument("no such household");
      const ModelInstance m = build_no_trade_model(s, household - 1);
      return emit_solve(m, solve(m, solver_options(args)), s, args);
    }
    if (c_unified->parsed()) {
      const Scenario s = need_scenario();
      const ModelInstance m = build_unified_model(s);
      return emit_solve(m, solve(m, solver_options(args)), s, args);
    }
    if (c_pareto->parsed() || c_report->parsed()) {
      const Scenario s = need_scenario();
      if (c_report->parsed() && report_household > 0) {
        if (report_household > static_cast<int>(s.households.size()))
          throw std::invalid_argument("no such household");
        const ModelInstance m = build_no_trade_model(s, report_household - 1);
        const Solution sol = solve(m, solver_options(args));
        if (sol.assignment.empty()) {
          std::cerr << "no schedule: " << to_string(sol.status) << "\n";
          return exit_code(sol.status);
        }
        std::cout << emit_report(m, sol.assignment, s, args.format);
        return exit_code(sol.status);
      }
      ParetoOptions opt;
      opt.solver = solver_options(args);
      opt.enforce_cost_ceilings = !no_ceilings;
      opt.ceiling_shrink = shrink;
      return run_pareto(s, opt, args, c_report->parsed());
    }
    if (c_oracle->parsed()) {
      const Scenario s = need_scenario();
      Solution sol;
      if (oracle_unified) {
        sol = enumerate_unified(s, oracle_ceilings, oracle_opt);
      } else {
        if (oracle_household < 1 || oracle_household > static_cast<int>(s.households.size()))
          throw std::invalid_argument("oracle needs --unified or a valid --household");
        sol = enumerate_no_trade(s, oracle_household - 1, oracle_opt);
      }
      if (args.format == ReportFormat::Json) {
        ordered_json doc;
        doc["status"] = to_string(sol.status);
        doc["objective"] = sol.objective;
        std::cout << doc.dump(2) << "\n";
      } else {
        std::printf("status: %s   objective: %.6f\n", to_string(sol.status), sol.objective);
      }
      return exit_code(sol.status);
    }
    if (c_bench->parsed()) {
      bench_opt.seed = args.seed;
      const BenchmarkResult res = run_benchmark(dimension, sizes, bench_opt);
      for (const BenchmarkSummary& sum : res.summary)
        std::printf("%s=%d: median %.3fs, timeouts %.0f%%\n", sum.dimension.c_str(), sum.size,
                    sum.median_s, 100.0 * sum.timeout_fraction);
      if (csv_path.empty()) {
        std::cout << benchmark_csv(res.records);
      } else {
        std::ofstream out(csv_path);
        if (!out) throw std::invalid_argument("cannot write " + csv_path);
        out << benchmark_csv(res.records);
      }
      if (!svg_path.empty()) {
        std::ofstream out(svg_path);
        if (!out) throw std::invalid_argument("cannot write " + svg_path);
        out << benchmark_svg(res);
      }
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
