#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <homegrid/model_build.hpp>
#include <homegrid/oracle.hpp>
#include <homegrid/pareto.hpp>
#include <homegrid/scenario_json.hpp>

#include <cmath>
#include <vector>

#include "helpers.hpp"

using namespace homegrid;

namespace {

ParetoOptions tight_pareto() {
  ParetoOptions opt;
  opt.solver.abs_gap = 1e-9;
  opt.solver.rel_gap = 1e-9;
  return opt;
}

}  // namespace

TEST_CASE("stand-alone bounds match the exhaustive reference") {
  Scenario s = tiny_market();
  NoTradeBounds bounds = compute_no_trade_bounds(s, tight_pareto().solver);
  REQUIRE(bounds.solutions.size() == 2);
  CHECK(bounds.all_usable());

  for (int k = 0; k < 2; ++k) {
    REQUIRE(bounds.solutions[k].status == SolveStatus::Optimal);
    Solution o = enumerate_no_trade(s, k);
    CHECK(std::abs(bounds.costs[k] - o.objective) <= 1e-6);
    CHECK(std::abs(bounds.costs[k] - bounds.solutions[k].objective) <= 1e-6);
  }
}

TEST_CASE("the traded phase leaves no household worse off") {
  Scenario s = tiny_market();
  ParetoResult r = solve_pareto(s, tight_pareto());

  REQUIRE(r.infeasible_household == -1);
  REQUIRE(r.traded.status == SolveStatus::Optimal);
  REQUIRE(r.household_costs.size() == 2);
  REQUIRE(r.ceilings_used.size() == 2);
  REQUIRE(r.no_trade_stats.size() == 2);

  double sum = 0.0;
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(r.household_costs[k].total <=
          doctest::Approx(r.no_trade_costs[k] + 1e-6));
    CHECK(r.household_costs[k].total ==
          doctest::Approx(r.household_costs[k].energy + r.household_costs[k].disutility));
    sum += r.household_costs[k].total;
  }
  CHECK(r.total == doctest::Approx(sum));

  // the renewable surplus can cover both loads, so trading erases the bill
  CHECK(r.total == doctest::Approx(0.0));

  REQUIRE(r.micro_prices.size() == 2);
  for (std::size_t h = 0; h < 2; ++h) {
    CHECK(r.micro_prices[h] >= -1e-9);
    CHECK(r.micro_prices[h] <= s.grid_price[h] + 1e-9);
  }

  ParetoVerification v = verify_pareto(r, s);
  CHECK(v.pass);
  CHECK(v.worst <= 1e-6);
}

TEST_CASE("verification catches a corrupted trade") {
  Scenario s = tiny_market();
  ParetoResult r = solve_pareto(s, tight_pareto());
  REQUIRE(r.traded.status == SolveStatus::Optimal);

  ModelInstance m = build_unified_model(s, r.ceilings_used);
  int me = m.find_var(VarRole::TradeEnergy, 0, -1, 1);
  REQUIRE(me >= 0);
  r.traded.assignment[static_cast<std::size_t>(me)] += 0.5;

  ParetoVerification v = verify_pareto(r, s);
  CHECK_FALSE(v.pass);
  CHECK(v.trade_residual[0] == doctest::Approx(0.5));
  CHECK(v.worst >= 0.5 - 1e-9);
}

TEST_CASE("verification rejects a mismatched assignment") {
  Scenario s = tiny_market();
  ParetoResult r = solve_pareto(s, tight_pareto());
  r.traded.assignment.pop_back();
  CHECK_THROWS_AS((void)verify_pareto(r, s), std::invalid_argument);
}

TEST_CASE("an impossible household is reported, not solved around") {
  Scenario s = tiny_market();
  s.households[1].grid_limit = 1.0;
  s.households[1].appliances[0].power = 50.0;
  REQUIRE(validate_scenario(s).empty());

  ParetoResult r = solve_pareto(s, tight_pareto());
  CHECK(r.infeasible_household == 1);
  CHECK(r.no_trade_status[1] == SolveStatus::Infeasible);
  CHECK(r.traded.assignment.empty());
  CHECK(r.household_costs.empty());
  CHECK(std::isnan(r.total));
}

TEST_CASE("shrunken ceilings may make the traded phase infeasible") {
  Scenario s = tiny_market();
  ParetoOptions opt = tight_pareto();
  opt.ceiling_shrink = 100.0;
  ParetoResult r;
  CHECK_NOTHROW(r = solve_pareto(s, opt));
  CHECK(r.traded.status == SolveStatus::Infeasible);
  CHECK(r.household_costs.empty());
}

TEST_CASE("without ceilings only the combined bill is minimized") {
  Scenario s = tiny_market();
  ParetoOptions opt = tight_pareto();
  opt.enforce_cost_ceilings = false;
  ParetoResult r = solve_pareto(s, opt);
  REQUIRE(r.traded.status == SolveStatus::Optimal);
  CHECK(r.ceilings_used.empty());
  CHECK(r.total == doctest::Approx(0.0));
}

TEST_CASE("a zero phase-one budget surfaces as a timeout") {
  Scenario s = load_scenario(fixture_path());
  ParetoOptions opt;
  opt.solver.time_limit_s = 1e-9;
  ParetoResult r = solve_pareto(s, opt);
  CHECK(r.no_trade_status[0] == SolveStatus::TimeoutNoIncumbent);
  CHECK(r.traded.assignment.empty());
  CHECK(r.household_costs.empty());
  CHECK(std::isnan(r.total));
}
