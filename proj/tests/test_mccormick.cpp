#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "homegrid/mccormick.hpp"
#include "homegrid/model_build.hpp"
#include "homegrid/relax.hpp"
#include "homegrid/scenario_json.hpp"

#include <cmath>
#include <limits>
#include <random>

using namespace homegrid;

namespace {

// Evaluates one envelope row at (a, b, w); rows are a-coeff, b-coeff, w-coeff
// against a Le relation.
double row_slack(const LpRow& r, double a, double b, double w) {
  double act = 0.0;
  for (const auto& [id, c] : r.terms) {
    if (id == 0) act += c * a;
    else if (id == 1) act += c * b;
    else act += c * w;
  }
  return r.rhs - act;  // >= 0 when satisfied
}

}  // namespace

TEST_CASE("interior point satisfies all four rows") {
  auto rows = mccormick_rows(2, 0, 1, {0.0, 2.0, -1.0, 1.0});
  for (const LpRow& r : rows) {
    CHECK(r.rel == Relation::Le);
    CHECK(r.terms.size() == 3);
    CHECK(row_slack(r, 1.0, 0.5, 0.5) >= -1e-12);
  }
}

TEST_CASE("degenerate factor interval pins the product") {
  // a fixed to 0: whatever b does, the rows must force w = 0.
  auto rows = mccormick_rows(2, 0, 1, {0.0, 0.0, -5.0, 7.0});
  for (double b : {-5.0, -1.0, 0.0, 3.0, 7.0}) {
    // w = 0 admitted...
    for (const LpRow& r : rows) CHECK(row_slack(r, 0.0, b, 0.0) >= -1e-12);
    // ...and any w != 0 cut off by at least one row.
    for (double w : {-0.1, 0.1, 1.0}) {
      bool cut = false;
      for (const LpRow& r : rows) cut = cut || row_slack(r, 0.0, b, w) < -1e-12;
      CHECK(cut);
    }
  }
}

TEST_CASE("product range is the corner min and max") {
  auto [lo, hi] = product_range({-1.0, 2.0, -3.0, 4.0});
  CHECK(lo == doctest::Approx(-6.0));  // 2 * -3
  CHECK(hi == doctest::Approx(8.0));   // 2 * 4

  auto [lo2, hi2] = product_range({0.5, 1.0, 2.0, 3.0});
  CHECK(lo2 == doctest::Approx(1.0));
  CHECK(hi2 == doctest::Approx(3.0));
}

TEST_CASE("bad boxes are rejected") {
  CHECK_THROWS_AS(mccormick_rows(2, 0, 1, {1.0, 0.0, 0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(
      mccormick_rows(2, 0, 1, {0.0, std::numeric_limits<double>::infinity(), 0.0, 1.0}),
      std::invalid_argument);
  CHECK_THROWS_AS(product_range({0.0, 1.0, std::nan(""), 1.0}), std::invalid_argument);
}

TEST_CASE("true products stay inside the envelope over random boxes") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int round = 0; round < 1000; ++round) {
    FactorBox box;
    box.a_lo = u(rng);
    box.a_hi = box.a_lo + std::fabs(u(rng));
    box.b_lo = u(rng);
    box.b_hi = box.b_lo + std::fabs(u(rng));
    auto rows = mccormick_rows(2, 0, 1, box);
    auto [wlo, whi] = product_range(box);

    std::uniform_real_distribution<double> ua(box.a_lo, box.a_hi);
    std::uniform_real_distribution<double> ub(box.b_lo, box.b_hi);
    for (int pt = 0; pt < 4; ++pt) {
      const double a = ua(rng), b = ub(rng), w = a * b;
      const double scale = 1.0 + std::fabs(a) * std::fabs(b);
      for (const LpRow& r : rows) CHECK(row_slack(r, a, b, w) >= -1e-9 * scale);
      CHECK(w >= wlo - 1e-9 * scale);
      CHECK(w <= whi + 1e-9 * scale);
    }

    // at every corner the envelope is exact: some row holds with equality
    for (double a : {box.a_lo, box.a_hi}) {
      for (double b : {box.b_lo, box.b_hi}) {
        const double w = a * b;
        double tightest = std::numeric_limits<double>::infinity();
        for (const LpRow& r : rows) tightest = std::min(tightest, row_slack(r, a, b, w));
        CHECK(std::fabs(tightest) <= 1e-9 * (1.0 + std::fabs(w)));
      }
    }
  }
}

TEST_CASE("relaxing a model appends product variables and envelope rows") {
  ModelInstance m;
  m.variables.push_back({VarKind::Continuous, 0.0, 2.0, {}});
  m.variables.push_back({VarKind::Continuous, -1.0, 1.0, {}});
  m.variables.push_back({VarKind::Boolean, 0.0, 1.0, {}});
  m.rows.push_back({{{0, 1.0}, {1, 1.0}}, Relation::Le, 2.0, {}});
  m.bilinear_terms.push_back({1.0, 0, 1, -1});  // into the objective
  m.bilinear_terms.push_back({2.0, 0, 1, 0});   // into row 0
  m.objective = {{2, 5.0}};

  RelaxedModel rel = relax(m);
  CHECK(rel.product_offset == 3);
  REQUIRE(rel.lp.vars.size() == 5);
  CHECK(rel.lp.rows.size() == 1 + 8);

  // booleans become [0,1] continuous intervals
  CHECK(rel.lp.vars[2].lower == 0.0);
  CHECK(rel.lp.vars[2].upper == 1.0);

  // product variable bounds follow the factor box
  CHECK(rel.lp.vars[3].lower == doctest::Approx(-2.0));
  CHECK(rel.lp.vars[3].upper == doctest::Approx(2.0));

  // the objective gained w0, row 0 gained 2*w1
  bool obj_has_w = false;
  for (const auto& [id, c] : rel.lp.objective)
    if (id == 3 && c == doctest::Approx(1.0)) obj_has_w = true;
  CHECK(obj_has_w);
  bool row_has_w = false;
  for (const auto& [id, c] : rel.lp.rows[0].terms)
    if (id == 4 && c == doctest::Approx(2.0)) row_has_w = true;
  CHECK(row_has_w);
}

TEST_CASE("bound overrides tighten the box; widening is a fault") {
  ModelInstance m;
  m.variables.push_back({VarKind::Continuous, 0.0, 2.0, {}});
  m.variables.push_back({VarKind::Continuous, 0.0, 3.0, {}});
  m.bilinear_terms.push_back({1.0, 0, 1, -1});

  RelaxedModel rel = relax(m, {{0, 1.0, 2.0}});
  CHECK(rel.lp.vars[0].lower == doctest::Approx(1.0));
  CHECK(rel.lp.vars[2].lower == doctest::Approx(0.0));  // min corner product 1*0
  CHECK(rel.lp.vars[2].upper == doctest::Approx(6.0));

  CHECK_THROWS_AS(relax(m, {{0, -1.0, 2.0}}), std::invalid_argument);
  CHECK_THROWS_AS(relax(m, {{0, 0.0, 2.5}}), std::invalid_argument);
}

TEST_CASE("unbounded factors cannot be enveloped") {
  ModelInstance m;
  m.variables.push_back({VarKind::Continuous, 0.0, std::numeric_limits<double>::infinity(), {}});
  m.variables.push_back({VarKind::Continuous, 0.0, 1.0, {}});
  m.bilinear_terms.push_back({1.0, 0, 1, -1});
  CHECK_THROWS_AS(relax(m), std::invalid_argument);
}

TEST_CASE("model relaxations keep row counts and add envelopes per product") {
  const Scenario s = load_scenario(fixture_path());

  const ModelInstance plain = build_no_trade_model(s, 0);
  RelaxedModel rel = relax(plain);
  CHECK(rel.lp.rows.size() == plain.rows.size());
  CHECK(rel.lp.vars.size() == plain.variables.size());

  const ModelInstance traded = build_unified_model(s, {6.99, 7.57});
  REQUIRE(traded.bilinear_terms.size() == 16);  // 2 households x 8 slots
  RelaxedModel tr = relax(traded);
  CHECK(tr.lp.vars.size() == traded.variables.size() + 16);
  CHECK(tr.lp.rows.size() == traded.rows.size() + 64);
}
