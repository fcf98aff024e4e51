#include <doctest.h>

#include <cmath>
#include <sstream>

#include "predopt/errors.hpp"
#include "predopt/instances.hpp"
#include "predopt/milp.hpp"
#include "predopt/solver.hpp"

using namespace predopt;
using namespace predopt::milp;
using namespace predopt::solver;

namespace {

MilpModel single_var_lp() {
  // min x s.t. x >= 3, x >= 0
  MilpModel m;
  m.add_variable(VarKind::Continuous, 0.0, std::numeric_limits<double>::infinity(), "x");
  m.objective = {{0, 1.0}};
  m.add_constraint({{{0, 1.0}}, ConstraintSense::GE, 3.0, {}});
  return m;
}

MilpModel box_lp() {
  // max 5a + 4b s.t. 2a + 3b <= 4, a,b in [0,1]
  MilpModel m;
  m.add_variable(VarKind::Continuous, 0.0, 1.0, "a");
  m.add_variable(VarKind::Continuous, 0.0, 1.0, "b");
  m.sense = ObjectiveSense::Maximize;
  m.objective = {{0, 5.0}, {1, 4.0}};
  m.add_constraint({{{0, 2.0}, {1, 3.0}}, ConstraintSense::LE, 4.0, {}});
  return m;
}

MilpModel tiny_knapsack_mip() {
  // max 5a + 4b s.t. 2a + 3b <= 4, a,b binary
  MilpModel m;
  m.add_variable(VarKind::Binary, 0.0, 1.0, "a");
  m.add_variable(VarKind::Binary, 0.0, 1.0, "b");
  m.sense = ObjectiveSense::Maximize;
  m.objective = {{0, 5.0}, {1, 4.0}};
  m.add_constraint({{{0, 2.0}, {1, 3.0}}, ConstraintSense::LE, 4.0, {}});
  return m;
}

LotSizingInstance tiny_mclsp() {
  LotSizingInstance inst;
  inst.items = 1;
  inst.periods = 2;
  inst.demand = {{1, 1}};
  inst.prodCost = {{1, 1}};
  inst.setupCost = {{10, 10}};
  inst.holdCost = {{1, 1}};
  inst.capacity = {2, 2};
  return inst;
}

KnapsackInstance tiny_msmk() {
  KnapsackInstance inst;
  inst.items = 1;
  inst.periods = 2;
  inst.resources = 1;
  inst.profit = {{5, 5}};
  inst.bonus = {{3}};
  inst.weight = {{{1, 1}}};
  inst.capacity = {{1, 1}};
  return inst;
}

}  // namespace

TEST_CASE("lp: single lower-bound constraint") {
  const auto res = solve_lp(single_var_lp());
  REQUIRE(res.solution.status == SolutionStatus::Optimal);
  CHECK(res.solution.objective == doctest::Approx(3.0));
  CHECK(res.solution.values[0] == doctest::Approx(3.0));
}

TEST_CASE("lp: fractional vertex on the box") {
  const auto res = solve_lp(box_lp());
  REQUIRE(res.solution.status == SolutionStatus::Optimal);
  CHECK(res.solution.objective == doctest::Approx(7.0 + 2.0 / 3.0).epsilon(1e-6));
  CHECK(res.solution.values[0] == doctest::Approx(1.0));
  CHECK(res.solution.values[1] == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("lp: empty polytope is infeasible") {
  MilpModel m;
  m.add_variable(VarKind::Continuous, 0.0, std::numeric_limits<double>::infinity(), "x");
  m.objective = {{0, 1.0}};
  m.add_constraint({{{0, 1.0}}, ConstraintSense::GE, 3.0, {}});
  m.add_constraint({{{0, 1.0}}, ConstraintSense::LE, 2.0, {}});
  CHECK(solve_lp(m).solution.status == SolutionStatus::Infeasible);
}

TEST_CASE("lp: unbounded ray is reported") {
  MilpModel m;
  m.add_variable(VarKind::Continuous, 0.0, std::numeric_limits<double>::infinity(), "x");
  m.sense = ObjectiveSense::Maximize;
  m.objective = {{0, 1.0}};
  m.add_constraint({{{0, 1.0}}, ConstraintSense::GE, 1.0, {}});
  CHECK(solve_lp(m).solution.status == SolutionStatus::Unbounded);
}

TEST_CASE("lp: binaries are treated as [0,1] continuous") {
  const auto res = solve_lp(tiny_knapsack_mip());
  REQUIRE(res.solution.status == SolutionStatus::Optimal);
  CHECK(res.solution.objective == doctest::Approx(5.0 + 4.0 * 2.0 / 3.0));
}

TEST_CASE("mip: tiny binary knapsack") {
  const auto res = solve_mip(tiny_knapsack_mip());
  REQUIRE(res.solution.status == SolutionStatus::Optimal);
  CHECK(res.solution.objective == doctest::Approx(5.0));
  CHECK(res.solution.values[0] == doctest::Approx(1.0));
  CHECK(res.solution.values[1] == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("mip: tiny lot-sizing instance reaches the enumerated optimum") {
  const auto m = build_mclsp(tiny_mclsp());
  const auto res = solve_mip(m);
  REQUIRE(res.solution.status == SolutionStatus::Optimal);
  CHECK(res.solution.objective == doctest::Approx(13.0));
  CHECK(res.solution.values[0] == doctest::Approx(1.0));
  CHECK(res.solution.values[1] == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("mip: zero demand produces nothing") {
  auto inst = tiny_mclsp();
  inst.demand = {{0, 0}};
  const auto res = solve_mip(build_mclsp(inst));
  REQUIRE(res.solution.status == SolutionStatus::Optimal);
  CHECK(res.solution.objective == doctest::Approx(0.0));
}

TEST_CASE("mip: infeasible fixing is proven infeasible") {
  const auto m = build_mclsp(tiny_mclsp());
  const auto fixed = fix_variables(m, {{0, 0.0}, {1, 0.0}});
  CHECK(solve_mip(fixed).solution.status == SolutionStatus::Infeasible);
}

TEST_CASE("mip: fixing an optimal assignment keeps the optimum") {
  const auto m = build_mclsp(tiny_mclsp());
  const auto fixed = fix_variables(m, {{0, 1.0}, {1, 0.0}});
  const auto res = solve_mip(fixed);
  REQUIRE(res.solution.status == SolutionStatus::Optimal);
  CHECK(res.solution.objective == doctest::Approx(13.0));
}

TEST_CASE("mip: time limit zero reports TimeLimit") {
  SolverOptions opts;
  opts.timeLimit = 0.0;
  const auto res = solve_mip(build_mclsp(tiny_mclsp()), opts);
  CHECK(res.solution.status == SolutionStatus::TimeLimit);
}

TEST_CASE("mip: feasibility-only mode stops at the first incumbent") {
  SolverOptions opts;
  opts.stopAtFirstIncumbent = true;
  const auto res = solve_mip(build_mclsp(tiny_mclsp()), opts);
  CHECK(res.solution.status == SolutionStatus::Feasible);
  CHECK(check_feasible(build_mclsp(tiny_mclsp()), res.solution.values));
}

TEST_CASE("mip: msmk tiny instance") {
  const auto res = solve_mip(build_msmk(tiny_msmk()));
  REQUIRE(res.solution.status == SolutionStatus::Optimal);
  CHECK(res.solution.objective == doctest::Approx(13.0));
}

TEST_CASE("mip: forced-empty knapsack keeps decisions stable") {
  auto inst = tiny_msmk();
  inst.capacity = {{0, 0}};
  const auto res = solve_mip(build_msmk(inst));
  REQUIRE(res.solution.status == SolutionStatus::Optimal);
  CHECK(res.solution.objective == doctest::Approx(3.0));  // bonus only
  CHECK(res.solution.values[0] == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(res.solution.values[1] == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("brute force matches hand enumeration and refuses big models") {
  const auto m = build_msmk(tiny_msmk());
  const auto sol = brute_force(m);
  REQUIRE(sol.status == SolutionStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(13.0));

  const auto big = gen_msmk([] {
    GenConfig cfg;
    cfg.family = Family::Msmk;
    cfg.items = 4;
    cfg.periods = 8;
    cfg.resources = 1;
    cfg.seed = 1;
    return cfg;
  }());
  CHECK_THROWS_AS(brute_force(build_msmk(big)), UsageError);
}

TEST_CASE("brute force flags contradictory fixings as infeasible") {
  MilpModel m;
  m.add_variable(VarKind::Binary, 0.0, 1.0, "a");
  m.objective = {{0, 1.0}};
  m.add_constraint({{{0, 1.0}}, ConstraintSense::GE, 0.6, {}});
  m.add_constraint({{{0, 1.0}}, ConstraintSense::LE, 0.4, {}});
  CHECK(brute_force(m).status == SolutionStatus::Infeasible);
}

TEST_CASE("oracle equivalence on random tiny instances") {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    GenConfig cfg;
    cfg.seed = seed;
    if (seed % 2 == 0) {
      cfg.family = Family::Mclsp;
      cfg.items = 1 + static_cast<int>(seed % 3);
      cfg.periods = 2 + static_cast<int>(seed % 4);
      cfg.capRatio = 10.0;
      const auto m = build_mclsp(gen_mclsp(cfg));
      const auto exact = brute_force(m);
      const auto bb = solve_mip(m);
      REQUIRE(exact.status == SolutionStatus::Optimal);
      REQUIRE(bb.solution.status == SolutionStatus::Optimal);
      REQUIRE(std::abs(exact.objective - bb.solution.objective) <=
              1e-6 * (1.0 + std::abs(exact.objective)));
    } else {
      cfg.family = Family::Msmk;
      cfg.items = 1 + static_cast<int>(seed % 3);
      cfg.periods = 2 + static_cast<int>(seed % 3);
      cfg.resources = 1 + static_cast<int>(seed % 2);
      const auto m = build_msmk(gen_msmk(cfg));
      const auto exact = brute_force(m);
      const auto bb = solve_mip(m);
      REQUIRE(exact.status == SolutionStatus::Optimal);
      REQUIRE(bb.solution.status == SolutionStatus::Optimal);
      REQUIRE(std::abs(exact.objective - bb.solution.objective) <=
              1e-6 * (1.0 + std::abs(exact.objective)));
    }
    ++checked;
  }
  CHECK(checked == 30);
}

TEST_CASE("weak duality: lp relaxation bounds the mip optimum") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    GenConfig cfg;
    cfg.seed = seed;
    cfg.family = Family::Mclsp;
    cfg.items = 2;
    cfg.periods = 3;
    cfg.capRatio = 10.0;
    const auto m = build_mclsp(gen_mclsp(cfg));
    const auto lp = solve_lp(m);
    const auto mip = solve_mip(m);
    REQUIRE(lp.solution.status == SolutionStatus::Optimal);
    REQUIRE(mip.solution.status == SolutionStatus::Optimal);
    CHECK(lp.solution.objective <= mip.solution.objective + 1e-6 * (1 + std::abs(mip.solution.objective)));
  }
}

TEST_CASE("solver determinism: identical runs agree except wall time") {
  const auto m = build_mclsp(tiny_mclsp());
  const auto a = solve_mip(m);
  const auto b = solve_mip(m);
  CHECK(a.solution.objective == b.solution.objective);
  CHECK(a.solution.values == b.solution.values);
  CHECK(a.nodes == b.nodes);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    CHECK(a.trace[i].second == b.trace[i].second);
  }
}

TEST_CASE("trace incumbents improve monotonically") {
  GenConfig cfg;
  cfg.seed = 3;
  cfg.family = Family::Msmk;
  cfg.items = 3;
  cfg.periods = 3;
  cfg.resources = 2;
  const auto res = solve_mip(build_msmk(gen_msmk(cfg)));
  for (std::size_t i = 1; i < res.trace.size(); ++i) {
    CHECK(res.trace[i].second > res.trace[i - 1].second);  // maximization
  }
  std::ostringstream csv;
  write_trace_csv(res, csv);
  CHECK(csv.str().rfind("elapsed_s,incumbent\n", 0) == 0);
}
