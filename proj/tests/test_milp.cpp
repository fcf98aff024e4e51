#include <doctest.h>

#include <map>
#include <sstream>

#include "predopt/errors.hpp"
#include "predopt/milp.hpp"

using namespace predopt;
using namespace predopt::milp;

namespace {

LotSizingInstance tiny_mclsp() {
  // One item, two periods; enumerating the four setup patterns by hand gives
  // the optimum 13 at y = (1, 0): produce both units up front.
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

int count_tag(const MilpModel& m, TagKind kind) {
  int n = 0;
  for (const auto& c : m.constraints) n += c.tag.kind == kind ? 1 : 0;
  return n;
}

}  // namespace

TEST_CASE("mclsp model has the documented shape") {
  LotSizingInstance inst;
  inst.items = 2;
  inst.periods = 3;
  inst.demand = inst.prodCost = inst.setupCost = inst.holdCost = {{1, 1, 1}, {1, 1, 1}};
  inst.capacity = {10, 10, 10};
  const auto m = build_mclsp(inst);

  CHECK(m.num_binaries() == 6);
  int continuous = 0;
  for (const auto& v : m.variables) continuous += v.kind == VarKind::Continuous ? 1 : 0;
  CHECK(continuous == 12);
  CHECK(count_tag(m, TagKind::Flow) == 6);
  CHECK(count_tag(m, TagKind::Capacity) == 3);
  CHECK(count_tag(m, TagKind::SetupLink) == 6);
  CHECK(m.sense == ObjectiveSense::Minimize);
}

TEST_CASE("msmk model has the documented shape") {
  KnapsackInstance inst;
  inst.items = 2;
  inst.periods = 3;
  inst.resources = 2;
  inst.profit = {{1, 1, 1}, {1, 1, 1}};
  inst.bonus = {{1, 1}, {1, 1}};
  inst.weight = {{{1, 1, 1}, {1, 1, 1}}, {{1, 1, 1}, {1, 1, 1}}};
  inst.capacity = {{2, 2, 2}, {2, 2, 2}};
  const auto m = build_msmk(inst);

  CHECK(m.num_binaries() == 10);  // 6 x + 4 y
  CHECK(count_tag(m, TagKind::Knapsack) == 6);
  CHECK(count_tag(m, TagKind::StabUpper) + count_tag(m, TagKind::StabLower) == 8);
  CHECK(m.sense == ObjectiveSense::Maximize);
}

TEST_CASE("tight labeling follows the threshold rules") {
  const auto m = build_mclsp(tiny_mclsp());
  // Optimal by enumeration: y=(1,0), x=(2,0), s=(1,0).
  Solution opt;
  opt.values = {1, 0, 2, 0, 1, 0};
  opt.objective = 13.0;
  opt.status = SolutionStatus::Optimal;

  const auto labels = label_tight(m, opt, 0.95);
  CHECK(labels.eta == 0.95);
  // capacity(1): 2 >= 0.95*2; capacity(2): 0 < 0.95*2.
  CHECK(labels.is_tight({TagKind::Capacity, 0, 1}));
  CHECK_FALSE(labels.is_tight({TagKind::Capacity, 0, 2}));
  // setupLink(1,1): 2 >= 0.95*1*2; setupLink(1,2): 0 >= 0 at y=0.
  CHECK(labels.is_tight({TagKind::SetupLink, 1, 1}));
  CHECK(labels.is_tight({TagKind::SetupLink, 1, 2}));
}

TEST_CASE("knapsack tightness compares weighted load to the capacity") {
  const auto m = build_msmk(tiny_msmk());
  Solution opt;
  opt.values = {1, 1, 1};  // x11, x12, y11
  opt.objective = 13.0;
  opt.status = SolutionStatus::Optimal;
  const auto labels = label_tight(m, opt, 0.95);
  CHECK(labels.is_tight({TagKind::Knapsack, 1, 1}));
  CHECK(labels.is_tight({TagKind::Knapsack, 1, 2}));

  Solution empty;
  empty.values = {0, 0, 1};
  empty.objective = 3.0;
  empty.status = SolutionStatus::Optimal;
  const auto none = label_tight(m, empty, 0.95);
  CHECK_FALSE(none.is_tight({TagKind::Knapsack, 1, 1}));
}

TEST_CASE("label_tight rejects non-optimal input and bad eta") {
  const auto m = build_mclsp(tiny_mclsp());
  Solution s;
  s.values = {1, 0, 2, 0, 1, 0};
  s.status = SolutionStatus::Feasible;
  CHECK_THROWS_AS(label_tight(m, s, 0.95), UsageError);
  s.status = SolutionStatus::Optimal;
  CHECK_THROWS_AS(label_tight(m, s, 1.5), UsageError);
}

TEST_CASE("relaxation with all labels tight keeps every mclsp row") {
  const auto m = build_mclsp(tiny_mclsp());
  TightLabels all;
  all.eta = 0.95;
  for (const auto& c : m.constraints) {
    if (c.tag.kind == TagKind::Capacity || c.tag.kind == TagKind::SetupLink) {
      all.labels[c.tag] = true;
    }
  }
  const auto relax = build_relaxation(m, all);
  CHECK(relax.constraints.size() == m.constraints.size());
  CHECK(relax.variables.size() == m.variables.size());

  TightLabels none = all;
  for (auto& [tag, tight] : none.labels) tight = false;
  const auto bare = build_relaxation(m, none);
  CHECK(count_tag(bare, TagKind::Flow) == 2);
  CHECK(bare.constraints.size() == 2);
}

TEST_CASE("msmk relaxation drops linking rows and y variables") {
  KnapsackInstance inst;
  inst.items = 2;
  inst.periods = 3;
  inst.resources = 2;
  inst.profit = {{1, 2, 3}, {4, 5, 6}};
  inst.bonus = {{1, 1}, {1, 1}};
  inst.weight = {{{1, 2, 3}, {1, 2, 3}}, {{2, 2, 2}, {3, 3, 3}}};
  inst.capacity = {{2, 3, 4}, {2, 3, 4}};
  const auto m = build_msmk(inst);

  TightLabels labels;
  labels.eta = 0.95;
  int keep = 3;
  for (const auto& c : m.constraints) {
    if (c.tag.kind == TagKind::Knapsack) labels.labels[c.tag] = keep-- > 0;
  }
  const auto relax = build_relaxation(m, labels);
  CHECK(relax.constraints.size() == 3);
  CHECK(relax.variables.size() == 6);
  CHECK(relax.num_binaries() == 6);
  for (const auto& term : relax.objective) CHECK(term.var < 6);
}

TEST_CASE("fixing variables pins bounds and rejects continuous targets") {
  const auto m = build_mclsp(tiny_mclsp());
  const auto same = fix_variables(m, {});
  CHECK(same.variables.size() == m.variables.size());

  const auto fixed = fix_variables(m, {{0, 1.0}, {1, 0.0}});
  CHECK(fixed.variables[0].lower == 1.0);
  CHECK(fixed.variables[0].upper == 1.0);
  CHECK(fixed.variables[1].lower == 0.0);
  CHECK(fixed.variables[1].upper == 0.0);

  CHECK_THROWS_AS(fix_variables(m, {{2, 1.0}}), UsageError);   // x variable
  CHECK_THROWS_AS(fix_variables(m, {{99, 1.0}}), UsageError);  // unknown id
}

TEST_CASE("feasibility checker accepts the enumerated optimum") {
  const auto m = build_mclsp(tiny_mclsp());
  CHECK(check_feasible(m, {1, 0, 2, 0, 1, 0}));
  CHECK_FALSE(check_feasible(m, {0, 0, 0, 0, 0, 0}));  // demand unmet
  CHECK(eval_objective(m, {1, 0, 2, 0, 1, 0}) == doctest::Approx(13.0));
}

TEST_CASE("lp text dump mentions tags") {
  const auto m = build_mclsp(tiny_mclsp());
  std::ostringstream out;
  write_lp_text(m, out);
  CHECK(out.str().find("capacity(1)") != std::string::npos);
  CHECK(out.str().find("setupLink(1,2)") != std::string::npos);
}
