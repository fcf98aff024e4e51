#pragma once

#include <compare>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "predopt/instances.hpp"

namespace predopt::milp {

enum class VarKind { Continuous, Binary };

struct Variable {
  int id = 0;
  VarKind kind = VarKind::Continuous;
  double lower = 0.0;
  double upper = 0.0;
  std::string name;
};

enum class ConstraintSense { LE, EQ, GE };
enum class ObjectiveSense { Minimize, Maximize };

enum class TagKind { None, Flow, Capacity, SetupLink, Knapsack, StabUpper, StabLower };

// Identifies a constraint by role and indices (1-based). For Knapsack rows
// `i` holds the resource index; Capacity rows use i = 0.
struct ConstraintTag {
  TagKind kind = TagKind::None;
  int i = 0;
  int t = 0;
  auto operator<=>(const ConstraintTag&) const = default;
};

std::string tag_to_string(const ConstraintTag& tag);

struct LinearTerm {
  int var = 0;
  double coef = 0.0;
};

struct Constraint {
  std::vector<LinearTerm> terms;
  ConstraintSense sense = ConstraintSense::LE;
  double rhs = 0.0;
  ConstraintTag tag;
};

struct MilpModel {
  std::vector<Variable> variables;
  std::vector<Constraint> constraints;
  std::vector<LinearTerm> objective;
  ObjectiveSense sense = ObjectiveSense::Minimize;
  double objectiveConstant = 0.0;

  int add_variable(VarKind kind, double lower, double upper, std::string name);
  void add_constraint(Constraint c);

  int num_binaries() const;
  std::vector<int> binary_ids() const;
  void validate() const;  // referenced vars declared, binaries in [0,1], tags unique
};

enum class SolutionStatus { Optimal, Feasible, Infeasible, TimeLimit, Unbounded, NumericalFailure };

std::string status_name(SolutionStatus s);

struct Solution {
  std::vector<double> values;  // indexed by variable id; empty when none found
  double objective = 0.0;
  SolutionStatus status = SolutionStatus::Infeasible;

  bool has_values() const { return !values.empty(); }
};

// Tightness labels for the labelable rows (Capacity/SetupLink for lot-sizing,
// Knapsack for the knapsack family), together with the coefficient used.
struct TightLabels {
  double eta = 0.0;
  std::map<ConstraintTag, bool> labels;

  bool is_tight(const ConstraintTag& tag) const;
};

// Variable id layout (0-based i, t):
//   lot-sizing: y = i*T + t, x = I*T + i*T + t, s = 2*I*T + i*T + t
//   knapsack:   x = i*T + t, y = I*T + i*(T-1) + t
// Decision binaries occupy ids [0, I*T) in both families.
MilpModel build_mclsp(const LotSizingInstance& inst);
MilpModel build_msmk(const KnapsackInstance& inst);

int decision_var_id(int item, int period, int periods);

TightLabels label_tight(const MilpModel& model, const Solution& optimal, double eta);

// Keeps the structural rows and only the tight-labeled labelable rows. For
// the knapsack family the stability linking rows and y variables are dropped
// (they never affect feasibility of the knapsack rows).
MilpModel build_relaxation(const MilpModel& model, const TightLabels& predictedTight);

// Pins each assigned binary to its value via lower = upper.
MilpModel fix_variables(const MilpModel& model, const std::map<int, double>& assignment);

bool check_feasible(const MilpModel& model, const std::vector<double>& values,
                    double tol = 1e-6);
double eval_objective(const MilpModel& model, const std::vector<double>& values);

// Debug dump, one constraint per line with tag comments.
void write_lp_text(const MilpModel& model, std::ostream& out);

}  // namespace predopt::milp
