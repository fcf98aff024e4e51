#include "predopt/milp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <set>

#include "predopt/errors.hpp"

namespace predopt::milp {

namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

}  // namespace

std::string tag_to_string(const ConstraintTag& tag) {
  switch (tag.kind) {
    case TagKind::None: return "none";
    case TagKind::Flow: return "flow(" + std::to_string(tag.i) + "," + std::to_string(tag.t) + ")";
    case TagKind::Capacity: return "capacity(" + std::to_string(tag.t) + ")";
    case TagKind::SetupLink: return "setupLink(" + std::to_string(tag.i) + "," + std::to_string(tag.t) + ")";
    case TagKind::Knapsack: return "knapsack(" + std::to_string(tag.i) + "," + std::to_string(tag.t) + ")";
    case TagKind::StabUpper: return "stabUpper(" + std::to_string(tag.i) + "," + std::to_string(tag.t) + ")";
    case TagKind::StabLower: return "stabLower(" + std::to_string(tag.i) + "," + std::to_string(tag.t) + ")";
  }
  return "?";
}

std::string status_name(SolutionStatus s) {
  switch (s) {
    case SolutionStatus::Optimal: return "Optimal";
    case SolutionStatus::Feasible: return "Feasible";
    case SolutionStatus::Infeasible: return "Infeasible";
    case SolutionStatus::TimeLimit: return "TimeLimit";
    case SolutionStatus::Unbounded: return "Unbounded";
    case SolutionStatus::NumericalFailure: return "NumericalFailure";
  }
  return "?";
}

int MilpModel::add_variable(VarKind kind, double lower, double upper, std::string name) {
  const int id = static_cast<int>(variables.size());
  variables.push_back(Variable{id, kind, lower, upper, std::move(name)});
  return id;
}

void MilpModel::add_constraint(Constraint c) { constraints.push_back(std::move(c)); }

int MilpModel::num_binaries() const {
  int n = 0;
  for (const auto& v : variables) n += v.kind == VarKind::Binary ? 1 : 0;
  return n;
}

std::vector<int> MilpModel::binary_ids() const {
  std::vector<int> ids;
  for (const auto& v : variables) {
    if (v.kind == VarKind::Binary) ids.push_back(v.id);
  }
  return ids;
}

void MilpModel::validate() const {
  const int n = static_cast<int>(variables.size());
  for (const auto& v : variables) {
    if (v.kind == VarKind::Binary) {
      if (v.lower < 0.0 || v.upper > 1.0 || v.lower > v.upper) {
        throw ValidationError("binary variable " + v.name + " has bounds outside [0,1]");
      }
    } else if (v.lower > v.upper) {
      throw ValidationError("variable " + v.name + " has crossed bounds");
    }
  }
  std::set<ConstraintTag> seen;
  for (const auto& c : constraints) {
    for (const auto& term : c.terms) {
      if (term.var < 0 || term.var >= n) {
        throw ValidationError("constraint " + tag_to_string(c.tag) +
                              " references undeclared variable " + std::to_string(term.var));
      }
    }
    if (c.tag.kind != TagKind::None && !seen.insert(c.tag).second) {
      throw ValidationError("duplicate constraint tag " + tag_to_string(c.tag));
    }
  }
  for (const auto& term : objective) {
    if (term.var < 0 || term.var >= n) {
      throw ValidationError("objective references undeclared variable " + std::to_string(term.var));
    }
  }
}

int decision_var_id(int item, int period, int periods) {
  return item * periods + period;
}

MilpModel build_mclsp(const LotSizingInstance& inst) {
  inst.validate();
  const int I = inst.items;
  const int T = inst.periods;

  MilpModel m;
  m.sense = ObjectiveSense::Minimize;
  for (int i = 0; i < I; ++i) {
    for (int t = 0; t < T; ++t) {
      m.add_variable(VarKind::Binary, 0.0, 1.0,
                     "y[" + std::to_string(i + 1) + "," + std::to_string(t + 1) + "]");
    }
  }
  for (int i = 0; i < I; ++i) {
    for (int t = 0; t < T; ++t) {
      m.add_variable(VarKind::Continuous, 0.0, std::numeric_limits<double>::infinity(),
                     "x[" + std::to_string(i + 1) + "," + std::to_string(t + 1) + "]");
    }
  }
  for (int i = 0; i < I; ++i) {
    for (int t = 0; t < T; ++t) {
      m.add_variable(VarKind::Continuous, 0.0, std::numeric_limits<double>::infinity(),
                     "s[" + std::to_string(i + 1) + "," + std::to_string(t + 1) + "]");
    }
  }
  const auto y = [T](int i, int t) { return i * T + t; };
  const auto x = [I, T](int i, int t) { return I * T + i * T + t; };
  const auto s = [I, T](int i, int t) { return 2 * I * T + i * T + t; };

  for (int i = 0; i < I; ++i) {
    for (int t = 0; t < T; ++t) {
      const double c = inst.prodCost[idx(i)][idx(t)];
      const double f = inst.setupCost[idx(i)][idx(t)];
      const double h = inst.holdCost[idx(i)][idx(t)];
      if (c != 0.0) m.objective.push_back({x(i, t), c});
      if (f != 0.0) m.objective.push_back({y(i, t), f});
      if (h != 0.0) m.objective.push_back({s(i, t), h});
    }
  }

  // Inventory balance: s[i,t-1] + x[i,t] - s[i,t] = d[i,t], with s[i,0] = 0.
  for (int i = 0; i < I; ++i) {
    for (int t = 0; t < T; ++t) {
      Constraint c;
      c.tag = {TagKind::Flow, i + 1, t + 1};
      if (t > 0) c.terms.push_back({s(i, t - 1), 1.0});
      c.terms.push_back({x(i, t), 1.0});
      c.terms.push_back({s(i, t), -1.0});
      c.sense = ConstraintSense::EQ;
      c.rhs = inst.demand[idx(i)][idx(t)];
      m.add_constraint(std::move(c));
    }
  }
  // Shared production capacity per period.
  for (int t = 0; t < T; ++t) {
    Constraint c;
    c.tag = {TagKind::Capacity, 0, t + 1};
    for (int i = 0; i < I; ++i) c.terms.push_back({x(i, t), 1.0});
    c.sense = ConstraintSense::LE;
    c.rhs = inst.capacity[idx(t)];
    m.add_constraint(std::move(c));
  }
  // Setup link: x[i,t] <= c[t] * y[i,t].
  for (int i = 0; i < I; ++i) {
    for (int t = 0; t < T; ++t) {
      Constraint c;
      c.tag = {TagKind::SetupLink, i + 1, t + 1};
      c.terms.push_back({x(i, t), 1.0});
      c.terms.push_back({y(i, t), -inst.capacity[idx(t)]});
      c.sense = ConstraintSense::LE;
      c.rhs = 0.0;
      m.add_constraint(std::move(c));
    }
  }
  m.validate();
  return m;
}

MilpModel build_msmk(const KnapsackInstance& inst) {
  inst.validate();
  const int I = inst.items;
  const int T = inst.periods;
  const int J = inst.resources;

  MilpModel m;
  m.sense = ObjectiveSense::Maximize;
  for (int i = 0; i < I; ++i) {
    for (int t = 0; t < T; ++t) {
      m.add_variable(VarKind::Binary, 0.0, 1.0,
                     "x[" + std::to_string(i + 1) + "," + std::to_string(t + 1) + "]");
    }
  }
  for (int i = 0; i < I; ++i) {
    for (int t = 0; t + 1 < T; ++t) {
      m.add_variable(VarKind::Binary, 0.0, 1.0,
                     "y[" + std::to_string(i + 1) + "," + std::to_string(t + 1) + "]");
    }
  }
  const auto x = [T](int i, int t) { return i * T + t; };
  const auto y = [I, T](int i, int t) { return I * T + i * (T - 1) + t; };

  for (int i = 0; i < I; ++i) {
    for (int t = 0; t < T; ++t) {
      const double p = inst.profit[idx(i)][idx(t)];
      if (p != 0.0) m.objective.push_back({x(i, t), p});
    }
    for (int t = 0; t + 1 < T; ++t) {
      const double b = inst.bonus[idx(i)][idx(t)];
      if (b != 0.0) m.objective.push_back({y(i, t), b});
    }
  }

  for (int j = 0; j < J; ++j) {
    for (int t = 0; t < T; ++t) {
      Constraint c;
      c.tag = {TagKind::Knapsack, j + 1, t + 1};
      for (int i = 0; i < I; ++i) {
        const double w = inst.weight[idx(i)][idx(j)][idx(t)];
        if (w != 0.0) c.terms.push_back({x(i, t), w});
      }
      c.sense = ConstraintSense::LE;
      c.rhs = inst.capacity[idx(j)][idx(t)];
      m.add_constraint(std::move(c));
    }
  }
  // Stability linking, the linear relaxation of y = 1 - |x[t+1] - x[t]|:
  //   y + x[t+1] - x[t] <= 1  and  y - x[t+1] + x[t] <= 1.
  for (int i = 0; i < I; ++i) {
    for (int t = 0; t + 1 < T; ++t) {
      Constraint up;
      up.tag = {TagKind::StabUpper, i + 1, t + 1};
      up.terms = {{y(i, t), 1.0}, {x(i, t + 1), 1.0}, {x(i, t), -1.0}};
      up.sense = ConstraintSense::LE;
      up.rhs = 1.0;
      m.add_constraint(std::move(up));

      Constraint down;
      down.tag = {TagKind::StabLower, i + 1, t + 1};
      down.terms = {{y(i, t), 1.0}, {x(i, t + 1), -1.0}, {x(i, t), 1.0}};
      down.sense = ConstraintSense::LE;
      down.rhs = 1.0;
      m.add_constraint(std::move(down));
    }
  }
  m.validate();
  return m;
}

bool TightLabels::is_tight(const ConstraintTag& tag) const {
  const auto it = labels.find(tag);
  if (it == labels.end()) {
    throw UsageError("no tightness label for " + tag_to_string(tag));
  }
  return it->second;
}

TightLabels label_tight(const MilpModel& model, const Solution& optimal, double eta) {
  if (optimal.status != SolutionStatus::Optimal) {
    throw UsageError("label_tight requires an Optimal solution");
  }
  if (eta < 0.0 || eta > 1.0) throw UsageError("label_tight: eta must be in [0,1]");
  if (optimal.values.size() != model.variables.size()) {
    throw UsageError("label_tight: solution does not match model");
  }

  TightLabels out;
  out.eta = eta;
  for (const auto& c : model.constraints) {
    switch (c.tag.kind) {
      case TagKind::Capacity:
      case TagKind::Knapsack: {
        // lhs >= eta * rhs
        double lhs = 0.0;
        for (const auto& term : c.terms) lhs += term.coef * optimal.values[idx(term.var)];
        out.labels[c.tag] = lhs >= eta * c.rhs;
        break;
      }
      case TagKind::SetupLink: {
        // x >= eta * y * c_t; the row is stored as x - c_t * y <= 0.
        double xVal = 0.0;
        double yVal = 0.0;
        double cap = 0.0;
        for (const auto& term : c.terms) {
          if (term.coef > 0.0) {
            xVal = optimal.values[idx(term.var)];
          } else {
            cap = -term.coef;
            yVal = optimal.values[idx(term.var)];
          }
        }
        out.labels[c.tag] = xVal >= eta * yVal * cap;
        break;
      }
      default:
        break;
    }
  }
  if (out.labels.empty()) {
    throw InternalError("label_tight: model has no labelable constraints");
  }
  return out;
}

MilpModel build_relaxation(const MilpModel& model, const TightLabels& predictedTight) {
  bool isKnapsack = false;
  for (const auto& c : model.constraints) {
    if (c.tag.kind == TagKind::Knapsack) {
      isKnapsack = true;
      break;
    }
  }

  MilpModel out;
  out.sense = model.sense;
  out.objectiveConstant = model.objectiveConstant;

  if (!isKnapsack) {
    // Lot-sizing: keep everything structural, filter the labeled rows.
    out.variables = model.variables;
    out.objective = model.objective;
    for (const auto& c : model.constraints) {
      if (c.tag.kind == TagKind::Capacity || c.tag.kind == TagKind::SetupLink) {
        if (!predictedTight.is_tight(c.tag)) continue;
      }
      out.constraints.push_back(c);
    }
    out.validate();
    return out;
  }

  // Knapsack: x variables keep their ids (they come first); y variables and
  // the stability rows are dropped. Every stability row references one y,
  // which by the id layout is the largest id in the row.
  int xCount = static_cast<int>(model.variables.size());
  for (const auto& c : model.constraints) {
    if (c.tag.kind != TagKind::StabUpper && c.tag.kind != TagKind::StabLower) continue;
    int maxId = 0;
    for (const auto& term : c.terms) maxId = std::max(maxId, term.var);
    xCount = std::min(xCount, maxId);
  }
  out.variables.assign(model.variables.begin(), model.variables.begin() + xCount);
  for (const auto& term : model.objective) {
    if (term.var < xCount) out.objective.push_back(term);
  }
  for (const auto& c : model.constraints) {
    if (c.tag.kind != TagKind::Knapsack) continue;
    if (!predictedTight.is_tight(c.tag)) continue;
    out.constraints.push_back(c);
  }
  out.validate();
  return out;
}

MilpModel fix_variables(const MilpModel& model, const std::map<int, double>& assignment) {
  MilpModel out = model;
  for (const auto& [id, value] : assignment) {
    if (id < 0 || id >= static_cast<int>(out.variables.size())) {
      throw UsageError("fix_variables: unknown variable id " + std::to_string(id));
    }
    auto& v = out.variables[idx(id)];
    if (v.kind != VarKind::Binary) {
      throw UsageError("fix_variables: " + v.name + " is not a binary variable");
    }
    if (value != 0.0 && value != 1.0) {
      throw UsageError("fix_variables: assignment to " + v.name + " must be 0 or 1");
    }
    v.lower = v.upper = value;
  }
  return out;
}

bool check_feasible(const MilpModel& model, const std::vector<double>& values, double tol) {
  if (values.size() != model.variables.size()) return false;
  for (const auto& v : model.variables) {
    const double val = values[idx(v.id)];
    if (val < v.lower - tol || val > v.upper + tol) return false;
    if (v.kind == VarKind::Binary) {
      if (std::abs(val) > tol && std::abs(val - 1.0) > tol) return false;
    }
  }
  for (const auto& c : model.constraints) {
    double lhs = 0.0;
    for (const auto& term : c.terms) lhs += term.coef * values[idx(term.var)];
    const double slack = tol * std::max(1.0, std::abs(c.rhs));
    switch (c.sense) {
      case ConstraintSense::LE:
        if (lhs > c.rhs + slack) return false;
        break;
      case ConstraintSense::GE:
        if (lhs < c.rhs - slack) return false;
        break;
      case ConstraintSense::EQ:
        if (std::abs(lhs - c.rhs) > slack) return false;
        break;
    }
  }
  return true;
}

double eval_objective(const MilpModel& model, const std::vector<double>& values) {
  double obj = model.objectiveConstant;
  for (const auto& term : model.objective) obj += term.coef * values[idx(term.var)];
  return obj;
}

void write_lp_text(const MilpModel& model, std::ostream& out) {
  out << (model.sense == ObjectiveSense::Minimize ? "min" : "max");
  for (const auto& term : model.objective) {
    out << (term.coef >= 0.0 ? " + " : " - ") << std::abs(term.coef) << ' '
        << model.variables[idx(term.var)].name;
  }
  if (model.objectiveConstant != 0.0) out << " + " << model.objectiveConstant;
  out << '\n';
  for (const auto& c : model.constraints) {
    out << " ";
    for (const auto& term : c.terms) {
      out << (term.coef >= 0.0 ? " + " : " - ") << std::abs(term.coef) << ' '
          << model.variables[idx(term.var)].name;
    }
    switch (c.sense) {
      case ConstraintSense::LE: out << " <= "; break;
      case ConstraintSense::EQ: out << " = "; break;
      case ConstraintSense::GE: out << " >= "; break;
    }
    out << c.rhs;
    if (c.tag.kind != TagKind::None) out << "  ; " << tag_to_string(c.tag);
    out << '\n';
  }
  for (const auto& v : model.variables) {
    out << "  " << v.lower << " <= " << v.name << " <= " << v.upper
        << (v.kind == VarKind::Binary ? "  ; binary" : "") << '\n';
  }
}

}  // namespace predopt::milp
