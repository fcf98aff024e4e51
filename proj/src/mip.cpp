#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <queue>
#include <vector>

#include "predopt/errors.hpp"
#include "predopt/solver.hpp"
#include "solver_internal.hpp"

namespace predopt::solver {

namespace {

using Clock = std::chrono::steady_clock;
using milp::MilpModel;
using milp::Solution;
using milp::SolutionStatus;
using milp::VarKind;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kIntTol = 1e-6;

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

double elapsed_s(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Bounds {
  std::vector<double> lower, upper;
};

Bounds model_bounds(const MilpModel& model) {
  Bounds b;
  b.lower.reserve(model.variables.size());
  b.upper.reserve(model.variables.size());
  for (const auto& v : model.variables) {
    b.lower.push_back(v.lower);
    b.upper.push_back(v.upper);
  }
  return b;
}

struct Node {
  // Per free-binary branching state: -1 free, 0 fixed to 0, 1 fixed to 1.
  std::vector<signed char> fix;
  double keyBound = -kInf;  // parent LP value in minimize-key space
  long long seq = 0;
  int depth = 0;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.keyBound != b.keyBound) return a.keyBound > b.keyBound;
    return a.seq > b.seq;
  }
};

}  // namespace

SolveResult solve_lp(const milp::MilpModel& model) {
  const auto start = Clock::now();
  const auto b = model_bounds(model);
  const auto lp = detail::solve_lp_bounds(model, b.lower, b.upper);
  SolveResult out;
  out.wallTime = elapsed_s(start);
  out.nodes = 0;
  switch (lp.status) {
    case detail::LpStatus::Optimal:
      out.solution = {lp.values, lp.objective, SolutionStatus::Optimal};
      out.bestBound = lp.objective;
      break;
    case detail::LpStatus::Infeasible:
      out.solution.status = SolutionStatus::Infeasible;
      break;
    case detail::LpStatus::Unbounded:
      out.solution.status = SolutionStatus::Unbounded;
      break;
    case detail::LpStatus::NumericalFailure:
      out.solution.status = SolutionStatus::NumericalFailure;
      break;
  }
  return out;
}

SolveResult solve_mip(const milp::MilpModel& model, const SolverOptions& opts) {
  const auto start = Clock::now();
  const double sign = model.sense == milp::ObjectiveSense::Minimize ? 1.0 : -1.0;

  SolveResult out;
  const auto finish = [&](SolutionStatus status) {
    out.solution.status = status;
    out.wallTime = elapsed_s(start);
    return out;
  };

  const auto base = model_bounds(model);
  std::vector<int> branchIds;  // free binaries
  for (const auto& v : model.variables) {
    if (v.kind == VarKind::Binary && v.upper - v.lower > 0.5) branchIds.push_back(v.id);
  }
  const int nb = static_cast<int>(branchIds.size());

  const auto out_of_time = [&] {
    return opts.timeLimit && elapsed_s(start) >= *opts.timeLimit;
  };

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  std::optional<Node> dive;
  dive = Node{std::vector<signed char>(idx(nb), -1), -kInf, 0, 0};

  bool haveIncumbent = false;
  double incumbentKey = kInf;
  std::vector<double> incumbentValues;
  double globalLowerKey = -kInf;
  long long seq = 1;

  Bounds nb_bounds = base;
  const auto epsPrune = [&] {
    return haveIncumbent ? opts.relGapTol * std::max(1.0, std::abs(incumbentKey)) : 0.0;
  };

  while (dive || !open.empty()) {
    // Global bound and gap bookkeeping.
    double lowest = dive ? dive->keyBound : kInf;
    if (!open.empty()) lowest = std::min(lowest, open.top().keyBound);
    globalLowerKey = std::max(globalLowerKey, std::min(lowest, incumbentKey));
    if (haveIncumbent && incumbentKey - globalLowerKey <= epsPrune()) break;

    if (out_of_time()) {
      out.bestBound = sign * globalLowerKey;
      out.solution.values = incumbentValues;
      out.solution.objective = sign * incumbentKey;
      return finish(SolutionStatus::TimeLimit);
    }
    if (opts.nodeLimit && out.nodes >= *opts.nodeLimit) {
      out.bestBound = sign * globalLowerKey;
      out.solution.values = incumbentValues;
      out.solution.objective = sign * incumbentKey;
      return finish(SolutionStatus::TimeLimit);
    }

    Node node;
    if (dive) {
      node = std::move(*dive);
      dive.reset();
    } else {
      node = open.top();
      open.pop();
    }
    if (haveIncumbent && node.keyBound >= incumbentKey - epsPrune()) continue;

    for (int k = 0; k < nb; ++k) {
      const int v = branchIds[idx(k)];
      if (node.fix[idx(k)] < 0) {
        nb_bounds.lower[idx(v)] = base.lower[idx(v)];
        nb_bounds.upper[idx(v)] = base.upper[idx(v)];
      } else {
        nb_bounds.lower[idx(v)] = nb_bounds.upper[idx(v)] = node.fix[idx(k)];
      }
    }
    const auto lp = detail::solve_lp_bounds(model, nb_bounds.lower, nb_bounds.upper);
    ++out.nodes;

    if (lp.status == detail::LpStatus::NumericalFailure) {
      out.bestBound = sign * globalLowerKey;
      return finish(SolutionStatus::NumericalFailure);
    }
    if (lp.status == detail::LpStatus::Unbounded) {
      out.bestBound = model.sense == milp::ObjectiveSense::Minimize ? -kInf : kInf;
      return finish(SolutionStatus::Unbounded);
    }
    if (lp.status == detail::LpStatus::Infeasible) continue;

    const double key = sign * lp.objective;
    if (haveIncumbent && key >= incumbentKey - epsPrune()) continue;

    // Most fractional free binary, ties by lowest id.
    int branchK = -1;
    double bestFrac = kIntTol;
    for (int k = 0; k < nb; ++k) {
      if (node.fix[idx(k)] >= 0) continue;
      const double v = lp.values[idx(branchIds[idx(k)])];
      const double dist = std::min(v, 1.0 - v);
      if (dist > bestFrac + 1e-12) {
        bestFrac = dist;
        branchK = k;
      }
    }

    if (branchK < 0) {
      // Integral: new incumbent (only improving ones reach this point).
      haveIncumbent = true;
      incumbentKey = key;
      incumbentValues = lp.values;
      out.trace.emplace_back(elapsed_s(start), lp.objective);
      if (opts.stopAtFirstIncumbent) {
        out.bestBound = sign * globalLowerKey;
        out.solution.values = incumbentValues;
        out.solution.objective = sign * incumbentKey;
        return finish(SolutionStatus::Feasible);
      }
      continue;
    }

    Node up = node;
    up.fix[idx(branchK)] = 1;
    up.keyBound = key;
    up.seq = seq++;
    up.depth = node.depth + 1;
    Node down = std::move(node);
    down.fix[idx(branchK)] = 0;
    down.keyBound = key;
    down.seq = seq++;
    down.depth = up.depth;

    // Plunge toward the nearer bound; park the sibling. Node selection
    // stays best-bound: every non-dive retrieval pops the lowest bound.
    const double v = lp.values[idx(branchIds[idx(branchK)])];
    if (v >= 0.5) {
      dive = std::move(up);
      open.push(std::move(down));
    } else {
      dive = std::move(down);
      open.push(std::move(up));
    }
  }

  out.wallTime = elapsed_s(start);
  if (haveIncumbent) {
    out.solution.values = incumbentValues;
    out.solution.objective = sign * incumbentKey;
    out.solution.status = SolutionStatus::Optimal;
    out.bestBound = out.solution.objective;
  } else {
    out.solution.status = SolutionStatus::Infeasible;
    out.bestBound = sign * kInf;
  }
  return out;
}

namespace {

// DFS enumeration state with incremental bound pruning on rows whose free
// variables are all binary.
struct BruteForce {
  const MilpModel& model;
  Bounds bounds;
  std::vector<int> ids;  // free binaries, ascending
  bool hasContinuous = false;

  struct RowState {
    double lhs = 0.0;      // assigned + constant contribution
    double minRest = 0.0;  // over unassigned binaries
    double maxRest = 0.0;
    milp::ConstraintSense sense;
    double rhs = 0.0;
    bool pure = false;  // no free continuous variables
  };
  std::vector<RowState> rows;
  std::vector<std::vector<std::pair<int, double>>> varRows;  // per free binary

  double bestObj = 0.0;
  std::vector<double> bestValues;
  bool found = false;
  bool unbounded = false;
  bool numericalFailure = false;
  std::vector<double> assignment;

  explicit BruteForce(const MilpModel& m) : model(m), bounds(model_bounds(m)) {
    for (const auto& v : m.variables) {
      if (v.kind == VarKind::Binary && v.upper - v.lower > 0.5) {
        ids.push_back(v.id);
      } else if (v.kind == VarKind::Continuous && v.upper - v.lower > 1e-12) {
        hasContinuous = true;
      }
    }
    varRows.resize(ids.size());
    std::vector<int> pos(m.variables.size(), -1);
    for (std::size_t k = 0; k < ids.size(); ++k) pos[idx(ids[k])] = static_cast<int>(k);

    rows.reserve(m.constraints.size());
    for (const auto& c : m.constraints) {
      RowState rs;
      rs.sense = c.sense;
      rs.rhs = c.rhs;
      rs.pure = true;
      for (const auto& term : c.terms) {
        const auto& v = m.variables[idx(term.var)];
        const int k = pos[idx(term.var)];
        if (k >= 0) {
          varRows[idx(k)].emplace_back(static_cast<int>(rows.size()), term.coef);
          rs.minRest += std::min(0.0, term.coef);
          rs.maxRest += std::max(0.0, term.coef);
        } else if (v.upper - v.lower <= 1e-12) {
          rs.lhs += term.coef * v.lower;  // pinned variable, constant
        } else {
          rs.pure = false;
        }
      }
      rows.push_back(rs);
    }
    assignment.assign(ids.size(), 0.0);
  }

  bool row_can_hold(const RowState& r) const {
    const double slack = 1e-9 * std::max(1.0, std::abs(r.rhs));
    switch (r.sense) {
      case milp::ConstraintSense::LE:
        return r.lhs + r.minRest <= r.rhs + slack;
      case milp::ConstraintSense::GE:
        return r.lhs + r.maxRest >= r.rhs - slack;
      case milp::ConstraintSense::EQ:
        return r.lhs + r.minRest <= r.rhs + slack && r.lhs + r.maxRest >= r.rhs - slack;
    }
    return true;
  }

  void offer(const std::vector<double>& values, double obj) {
    const bool better =
        model.sense == milp::ObjectiveSense::Minimize ? obj < bestObj : obj > bestObj;
    if (!found || better) {
      found = true;
      bestObj = obj;
      bestValues = values;
    }
  }

  void leaf() {
    if (!hasContinuous) {
      std::vector<double> values(model.variables.size());
      for (const auto& v : model.variables) values[idx(v.id)] = v.lower;
      for (std::size_t k = 0; k < ids.size(); ++k) values[idx(ids[k])] = assignment[k];
      offer(values, milp::eval_objective(model, values));
      return;
    }
    for (std::size_t k = 0; k < ids.size(); ++k) {
      bounds.lower[idx(ids[k])] = bounds.upper[idx(ids[k])] = assignment[k];
    }
    const auto lp = detail::solve_lp_bounds(model, bounds.lower, bounds.upper);
    if (lp.status == detail::LpStatus::Unbounded) {
      unbounded = true;
    } else if (lp.status == detail::LpStatus::NumericalFailure) {
      numericalFailure = true;
    } else if (lp.status == detail::LpStatus::Optimal) {
      offer(lp.values, lp.objective);
    }
  }

  void dfs(std::size_t k) {
    if (unbounded || numericalFailure) return;
    if (k == ids.size()) {
      leaf();
      return;
    }
    for (double value : {0.0, 1.0}) {
      assignment[k] = value;
      bool ok = true;
      for (const auto& [row, coef] : varRows[k]) {
        auto& r = rows[idx(row)];
        r.lhs += coef * value;
        r.minRest -= std::min(0.0, coef);
        r.maxRest -= std::max(0.0, coef);
        if (r.pure && !row_can_hold(r)) ok = false;
      }
      if (ok) dfs(k + 1);
      for (const auto& [row, coef] : varRows[k]) {
        auto& r = rows[idx(row)];
        r.lhs -= coef * value;
        r.minRest += std::min(0.0, coef);
        r.maxRest += std::max(0.0, coef);
      }
    }
  }
};

}  // namespace

milp::Solution brute_force(const milp::MilpModel& model, int maxBinaries) {
  BruteForce bf(model);
  if (static_cast<int>(bf.ids.size()) > maxBinaries) {
    throw UsageError("brute_force: model has " + std::to_string(bf.ids.size()) +
                     " free binaries, more than the limit of " + std::to_string(maxBinaries));
  }
  bf.dfs(0);
  Solution out;
  if (bf.numericalFailure) {
    out.status = SolutionStatus::NumericalFailure;
  } else if (bf.unbounded) {
    out.status = SolutionStatus::Unbounded;
  } else if (bf.found) {
    out.values = bf.bestValues;
    out.objective = bf.bestObj;
    out.status = SolutionStatus::Optimal;
  } else {
    out.status = SolutionStatus::Infeasible;
  }
  return out;
}

void write_trace_csv(const SolveResult& result, std::ostream& out) {
  out << "elapsed_s,incumbent\n";
  for (const auto& [elapsed, incumbent] : result.trace) {
    out << elapsed << ',' << incumbent << '\n';
  }
}

}  // namespace predopt::solver
