#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "predopt/errors.hpp"
#include "solver_internal.hpp"

namespace predopt::solver::detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-9;
constexpr double kPhase1Tol = 1e-7;
constexpr double kFixedTol = 1e-12;
constexpr int kDegenerateStreakLimit = 64;

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

// Standard-form LP: min c.x  s.t.  A x (<=|=|>=) b,  x >= 0.
struct Standard {
  int cols = 0;
  std::vector<double> cost;
  std::vector<std::vector<double>> rowCoef;  // dense rows over structural cols
  std::vector<milp::ConstraintSense> rowSense;
  std::vector<double> rhs;
};

// Dense two-phase tableau with a flat backing array.
class Tableau {
 public:
  explicit Tableau(const Standard& p) : n_(p.cols) {
    const int m = static_cast<int>(p.rhs.size());
    // Senses after flipping rows with negative right-hand sides.
    std::vector<milp::ConstraintSense> sense(p.rowSense);
    for (int i = 0; i < m; ++i) {
      if (p.rhs[idx(i)] >= 0.0) continue;
      if (sense[idx(i)] == milp::ConstraintSense::LE) sense[idx(i)] = milp::ConstraintSense::GE;
      else if (sense[idx(i)] == milp::ConstraintSense::GE) sense[idx(i)] = milp::ConstraintSense::LE;
    }
    int slackCount = 0;
    int artCount = 0;
    for (const auto s : sense) {
      if (s != milp::ConstraintSense::EQ) ++slackCount;
      if (s != milp::ConstraintSense::LE) ++artCount;
    }
    artStart_ = n_ + slackCount;
    cols_ = artStart_ + artCount;
    rows_ = m;
    width_ = cols_ + 1;
    a_.assign(idx(rows_) * idx(width_), 0.0);
    basis_.assign(idx(rows_), -1);
    active_.assign(idx(rows_), true);
    isBasic_.assign(idx(cols_), false);
    banned_.assign(idx(cols_), false);

    int sPos = n_;
    int aPos = artStart_;
    for (int i = 0; i < m; ++i) {
      double* row = row_ptr(i);
      const double sign = p.rhs[idx(i)] < 0.0 ? -1.0 : 1.0;
      for (int j = 0; j < n_; ++j) row[j] = sign * p.rowCoef[idx(i)][idx(j)];
      row[cols_] = sign * p.rhs[idx(i)];
      switch (sense[idx(i)]) {
        case milp::ConstraintSense::LE:
          row[sPos] = 1.0;
          set_basis(i, sPos++);
          break;
        case milp::ConstraintSense::GE:
          row[sPos] = -1.0;
          ++sPos;
          row[aPos] = 1.0;
          set_basis(i, aPos++);
          break;
        case milp::ConstraintSense::EQ:
          row[aPos] = 1.0;
          set_basis(i, aPos++);
          break;
      }
    }
  }

  LpStatus run(const std::vector<double>& structuralCost) {
    if (artStart_ < cols_) {
      std::vector<double> phase1(idx(cols_), 0.0);
      for (int j = artStart_; j < cols_; ++j) phase1[idx(j)] = 1.0;
      load_objective(phase1);
      const LpStatus st = iterate();
      if (st != LpStatus::Optimal) {
        // Phase 1 is bounded below by zero; anything else is a breakdown.
        return st == LpStatus::Unbounded ? LpStatus::NumericalFailure : st;
      }
      if (objective_value() > kPhase1Tol) return LpStatus::Infeasible;
      drive_out_artificials();
      for (int j = artStart_; j < cols_; ++j) banned_[idx(j)] = true;
    }
    std::vector<double> cost(idx(cols_), 0.0);
    std::copy(structuralCost.begin(), structuralCost.end(), cost.begin());
    load_objective(cost);
    return iterate();
  }

  std::vector<double> structural_values() const {
    std::vector<double> x(idx(n_), 0.0);
    for (int i = 0; i < rows_; ++i) {
      if (active_[idx(i)] && basis_[idx(i)] >= 0 && basis_[idx(i)] < n_) {
        x[idx(basis_[idx(i)])] = a_[idx(i) * idx(width_) + idx(cols_)];
      }
    }
    return x;
  }

 private:
  double* row_ptr(int i) { return a_.data() + idx(i) * idx(width_); }
  const double* row_ptr(int i) const { return a_.data() + idx(i) * idx(width_); }

  void set_basis(int row, int col) {
    basis_[idx(row)] = col;
    isBasic_[idx(col)] = true;
  }

  double objective_value() const { return -obj_[idx(cols_)]; }

  void load_objective(const std::vector<double>& cost) {
    obj_.assign(idx(width_), 0.0);
    std::copy(cost.begin(), cost.end(), obj_.begin());
    for (int i = 0; i < rows_; ++i) {
      if (!active_[idx(i)]) continue;
      const double cb = cost[idx(basis_[idx(i)])];
      if (cb == 0.0) continue;
      const double* row = row_ptr(i);
      for (int j = 0; j < width_; ++j) obj_[idx(j)] -= cb * row[j];
    }
  }

  int pick_entering(bool bland) const {
    int best = -1;
    double bestVal = -kCostTol;
    for (int j = 0; j < cols_; ++j) {
      if (isBasic_[idx(j)] || banned_[idx(j)]) continue;
      const double rc = obj_[idx(j)];
      if (rc < bestVal) {
        if (bland) return j;  // lowest index wins
        bestVal = rc;
        best = j;
      }
    }
    return best;
  }

  // Lowest ratio; ties by lowest leaving variable index (Bland-compatible).
  int pick_leaving(int s) const {
    int bestRow = -1;
    double bestRatio = kInf;
    for (int i = 0; i < rows_; ++i) {
      if (!active_[idx(i)]) continue;
      const double piv = row_ptr(i)[s];
      if (piv <= kPivotTol) continue;
      const double ratio = row_ptr(i)[cols_] / piv;
      if (ratio < bestRatio - 1e-12 ||
          (ratio < bestRatio + 1e-12 && (bestRow < 0 || basis_[idx(i)] < basis_[idx(bestRow)]))) {
        bestRatio = ratio;
        bestRow = i;
      }
    }
    return bestRow;
  }

  void pivot(int r, int s) {
    double* prow = row_ptr(r);
    const double inv = 1.0 / prow[s];
    for (int j = 0; j < width_; ++j) prow[j] *= inv;
    prow[s] = 1.0;
    for (int i = 0; i < rows_; ++i) {
      if (i == r || !active_[idx(i)]) continue;
      double* row = row_ptr(i);
      const double factor = row[s];
      if (factor == 0.0) continue;
      for (int j = 0; j < width_; ++j) row[j] -= factor * prow[j];
      row[s] = 0.0;
    }
    const double objFactor = obj_[idx(s)];
    if (objFactor != 0.0) {
      for (int j = 0; j < width_; ++j) obj_[idx(j)] -= objFactor * prow[j];
      obj_[idx(s)] = 0.0;
    }
    isBasic_[idx(basis_[idx(r)])] = false;
    set_basis(r, s);
  }

  LpStatus iterate() {
    bool bland = false;
    int degenerateStreak = 0;
    const long long cap = 10000 + 200LL * (rows_ + cols_);
    for (long long it = 0; it < cap; ++it) {
      const int s = pick_entering(bland);
      if (s < 0) return LpStatus::Optimal;
      const int r = pick_leaving(s);
      if (r < 0) return LpStatus::Unbounded;
      const double before = objective_value();
      pivot(r, s);
      if (objective_value() > before - 1e-12 * (1.0 + std::abs(before))) {
        if (++degenerateStreak > kDegenerateStreakLimit) bland = true;
      } else {
        degenerateStreak = 0;
      }
    }
    return LpStatus::NumericalFailure;
  }

  // After phase 1, pivot zero-level artificials out of the basis; rows that
  // offer no pivot column are redundant and get deactivated.
  void drive_out_artificials() {
    for (int i = 0; i < rows_; ++i) {
      if (!active_[idx(i)] || basis_[idx(i)] < artStart_) continue;
      int pivotCol = -1;
      for (int j = 0; j < artStart_; ++j) {
        if (!isBasic_[idx(j)] && std::abs(row_ptr(i)[j]) > kPhase1Tol) {
          pivotCol = j;
          break;
        }
      }
      if (pivotCol >= 0) {
        pivot(i, pivotCol);
      } else {
        isBasic_[idx(basis_[idx(i)])] = false;
        basis_[idx(i)] = -1;
        active_[idx(i)] = false;
      }
    }
  }

  int n_ = 0;
  int cols_ = 0;
  int rows_ = 0;
  int width_ = 0;
  int artStart_ = 0;
  std::vector<double> a_;
  std::vector<double> obj_;
  std::vector<int> basis_;
  std::vector<bool> active_;
  std::vector<bool> isBasic_;
  std::vector<bool> banned_;
};

}  // namespace

LpResult solve_lp_bounds(const milp::MilpModel& model,
                         const std::vector<double>& lower,
                         const std::vector<double>& upper) {
  const int n = static_cast<int>(model.variables.size());
  if (static_cast<int>(lower.size()) != n || static_cast<int>(upper.size()) != n) {
    throw UsageError("solve_lp_bounds: bound arrays do not match the model");
  }

  LpResult out;
  // Working bounds; singleton rows are folded into them below.
  std::vector<double> lo(lower);
  std::vector<double> up(upper);
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(lo[idx(j)])) {
      throw UsageError("solve_lp_bounds: variable " + model.variables[idx(j)].name +
                       " has no finite lower bound");
    }
  }

  // Fold rows whose free support is a single variable into its bounds, and
  // evaluate rows with no free support outright. Repeats until stable since
  // tightened bounds can pin further variables.
  std::vector<char> rowDone(model.constraints.size(), 0);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t ci = 0; ci < model.constraints.size(); ++ci) {
      if (rowDone[ci]) continue;
      const auto& c = model.constraints[ci];
      int freeVar = -1;
      double freeCoef = 0.0;
      double shift = 0.0;
      bool manyFree = false;
      for (const auto& term : c.terms) {
        if (up[idx(term.var)] - lo[idx(term.var)] > kFixedTol) {
          if (freeVar >= 0 && term.var != freeVar) {
            manyFree = true;
            break;
          }
          freeVar = term.var;
          freeCoef += term.coef;
        } else {
          shift += term.coef * lo[idx(term.var)];
        }
      }
      if (manyFree) continue;
      rowDone[ci] = 1;
      changed = true;
      const double b = c.rhs - shift;
      const double slack = 1e-9 * std::max(1.0, std::abs(c.rhs));
      if (freeVar < 0 || freeCoef == 0.0) {
        const bool ok = (c.sense == milp::ConstraintSense::LE && 0.0 <= b + slack) ||
                        (c.sense == milp::ConstraintSense::GE && 0.0 >= b - slack) ||
                        (c.sense == milp::ConstraintSense::EQ && std::abs(b) <= slack);
        if (!ok) {
          out.status = LpStatus::Infeasible;
          return out;
        }
        continue;
      }
      const double bound = b / freeCoef;
      auto& l = lo[idx(freeVar)];
      auto& u = up[idx(freeVar)];
      switch (c.sense) {
        case milp::ConstraintSense::LE:
          if (freeCoef > 0.0) u = std::min(u, bound);
          else l = std::max(l, bound);
          break;
        case milp::ConstraintSense::GE:
          if (freeCoef > 0.0) l = std::max(l, bound);
          else u = std::min(u, bound);
          break;
        case milp::ConstraintSense::EQ:
          l = std::max(l, bound);
          u = std::min(u, bound);
          break;
      }
      if (l > u + 1e-9 * std::max(1.0, std::abs(u))) {
        out.status = LpStatus::Infeasible;
        return out;
      }
      if (l > u) u = l;  // collapse hairline crossings
    }
  }

  // Shift every remaining free variable to x = lo + x', x' in [0, up - lo].
  std::vector<int> col(idx(n), -1);
  std::vector<double> span(idx(n), 0.0);
  int structCols = 0;
  for (int j = 0; j < n; ++j) {
    if (up[idx(j)] - lo[idx(j)] > kFixedTol) {
      col[idx(j)] = structCols++;
      span[idx(j)] = up[idx(j)] - lo[idx(j)];
    }
  }

  Standard p;
  p.cols = structCols;
  std::vector<double> cost(idx(structCols), 0.0);
  const double senseSign = model.sense == milp::ObjectiveSense::Minimize ? 1.0 : -1.0;
  for (const auto& term : model.objective) {
    if (col[idx(term.var)] >= 0) cost[idx(col[idx(term.var)])] += senseSign * term.coef;
  }

  for (std::size_t ci = 0; ci < model.constraints.size(); ++ci) {
    if (rowDone[ci]) continue;  // folded into bounds
    const auto& c = model.constraints[ci];
    std::vector<double> row(idx(structCols), 0.0);
    double shift = 0.0;
    for (const auto& term : c.terms) {
      if (col[idx(term.var)] >= 0) row[idx(col[idx(term.var)])] += term.coef;
      else shift += term.coef * lo[idx(term.var)];
    }
    const double b = c.rhs - shift;
    // Row equilibration keeps pivots well scaled across mixed-magnitude rows.
    double scale = 0.0;
    for (double v : row) scale = std::max(scale, std::abs(v));
    if (scale <= 0.0) scale = 1.0;
    for (auto& v : row) v /= scale;
    p.rowCoef.push_back(std::move(row));
    p.rowSense.push_back(c.sense);
    p.rhs.push_back(b / scale);
  }
  // Finite shifted upper bounds become explicit rows.
  for (int j = 0; j < n; ++j) {
    if (col[idx(j)] < 0 || !std::isfinite(span[idx(j)])) continue;
    std::vector<double> row(idx(structCols), 0.0);
    row[idx(col[idx(j)])] = 1.0;
    p.rowCoef.push_back(std::move(row));
    p.rowSense.push_back(milp::ConstraintSense::LE);
    p.rhs.push_back(span[idx(j)]);
  }
  p.cost = cost;

  Tableau tableau(p);
  const LpStatus st = tableau.run(cost);
  if (st != LpStatus::Optimal) {
    out.status = st;
    return out;
  }

  const auto xShifted = tableau.structural_values();
  out.values.assign(idx(n), 0.0);
  for (int j = 0; j < n; ++j) {
    out.values[idx(j)] = lo[idx(j)] + (col[idx(j)] >= 0 ? xShifted[idx(col[idx(j)])] : 0.0);
  }
  out.objective = milp::eval_objective(model, out.values);

  // Never report a wrong Optimal: re-check primal feasibility on the original
  // rows and bounds.
  for (int j = 0; j < n; ++j) {
    const double v = out.values[idx(j)];
    const double l = lower[idx(j)];
    const double u = upper[idx(j)];
    if (v < l - 1e-6 * std::max(1.0, std::abs(l))) {
      out.status = LpStatus::NumericalFailure;
      return out;
    }
    if (std::isfinite(u) && v > u + 1e-6 * std::max(1.0, std::abs(u))) {
      out.status = LpStatus::NumericalFailure;
      return out;
    }
  }
  for (const auto& c : model.constraints) {
    double lhs = 0.0;
    for (const auto& term : c.terms) lhs += term.coef * out.values[idx(term.var)];
    const double slack = 1e-6 * std::max(1.0, std::abs(c.rhs));
    const bool ok = (c.sense == milp::ConstraintSense::LE && lhs <= c.rhs + slack) ||
                    (c.sense == milp::ConstraintSense::GE && lhs >= c.rhs - slack) ||
                    (c.sense == milp::ConstraintSense::EQ && std::abs(lhs - c.rhs) <= slack);
    if (!ok) {
      out.status = LpStatus::NumericalFailure;
      return out;
    }
  }
  out.status = LpStatus::Optimal;
  return out;
}

}  // namespace predopt::solver::detail
