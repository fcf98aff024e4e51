#pragma once

#include <vector>

#include "predopt/milp.hpp"

namespace predopt::solver::detail {

enum class LpStatus { Optimal, Infeasible, Unbounded, NumericalFailure };

struct LpResult {
  LpStatus status = LpStatus::NumericalFailure;
  std::vector<double> values;  // by model variable id
  double objective = 0.0;      // in the model's objective sense
};

// Two-phase dense-tableau simplex over the model with integrality dropped and
// per-variable bound overrides (same length as model.variables). Dantzig
// pricing with a Bland's-rule fallback after a degeneracy streak.
LpResult solve_lp_bounds(const milp::MilpModel& model,
                         const std::vector<double>& lower,
                         const std::vector<double>& upper);

}  // namespace predopt::solver::detail
