#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "predopt/milp.hpp"

namespace predopt::solver {

struct SolverOptions {
  std::optional<double> timeLimit;  // seconds
  double relGapTol = 1e-6;
  std::optional<long long> nodeLimit;
  int seed = 0;  // tie-break seed, reserved for backends with randomized branching
  bool stopAtFirstIncumbent = false;  // feasibility-only mode
};

struct SolveResult {
  milp::Solution solution;
  double bestBound = 0.0;
  long long nodes = 0;
  double wallTime = 0.0;
  // (elapsed seconds, incumbent objective), appended on every improvement.
  std::vector<std::pair<double, double>> trace;
};

// Contract for an exact solver; any conforming backend may replace the
// bundled one.
class SolverBackend {
 public:
  virtual ~SolverBackend() = default;
  virtual SolveResult solve(const milp::MilpModel& model, const SolverOptions& opts) = 0;
  virtual std::string name() const = 0;
};

// Dense-tableau two-phase simplex over the model with integrality dropped.
SolveResult solve_lp(const milp::MilpModel& model);

// Best-bound branch and bound on LP relaxations, branching on the most
// fractional binary (ties by lowest id), with depth-first plunging until the
// first incumbent.
SolveResult solve_mip(const milp::MilpModel& model, const SolverOptions& opts = {});

// Enumerates every binary assignment and solves the continuous remainder by
// LP (or evaluates directly when there is none). Test oracle; refuses models
// with more than maxBinaries binaries.
milp::Solution brute_force(const milp::MilpModel& model, int maxBinaries = 25);

class BundledSolver final : public SolverBackend {
 public:
  SolveResult solve(const milp::MilpModel& model, const SolverOptions& opts) override {
    return solve_mip(model, opts);
  }
  std::string name() const override { return "bundled-bnb"; }
};

// CSV with header elapsed_s,incumbent.
void write_trace_csv(const SolveResult& result, std::ostream& out);

}  // namespace predopt::solver
