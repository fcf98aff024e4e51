#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace predopt {

using Matrix = std::vector<std::vector<double>>;
using Cube = std::vector<Matrix>;

// Multi-item capacitated lot-sizing instance. All matrices are items x
// periods; capacity is one entry per period. Initial inventory is zero.
struct LotSizingInstance {
  int items = 0;
  int periods = 0;
  Matrix demand;     // d[i][t]
  Matrix prodCost;   // p[i][t]
  Matrix setupCost;  // f[i][t]
  Matrix holdCost;   // h[i][t]
  std::vector<double> capacity;  // c[t]
  double initialInventory = 0.0;
  std::uint64_t seed = 0;
  // Generator metadata when known; enables exact feature normalization.
  std::optional<double> capRatio;
  std::optional<double> setupToHold;

  void validate() const;  // throws ValidationError
  double mean_demand() const;
  double mean_hold_cost() const;
};

// Multi-stage multi-dimensional knapsack instance. The bonus matrix has T-1
// columns; weight is items x resources x periods; capacity is resources x
// periods.
struct KnapsackInstance {
  int items = 0;
  int periods = 0;
  int resources = 0;
  Matrix profit;    // p[i][t]
  Matrix bonus;     // b[i][t], t in 0..T-2
  Cube weight;      // w[i][j][t]
  Matrix capacity;  // cap[j][t]
  std::uint64_t seed = 0;

  void validate() const;
};

enum class Family { Mclsp, Msmk };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

struct GenConfig {
  std::uint64_t seed = 0;
  Family family = Family::Mclsp;
  int items = 1;
  int periods = 1;
  int resources = 1;       // MSMK only
  double capRatio = 10.0;  // MCLSP only
  double setupToHold = 1000.0;  // MCLSP only
};

// Capacity must be able to cover demand in every prefix of the horizon;
// this is exactly the condition for an all-zero-inventory-start MCLSP to be
// feasible.
bool satisfies_cumulative_capacity(const LotSizingInstance& inst);

LotSizingInstance gen_mclsp(const GenConfig& config);
KnapsackInstance gen_msmk(const GenConfig& config);

using Instance = std::variant<LotSizingInstance, KnapsackInstance>;

std::string instance_to_json(const Instance& inst);
Instance instance_from_json(const std::string& text);
void save_instance(const Instance& inst, const std::string& path);
Instance load_instance(const std::string& path);

}  // namespace predopt
