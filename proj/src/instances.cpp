#include "predopt/instances.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "predopt/errors.hpp"
#include "predopt/rng.hpp"

namespace predopt {

namespace {

using nlohmann::json;

void require(bool cond, const std::string& msg) {
  if (!cond) throw ValidationError(msg);
}

void check_matrix(const Matrix& m, int rows, int cols, const std::string& what) {
  require(static_cast<int>(m.size()) == rows,
          what + ": expected " + std::to_string(rows) + " rows, got " +
              std::to_string(m.size()));
  for (int i = 0; i < rows; ++i) {
    const auto& row = m[static_cast<std::size_t>(i)];
    require(static_cast<int>(row.size()) == cols,
            what + " row " + std::to_string(i) + ": expected " +
                std::to_string(cols) + " entries, got " +
                std::to_string(row.size()));
    for (int t = 0; t < cols; ++t) {
      const double v = row[static_cast<std::size_t>(t)];
      require(std::isfinite(v) && v >= 0.0,
              what + "[" + std::to_string(i) + "][" + std::to_string(t) +
                  "] must be finite and nonnegative");
    }
  }
}

double matrix_mean(const Matrix& m) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& row : m) {
    for (double v : row) sum += v;
    count += row.size();
  }
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

// Serialize a double as a JSON integer when it is one; keeps instance files
// readable and round-trips exactly either way.
json num(double v) {
  if (v == std::floor(v) && std::abs(v) < 9.0e15) {
    return json(static_cast<long long>(v));
  }
  return json(v);
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (const auto& row : m) {
    json r = json::array();
    for (double v : row) r.push_back(num(v));
    rows.push_back(std::move(r));
  }
  return rows;
}

Matrix matrix_from_json(const json& j, const std::string& what) {
  if (!j.is_array()) throw ParseError(what + ": expected an array of rows");
  Matrix m;
  for (const auto& row : j) {
    if (!row.is_array()) throw ParseError(what + ": expected array rows");
    std::vector<double> r;
    for (const auto& v : row) {
      if (!v.is_number()) throw ParseError(what + ": expected numeric entries");
      r.push_back(v.get<double>());
    }
    m.push_back(std::move(r));
  }
  return m;
}

}  // namespace

void LotSizingInstance::validate() const {
  require(items >= 1, "items must be >= 1");
  require(periods >= 1, "periods must be >= 1");
  check_matrix(demand, items, periods, "demand");
  check_matrix(prodCost, items, periods, "prodCost");
  check_matrix(setupCost, items, periods, "setupCost");
  check_matrix(holdCost, items, periods, "holdCost");
  require(static_cast<int>(capacity.size()) == periods,
          "capacity: expected " + std::to_string(periods) + " entries, got " +
              std::to_string(capacity.size()));
  for (int t = 0; t < periods; ++t) {
    const double v = capacity[static_cast<std::size_t>(t)];
    require(std::isfinite(v) && v >= 0.0,
            "capacity[" + std::to_string(t) + "] must be finite and nonnegative");
  }
  require(initialInventory == 0.0, "initialInventory must be 0");
  require(satisfies_cumulative_capacity(*this),
          "cumulative capacity does not cover cumulative demand");
}

double LotSizingInstance::mean_demand() const { return matrix_mean(demand); }
double LotSizingInstance::mean_hold_cost() const { return matrix_mean(holdCost); }

void KnapsackInstance::validate() const {
  require(items >= 1, "items must be >= 1");
  require(periods >= 1, "periods must be >= 1");
  require(resources >= 1, "resources must be >= 1");
  check_matrix(profit, items, periods, "profit");
  check_matrix(bonus, items, periods - 1, "bonus");
  require(static_cast<int>(weight.size()) == items, "weight: wrong item count");
  for (int i = 0; i < items; ++i) {
    check_matrix(weight[static_cast<std::size_t>(i)], resources, periods,
                 "weight[" + std::to_string(i) + "]");
  }
  check_matrix(capacity, resources, periods, "capacity");
}

std::string family_name(Family f) {
  return f == Family::Mclsp ? "mclsp" : "msmk";
}

Family family_from_name(const std::string& name) {
  if (name == "mclsp") return Family::Mclsp;
  if (name == "msmk") return Family::Msmk;
  throw ParseError("unknown family '" + name + "'");
}

bool satisfies_cumulative_capacity(const LotSizingInstance& inst) {
  double capSum = 0.0;
  double demSum = 0.0;
  for (int t = 0; t < inst.periods; ++t) {
    capSum += inst.capacity[static_cast<std::size_t>(t)];
    for (int i = 0; i < inst.items; ++i) {
      demSum += inst.demand[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)];
    }
    if (capSum < demSum) return false;
  }
  return true;
}

namespace {

Matrix sample_matrix(Rng& rng, int rows, int cols, long long lo, long long hi) {
  Matrix m(static_cast<std::size_t>(rows),
           std::vector<double>(static_cast<std::size_t>(cols)));
  for (auto& row : m) {
    for (auto& v : row) v = static_cast<double>(rng.uniform_int(lo, hi));
  }
  return m;
}

}  // namespace

LotSizingInstance gen_mclsp(const GenConfig& config) {
  if (config.family != Family::Mclsp) throw UsageError("gen_mclsp: family must be mclsp");
  if (config.items < 1 || config.periods < 1) {
    throw UsageError("gen_mclsp: items and periods must be >= 1");
  }
  if (!(config.capRatio > 0.0)) throw UsageError("gen_mclsp: capRatio must be > 0");

  Rng rng(config.seed);
  const int I = config.items;
  const int T = config.periods;
  constexpr int kMaxAttempts = 1000;

  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    LotSizingInstance inst;
    inst.items = I;
    inst.periods = T;
    inst.seed = config.seed;
    inst.capRatio = config.capRatio;
    inst.setupToHold = config.setupToHold;

    inst.demand = sample_matrix(rng, I, T, 500, 1500);
    inst.prodCost = sample_matrix(rng, I, T, 1, 200);
    inst.holdCost = sample_matrix(rng, I, T, 1, 100);

    const double dbar = inst.mean_demand();
    const auto capLo = static_cast<long long>(std::ceil(0.8 * config.capRatio * dbar));
    const auto capHi = static_cast<long long>(std::floor(1.2 * config.capRatio * dbar));
    if (capLo > capHi) continue;
    inst.capacity.resize(static_cast<std::size_t>(T));
    for (auto& c : inst.capacity) {
      c = static_cast<double>(rng.uniform_int(capLo, capHi));
    }
    if (!satisfies_cumulative_capacity(inst)) continue;

    const double hbar = inst.mean_hold_cost();
    const auto fLo = static_cast<long long>(std::ceil(0.9 * config.setupToHold * hbar));
    const auto fHi = static_cast<long long>(std::floor(1.1 * config.setupToHold * hbar));
    if (fLo > fHi) continue;
    inst.setupCost = sample_matrix(rng, I, T, fLo, fHi);

    inst.validate();
    return inst;
  }
  throw GenerationError(
      "gen_mclsp: could not satisfy the cumulative-capacity invariant in " +
      std::to_string(kMaxAttempts) + " attempts; capRatio " +
      std::to_string(config.capRatio) + " is too small for " +
      std::to_string(I) + " items");
}

KnapsackInstance gen_msmk(const GenConfig& config) {
  if (config.family != Family::Msmk) throw UsageError("gen_msmk: family must be msmk");
  if (config.items < 1 || config.periods < 1 || config.resources < 1) {
    throw UsageError("gen_msmk: items, periods and resources must be >= 1");
  }

  Rng rng(config.seed);
  const int I = config.items;
  const int T = config.periods;
  const int J = config.resources;

  KnapsackInstance inst;
  inst.items = I;
  inst.periods = T;
  inst.resources = J;
  inst.seed = config.seed;

  inst.profit = sample_matrix(rng, I, T, 1, 1000);
  inst.bonus = T > 1 ? sample_matrix(rng, I, T - 1, 1, 1000)
                     : Matrix(static_cast<std::size_t>(I));
  inst.weight.resize(static_cast<std::size_t>(I));
  for (auto& w : inst.weight) w = sample_matrix(rng, J, T, 1, 1000);

  inst.capacity.assign(static_cast<std::size_t>(J),
                       std::vector<double>(static_cast<std::size_t>(T)));
  for (int j = 0; j < J; ++j) {
    for (int t = 0; t < T; ++t) {
      double weightSum = 0.0;
      for (int i = 0; i < I; ++i) {
        weightSum += inst.weight[static_cast<std::size_t>(i)]
                                [static_cast<std::size_t>(j)]
                                [static_cast<std::size_t>(t)];
      }
      auto lo = static_cast<long long>(std::ceil(0.5 * weightSum));
      auto hi = static_cast<long long>(std::floor(0.8 * weightSum));
      // weightSum == 1 leaves no integer in [0.5, 0.8]; take the ceiling.
      if (lo > hi) hi = lo;
      inst.capacity[static_cast<std::size_t>(j)][static_cast<std::size_t>(t)] =
          static_cast<double>(rng.uniform_int(lo, hi));
    }
  }

  inst.validate();
  return inst;
}

std::string instance_to_json(const Instance& inst) {
  json j;
  if (const auto* ls = std::get_if<LotSizingInstance>(&inst)) {
    j["family"] = "mclsp";
    j["I"] = ls->items;
    j["T"] = ls->periods;
    j["seed"] = ls->seed;
    if (ls->capRatio) j["capRatio"] = num(*ls->capRatio);
    if (ls->setupToHold) j["setupToHold"] = num(*ls->setupToHold);
    j["demand"] = matrix_to_json(ls->demand);
    j["prodCost"] = matrix_to_json(ls->prodCost);
    j["setupCost"] = matrix_to_json(ls->setupCost);
    j["holdCost"] = matrix_to_json(ls->holdCost);
    json cap = json::array();
    for (double c : ls->capacity) cap.push_back(num(c));
    j["capacity"] = std::move(cap);
  } else {
    const auto& ks = std::get<KnapsackInstance>(inst);
    j["family"] = "msmk";
    j["I"] = ks.items;
    j["T"] = ks.periods;
    j["J"] = ks.resources;
    j["seed"] = ks.seed;
    j["profit"] = matrix_to_json(ks.profit);
    j["bonus"] = matrix_to_json(ks.bonus);
    json w = json::array();
    for (const auto& wi : ks.weight) w.push_back(matrix_to_json(wi));
    j["weight"] = std::move(w);
    j["capacity"] = matrix_to_json(ks.capacity);
  }
  return j.dump(2);
}

Instance instance_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("instance JSON: ") + e.what());
  }
  try {
    const auto fam = family_from_name(j.at("family").get<std::string>());
    if (fam == Family::Mclsp) {
      LotSizingInstance ls;
      ls.items = j.at("I").get<int>();
      ls.periods = j.at("T").get<int>();
      ls.seed = j.value("seed", std::uint64_t{0});
      if (j.contains("capRatio")) ls.capRatio = j["capRatio"].get<double>();
      if (j.contains("setupToHold")) ls.setupToHold = j["setupToHold"].get<double>();
      ls.demand = matrix_from_json(j.at("demand"), "demand");
      ls.prodCost = matrix_from_json(j.at("prodCost"), "prodCost");
      ls.setupCost = matrix_from_json(j.at("setupCost"), "setupCost");
      ls.holdCost = matrix_from_json(j.at("holdCost"), "holdCost");
      for (const auto& v : j.at("capacity")) ls.capacity.push_back(v.get<double>());
      ls.validate();
      return ls;
    }
    KnapsackInstance ks;
    ks.items = j.at("I").get<int>();
    ks.periods = j.at("T").get<int>();
    ks.resources = j.at("J").get<int>();
    ks.seed = j.value("seed", std::uint64_t{0});
    ks.profit = matrix_from_json(j.at("profit"), "profit");
    ks.bonus = matrix_from_json(j.at("bonus"), "bonus");
    for (const auto& wi : j.at("weight")) {
      ks.weight.push_back(matrix_from_json(wi, "weight"));
    }
    ks.capacity = matrix_from_json(j.at("capacity"), "capacity");
    ks.validate();
    return ks;
  } catch (const json::exception& e) {
    throw ParseError(std::string("instance JSON: ") + e.what());
  }
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  out << instance_to_json(inst) << '\n';
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return instance_from_json(buf.str());
  } catch (ParseError& e) {
    throw ParseError(path + ": " + e.what());
  } catch (ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

}  // namespace predopt
