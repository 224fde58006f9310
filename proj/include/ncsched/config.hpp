#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ncsched/certificates.hpp"
#include "ncsched/cycles.hpp"
#include "ncsched/design.hpp"
#include "ncsched/plants.hpp"
#include "ncsched/rng.hpp"

namespace ncsched {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CycleSource {
  enum class Kind { explicit_sets, prop3, prop4, random };
  Kind kind = Kind::explicit_sets;
  std::vector<std::vector<int>> stable_sets;  // explicit
  std::vector<int> v0;                        // prop4 starting allocation
  std::uint64_t seed = 1;                     // random
};

struct InitialConditionSpec {
  enum class Kind { uniform_box, explicit_states };
  Kind kind = Kind::uniform_box;
  double low = -1.0;
  double high = 1.0;
  std::uint64_t seed = 1;
  int count = 10;
  std::vector<std::vector<Vec>> trials;  // explicit: [trial][plant][coord]
};

struct RoundRobinSpec {
  std::vector<std::vector<int>> groups;
  int dwell = 1;
};

/// Everything a run needs, parsed from one JSON file. Unknown keys anywhere
/// are rejected so typos fail loudly instead of silently using defaults.
struct RunConfig {
  std::vector<Matrix> A, B;
  std::vector<std::optional<Matrix>> K;
  std::optional<Matrix> lqr_Q, lqr_R;
  int capacity = 0;
  DesignGrid grid;
  int t_max = 100;
  long horizon = 60;
  std::optional<CycleSource> cycle;
  InitialConditionSpec ics;
  std::optional<RoundRobinSpec> round_robin;
  std::optional<std::string> output_dir;
};

namespace detail {

inline void require_keys(const nlohmann::json& j, const std::set<std::string>& allowed,
                         const std::set<std::string>& required, const std::string& ctx) {
  if (!j.is_object()) throw ConfigError(ctx + ": expected an object");
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key)) throw ConfigError(ctx + ": unknown key '" + key + "'");
  for (const auto& key : required)
    if (!j.contains(key)) throw ConfigError(ctx + ": missing required key '" + key + "'");
}

inline Matrix parse_matrix(const nlohmann::json& j, const std::string& ctx) {
  try {
    return matrix_from_json(j, ctx.c_str());
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace detail

inline RunConfig parse_run_config(const nlohmann::json& j) {
  using detail::require_keys;
  require_keys(j,
               {"plants", "capacity", "lqr", "grid", "t_max", "horizon", "cycle",
                "initial_conditions", "round_robin", "output"},
               {"plants", "capacity"}, "config");
  RunConfig rc;

  if (!j.at("plants").is_array() || j.at("plants").size() < 2)
    throw ConfigError("config.plants: need an array of at least two plants");
  for (std::size_t i = 0; i < j.at("plants").size(); ++i) {
    const auto& pj = j.at("plants")[i];
    const std::string ctx = "config.plants[" + std::to_string(i) + "]";
    require_keys(pj, {"A", "B", "K"}, {"A", "B"}, ctx);
    rc.A.push_back(detail::parse_matrix(pj.at("A"), ctx + ".A"));
    rc.B.push_back(detail::parse_matrix(pj.at("B"), ctx + ".B"));
    rc.K.push_back(pj.contains("K")
                       ? std::optional<Matrix>(detail::parse_matrix(pj.at("K"), ctx + ".K"))
                       : std::nullopt);
  }

  rc.capacity = j.at("capacity").get<int>();

  if (j.contains("lqr")) {
    require_keys(j.at("lqr"), {"Q", "R"}, {"Q", "R"}, "config.lqr");
    rc.lqr_Q = detail::parse_matrix(j.at("lqr").at("Q"), "config.lqr.Q");
    rc.lqr_R = detail::parse_matrix(j.at("lqr").at("R"), "config.lqr.R");
  }

  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    require_keys(g, {"h_s", "h_u", "kappa_min", "lmi_tol", "schur_tol"}, {}, "config.grid");
    if (g.contains("h_s")) rc.grid.h_s = g.at("h_s").get<double>();
    if (g.contains("h_u")) rc.grid.h_u = g.at("h_u").get<double>();
    if (g.contains("kappa_min")) rc.grid.kappa_min = g.at("kappa_min").get<double>();
    if (g.contains("lmi_tol")) rc.grid.lmi_tol = g.at("lmi_tol").get<double>();
    if (g.contains("schur_tol")) rc.grid.schur_tol = g.at("schur_tol").get<double>();
  }

  if (j.contains("t_max")) rc.t_max = j.at("t_max").get<int>();
  if (j.contains("horizon")) rc.horizon = j.at("horizon").get<long>();
  if (rc.t_max < 1) throw ConfigError("config.t_max must be positive");
  if (rc.horizon < 0) throw ConfigError("config.horizon must be nonnegative");

  if (j.contains("cycle")) {
    const auto& cj = j.at("cycle");
    require_keys(cj, {"kind", "stable_sets", "v0", "seed"}, {"kind"}, "config.cycle");
    CycleSource cs;
    const std::string kind = cj.at("kind").get<std::string>();
    if (kind == "explicit") {
      if (!cj.contains("stable_sets"))
        throw ConfigError("config.cycle: explicit cycle needs stable_sets");
      cs.kind = CycleSource::Kind::explicit_sets;
      cs.stable_sets = cj.at("stable_sets").get<std::vector<std::vector<int>>>();
    } else if (kind == "prop3") {
      cs.kind = CycleSource::Kind::prop3;
    } else if (kind == "prop4") {
      cs.kind = CycleSource::Kind::prop4;
      if (cj.contains("v0")) cs.v0 = cj.at("v0").get<std::vector<int>>();
    } else if (kind == "random") {
      cs.kind = CycleSource::Kind::random;
      if (cj.contains("seed")) cs.seed = cj.at("seed").get<std::uint64_t>();
    } else {
      throw ConfigError("config.cycle.kind: expected explicit | prop3 | prop4 | random");
    }
    rc.cycle = std::move(cs);
  }

  if (j.contains("initial_conditions")) {
    const auto& ij = j.at("initial_conditions");
    require_keys(ij, {"kind", "low", "high", "seed", "count", "trials"}, {"kind"},
                 "config.initial_conditions");
    const std::string kind = ij.at("kind").get<std::string>();
    if (kind == "uniform_box") {
      rc.ics.kind = InitialConditionSpec::Kind::uniform_box;
      if (ij.contains("low")) rc.ics.low = ij.at("low").get<double>();
      if (ij.contains("high")) rc.ics.high = ij.at("high").get<double>();
      if (ij.contains("seed")) rc.ics.seed = ij.at("seed").get<std::uint64_t>();
      if (ij.contains("count")) rc.ics.count = ij.at("count").get<int>();
      if (rc.ics.count < 1) throw ConfigError("config.initial_conditions.count must be >= 1");
      if (!(rc.ics.low < rc.ics.high))
        throw ConfigError("config.initial_conditions: low must be below high");
    } else if (kind == "explicit") {
      rc.ics.kind = InitialConditionSpec::Kind::explicit_states;
      if (!ij.contains("trials"))
        throw ConfigError("config.initial_conditions: explicit spec needs trials");
      rc.ics.trials = ij.at("trials").get<std::vector<std::vector<Vec>>>();
      if (rc.ics.trials.empty())
        throw ConfigError("config.initial_conditions.trials must not be empty");
    } else {
      throw ConfigError("config.initial_conditions.kind: expected uniform_box | explicit");
    }
  }

  if (j.contains("round_robin")) {
    const auto& rj = j.at("round_robin");
    require_keys(rj, {"groups", "dwell"}, {"groups"}, "config.round_robin");
    RoundRobinSpec rr;
    rr.groups = rj.at("groups").get<std::vector<std::vector<int>>>();
    if (rj.contains("dwell")) rr.dwell = rj.at("dwell").get<int>();
    rc.round_robin = std::move(rr);
  }

  if (j.contains("output")) {
    require_keys(j.at("output"), {"dir"}, {"dir"}, "config.output");
    rc.output_dir = j.at("output").at("dir").get<std::string>();
  }

  return rc;
}

inline RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  return parse_run_config(j);
}

struct BuiltNcs {
  NCSConfig ncs;
  std::vector<int> designed_plants;  // plants whose K came from the LQR weights
};

/// Instantiates the NCS: plants with explicit K use it verbatim; the rest get
/// LQR gains from the shared weights.
inline BuiltNcs build_ncs(const RunConfig& rc) {
  std::vector<PlantSpec> plants;
  std::vector<int> designed;
  for (std::size_t i = 0; i < rc.A.size(); ++i) {
    Matrix k = [&] {
      if (rc.K[i]) return *rc.K[i];
      if (!rc.lqr_Q || !rc.lqr_R)
        throw ConfigError("plant " + std::to_string(i + 1) +
                          " has no K and the config carries no lqr weights");
      designed.push_back(static_cast<int>(i) + 1);
      if (!is_controllable(rc.A[i], rc.B[i]))
        throw ConfigError("plant " + std::to_string(i + 1) + " is not controllable");
      return solve_dare_lqr(rc.A[i], rc.B[i], *rc.lqr_Q, *rc.lqr_R);
    }();
    plants.emplace_back(static_cast<int>(i) + 1, rc.A[i], rc.B[i], std::move(k));
  }
  return {NCSConfig(std::move(plants), rc.capacity), std::move(designed)};
}

/// Initial conditions, one list of per-plant states per trial. The seeded
/// draw order is trial-major, then plant, then coordinate.
inline std::vector<std::vector<Vec>> draw_initial_conditions(const InitialConditionSpec& ics,
                                                             int n_plants, std::size_t dim) {
  if (ics.kind == InitialConditionSpec::Kind::explicit_states) {
    for (const auto& trial : ics.trials) {
      if (static_cast<int>(trial.size()) != n_plants)
        throw ConfigError("initial_conditions: each trial needs one state per plant");
      for (const auto& v : trial)
        if (v.size() != dim) throw ConfigError("initial_conditions: state dimension mismatch");
    }
    return ics.trials;
  }
  Rng rng(ics.seed);
  std::vector<std::vector<Vec>> trials;
  trials.reserve(static_cast<std::size_t>(ics.count));
  for (int k = 0; k < ics.count; ++k) {
    std::vector<Vec> trial;
    for (int i = 0; i < n_plants; ++i) {
      Vec v(dim);
      for (auto& c : v) c = rng.uniform_real(ics.low, ics.high);
      trial.push_back(std::move(v));
    }
    trials.push_back(std::move(trial));
  }
  return trials;
}

}  // namespace ncsched
