// Command-line front end: design T-contractive cycles, turn them into
// periodic schedules, simulate the closed NCS, and re-run the bundled
// experiments.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ncsched/config.hpp"
#include "ncsched/design.hpp"
#include "ncsched/experiments.hpp"
#include "ncsched/scheduler.hpp"
#include "ncsched/simulator.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 2;
constexpr int kExitVerification = 3;
constexpr int kExitConfig = 4;

namespace fs = std::filesystem;

ncsched::Cycle resolve_explicit_cycle(const std::vector<std::vector<int>>& sets, int n_plants) {
  std::vector<ncsched::VertexLabel> vs;
  for (const auto& s : sets) vs.emplace_back(n_plants, s);
  return ncsched::Cycle(std::move(vs));
}

/// The design verb: certificates + dwell times for the configured cycle.
int cmd_design(const std::string& config_path, std::string out_dir, bool out_given,
               int t_max_override, std::uint64_t seed_override, bool seed_given) {
  const ncsched::RunConfig rc = ncsched::load_run_config(config_path);
  if (!out_given && rc.output_dir) out_dir = *rc.output_dir;
  const auto built = ncsched::build_ncs(rc);
  const auto& cfg = built.ncs;
  const int t_max = t_max_override > 0 ? t_max_override : rc.t_max;
  if (!rc.cycle) {
    std::cerr << "error: config has no cycle source\n";
    return kExitConfig;
  }
  for (int i : built.designed_plants)
    std::cout << "plant " << i << ": gain designed from the configured LQR weights\n";

  const auto rep = ncsched::validate_assumption1(cfg);
  for (const auto& row : rep.rows)
    if (!row.pass())
      std::cout << "warning: plant " << row.plant << " violates the open-unstable/"
                << "closed-stable assumption (rho_open " << row.rho_open << ", rho_closed "
                << row.rho_closed << ")\n";

  ncsched::DesignResult result;
  ncsched::CycleSource::Kind kind = rc.cycle->kind;
  std::optional<ncsched::Cycle> cycle;
  if (kind == ncsched::CycleSource::Kind::explicit_sets) {
    cycle = resolve_explicit_cycle(rc.cycle->stable_sets, cfg.n_plants());
  } else if (kind == ncsched::CycleSource::Kind::random) {
    const std::uint64_t seed = seed_given ? seed_override : rc.cycle->seed;
    cycle = ncsched::generate_candidate_cycle(cfg.n_plants(), cfg.capacity, seed);
    std::cout << "random candidate cycle (seed " << seed << "), length " << cycle->length()
              << "\n";
  }

  if (cycle) {
    result = ncsched::design_tcontractive_cycle(cfg, *cycle, rc.grid, t_max);
  } else {
    // Sufficiency-based sources: walk each plant's certificate stream to the
    // first candidate meeting the closed-form condition, then construct.
    auto streams = ncsched::design_certificates(cfg, rc.grid);
    std::vector<ncsched::ModeCertificate> chosen;
    const bool want_prop3 = kind == ncsched::CycleSource::Kind::prop3;
    if (want_prop3 && cfg.capacity != 1) {
      std::cerr << "error: prop3 cycle source requires capacity 1\n";
      return kExitConfig;
    }
    if (!want_prop3 && 2 * cfg.capacity < cfg.n_plants()) {
      std::cerr << "error: prop4 cycle source requires capacity >= N/2\n";
      return kExitConfig;
    }
    for (auto& st : streams) {
      bool found = false;
      while (auto cert = st.next()) {
        const double v =
            want_prop3 ? std::abs(std::log(cert->lambda_s)) -
                             (cfg.n_plants() - 1) * std::abs(std::log(cert->lambda_u))
                       : std::abs(std::log(cert->lambda_s)) - std::abs(std::log(cert->lambda_u));
        if (v > 0.0) {
          chosen.push_back(std::move(*cert));
          found = true;
          break;
        }
      }
      if (!found) {
        result.status = ncsched::DesignStatus::no_feasible_certificates;
        result.detail = "plant " + std::to_string(st.plant()) +
                        ": no grid point satisfies the sufficiency condition";
        break;
      }
    }
    if (chosen.size() == static_cast<std::size_t>(cfg.n_plants())) {
      const auto scalars = ncsched::to_scalars(chosen);
      auto [w, t] = want_prop3
                        ? ncsched::construct_prop3_cycle(scalars, cfg.n_plants())
                        : ncsched::construct_prop4_cycle(
                              scalars, cfg.n_plants(), cfg.capacity,
                              rc.cycle->v0.empty() ? [&] {
                                std::vector<int> v0(cfg.capacity);
                                for (int i = 0; i < cfg.capacity; ++i) v0[i] = i + 1;
                                return v0;
                              }()
                                                   : rc.cycle->v0);
      cycle = w;
      result.status = ncsched::DesignStatus::success;
      result.certificates = std::move(chosen);
      const auto rep2 = ncsched::is_T_contractive(w, t, result.certificates);
      result.xi = rep2.xi;
      result.margins = rep2.margins;
      result.t_factors = t;
      result.grid = rc.grid;
      result.t_max = t_max;
    }
  }

  if (result.status != ncsched::DesignStatus::success) {
    std::cerr << "design infeasible: " << result.detail << "\n";
    return kExitInfeasible;
  }

  std::cout << "T-contractive cycle found; dwell times:";
  for (int t : result.t_factors->dwell) std::cout << ' ' << t;
  std::cout << "\nXi margins (strictness " << 1e-12 << "):\n";
  for (std::size_t i = 0; i < result.xi.size(); ++i)
    std::cout << "  plant " << (i + 1) << ": Xi = " << result.xi[i] << "\n";

  fs::create_directories(out_dir);
  const fs::path out = fs::path(out_dir) / "design.json";
  std::ofstream os(out);
  os << ncsched::design_to_json(result, *cycle).dump(2) << "\n";
  std::cout << "wrote " << out.string() << "\n";
  return kExitOk;
}

int cmd_schedule(const std::string& design_path, const std::string& out_dir) {
  std::ifstream in(design_path);
  if (!in) {
    std::cerr << "error: cannot open design artifact " << design_path << "\n";
    return kExitConfig;
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    std::cerr << "error: malformed design artifact: " << e.what() << "\n";
    return kExitConfig;
  }
  const auto loaded = ncsched::design_from_json(j);
  const auto policy = ncsched::build_policy(loaded.cycle, loaded.t_factors);
  fs::create_directories(out_dir);
  const fs::path out = fs::path(out_dir) / "policy.txt";
  std::ofstream os(out);
  ncsched::write_policy(os, policy);
  std::cout << "periodic policy, period " << policy.period() << ", wrote " << out.string()
            << "\n";
  return kExitOk;
}

int cmd_simulate(const std::string& config_path, const std::string& policy_path,
                 const std::string& design_path, long horizon_override,
                 const std::string& out_dir, bool use_round_robin) {
  const ncsched::RunConfig rc = ncsched::load_run_config(config_path);
  const auto built = ncsched::build_ncs(rc);
  const auto& cfg = built.ncs;
  const long horizon = horizon_override >= 0 ? horizon_override : rc.horizon;

  std::optional<ncsched::SchedulingPolicy> policy;
  if (use_round_robin) {
    if (!rc.round_robin) {
      std::cerr << "error: --round-robin requires a round_robin block in the config\n";
      return kExitConfig;
    }
    policy = ncsched::round_robin(cfg.n_plants(), rc.round_robin->groups, rc.round_robin->dwell);
  } else {
    std::ifstream in(policy_path);
    if (!in) {
      std::cerr << "error: cannot open policy file " << policy_path << "\n";
      return kExitConfig;
    }
    policy = ncsched::read_policy(in, cfg.n_plants());
  }
  if (policy->capacity() != cfg.capacity) {
    std::cerr << "error: policy capacity " << policy->capacity()
              << " does not match config capacity " << cfg.capacity << "\n";
    return kExitConfig;
  }

  std::optional<ncsched::LoadedDesign> design;
  if (!design_path.empty()) {
    std::ifstream in(design_path);
    if (!in) {
      std::cerr << "error: cannot open design artifact " << design_path << "\n";
      return kExitConfig;
    }
    nlohmann::json j;
    in >> j;
    design = ncsched::design_from_json(j);
  }

  const auto trials = ncsched::draw_initial_conditions(rc.ics, cfg.n_plants(), cfg.state_dim());
  fs::create_directories(out_dir);

  long total_cert_violations = 0, total_env_violations = 0;
  std::vector<long> verdict_counts(3, 0);
  const long window = std::max<long>(1, std::min<long>(policy->period(), horizon / 2));
  for (std::size_t k = 0; k < trials.size(); ++k) {
    const ncsched::Trace tr = ncsched::simulate(cfg, *policy, trials[k], horizon);
    char name[64];
    std::snprintf(name, sizeof name, "trace_%03zu.csv", k);
    std::ofstream ts(fs::path(out_dir) / name);
    ncsched::write_trace(ts, tr);
    if (horizon >= 2 * window)
      for (auto v : ncsched::classify_gas(tr, window, 0.5))
        ++verdict_counts[static_cast<int>(v)];
    if (design) {
      total_cert_violations +=
          ncsched::verify_certificates(cfg, *policy, design->certificates, tr, 1e-9).violations;
      total_env_violations +=
          ncsched::envelope_check(cfg, design->certificates, *policy, tr, 1e-6).violations;
    }
  }
  std::cout << "simulated " << trials.size() << " trials over horizon " << horizon
            << " (decay window " << window << ", factor 0.5): converging "
            << verdict_counts[0] << ", diverging " << verdict_counts[1] << ", inconclusive "
            << verdict_counts[2] << "\n";
  if (design) {
    std::cout << "certificate checks (rel tol 1e-9): " << total_cert_violations
              << " violations; envelope checks (rel tol 1e-6): " << total_env_violations
              << " violations\n";
    if (total_cert_violations + total_env_violations > 0) return kExitVerification;
  }
  std::cout << "wrote " << trials.size() << " trace files to " << out_dir << "\n";
  return kExitOk;
}

int cmd_check_cycle(const std::string& config_path, const std::string& cycle_path, int t_max) {
  const ncsched::RunConfig rc = ncsched::load_run_config(config_path);
  const auto built = ncsched::build_ncs(rc);
  const auto& cfg = built.ncs;
  std::ifstream in(cycle_path);
  if (!in) {
    std::cerr << "error: cannot open cycle file " << cycle_path << "\n";
    return kExitConfig;
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    std::cerr << "error: malformed cycle file: " << e.what() << "\n";
    return kExitConfig;
  }
  if (!j.contains("stable_sets")) {
    std::cerr << "error: cycle file needs a stable_sets array\n";
    return kExitConfig;
  }
  const auto cycle =
      resolve_explicit_cycle(j.at("stable_sets").get<std::vector<std::vector<int>>>(),
                             cfg.n_plants());
  std::cout << "cycle of length " << cycle.length() << ", candidate contractive: "
            << (ncsched::is_candidate_contractive(cycle, cfg.n_plants()) ? "yes" : "no") << "\n";

  std::vector<ncsched::CertScalars> scalars;
  if (j.contains("scalars")) {
    for (const auto& sj : j.at("scalars"))
      scalars.push_back({sj.at("lambda_s").get<double>(), sj.at("lambda_u").get<double>(),
                         sj.at("mu_su").get<double>(), sj.at("mu_us").get<double>()});
  }

  if (!scalars.empty() && j.contains("t_factors")) {
    const ncsched::TFactors t(j.at("t_factors").get<std::vector<int>>());
    const auto rep = ncsched::is_T_contractive(cycle, t, scalars);
    for (std::size_t i = 0; i < rep.xi.size(); ++i)
      std::cout << "  plant " << (i + 1) << ": Xi = " << rep.xi[i] << "\n";
    std::cout << (rep.contractive ? "T-contractive" : "not T-contractive") << "\n";
    return rep.contractive ? kExitOk : kExitInfeasible;
  }
  if (!scalars.empty()) {
    const auto t = ncsched::find_T_factors(
        cycle, std::span<const ncsched::CertScalars>(scalars), t_max);
    if (!t) {
      std::cout << "no dwell times within [1," << t_max << "] make this cycle contract\n";
      return kExitInfeasible;
    }
    std::cout << "feasible dwell times:";
    for (int d : t->dwell) std::cout << ' ' << d;
    std::cout << "\n";
    return kExitOk;
  }
  const auto result = ncsched::design_tcontractive_cycle(cfg, cycle, rc.grid, t_max);
  if (result.status != ncsched::DesignStatus::success) {
    std::cout << "design infeasible: " << result.detail << "\n";
    return kExitInfeasible;
  }
  std::cout << "T-contractive with dwell times:";
  for (int d : result.t_factors->dwell) std::cout << ' ' << d;
  std::cout << "\n";
  return kExitOk;
}

int print_results(const std::vector<ncsched::experiments::CheckResult>& results) {
  bool all = true;
  for (const auto& r : results) {
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << "\n";
    all = all && r.pass;
  }
  return all ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Periodic scheduling of networked control plants on a shared channel"};
  app.require_subcommand(1);

  std::string config_path, policy_path, design_path, out_dir = "out", which;
  long horizon = -1;
  int t_max = -1, exp2_n = 0;
  std::uint64_t seed = 1;
  bool use_round_robin = false;

  auto* design = app.add_subcommand("design", "design certificates and dwell times");
  design->add_option("--config", config_path, "run configuration (JSON)")->required();
  design->add_option("--out", out_dir, "output directory");
  design->add_option("--t-max", t_max, "dwell-time search bound");
  design->add_option("--seed", seed, "override the random cycle seed (for re-draws after "
                     "an infeasible attempt)");

  auto* schedule = app.add_subcommand("schedule", "turn a design artifact into a policy file");
  schedule->add_option("--cycle", design_path, "design artifact (design.json)")->required();
  schedule->add_option("--out", out_dir, "output directory");

  auto* simulate = app.add_subcommand("simulate", "simulate all plants under a policy");
  simulate->add_option("--config", config_path, "run configuration (JSON)")->required();
  simulate->add_option("--policy", policy_path, "policy file from the schedule command");
  simulate->add_option("--cycle", design_path, "design artifact for certificate verification");
  simulate->add_option("--horizon", horizon, "simulation horizon");
  simulate->add_option("--out", out_dir, "output directory");
  simulate->add_flag("--round-robin", use_round_robin,
                     "use the config's round_robin baseline instead of --policy");

  auto* check = app.add_subcommand("check-cycle", "check one cycle for contractivity");
  check->add_option("--config", config_path, "run configuration (JSON)")->required();
  check->add_option("--cycle", policy_path, "cycle file (stable_sets, optional scalars and "
                    "t_factors)")->required();
  check->add_option("--t-max", t_max, "dwell-time search bound");

  auto* reproduce = app.add_subcommand("reproduce", "re-run the bundled experiments");
  reproduce->add_option("which", which, "exp1 | exp2 | examples")->required();
  reproduce->add_option("--n", exp2_n, "plant count for exp2 (default: 100 and 200)");
  reproduce->add_option("--seed", seed, "seed for exp2 plant/cycle generation");

  CLI11_PARSE(app, argc, argv);

  try {
    if (design->parsed())
      return cmd_design(config_path, out_dir, design->count("--out") > 0, t_max,
                        seed, design->count("--seed") > 0);
    if (schedule->parsed()) return cmd_schedule(design_path, out_dir);
    if (simulate->parsed()) {
      if (!use_round_robin && policy_path.empty()) {
        std::cerr << "error: simulate needs --policy or --round-robin\n";
        return kExitConfig;
      }
      return cmd_simulate(config_path, policy_path, design_path, horizon, out_dir,
                          use_round_robin);
    }
    if (check->parsed()) return cmd_check_cycle(config_path, policy_path,
                                                t_max > 0 ? t_max : 100);
    if (reproduce->parsed()) {
      if (which == "exp1") return print_results(ncsched::experiments::run_exp1());
      if (which == "examples") return print_results(ncsched::experiments::run_examples());
      if (which == "exp2") {
        const std::vector<int> sizes = exp2_n > 0 ? std::vector<int>{exp2_n}
                                                  : std::vector<int>{100, 200};
        return print_results(ncsched::experiments::run_exp2(sizes, seed));
      }
      std::cerr << "error: unknown experiment '" << which << "'\n";
      return kExitConfig;
    }
  } catch (const ncsched::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    // Bad inputs surfacing through library contracts (malformed artifacts,
    // inconsistent dimensions) are configuration problems at this boundary.
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
