#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ncsched/certificates.hpp"
#include "ncsched/plants.hpp"
#include "ncsched/scheduler.hpp"

namespace ncsched {

/// State norms above this trip the per-plant divergence flag; the state is
/// frozen from then on so one runaway plant cannot poison the whole run.
inline constexpr double kDivergenceGuard = 1e12;

struct SimState {
  long t = 0;
  std::vector<Vec> x;               // one state vector per plant
  std::vector<bool> diverged;
};

struct Trace {
  int n_plants = 0;
  std::size_t state_dim = 0;
  long horizon = 0;
  long policy_period = 0;
  std::vector<std::vector<double>> norms;        // [plant][t], t = 0..horizon
  std::vector<std::vector<Vec>> states;          // [plant][t]; empty if not kept
  std::vector<bool> diverged;

  bool has_states() const { return !states.empty(); }
};

namespace detail {

struct ModeCache {
  std::vector<Matrix> stable;
  std::vector<Matrix> unstable;
};

inline ModeCache mode_cache(const NCSConfig& cfg) {
  ModeCache mc;
  for (const auto& p : cfg.plants) {
    mc.stable.push_back(p.stable_mode());
    mc.unstable.push_back(p.unstable_mode());
  }
  return mc;
}

}  // namespace detail

inline void step(const detail::ModeCache& mc, const SchedulingPolicy& policy, SimState& s) {
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    if (s.diverged[i]) continue;
    const bool stab = policy.sigma_at(static_cast<int>(i) + 1, s.t) == Mode::stable;
    Vec nx = matvec(stab ? mc.stable[i] : mc.unstable[i], s.x[i]);
    if (norm2(nx) > kDivergenceGuard) s.diverged[i] = true;
    s.x[i] = std::move(nx);
  }
  ++s.t;
}

/// One step of every plant under the policy: closed loop for scheduled
/// plants, open loop (u = 0) for the rest. Diverged plants stay frozen.
inline void step(const NCSConfig& cfg, const SchedulingPolicy& policy, SimState& s) {
  const auto mc = detail::mode_cache(cfg);
  step(mc, policy, s);
}

/// Simulates all plants from the given initial states and records norms (and
/// full states when keep_states). Divergence flags propagate per plant
/// without aborting the others.
inline Trace simulate(const NCSConfig& cfg, const SchedulingPolicy& policy,
                      const std::vector<Vec>& x0, long horizon, bool keep_states = true) {
  if (horizon < 0) throw std::invalid_argument("simulate: negative horizon");
  if (static_cast<int>(x0.size()) != cfg.n_plants())
    throw std::invalid_argument("simulate: one initial state per plant required");
  for (const auto& v : x0)
    if (v.size() != cfg.state_dim())
      throw std::invalid_argument("simulate: initial state dimension mismatch");
  if (policy.n_plants() != cfg.n_plants() || policy.capacity() != cfg.capacity)
    throw std::invalid_argument("simulate: policy and configuration disagree on N or M");

  const auto mc = detail::mode_cache(cfg);
  Trace tr;
  tr.n_plants = cfg.n_plants();
  tr.state_dim = cfg.state_dim();
  tr.horizon = horizon;
  tr.policy_period = policy.period();
  tr.norms.assign(x0.size(), {});
  if (keep_states) tr.states.assign(x0.size(), {});

  SimState s;
  s.x = x0;
  s.diverged.assign(x0.size(), false);
  for (long t = 0; t <= horizon; ++t) {
    for (std::size_t i = 0; i < x0.size(); ++i) {
      tr.norms[i].push_back(norm2(s.x[i]));
      if (keep_states) tr.states[i].push_back(s.x[i]);
    }
    if (t < horizon) step(mc, policy, s);
  }
  tr.diverged = s.diverged;
  return tr;
}

// ---------------------------------------------------------------------------
// Certificate-chain verification along a trace.

struct Violation {
  int plant = 0;
  long t = 0;
  std::string kind;   // "decay" (within-mode) or "jump" (mode switch)
  double ratio = 0.0;  // actual / allowed
};

struct VerificationReport {
  long checks = 0;
  long violations = 0;
  double worst_ratio = 0.0;  // max of actual/allowed over all checks
  std::vector<Violation> samples;  // first few violations
  double tolerance = 0.0;
  bool pass() const { return violations == 0; }
};

/// Re-checks the two certificate inequalities step by step along a simulated
/// trace: V_p(x(t+1)) <= lambda_p V_p(x(t)) while mode p is active, and
/// V_q(x(tau)) <= mu_pq V_p(x(tau)) at each switch p -> q. A violation means
/// the certificates and the simulation disagree; it is an error, not noise.
inline VerificationReport verify_certificates(const NCSConfig& cfg,
                                              const SchedulingPolicy& policy,
                                              const std::vector<ModeCertificate>& certs,
                                              const Trace& trace, double tol = 1e-9) {
  if (!trace.has_states())
    throw std::invalid_argument("verify_certificates: trace must carry full states");
  if (static_cast<int>(certs.size()) != cfg.n_plants())
    throw std::invalid_argument("verify_certificates: certificates must cover all plants");
  VerificationReport rep;
  rep.tolerance = tol;
  auto record = [&](int plant, long t, const char* kind, double actual, double allowed) {
    ++rep.checks;
    const double ratio = (allowed > 0.0) ? actual / allowed : (actual > 0.0 ? 1e300 : 0.0);
    rep.worst_ratio = std::max(rep.worst_ratio, ratio);
    if (actual > allowed * (1.0 + tol)) {
      ++rep.violations;
      if (rep.samples.size() < 16) rep.samples.push_back({plant, t, kind, ratio});
    }
  };
  for (int i = 1; i <= cfg.n_plants(); ++i) {
    const auto& c = certs[i - 1];
    const auto& xs = trace.states[i - 1];
    if (trace.diverged[i - 1]) continue;  // frozen states no longer follow the dynamics
    for (long t = 0; t + 1 <= trace.horizon; ++t) {
      const Mode m = policy.sigma_at(i, t);
      const Matrix& p = (m == Mode::stable) ? c.P_s : c.P_u;
      const double lambda = (m == Mode::stable) ? c.lambda_s : c.lambda_u;
      record(i, t, "decay", quadratic_form(p, xs[t + 1]), lambda * quadratic_form(p, xs[t]));
      const Mode mn = policy.sigma_at(i, t + 1);
      if (mn != m) {
        const Matrix& pq = (mn == Mode::stable) ? c.P_s : c.P_u;
        const double mu = (m == Mode::stable) ? c.mu_su : c.mu_us;
        record(i, t + 1, "jump", quadratic_form(pq, xs[t + 1]),
               mu * quadratic_form(p, xs[t + 1]));
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// The psi envelope from the stability proof.

/// Running per-plant counters along a schedule: stable/unstable dwell and
/// switch counts on ]0:t], plus the log-envelope they induce. eps is the
/// per-period contraction margin (-Xi) when a cycle is attached, c the norm
/// constant from the P matrices; both stay zero when unknown.
struct CertificateTrace {
  int plant = 0;
  std::vector<long> d_s;      // [t]
  std::vector<long> d_u;
  std::vector<long> n_su;
  std::vector<long> n_us;
  std::vector<double> psi_log;  // ln psi(t); psi(0) = 1
  double eps = 0.0;
  double c = 0.0;
};

inline CertificateTrace certificate_trace(const SchedulingPolicy& policy,
                                          const CertScalars& c, int plant, long horizon) {
  CertificateTrace ct;
  ct.plant = plant;
  ct.d_s.assign(horizon + 1, 0);
  ct.d_u.assign(horizon + 1, 0);
  ct.n_su.assign(horizon + 1, 0);
  ct.n_us.assign(horizon + 1, 0);
  ct.psi_log.assign(horizon + 1, 0.0);
  const double dec = -std::abs(std::log(c.lambda_s));
  const double grow = std::abs(std::log(c.lambda_u));
  const double jsu = std::log(c.mu_su);
  const double jus = std::log(c.mu_us);
  Mode prev = policy.sigma_at(plant, 0);
  for (long t = 1; t <= horizon; ++t) {
    ct.d_s[t] = ct.d_s[t - 1];
    ct.d_u[t] = ct.d_u[t - 1];
    ct.n_su[t] = ct.n_su[t - 1];
    ct.n_us[t] = ct.n_us[t - 1];
    ct.psi_log[t] = ct.psi_log[t - 1];
    if (prev == Mode::stable) {
      ++ct.d_s[t];
      ct.psi_log[t] += dec;
    } else {
      ++ct.d_u[t];
      ct.psi_log[t] += grow;
    }
    const Mode cur = policy.sigma_at(plant, t);
    if (cur != prev) {
      if (prev == Mode::stable) {
        ++ct.n_su[t];
        ct.psi_log[t] += jsu;
      } else {
        ++ct.n_us[t];
        ct.psi_log[t] += jus;
      }
    }
    prev = cur;
  }
  return ct;
}

/// As above, with the norm constant filled in from the certificate matrices
/// and an optional contraction margin.
inline CertificateTrace certificate_trace(const SchedulingPolicy& policy,
                                          const ModeCertificate& cert, int plant,
                                          long horizon, double eps = 0.0) {
  CertificateTrace ct = certificate_trace(policy, cert.scalars(), plant, horizon);
  const auto evs = symmetric_eigenvalues(cert.P_s);
  const auto evu = symmetric_eigenvalues(cert.P_u);
  ct.c = std::sqrt(std::max(evs.back(), evu.back()) / std::min(evs.front(), evu.front()));
  ct.eps = eps;
  return ct;
}

/// ln psi_i(t), accumulated in log space.
inline double psi_log(const CertScalars& c, const SchedulingPolicy& policy, int plant, long t) {
  return certificate_trace(policy, c, plant, t).psi_log.back();
}

inline double psi(const CertScalars& c, const SchedulingPolicy& policy, int plant, long t) {
  return std::exp(psi_log(c, policy, plant, t));
}

struct EnvelopeReport {
  bool pass = true;
  long checks = 0;
  long violations = 0;
  std::vector<double> c_constants;  // per plant
  double tightest_slack = 1e300;    // min over checks of allowed/actual
  double tolerance = 0.0;
  std::string note;
};

/// Verifies the proof's envelope along a trace, per plant and per step:
///   V_{sigma(t)}(x(t)) <= psi(t) V_{sigma(0)}(x(0))
///   ||x(t)||          <= c sqrt(psi(t)) ||x(0)||,
/// with c = sqrt(max_p lambda_max(P_p) / min_p lambda_min(P_p)). The norm
/// bound carries sqrt(psi) because the V inequality is quadratic in the state;
/// the source text prints it without the square root, which fails numerically.
inline EnvelopeReport envelope_check(const NCSConfig& cfg,
                                     const std::vector<ModeCertificate>& certs,
                                     const SchedulingPolicy& policy, const Trace& trace,
                                     double tol = 1e-6) {
  if (!trace.has_states())
    throw std::invalid_argument("envelope_check: trace must carry full states");
  EnvelopeReport rep;
  rep.tolerance = tol;
  rep.note = "norm bound uses c*sqrt(psi): the quadratic envelope implies the norm "
             "envelope only through a square root";
  for (int i = 1; i <= cfg.n_plants(); ++i) {
    const auto& c = certs[i - 1];
    const auto ct = certificate_trace(policy, c, i, trace.horizon);
    const double cc = ct.c;
    rep.c_constants.push_back(cc);
    if (trace.diverged[i - 1]) continue;
    const auto& xs = trace.states[i - 1];
    const double x0n = trace.norms[i - 1][0];
    const Mode m0 = policy.sigma_at(i, 0);
    const double v0 = quadratic_form(m0 == Mode::stable ? c.P_s : c.P_u, xs[0]);
    if (v0 == 0.0) continue;  // zero initial state: vacuous
    for (long t = 0; t <= trace.horizon; ++t) {
      const Mode m = policy.sigma_at(i, t);
      const double v = quadratic_form(m == Mode::stable ? c.P_s : c.P_u, xs[t]);
      const double v_allowed = std::exp(ct.psi_log[t]) * v0;
      const double n_allowed = cc * std::exp(0.5 * ct.psi_log[t]) * x0n;
      const double nx = trace.norms[i - 1][t];
      rep.checks += 2;
      if (v > v_allowed * (1.0 + tol)) ++rep.violations;
      if (nx > n_allowed * (1.0 + tol)) ++rep.violations;
      if (v > 0.0) rep.tightest_slack = std::min(rep.tightest_slack, v_allowed / v);
      if (nx > 0.0) rep.tightest_slack = std::min(rep.tightest_slack, n_allowed / nx);
    }
  }
  rep.pass = rep.violations == 0;
  return rep;
}

// ---------------------------------------------------------------------------
// Empirical stability classification and the periodic-map certificate.

enum class GasVerdict { converging, diverging, inconclusive };

inline const char* to_string(GasVerdict v) {
  switch (v) {
    case GasVerdict::converging: return "converging";
    case GasVerdict::diverging: return "diverging";
    default: return "inconclusive";
  }
}

/// Windowed decay test on the recorded norms: converging when the max over
/// the last window is at most decay_factor times the max over the first,
/// diverging on the divergence flag or growth by 1/decay_factor.
inline std::vector<GasVerdict> classify_gas(const Trace& trace, long window,
                                            double decay_factor) {
  if (window < 1 || trace.horizon < 2 * window)
    throw std::invalid_argument("classify_gas: horizon must cover two windows");
  std::vector<GasVerdict> out;
  for (int i = 0; i < trace.n_plants; ++i) {
    if (trace.diverged[i]) {
      out.push_back(GasVerdict::diverging);
      continue;
    }
    const auto& ns = trace.norms[i];
    double first = 0.0, last = 0.0;
    for (long t = 0; t < window; ++t) first = std::max(first, ns[t]);
    for (long t = static_cast<long>(ns.size()) - window; t < static_cast<long>(ns.size()); ++t)
      last = std::max(last, ns[t]);
    if (last <= decay_factor * first) out.push_back(GasVerdict::converging);
    else if (last >= first / decay_factor) out.push_back(GasVerdict::diverging);
    else out.push_back(GasVerdict::inconclusive);
  }
  return out;
}

/// One-period state-transition matrix of a plant under a periodic policy.
/// Spectral radius < 1 certifies convergence of that plant.
inline Matrix monodromy_matrix(const NCSConfig& cfg, const SchedulingPolicy& policy,
                               int plant) {
  const auto& p = cfg.plants.at(static_cast<std::size_t>(plant) - 1);
  const Matrix a_s = p.stable_mode();
  const Matrix a_u = p.unstable_mode();
  Matrix phi = Matrix::identity(cfg.state_dim());
  for (long t = 0; t < policy.period(); ++t)
    phi = ((policy.sigma_at(plant, t) == Mode::stable) ? a_s : a_u) * phi;
  return phi;
}

// ---------------------------------------------------------------------------
// Trace export.

/// Delimiter-separated trace: header "t,plant,norm[,x1..xd]", one row per
/// (t, plant).
inline void write_trace(std::ostream& os, const Trace& trace) {
  os << "t,plant,norm";
  if (trace.has_states())
    for (std::size_t k = 1; k <= trace.state_dim; ++k) os << ",x" << k;
  os << "\n";
  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
  };
  for (long t = 0; t <= trace.horizon; ++t)
    for (int i = 0; i < trace.n_plants; ++i) {
      os << t << ',' << (i + 1) << ',';
      put(trace.norms[i][t]);
      if (trace.has_states())
        for (double v : trace.states[i][t]) {
          os << ',';
          put(v);
        }
      os << "\n";
    }
}

}  // namespace ncsched
