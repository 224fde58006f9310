#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ncsched/eig.hpp"
#include "ncsched/lyapunov.hpp"
#include "ncsched/matrix.hpp"
#include "ncsched/plants.hpp"

namespace ncsched {

/// The four scalars of a per-plant certificate; everything the cycle weights
/// need. lambda_s < 1 bounds the per-step decay of V_s in the stable mode,
/// lambda_u >= 1 the growth of V_u in the unstable mode, and mu_su / mu_us
/// bound the jumps V_u <= mu_su V_s and V_s <= mu_us V_u.
struct CertScalars {
  double lambda_s = 0.0;
  double lambda_u = 0.0;
  double mu_su = 1.0;
  double mu_us = 1.0;
};

/// Full per-plant certificate: quadratic Lyapunov-like functions V_p = xi^T P_p xi
/// for both modes plus the comparison scalars.
struct ModeCertificate {
  int plant = 0;  // 1-based
  Matrix P_s;
  Matrix P_u;
  double lambda_s = 0.0;
  double lambda_u = 0.0;
  double mu_su = 1.0;
  double mu_us = 1.0;
  double kappa_s = 0.0;  // lambda_min(P_s); lambda_max is normalized to 1
  double kappa_u = 0.0;

  CertScalars scalars() const { return {lambda_s, lambda_u, mu_su, mu_us}; }
};

struct DesignGrid {
  double h_s = 1e-2;
  double h_u = 1e-2;
  double kappa_min = 1e-8;
  double lmi_tol = 1e-9;
  double schur_tol = 1e-9;
};

/// The stable-mode decay grid {h_s, 2 h_s, ..., k_s h_s} with k_s the largest
/// integer keeping the value strictly below 1.
inline std::vector<double> lambda_grid_stable(const DesignGrid& grid) {
  if (!(grid.h_s > 0.0) || grid.h_s >= 1.0)
    throw std::invalid_argument("lambda_grid_stable: step must lie in (0,1)");
  std::vector<double> out;
  for (long k = 1; static_cast<double>(k) * grid.h_s < 1.0; ++k)
    out.push_back(static_cast<double>(k) * grid.h_s);
  return out;
}

struct UnstableGridPoint {
  double eta = 0.0;
  double lambda_u = 0.0;  // = 1/eta^2
};

/// Scans eta over {h_u, 2 h_u, ...} < 1 and keeps the points where eta * A_iu
/// is Schur stable; each contributes lambda_u = 1/eta^2. Sorted by ascending
/// lambda_u. An empty result means no grid point tames this plant; callers
/// report it, it is not an error here.
inline std::vector<UnstableGridPoint> lambda_grid_unstable(const Matrix& a_iu,
                                                           const DesignGrid& grid) {
  if (!(grid.h_u > 0.0) || grid.h_u >= 1.0)
    throw std::invalid_argument("lambda_grid_unstable: step must lie in (0,1)");
  const double rho = spectral_radius(a_iu);
  std::vector<UnstableGridPoint> out;
  for (long k = 1; static_cast<double>(k) * grid.h_u < 1.0; ++k) {
    const double eta = static_cast<double>(k) * grid.h_u;
    // rho(eta A) = eta rho(A); keep the explicit margin of is_schur.
    if (eta * rho < 1.0 - grid.schur_tol) out.push_back({eta, 1.0 / (eta * eta)});
  }
  std::sort(out.begin(), out.end(),
            [](const UnstableGridPoint& x, const UnstableGridPoint& y) {
              return x.lambda_u < y.lambda_u;
            });
  return out;
}

enum class LmiStatus { ok, infeasible, ill_conditioned };

struct ModeLmiResult {
  LmiStatus status = LmiStatus::infeasible;
  Matrix P;            // normalized so lambda_max(P) = 1
  double kappa = 0.0;  // lambda_min(P) after normalization
};

/// Fixed-lambda feasibility step: A^T P A - lambda P <= 0 with P > 0 is
/// solvable exactly when A/sqrt(lambda) is Schur stable, in which case the
/// discrete Lyapunov equation for A/sqrt(lambda) with Q = I produces a strictly
/// feasible P. P is rescaled to lambda_max(P) = 1 so the box constraint
/// kappa I <= P <= I holds with kappa = lambda_min(P).
inline ModeLmiResult solve_mode_lmi(const Matrix& a, double lambda, const DesignGrid& grid) {
  if (!(lambda > 0.0)) throw std::invalid_argument("solve_mode_lmi: lambda must be positive");
  a.require_square("solve_mode_lmi");
  ModeLmiResult res;
  const Matrix scaled = (1.0 / std::sqrt(lambda)) * a;
  if (!is_schur(scaled, grid.schur_tol)) {
    res.status = LmiStatus::infeasible;
    return res;
  }
  Matrix p;
  try {
    p = solve_discrete_lyapunov(scaled, Matrix::identity(a.rows()));
  } catch (const std::runtime_error&) {
    // Numerical breakdown right at the feasibility boundary: treat the grid
    // point as too badly conditioned to certify.
    res.status = LmiStatus::ill_conditioned;
    return res;
  }
  const auto ev = symmetric_eigenvalues(p);
  p = (1.0 / ev.back()) * p;
  res.P = p;
  res.kappa = ev.front() / ev.back();
  if (res.kappa < grid.kappa_min) {
    res.status = LmiStatus::ill_conditioned;
    return res;
  }
  // Matrix-level restatement of the inequality, as a guard on the arithmetic.
  const Matrix lmi = a.transpose() * p * a - lambda * p;
  if (symmetric_eigenvalues(lmi).back() > grid.lmi_tol) {
    res.status = LmiStatus::infeasible;
    return res;
  }
  res.status = LmiStatus::ok;
  return res;
}

/// mu_pq = lambda_max(P_q P_p^{-1}), the tight comparison constant for
/// V_q <= mu_pq V_p. Mathematically >= 1 when both are normalized to
/// lambda_max = 1; never clamped.
inline double compute_mu(const Matrix& p_p, const Matrix& p_q) {
  return max_generalized_eigenvalue(p_q, p_p);
}

/// lambda_s estimate 1 - lambda_min(Q)/lambda_max(P) for P solving the
/// discrete Lyapunov equation with this Q.
inline double estimate_lambda_s(const Matrix& p, const Matrix& q) {
  const auto evq = symmetric_eigenvalues(q);
  if (evq.front() <= 0.0)
    throw std::invalid_argument("estimate_lambda_s: Q must be positive definite");
  const auto evp = symmetric_eigenvalues(p);
  if (evp.back() <= 0.0)
    throw std::invalid_argument("estimate_lambda_s: P must be positive definite");
  const double lam = 1.0 - evq.front() / evp.back();
  if (!(lam > 0.0 && lam < 1.0))
    throw std::invalid_argument("estimate_lambda_s: inconsistent inputs, estimate not in (0,1)");
  return lam;
}

/// Lazily enumerates the feasible certificate candidates of one plant in
/// deterministic grid order: ascending lambda_s, then ascending lambda_u.
/// Infeasible stable-mode grid points below rho(A_is)^2 are skipped up front.
class CertificateStream {
 public:
  CertificateStream(int plant, Matrix a_is, Matrix a_iu, const DesignGrid& grid)
      : plant_(plant), a_is_(std::move(a_is)), a_iu_(std::move(a_iu)), grid_(grid) {
    stable_grid_ = lambda_grid_stable(grid_);
    unstable_grid_ = lambda_grid_unstable(a_iu_, grid_);
    // Pre-filter: feasibility requires rho(A_is) < sqrt(lambda_s).
    const double rho2 = std::pow(spectral_radius(a_is_), 2);
    while (s_idx_ < stable_grid_.size() && stable_grid_[s_idx_] <= rho2) ++s_idx_;
  }

  int plant() const { return plant_; }
  bool unstable_grid_empty() const { return unstable_grid_.empty(); }

  /// Next feasible candidate, or nullopt when the grid is exhausted.
  std::optional<ModeCertificate> next() {
    while (s_idx_ < stable_grid_.size()) {
      if (!stable_cached_) {
        const auto rs = solve_mode_lmi(a_is_, stable_grid_[s_idx_], grid_);
        if (rs.status != LmiStatus::ok) {
          advance_stable();
          continue;
        }
        stable_cached_ = rs;
      }
      while (u_idx_ < unstable_grid_.size()) {
        const auto& up = unstable_grid_[u_idx_];
        if (u_idx_ >= unstable_cache_.size()) {
          // One Lyapunov solve per lambda_u, shared across all lambda_s.
          unstable_cache_.push_back(solve_mode_lmi(a_iu_, up.lambda_u, grid_));
        }
        const auto& ru = unstable_cache_[u_idx_];
        ++u_idx_;
        if (ru.status != LmiStatus::ok) continue;
        ModeCertificate cert;
        cert.plant = plant_;
        cert.P_s = stable_cached_->P;
        cert.P_u = ru.P;
        cert.lambda_s = stable_grid_[s_idx_];
        cert.lambda_u = up.lambda_u;
        cert.kappa_s = stable_cached_->kappa;
        cert.kappa_u = ru.kappa;
        cert.mu_su = compute_mu(cert.P_s, cert.P_u);
        cert.mu_us = compute_mu(cert.P_u, cert.P_s);
        return cert;
      }
      advance_stable();
    }
    return std::nullopt;
  }

 private:
  void advance_stable() {
    ++s_idx_;
    u_idx_ = 0;
    stable_cached_.reset();
  }

  int plant_;
  Matrix a_is_;
  Matrix a_iu_;
  DesignGrid grid_;
  std::vector<double> stable_grid_;
  std::vector<UnstableGridPoint> unstable_grid_;
  std::vector<ModeLmiResult> unstable_cache_;
  std::optional<ModeLmiResult> stable_cached_;
  std::size_t s_idx_ = 0;
  std::size_t u_idx_ = 0;
};

/// One candidate stream per plant, in plant order.
inline std::vector<CertificateStream> design_certificates(const NCSConfig& cfg,
                                                          const DesignGrid& grid) {
  std::vector<CertificateStream> streams;
  streams.reserve(cfg.plants.size());
  for (const auto& p : cfg.plants)
    streams.emplace_back(p.index, p.stable_mode(), p.unstable_mode(), grid);
  return streams;
}

inline std::vector<CertScalars> to_scalars(const std::vector<ModeCertificate>& certs) {
  std::vector<CertScalars> s;
  s.reserve(certs.size());
  for (const auto& c : certs) s.push_back(c.scalars());
  return s;
}

}  // namespace ncsched
