#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ncsched/eig.hpp"
#include "ncsched/lyapunov.hpp"
#include "ncsched/matrix.hpp"

namespace ncsched {

/// One plant of the NCS: x(t+1) = A x(t) + B u(t) with state feedback u = K x.
/// The closed loop A + B K is the stable mode, the open loop A the unstable
/// mode. Dimensional consistency is enforced here; Schur/anti-Schur properties
/// are checked separately by validate_assumption1 so that test doubles and
/// deliberately broken configurations can still be constructed.
struct PlantSpec {
  int index = 0;  // 1-based
  Matrix A;
  Matrix B;
  Matrix K;

  PlantSpec(int idx, Matrix a, Matrix b, Matrix k)
      : index(idx), A(std::move(a)), B(std::move(b)), K(std::move(k)) {
    if (index < 1) throw std::invalid_argument("PlantSpec: index must be >= 1");
    A.require_square("PlantSpec");
    if (B.rows() != A.rows())
      throw std::invalid_argument("PlantSpec: B row count must match state dimension");
    if (K.rows() != B.cols() || K.cols() != A.cols())
      throw std::invalid_argument("PlantSpec: K must be input-dim x state-dim");
    if (!A.all_finite() || !B.all_finite() || !K.all_finite())
      throw std::invalid_argument("PlantSpec: non-finite entries");
  }

  std::size_t state_dim() const { return A.rows(); }
  Matrix stable_mode() const { return A + B * K; }
  Matrix unstable_mode() const { return A; }
};

/// (A_is, A_iu) = (A + B K, A).
inline std::pair<Matrix, Matrix> mode_matrices(const PlantSpec& p) {
  return {p.stable_mode(), p.unstable_mode()};
}

/// The whole NCS: N plants sharing a channel that admits M < N of them per step.
struct NCSConfig {
  std::vector<PlantSpec> plants;
  int capacity = 0;  // M

  NCSConfig(std::vector<PlantSpec> ps, int m) : plants(std::move(ps)), capacity(m) {
    const int n = static_cast<int>(plants.size());
    if (n < 2) throw std::invalid_argument("NCSConfig: need at least two plants");
    if (m <= 0 || m >= n) throw std::invalid_argument("NCSConfig: require 0 < M < N");
    for (int i = 0; i < n; ++i) {
      if (plants[i].index != i + 1)
        throw std::invalid_argument("NCSConfig: plant indices must be 1..N in order");
      if (plants[i].state_dim() != plants[0].state_dim())
        throw std::invalid_argument("NCSConfig: all plants must share the state dimension");
    }
  }

  int n_plants() const { return static_cast<int>(plants.size()); }
  std::size_t state_dim() const { return plants.front().state_dim(); }
};

struct Assumption1Row {
  int plant = 0;
  double rho_open = 0.0;
  double rho_closed = 0.0;
  bool open_unstable = false;
  bool closed_schur = false;
  bool pass() const { return open_unstable && closed_schur; }
};

struct Assumption1Report {
  std::vector<Assumption1Row> rows;
  bool pass = true;
};

/// Per-plant check that the open loop is not Schur stable and the closed loop
/// is, with margin tol on both sides.
inline Assumption1Report validate_assumption1(const NCSConfig& cfg, double tol = 1e-9) {
  Assumption1Report rep;
  for (const auto& p : cfg.plants) {
    Assumption1Row row;
    row.plant = p.index;
    row.rho_open = spectral_radius(p.unstable_mode());
    row.rho_closed = spectral_radius(p.stable_mode());
    row.open_unstable = row.rho_open >= 1.0 - tol;
    row.closed_schur = row.rho_closed < 1.0 - tol;
    rep.pass = rep.pass && row.pass();
    rep.rows.push_back(row);
  }
  return rep;
}

/// Rank of the controllability matrix [B AB ... A^{d-1}B], with singular
/// values thresholded at 1e-10 of the largest.
inline bool is_controllable(const Matrix& a, const Matrix& b) {
  const std::size_t d = a.rows();
  Matrix ctrb(d, d * b.cols());
  Matrix akb = b;
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) ctrb(i, k * b.cols() + j) = akb(i, j);
    akb = a * akb;
  }
  // Singular values via eigenvalues of C C^T (d x d, symmetric PSD).
  const auto ev = symmetric_eigenvalues(ctrb * ctrb.transpose());
  const double smax = std::sqrt(std::max(ev.back(), 0.0));
  if (smax == 0.0) return false;
  std::size_t rank = 0;
  for (double e : ev)
    if (std::sqrt(std::max(e, 0.0)) > 1e-10 * smax) ++rank;
  return rank == d;
}

/// LQR gains for a list of (A_i, B_i) with shared weights. Uncontrollable
/// pairs are reported by plant index.
inline std::vector<Matrix> design_lqr_gains(const std::vector<Matrix>& a_list,
                                            const std::vector<Matrix>& b_list,
                                            const Matrix& q, const Matrix& r) {
  if (a_list.size() != b_list.size())
    throw std::invalid_argument("design_lqr_gains: list length mismatch");
  std::vector<Matrix> gains;
  gains.reserve(a_list.size());
  for (std::size_t i = 0; i < a_list.size(); ++i) {
    if (!is_controllable(a_list[i], b_list[i]))
      throw std::invalid_argument("design_lqr_gains: pair for plant " + std::to_string(i + 1) +
                                  " is not controllable");
    gains.push_back(solve_dare_lqr(a_list[i], b_list[i], q, r));
  }
  return gains;
}

}  // namespace ncsched
