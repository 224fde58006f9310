#pragma once

#include <cmath>
#include <stdexcept>

#include "ncsched/eig.hpp"
#include "ncsched/matrix.hpp"

namespace ncsched {

/// Solves A^T P A - P + Q = 0 for symmetric positive definite Q and Schur
/// stable A, by dense elimination on the d^2 x d^2 vectorized system
/// (I - A^T kron A^T) vec(P) = vec(Q). Exact at the dimensions used here.
///
/// Throws when A is not Schur stable (the equation has no PD solution) or when
/// the linear system breaks down numerically near rho(A) = 1.
inline Matrix solve_discrete_lyapunov(const Matrix& a, const Matrix& q) {
  a.require_square("solve_discrete_lyapunov");
  q.require_square("solve_discrete_lyapunov");
  if (a.rows() != q.rows())
    throw std::invalid_argument("solve_discrete_lyapunov: dimension mismatch");
  if (spectral_radius(a) >= 1.0)
    throw std::invalid_argument("solve_discrete_lyapunov: A is not Schur stable");
  const std::size_t d = a.rows();
  const Matrix at = a.transpose();
  const Matrix sys = Matrix::identity(d * d) - kron(at, at);
  const Matrix qs = q.symmetrized();
  Matrix p = unvec(lu_solve(sys, vec(qs)), d, d).symmetrized();

  // Iterative refinement: near rho(A) = 1 the vectorized system is badly
  // conditioned and one pass of elimination leaves a residual well above
  // rounding level; correcting against the true residual restores it.
  const double tol = 1e-10 * std::max(qs.max_abs(), 1e-300);
  for (int pass = 0; pass < 4; ++pass) {
    const Matrix residual = at * p * a - p + qs;
    if (residual.max_abs() <= tol) return p;
    p = (p + unvec(lu_solve(sys, vec(residual)), d, d)).symmetrized();
  }
  if ((at * p * a - p + qs).max_abs() <= tol) return p;
  throw std::runtime_error(
      "solve_discrete_lyapunov: residual beyond tolerance (rho(A) too close to 1)");
}

struct DareOptions {
  double step_tol = 1e-12;
  long max_iterations = 100000;
  double divergence_limit = 1e100;
};

/// LQR gain for x(t+1) = A x(t) + B u(t) with stage cost x^T Q x + u^T R u,
/// via fixed-point Riccati iteration from P0 = Q. Sign convention: u = K x
/// with K = -(R + B^T P B)^{-1} B^T P A, so A + B K is the closed loop.
///
/// Divergence or hitting the iteration cap signals an unstabilizable pair.
inline Matrix solve_dare_lqr(const Matrix& a, const Matrix& b, const Matrix& q,
                             const Matrix& r, const DareOptions& opt = {}) {
  a.require_square("solve_dare_lqr");
  if (b.rows() != a.rows()) throw std::invalid_argument("solve_dare_lqr: B dimension mismatch");
  if (q.rows() != a.rows() || q.cols() != a.cols())
    throw std::invalid_argument("solve_dare_lqr: Q dimension mismatch");
  if (r.rows() != b.cols() || r.cols() != b.cols())
    throw std::invalid_argument("solve_dare_lqr: R dimension mismatch");

  const Matrix at = a.transpose();
  const Matrix bt = b.transpose();
  Matrix p = q.symmetrized();
  for (long it = 0; it < opt.max_iterations; ++it) {
    const Matrix btp = bt * p;
    const Matrix gram = r + btp * b;           // R + B^T P B, SPD for valid inputs
    const Matrix gain = lu_solve(gram, btp * a);  // (R + B^T P B)^{-1} B^T P A
    const Matrix next = (q + at * p * a - (at * p * b) * gain).symmetrized();
    const double step = (next - p).max_abs();
    p = next;
    if (!p.all_finite() || p.max_abs() > opt.divergence_limit)
      throw std::runtime_error("solve_dare_lqr: iteration diverged (pair not stabilizable?)");
    // Step change measured relative to the iterate scale; near-uncontrollable
    // pairs produce huge P whose absolute steps never fall below rounding.
    if (step <= opt.step_tol * std::max(1.0, p.max_abs())) {
      Matrix k = lu_solve(r + bt * p * b, bt * p * a);
      return -1.0 * k;
    }
  }
  throw std::runtime_error("solve_dare_lqr: iteration cap reached without convergence");
}

}  // namespace ncsched
