// Independent test oracles. Everything here recomputes expected values by a
// different route than the library (series summation, characteristic
// polynomial roots, random sampling, plain enumeration), so agreement is
// evidence rather than tautology.
#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "ncsched/cycles.hpp"
#include "ncsched/matrix.hpp"
#include "ncsched/rng.hpp"

namespace oracles {

using ncsched::Matrix;

/// Truncated series P = sum_k (A^T)^k Q A^k; converges for Schur-stable A.
inline Matrix lyapunov_series(const Matrix& a, const Matrix& q, int max_terms = 100000,
                              double term_tol = 1e-15) {
  Matrix p = q;
  Matrix atk = a.transpose();
  Matrix ak = a;
  for (int k = 1; k < max_terms; ++k) {
    const Matrix term = atk * q * ak;
    p = p + term;
    if (term.max_abs() < term_tol * std::max(1.0, q.max_abs())) break;
    atk = atk * a.transpose();
    ak = a * ak;
  }
  return p;
}

/// Characteristic polynomial coefficients (monic, descending powers) via the
/// Faddeev-LeVerrier recurrence.
inline std::vector<double> charpoly(const Matrix& a) {
  const std::size_t n = a.rows();
  std::vector<double> c(n + 1, 0.0);
  c[0] = 1.0;
  Matrix m = Matrix::zero(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    m = a * m;
    for (std::size_t i = 0; i < n; ++i) m(i, i) += c[k - 1];
    const Matrix am = a * m;
    double tr = 0.0;
    for (std::size_t i = 0; i < n; ++i) tr += am(i, i);
    c[k] = -tr / static_cast<double>(k);
    if (k == n) m = am;
  }
  return c;
}

/// Durand-Kerner simultaneous root iteration on a monic polynomial.
inline std::vector<std::complex<double>> poly_roots(const std::vector<double>& coeff) {
  const std::size_t n = coeff.size() - 1;
  std::vector<std::complex<double>> z(n);
  const std::complex<double> seed(0.4, 0.9);
  std::complex<double> zk(1.0, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    zk *= seed;
    z[i] = zk;
  }
  auto eval = [&](std::complex<double> x) {
    std::complex<double> v(coeff[0], 0.0);
    for (std::size_t k = 1; k < coeff.size(); ++k) v = v * x + coeff[k];
    return v;
  };
  for (int it = 0; it < 2000; ++it) {
    double step = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::complex<double> denom(1.0, 0.0);
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) denom *= z[i] - z[j];
      const std::complex<double> d = eval(z[i]) / denom;
      z[i] -= d;
      step = std::max(step, std::abs(d));
    }
    if (step < 1e-14) break;
  }
  return z;
}

inline double charpoly_spectral_radius(const Matrix& a) {
  double r = 0.0;
  for (const auto& z : poly_roots(charpoly(a))) r = std::max(r, std::abs(z));
  return r;
}

inline Matrix random_matrix(ncsched::Rng& rng, std::size_t d, double lo = -1.0,
                            double hi = 1.0) {
  Matrix m(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m(i, j) = rng.uniform_real(lo, hi);
  return m;
}

/// Random matrix rescaled to a prescribed spectral radius below 1.
inline Matrix random_schur(ncsched::Rng& rng, std::size_t d, double target_rho) {
  for (;;) {
    Matrix m = random_matrix(rng, d);
    const double r = ncsched::spectral_radius(m);
    if (r > 1e-6) return (target_rho / r) * m;
  }
}

inline Matrix random_spd(ncsched::Rng& rng, std::size_t d) {
  const Matrix r = random_matrix(rng, d);
  Matrix p = r.transpose() * r;
  for (std::size_t i = 0; i < d; ++i) p(i, i) += 0.1;
  return p;
}

/// max over random directions of the generalized Rayleigh ratio
/// (xi^T Pq xi)/(xi^T Pp xi); approaches lambda_max(Pq Pp^{-1}) from below.
inline double mu_sampling(ncsched::Rng& rng, const Matrix& pq, const Matrix& pp,
                          int samples = 100000) {
  const std::size_t d = pp.rows();
  double best = 0.0;
  for (int s = 0; s < samples; ++s) {
    ncsched::Vec x(d);
    for (auto& v : x) v = rng.uniform_real(-1.0, 1.0);
    const double den = ncsched::quadratic_form(pp, x);
    if (den <= 0.0) continue;
    best = std::max(best, ncsched::quadratic_form(pq, x) / den);
  }
  return best;
}

/// Plain odometer enumeration of dwell vectors in lexicographic order; first
/// feasible wins. No pruning, no shared code with the library search.
inline std::optional<std::vector<int>> exhaustive_t_search(
    const ncsched::Cycle& w, const std::vector<ncsched::CertScalars>& scalars, int t_max) {
  const std::size_t n = w.length();
  std::vector<int> t(n, 1);
  for (;;) {
    const auto xs = ncsched::xi(w, ncsched::TFactors(t),
                                std::span<const ncsched::CertScalars>(scalars));
    bool ok = true;
    for (double x : xs)
      if (!(x < -1e-12)) ok = false;
    if (ok) return t;
    std::size_t j = n;
    while (j-- > 0) {
      if (t[j] < t_max) {
        ++t[j];
        for (std::size_t k = j + 1; k < n; ++k) t[k] = 1;
        break;
      }
      if (j == 0) return std::nullopt;
    }
  }
}

}  // namespace oracles
