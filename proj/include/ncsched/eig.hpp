#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "ncsched/matrix.hpp"

namespace ncsched {

namespace detail {

/// Householder reduction to upper Hessenberg form, in place.
inline void hessenberg(Matrix& h) {
  const std::size_t n = h.rows();
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double scale = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) scale += std::abs(h(i, k));
    if (scale == 0.0) continue;
    std::vector<double> v(n - k - 1);
    double sigma = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) {
      v[i - k - 1] = h(i, k) / scale;
      sigma += v[i - k - 1] * v[i - k - 1];
    }
    double alpha = std::sqrt(sigma);
    if (v[0] > 0) alpha = -alpha;
    v[0] -= alpha;
    const double beta = -alpha * v[0];  // = |v|^2 / 2
    if (beta == 0.0) continue;
    // H <- (I - vv^T/beta) H (I - vv^T/beta)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = k + 1; i < n; ++i) s += v[i - k - 1] * h(i, j);
      s /= beta;
      for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= s * v[i - k - 1];
    }
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) s += h(i, j) * v[j - k - 1];
      s /= beta;
      for (std::size_t j = k + 1; j < n; ++j) h(i, j) -= s * v[j - k - 1];
    }
    h(k + 1, k) = scale * alpha;
    for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
  }
}

inline void eig2x2(double a, double b, double c, double d,
                   std::complex<double>& l1, std::complex<double>& l2) {
  const double tr = a + d;
  const double det = a * d - b * c;
  const double disc = 0.25 * tr * tr - det;
  if (disc >= 0.0) {
    const double r = std::sqrt(disc);
    l1 = {0.5 * tr + r, 0.0};
    l2 = {0.5 * tr - r, 0.0};
  } else {
    const double im = std::sqrt(-disc);
    l1 = {0.5 * tr, im};
    l2 = {0.5 * tr, -im};
  }
}

}  // namespace detail

/// Eigenvalues of a general real square matrix via Hessenberg reduction and
/// Francis double-shift QR with deflation. No eigenvectors; d <= ~10 intended.
/// Throws on non-square input or failure to deflate within the iteration cap.
inline std::vector<std::complex<double>> eigenvalues(const Matrix& a) {
  a.require_square("eigenvalues");
  if (!a.all_finite()) throw std::invalid_argument("eigenvalues: non-finite entries");
  const std::size_t n = a.rows();
  std::vector<std::complex<double>> out(n);
  if (n == 1) {
    out[0] = {a(0, 0), 0.0};
    return out;
  }
  if (n == 2) {  // closed form; this is the common case for the 2x2 plants
    detail::eig2x2(a(0, 0), a(0, 1), a(1, 0), a(1, 1), out[0], out[1]);
    return out;
  }

  Matrix h = a;
  detail::hessenberg(h);
  const double eps = std::numeric_limits<double>::epsilon();

  std::size_t hi = n - 1;
  int iter = 0;
  const int iter_cap = 40 * static_cast<int>(n);
  while (true) {
    // Deflate negligible subdiagonals.
    std::size_t lo = hi;
    while (lo > 0) {
      const double s = std::abs(h(lo - 1, lo - 1)) + std::abs(h(lo, lo));
      if (std::abs(h(lo, lo - 1)) <= eps * (s > 0.0 ? s : 1.0)) {
        h(lo, lo - 1) = 0.0;
        break;
      }
      --lo;
    }
    if (lo == hi) {
      out[hi] = {h(hi, hi), 0.0};
      if (hi == 0) break;
      --hi;
      iter = 0;
      continue;
    }
    if (lo == hi - 1) {
      detail::eig2x2(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi),
                     out[hi - 1], out[hi]);
      if (hi == 1) break;
      hi -= 2;
      iter = 0;
      continue;
    }

    if (++iter > iter_cap) throw std::runtime_error("eigenvalues: QR iteration did not converge");

    // Francis double shift from the trailing 2x2; exceptional shift every 10
    // stalled iterations to break symmetry-induced cycling.
    double s = h(hi - 1, hi - 1) + h(hi, hi);
    double t = h(hi - 1, hi - 1) * h(hi, hi) - h(hi - 1, hi) * h(hi, hi - 1);
    if (iter % 10 == 0) {
      const double w = std::abs(h(hi, hi - 1)) + std::abs(h(hi - 1, hi - 2));
      s = 1.5 * w;
      t = w * w;
    }

    double x = h(lo, lo) * h(lo, lo) + h(lo, lo + 1) * h(lo + 1, lo) - s * h(lo, lo) + t;
    double y = h(lo + 1, lo) * (h(lo, lo) + h(lo + 1, lo + 1) - s);
    double z = (lo + 2 <= hi) ? h(lo + 2, lo + 1) * h(lo + 1, lo) : 0.0;

    // Chase the bulge; reflectors act on 3 rows, degenerating to 2 at the end.
    for (std::size_t k = lo; k <= hi - 1; ++k) {
      if (k > lo) {
        x = h(k, k - 1);
        y = h(k + 1, k - 1);
        z = (k + 2 <= hi) ? h(k + 2, k - 1) : 0.0;
      }
      const bool has_z = (k + 2 <= hi);
      const double scale = std::abs(x) + std::abs(y) + std::abs(z);
      if (scale == 0.0) continue;
      double vx = x / scale, vy = y / scale, vz = z / scale;
      double alpha = std::sqrt(vx * vx + vy * vy + vz * vz);
      if (vx > 0) alpha = -alpha;
      vx -= alpha;
      const double beta = -alpha * vx;
      if (beta == 0.0) continue;
      // Similarity transform; n is tiny, so apply across full rows/columns.
      for (std::size_t j = 0; j < n; ++j) {
        double sum = vx * h(k, j) + vy * h(k + 1, j) + (has_z ? vz * h(k + 2, j) : 0.0);
        sum /= beta;
        h(k, j) -= sum * vx;
        h(k + 1, j) -= sum * vy;
        if (has_z) h(k + 2, j) -= sum * vz;
      }
      for (std::size_t i = 0; i < n; ++i) {
        double sum = vx * h(i, k) + vy * h(i, k + 1) + (has_z ? vz * h(i, k + 2) : 0.0);
        sum /= beta;
        h(i, k) -= sum * vx;
        h(i, k + 1) -= sum * vy;
        if (has_z) h(i, k + 2) -= sum * vz;
      }
      if (k > lo) {
        h(k + 1, k - 1) = 0.0;
        if (has_z) h(k + 2, k - 1) = 0.0;
      }
    }
  }
  return out;
}

/// Largest eigenvalue modulus. 1e-9 relative accuracy for d <= 10.
inline double spectral_radius(const Matrix& a) {
  double r = 0.0;
  for (const auto& l : eigenvalues(a)) r = std::max(r, std::abs(l));
  return r;
}

/// Schur stability with an explicit margin: rho(A) < 1 - tol.
inline bool is_schur(const Matrix& a, double tol = 1e-9) {
  return spectral_radius(a) < 1.0 - tol;
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi sweeps, sorted ascending.
/// The input is symmetrized first; feed it genuinely symmetric data.
inline std::vector<double> symmetric_eigenvalues(const Matrix& p) {
  p.require_square("symmetric_eigenvalues");
  Matrix m = p.symmetrized();
  const std::size_t n = m.rows();
  const double scale = std::max(m.max_abs(), 1e-300);
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off = std::max(off, std::abs(m(i, j)));
    if (off <= 1e-16 * scale) break;
    for (std::size_t pi = 0; pi + 1 < n; ++pi)
      for (std::size_t qi = pi + 1; qi < n; ++qi) {
        const double apq = m(pi, qi);
        if (std::abs(apq) <= 1e-18 * scale) continue;
        const double theta = (m(qi, qi) - m(pi, pi)) / (2.0 * apq);
        const double tsign = (theta >= 0.0) ? 1.0 : -1.0;
        const double tt = tsign / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(tt * tt + 1.0);
        const double s = tt * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double mkp = m(k, pi), mkq = m(k, qi);
          m(k, pi) = c * mkp - s * mkq;
          m(k, qi) = s * mkp + c * mkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double mpk = m(pi, k), mqk = m(qi, k);
          m(pi, k) = c * mpk - s * mqk;
          m(qi, k) = s * mpk + c * mqk;
        }
        m(pi, qi) = 0.0;
        m(qi, pi) = 0.0;
      }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = m(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

struct SymmetricSpectrum {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

/// Extreme eigenvalues of a symmetric matrix. Rejects inputs whose asymmetry
/// exceeds the tolerance rather than silently symmetrizing garbage.
inline SymmetricSpectrum symmetric_spectrum(const Matrix& p, double asym_tol = 1e-9) {
  p.require_square("symmetric_spectrum");
  if (p.max_asymmetry() > asym_tol)
    throw std::invalid_argument("symmetric_spectrum: matrix asymmetry beyond tolerance");
  const auto ev = symmetric_eigenvalues(p);
  return {ev.front(), ev.back()};
}

/// lambda_max(Pq Pp^{-1}) for SPD Pp, Pq, via the symmetric reduction
/// L^{-1} Pq L^{-T} with Pp = L L^T; no asymmetric eigensolve involved.
inline double max_generalized_eigenvalue(const Matrix& pq, const Matrix& pp) {
  if (pq.rows() != pp.rows() || pq.cols() != pp.cols() || !pq.is_square())
    throw std::invalid_argument("max_generalized_eigenvalue: dimension mismatch");
  Matrix l;
  if (!cholesky(pp.symmetrized(), l))
    throw std::invalid_argument("max_generalized_eigenvalue: Pp is not positive definite");
  Matrix lq;
  if (!cholesky(pq.symmetrized(), lq))
    throw std::invalid_argument("max_generalized_eigenvalue: Pq is not positive definite");
  const Matrix y = forward_subst(l, pq.symmetrized());      // L^{-1} Pq
  const Matrix m = forward_subst(l, y.transpose());         // L^{-1} Pq L^{-T}
  return symmetric_eigenvalues(m).back();
}

}  // namespace ncsched
