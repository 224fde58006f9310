#include <catch2/catch_amalgamated.hpp>

#include "ncsched/eig.hpp"
#include "ncsched/experiments.hpp"
#include "ncsched/lyapunov.hpp"
#include "ncsched/matrix.hpp"
#include "oracles.hpp"

using namespace ncsched;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("matrix basics") {
  Matrix a{{1.0, 2.0}, {3.0, 4.0}};
  CHECK(a(1, 0) == 3.0);
  CHECK_THROWS_AS(Matrix({{1.0, 2.0}, {3.0}}), std::invalid_argument);
  CHECK_THROWS_AS(a + Matrix(3, 3), std::invalid_argument);
  const Matrix b = a * Matrix::identity(2);
  CHECK(b.data() == a.data());
  CHECK(a.transpose()(0, 1) == 3.0);
}

TEST_CASE("lu_solve recovers random systems and rejects singular ones") {
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix a = oracles::random_matrix(rng, 5);
    const Matrix x_true = oracles::random_matrix(rng, 5);
    const Matrix x = lu_solve(a, a * x_true);
    CHECK((x - x_true).max_abs() < 1e-9);
  }
  Matrix sing(2, 2);
  sing(0, 0) = 1.0;
  sing(0, 1) = 2.0;
  sing(1, 0) = 2.0;
  sing(1, 1) = 4.0;
  CHECK_THROWS_AS(lu_solve(sing, Matrix::identity(2)), std::runtime_error);
}

TEST_CASE("kron and vec follow the column-major identity") {
  Rng rng(13);
  const Matrix m = oracles::random_matrix(rng, 3);
  const Matrix x = oracles::random_matrix(rng, 3);
  const Matrix n = oracles::random_matrix(rng, 3);
  const Matrix lhs = vec(m * x * n);
  const Matrix rhs = kron(n.transpose(), m) * vec(x);
  CHECK((lhs - rhs).max_abs() < 1e-12);
}

TEST_CASE("spectral radius: closed forms and the charpoly oracle") {
  CHECK_THAT(spectral_radius(Matrix::identity(2)), WithinAbs(1.0, 1e-12));
  const auto as = experiments::bench_A();
  CHECK_THAT(spectral_radius(as[0]), WithinAbs(1.0298, 1e-3));
  CHECK_THROWS_AS(spectral_radius(Matrix(2, 3)), std::invalid_argument);

  Rng rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    const Matrix a = oracles::random_matrix(rng, 4, -2.0, 2.0);
    CHECK_THAT(spectral_radius(a),
               WithinAbs(oracles::charpoly_spectral_radius(a), 1e-8));
  }
  for (std::size_t d = 3; d <= 8; ++d) {
    const Matrix a = oracles::random_matrix(rng, d, -1.0, 1.0);
    CHECK_THAT(spectral_radius(a),
               WithinAbs(oracles::charpoly_spectral_radius(a), 1e-8));
  }
}

TEST_CASE("is_schur on the benchmark plants") {
  const auto as = experiments::bench_A();
  const auto bs = experiments::bench_B();
  const auto ks = experiments::bench_K();
  CHECK(is_schur(Matrix::zero(3, 3)));
  CHECK(is_schur(as[3] + bs[3] * ks[3]));  // closed loop of plant 4
  CHECK_FALSE(is_schur(as[4]));            // open loop of plant 5
}

TEST_CASE("symmetric spectrum brackets Rayleigh quotients") {
  Matrix d13{{1.0, 0.0}, {0.0, 3.0}};
  const auto sp = symmetric_spectrum(d13);
  CHECK_THAT(sp.lambda_min, WithinAbs(1.0, 1e-12));
  CHECK_THAT(sp.lambda_max, WithinAbs(3.0, 1e-12));
  const auto spi = symmetric_spectrum(Matrix::identity(4));
  CHECK_THAT(spi.lambda_min, WithinAbs(1.0, 1e-12));
  CHECK_THAT(spi.lambda_max, WithinAbs(1.0, 1e-12));

  Rng rng(19);
  Matrix s = oracles::random_matrix(rng, 5);
  s = s.symmetrized();
  const auto sp5 = symmetric_spectrum(s);
  for (int k = 0; k < 1000; ++k) {
    Vec x(5);
    for (auto& v : x) v = rng.uniform_real(-1.0, 1.0);
    const double den = norm2(x);
    if (den == 0.0) continue;
    const double q = quadratic_form(s, x) / (den * den);
    CHECK(q >= sp5.lambda_min - 1e-9);
    CHECK(q <= sp5.lambda_max + 1e-9);
  }

  Matrix asym{{0.0, 1.0}, {0.0, 0.0}};
  CHECK_THROWS_AS(symmetric_spectrum(asym), std::invalid_argument);
}

TEST_CASE("max generalized eigenvalue") {
  Rng rng(23);
  const Matrix p = oracles::random_spd(rng, 3);
  CHECK_THAT(max_generalized_eigenvalue(p, p), WithinAbs(1.0, 1e-10));
  CHECK_THAT(max_generalized_eigenvalue(2.0 * p, p), WithinAbs(2.0, 1e-10));
  CHECK_THROWS_AS(max_generalized_eigenvalue(p, Matrix::identity(4)), std::invalid_argument);
  CHECK_THROWS_AS(max_generalized_eigenvalue(p, Matrix::zero(3, 3) - Matrix::identity(3)),
                  std::invalid_argument);

  for (int trial = 0; trial < 5; ++trial) {
    const std::size_t d = 2 + trial % 2;
    const Matrix pq = oracles::random_spd(rng, d);
    const Matrix pp = oracles::random_spd(rng, d);
    const double mu = max_generalized_eigenvalue(pq, pp);
    const double sampled = oracles::mu_sampling(rng, pq, pp);
    CHECK(sampled <= mu * (1.0 + 1e-9));
    CHECK_THAT(sampled, WithinRel(mu, 1e-3));
  }
}

TEST_CASE("mu consistency: mu_pq * mu_qp >= 1") {
  Rng rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d = 2 + trial % 4;
    const Matrix pq = oracles::random_spd(rng, d);
    const Matrix pp = oracles::random_spd(rng, d);
    CHECK(max_generalized_eigenvalue(pq, pp) * max_generalized_eigenvalue(pp, pq) >=
          1.0 - 1e-10);
  }
}

TEST_CASE("discrete Lyapunov solve: closed forms, oracle, residual") {
  const Matrix p = solve_discrete_lyapunov(0.5 * Matrix::identity(2), Matrix::identity(2));
  CHECK_THAT(p(0, 0), WithinAbs(4.0 / 3.0, 1e-12));
  CHECK_THAT(p(0, 1), WithinAbs(0.0, 1e-12));

  const Matrix q{{2.0, 0.5}, {0.5, 1.0}};
  const Matrix p0 = solve_discrete_lyapunov(Matrix::zero(2, 2), q);
  CHECK((p0 - q).max_abs() < 1e-13);

  CHECK_THROWS_AS(solve_discrete_lyapunov(2.0 * Matrix::identity(2), Matrix::identity(2)),
                  std::invalid_argument);

  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d = 2 + trial % 5;
    const Matrix a = oracles::random_schur(rng, d, 0.3 + 0.5 * rng.uniform_real(0.0, 1.0));
    const Matrix qq = oracles::random_spd(rng, d);
    const Matrix pp = solve_discrete_lyapunov(a, qq);
    const Matrix residual = a.transpose() * pp * a - pp + qq;
    CHECK(residual.max_abs() <= 1e-10 * qq.max_abs());
    CHECK((pp - oracles::lyapunov_series(a, qq)).max_abs() < 1e-8);
  }
}

TEST_CASE("dare lqr gains") {
  const auto as = experiments::bench_A();
  const auto bs = experiments::bench_B();
  const auto ks = experiments::bench_K();
  const Matrix q = 5.0 * Matrix::identity(2);
  const Matrix r{{1.0}};
  const Matrix k1 = solve_dare_lqr(as[0], bs[0], q, r);
  CHECK_THAT(k1(0, 0), WithinAbs(ks[0](0, 0), 1e-3));
  CHECK_THAT(k1(0, 1), WithinAbs(ks[0](0, 1), 1e-3));

  const Matrix k3 = solve_dare_lqr(as[2], bs[2], q, r);
  const auto mags = eigenvalues(as[2] + bs[2] * k3);
  for (const auto& l : mags) CHECK_THAT(std::abs(l), WithinAbs(0.2056, 1e-3));

  // Stable plant with no control authority: the iteration settles and the
  // gain is identically zero.
  const Matrix k0 = solve_dare_lqr(0.5 * Matrix::identity(2), Matrix::zero(2, 1), q, r);
  CHECK(k0.max_abs() == 0.0);

  // Unstable and uncontrollable: divergence is reported.
  CHECK_THROWS_AS(solve_dare_lqr(2.0 * Matrix::identity(2), Matrix::zero(2, 1), q, r),
                  std::runtime_error);

  // Closed loop is Schur for every returned gain.
  Rng rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix a = oracles::random_matrix(rng, 2, -1.5, 1.5);
    Matrix b(2, 1);
    b(0, 0) = 1.0;
    b(1, 0) = rng.uniform_real(-1.0, 1.0);
    const Matrix k = solve_dare_lqr(a, b, q, r);
    CHECK(spectral_radius(a + b * k) < 1.0);
  }
}

TEST_CASE("dare lqr reproduces the three-plant example gains") {
  const auto as = experiments::suff_A();
  const auto bs = experiments::suff_B();
  const auto ks = experiments::suff_K();
  const Matrix q = 5.0 * Matrix::identity(2);
  const Matrix r{{1.0}};
  for (int i = 0; i < 3; ++i) {
    const Matrix k = solve_dare_lqr(as[i], bs[i], q, r);
    CHECK_THAT(k(0, 0), WithinAbs(ks[i](0, 0), 1e-2));
    CHECK_THAT(k(0, 1), WithinAbs(ks[i](0, 1), 1e-2));
  }
}
