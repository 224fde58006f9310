#include <catch2/catch_amalgamated.hpp>

#include "ncsched/experiments.hpp"
#include "ncsched/plants.hpp"

using namespace ncsched;
using Catch::Matchers::WithinAbs;

TEST_CASE("mode matrices") {
  const auto as = experiments::bench_A();
  const auto bs = experiments::bench_B();
  const auto ks = experiments::bench_K();

  PlantSpec free_plant(1, as[0], bs[0], Matrix::zero(1, 2));
  const auto [is0, iu0] = mode_matrices(free_plant);
  CHECK((is0 - as[0]).max_abs() == 0.0);

  PlantSpec p1(1, as[0], bs[0], ks[0]);
  for (const auto& l : eigenvalues(p1.stable_mode()))
    CHECK_THAT(std::abs(l), WithinAbs(0.3487, 1e-3));

  PlantSpec p4(4, as[3], bs[3], ks[3]);
  auto mags = eigenvalues(p4.unstable_mode());
  std::vector<double> abs_mags;
  for (const auto& l : mags) abs_mags.push_back(std::abs(l));
  std::sort(abs_mags.begin(), abs_mags.end());
  CHECK_THAT(abs_mags[0], WithinAbs(0.6729, 1e-3));
  CHECK_THAT(abs_mags[1], WithinAbs(1.5807, 1e-3));

  CHECK_THROWS_AS(PlantSpec(1, as[0], Matrix(1, 1), ks[0]), std::invalid_argument);
  CHECK_THROWS_AS(PlantSpec(1, as[0], bs[0], Matrix(1, 3)), std::invalid_argument);
}

TEST_CASE("assumption validation") {
  CHECK(validate_assumption1(experiments::bench_ncs()).pass);

  // Open loop already stable: flagged.
  std::vector<PlantSpec> ps;
  ps.emplace_back(1, 0.5 * Matrix::identity(2), Matrix::zero(2, 1), Matrix::zero(1, 2));
  ps.emplace_back(2, experiments::bench_A()[0], experiments::bench_B()[0],
                  experiments::bench_K()[0]);
  const auto rep = validate_assumption1(NCSConfig(std::move(ps), 1));
  CHECK_FALSE(rep.pass);
  CHECK_FALSE(rep.rows[0].open_unstable);
  CHECK(rep.rows[1].pass());

  // Gain zeroed out: closed loop no longer Schur.
  std::vector<PlantSpec> ps2;
  ps2.emplace_back(1, experiments::bench_A()[1], experiments::bench_B()[1],
                   Matrix::zero(1, 2));
  ps2.emplace_back(2, experiments::bench_A()[0], experiments::bench_B()[0],
                   experiments::bench_K()[0]);
  const auto rep2 = validate_assumption1(NCSConfig(std::move(ps2), 1));
  CHECK_FALSE(rep2.pass);
  CHECK_FALSE(rep2.rows[0].closed_schur);
  CHECK_THAT(rep2.rows[0].rho_closed, WithinAbs(1.2307, 1e-3));
}

TEST_CASE("lqr gain design over a plant list") {
  const auto gains =
      design_lqr_gains(experiments::bench_A(), experiments::bench_B(),
                       5.0 * Matrix::identity(2), Matrix{{1.0}});
  const auto ks = experiments::bench_K();
  for (int i = 0; i < 5; ++i) {
    CHECK_THAT(gains[i](0, 0), WithinAbs(ks[i](0, 0), 1e-3));
    CHECK_THAT(gains[i](0, 1), WithinAbs(ks[i](0, 1), 1e-3));
  }

  CHECK_THROWS_WITH(design_lqr_gains({Matrix::identity(2)}, {Matrix::zero(2, 1)},
                                     5.0 * Matrix::identity(2), Matrix{{1.0}}),
                    Catch::Matchers::ContainsSubstring("plant 1"));
}

TEST_CASE("ncs configuration invariants") {
  auto mk = [](int idx) {
    return PlantSpec(idx, experiments::bench_A()[0], experiments::bench_B()[0],
                     experiments::bench_K()[0]);
  };
  std::vector<PlantSpec> two{mk(1), mk(2)};
  CHECK_THROWS_AS(NCSConfig(two, 2), std::invalid_argument);   // M = N
  CHECK_THROWS_AS(NCSConfig(two, 0), std::invalid_argument);
  std::vector<PlantSpec> wrong{mk(1), mk(3)};
  CHECK_THROWS_AS(NCSConfig(wrong, 1), std::invalid_argument);  // indices not 1..N
}
