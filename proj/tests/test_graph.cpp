#include <catch2/catch_amalgamated.hpp>

#include "ncsched/experiments.hpp"
#include "ncsched/graph.hpp"
#include "oracles.hpp"

using namespace ncsched;
using Catch::Matchers::WithinAbs;

namespace {

/// Addition-only Pascal-triangle binomial, independent of the multiplicative
/// path in the library.
BigUint pascal_binomial(int n, int k) {
  std::vector<BigUint> row(static_cast<std::size_t>(k) + 1, BigUint(0));
  row[0] = BigUint(1);
  for (int i = 1; i <= n; ++i)
    for (int j = std::min(i, k); j >= 1; --j) row[j].add(row[j - 1]);
  return row[static_cast<std::size_t>(k)];
}

}  // namespace

TEST_CASE("vertex labels") {
  CHECK_THROWS_AS(VertexLabel(3, {1, 2, 3}), std::invalid_argument);  // M = N
  CHECK_THROWS_AS(VertexLabel(3, {2, 1}), std::invalid_argument);     // unsorted
  CHECK_THROWS_AS(VertexLabel(3, {0, 1}), std::invalid_argument);     // out of range
  const VertexLabel v(5, {2, 3});
  CHECK(v.to_string() == "{2,3}");
  CHECK(v.is_stable(3));
  CHECK_FALSE(v.is_stable(4));
}

TEST_CASE("vertex counts are exact") {
  CHECK(vertex_count(3, 2).to_string() == "3");
  CHECK(vertex_count(5, 2).to_string() == "10");
  CHECK(vertex_count(100, 10).to_string() == pascal_binomial(100, 10).to_string());
  CHECK(vertex_count(1000, 10).to_string() == "263409560461970212832400");
  CHECK_THAT(vertex_count(1000, 10).to_double(), WithinAbs(2.634e23, 0.01e23));
  CHECK_THROWS_AS(vertex_count(3, 3), std::invalid_argument);
  CHECK_THROWS_AS(vertex_count(3, 0), std::invalid_argument);
}

TEST_CASE("vertex weights") {
  const auto certs = experiments::toy3_scalars();  // lambda_s 0.25, lambda_u 1.1
  const VertexLabel v1(3, {1, 2});
  const auto w = vertex_weight(v1, certs);
  CHECK_THAT(w[0], WithinAbs(-1.3863, 1e-4));
  CHECK_THAT(w[1], WithinAbs(-1.3863, 1e-4));
  CHECK_THAT(w[2], WithinAbs(0.0953, 1e-4));

  const std::vector<CertScalars> unit = {{0.5, 1.0, 1.0, 1.0}, {0.5, 1.0, 1.0, 1.0}};
  const auto w2 = vertex_weight(VertexLabel(2, {1}), unit);
  CHECK(w2[1] == 0.0);  // ln 1 = 0 exactly

  CHECK_THROWS_AS(vertex_weight(v1, std::span<const CertScalars>(certs.data(), 2)),
                  std::invalid_argument);
}

TEST_CASE("edge weights") {
  const auto certs = experiments::toy3_scalars();  // mu_su 1.1, mu_us 1.2
  const VertexLabel v1(3, {1, 2}), v2(3, {1, 3});
  const auto w12 = edge_weight(v1, v2, certs);
  CHECK(w12[0] == 0.0);
  CHECK_THAT(w12[1], WithinAbs(std::log(1.1), 1e-12));
  CHECK_THAT(w12[2], WithinAbs(std::log(1.2), 1e-12));
  const auto w21 = edge_weight(v2, v1, certs);
  CHECK_THAT(w21[1], WithinAbs(std::log(1.2), 1e-12));
  CHECK_THAT(w21[2], WithinAbs(std::log(1.1), 1e-12));
  CHECK(w12 != w21);  // direction matters

  const std::vector<CertScalars> unit(3, CertScalars{0.5, 2.0, 1.0, 1.0});
  for (double x : edge_weight(v1, v2, unit)) CHECK(x == 0.0);

  CHECK_THROWS_AS(edge_weight(v1, v1, certs), std::invalid_argument);
}

TEST_CASE("weight sign structure on random certificates") {
  Rng rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + static_cast<int>(rng.uniform_below(4));
    const int m = 1 + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n - 1)));
    std::vector<CertScalars> certs;
    for (int i = 0; i < n; ++i)
      certs.push_back({rng.uniform_real(0.05, 0.95), rng.uniform_real(1.0, 3.0),
                       1.0 + rng.uniform_real(0.0, 4.0), 1.0 + rng.uniform_real(0.0, 4.0)});
    const VertexLabel u(n, rng.subset(n, m));
    auto sv = rng.subset(n, m);
    if (sv == u.stable) continue;
    const VertexLabel v(n, sv);
    const auto wu = vertex_weight(u, certs);
    for (int i = 1; i <= n; ++i) {
      if (u.is_stable(i)) CHECK(wu[i - 1] < 0.0);
      else CHECK(wu[i - 1] >= 0.0);
    }
    const auto we = edge_weight(u, v, certs);
    const auto wb = edge_weight(v, u, certs);
    for (int i = 0; i < n; ++i) {
      CHECK(we[i] >= 0.0);
      CHECK(we[i] + wb[i] >= 0.0);
    }
  }
}

TEST_CASE("full enumeration at small sizes") {
  const auto vs = enumerate_vertices(3, 2);
  REQUIRE(vs.size() == 3);
  CHECK(vs[0].stable == std::vector<int>{1, 2});
  CHECK(vs[1].stable == std::vector<int>{1, 3});
  CHECK(vs[2].stable == std::vector<int>{2, 3});
  // Six directed edges between distinct labels.
  int edges = 0;
  for (const auto& u : vs)
    for (const auto& v : vs)
      if (!(u == v)) ++edges;
  CHECK(edges == 6);

  CHECK_THROWS_AS(enumerate_vertices(30, 15), std::invalid_argument);  // above the cap
}
