#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ncsched/bigint.hpp"
#include "ncsched/certificates.hpp"

namespace ncsched {

/// One vertex of the channel-allocation digraph, identified by the set of
/// plants it puts in stable mode. Two vertices are the same allocation exactly
/// when their stable sets agree, so vertices are never materialized beyond
/// the labels in use: the graph is complete and C(N, M) can reach ~1e23.
struct VertexLabel {
  int n_plants = 0;
  std::vector<int> stable;  // strictly increasing, size M, entries in 1..N

  VertexLabel(int n, std::vector<int> stable_set)
      : n_plants(n), stable(std::move(stable_set)) {
    if (n < 2) throw std::invalid_argument("VertexLabel: need at least two plants");
    if (stable.empty() || static_cast<int>(stable.size()) >= n)
      throw std::invalid_argument("VertexLabel: stable set size must satisfy 0 < M < N");
    for (std::size_t i = 0; i < stable.size(); ++i) {
      if (stable[i] < 1 || stable[i] > n)
        throw std::invalid_argument("VertexLabel: plant index out of range");
      if (i > 0 && stable[i] <= stable[i - 1])
        throw std::invalid_argument("VertexLabel: stable set must be strictly increasing");
    }
  }

  bool is_stable(int plant) const {
    return std::binary_search(stable.begin(), stable.end(), plant);
  }

  int capacity() const { return static_cast<int>(stable.size()); }

  bool operator==(const VertexLabel& o) const {
    return n_plants == o.n_plants && stable == o.stable;
  }

  std::string to_string() const {
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < stable.size(); ++i) {
      if (i) os << ',';
      os << stable[i];
    }
    os << '}';
    return os.str();
  }
};

using WeightVector = std::vector<double>;

/// |V| = C(N, M), exact.
inline BigUint vertex_count(int n, int m) {
  if (m <= 0 || m >= n) throw std::invalid_argument("vertex_count: require 0 < M < N");
  return binomial(static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(m));
}

inline void require_cert_coverage(std::span<const CertScalars> certs, int n_plants,
                                  const char* who) {
  if (static_cast<int>(certs.size()) != n_plants)
    throw std::invalid_argument(std::string(who) + ": certificates must cover all plants");
}

/// Vertex weight: -|ln lambda_s| on the plants granted the channel, +|ln
/// lambda_u| on the rest. Stable components are strictly negative, unstable
/// ones nonnegative.
inline WeightVector vertex_weight(const VertexLabel& v, std::span<const CertScalars> certs) {
  require_cert_coverage(certs, v.n_plants, "vertex_weight");
  WeightVector w(v.n_plants);
  for (int i = 1; i <= v.n_plants; ++i) {
    const CertScalars& c = certs[i - 1];
    w[i - 1] = v.is_stable(i) ? -std::abs(std::log(c.lambda_s))
                              : std::abs(std::log(c.lambda_u));
  }
  return w;
}

/// Edge weight for the transition u -> v: ln mu_su where a plant leaves the
/// channel, ln mu_us where it joins, 0 where its mode is unchanged.
inline WeightVector edge_weight(const VertexLabel& u, const VertexLabel& v,
                                std::span<const CertScalars> certs) {
  if (u == v) throw std::invalid_argument("edge_weight: self-loops are not in the edge set");
  if (u.n_plants != v.n_plants)
    throw std::invalid_argument("edge_weight: vertices from different graphs");
  require_cert_coverage(certs, u.n_plants, "edge_weight");
  WeightVector w(u.n_plants, 0.0);
  for (int i = 1; i <= u.n_plants; ++i) {
    const bool su = u.is_stable(i);
    const bool sv = v.is_stable(i);
    if (su && !sv) w[i - 1] = std::log(certs[i - 1].mu_su);
    else if (!su && sv) w[i - 1] = std::log(certs[i - 1].mu_us);
  }
  return w;
}

/// All M-subsets of 1..N in lexicographic order. Guarded by a cap since the
/// count grows combinatorially; callers above the cap must work with explicit
/// labels instead.
inline std::vector<VertexLabel> enumerate_vertices(int n, int m,
                                                   std::uint64_t cap = 1000000) {
  const BigUint count = vertex_count(n, m);
  if (count.to_double() > static_cast<double>(cap))
    throw std::invalid_argument("enumerate_vertices: vertex count " + count.to_string() +
                                " exceeds enumeration cap");
  std::vector<VertexLabel> out;
  std::vector<int> subset(m);
  for (int i = 0; i < m; ++i) subset[i] = i + 1;
  while (true) {
    out.emplace_back(n, subset);
    int i = m - 1;
    while (i >= 0 && subset[i] == n - (m - 1 - i)) --i;
    if (i < 0) break;
    ++subset[i];
    for (int j = i + 1; j < m; ++j) subset[j] = subset[j - 1] + 1;
  }
  return out;
}

}  // namespace ncsched
