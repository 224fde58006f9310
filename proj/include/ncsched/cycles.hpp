#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ncsched/graph.hpp"
#include "ncsched/rng.hpp"

namespace ncsched {

/// Strictness margin: a cycle counts as contractive only when every Xi_i is
/// below -kXiMargin, so float-boundary cases never come out "contractive".
inline constexpr double kXiMargin = 1e-12;

/// A cycle on the allocation digraph: ordered distinct vertices with the
/// closing edge (v_{n-1}, v_0) implicit.
struct Cycle {
  std::vector<VertexLabel> vertices;

  explicit Cycle(std::vector<VertexLabel> vs) : vertices(std::move(vs)) {
    if (vertices.size() < 2) throw std::invalid_argument("Cycle: need at least two vertices");
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      if (vertices[i].n_plants != vertices[0].n_plants ||
          vertices[i].capacity() != vertices[0].capacity())
        throw std::invalid_argument("Cycle: vertices from different graphs");
      for (std::size_t j = i + 1; j < vertices.size(); ++j)
        if (vertices[i] == vertices[j])
          throw std::invalid_argument("Cycle: vertices must be pairwise distinct");
    }
  }

  std::size_t length() const { return vertices.size(); }
  int n_plants() const { return vertices.front().n_plants; }
  int capacity() const { return vertices.front().capacity(); }
};

/// Per-vertex dwell times.
struct TFactors {
  std::vector<int> dwell;

  explicit TFactors(std::vector<int> d) : dwell(std::move(d)) {
    for (int t : dwell)
      if (t < 1) throw std::invalid_argument("TFactors: entries must be positive");
  }

  std::size_t size() const { return dwell.size(); }
  long period() const {
    long s = 0;
    for (int t : dwell) s += t;
    return s;
  }
};

struct TransitionCounts {
  int n_su = 0;  // stable -> unstable transitions over the closed cycle
  int n_us = 0;
};

/// Every plant must be granted the channel at some vertex; otherwise all of
/// its weight contributions are nonnegative and no dwell choice can help.
inline bool is_candidate_contractive(const Cycle& w, int n_plants) {
  for (int i = 1; i <= n_plants; ++i) {
    bool covered = false;
    for (const auto& v : w.vertices)
      if (v.is_stable(i)) {
        covered = true;
        break;
      }
    if (!covered) return false;
  }
  return true;
}

/// Mode-switch counts of one plant around the closed cycle. A closed cycle
/// returns the plant to its initial mode, so n_su == n_us always.
inline TransitionCounts transition_counts(const Cycle& w, int plant) {
  TransitionCounts c;
  const std::size_t n = w.length();
  for (std::size_t j = 0; j < n; ++j) {
    const bool from = w.vertices[j].is_stable(plant);
    const bool to = w.vertices[(j + 1) % n].is_stable(plant);
    if (from && !to) ++c.n_su;
    if (!from && to) ++c.n_us;
  }
  return c;
}

namespace detail {

/// Per-plant decomposition of Xi: Xi_i(T) = sum_j coeff[i][j] T_j + edge[i].
struct XiForm {
  std::vector<std::vector<double>> coeff;  // [plant][vertex]
  std::vector<double> edge;                // [plant]
};

inline XiForm xi_form(const Cycle& w, std::span<const CertScalars> certs) {
  const int n_plants = w.n_plants();
  require_cert_coverage(certs, n_plants, "xi");
  const std::size_t n = w.length();
  XiForm f;
  f.coeff.assign(n_plants, std::vector<double>(n, 0.0));
  f.edge.assign(n_plants, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const WeightVector wv = vertex_weight(w.vertices[j], certs);
    for (int i = 0; i < n_plants; ++i) f.coeff[i][j] = wv[i];
    const WeightVector we = edge_weight(w.vertices[j], w.vertices[(j + 1) % n], certs);
    for (int i = 0; i < n_plants; ++i) f.edge[i] += we[i];
  }
  return f;
}

inline std::vector<double> eval_xi(const XiForm& f, const std::vector<int>& dwell) {
  std::vector<double> xs(f.edge);
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < dwell.size(); ++j) xs[i] += f.coeff[i][j] * dwell[j];
  return xs;
}

}  // namespace detail

/// Xi_i(W) = sum_j wbar_i(v_j) T_j + sum_j wunder_i(v_j, v_{j+1}), including
/// the closing edge.
inline std::vector<double> xi(const Cycle& w, const TFactors& t,
                              std::span<const CertScalars> certs) {
  if (t.size() != w.length()) throw std::invalid_argument("xi: |T| must equal cycle length");
  return detail::eval_xi(detail::xi_form(w, certs), t.dwell);
}

inline std::vector<double> xi(const Cycle& w, const TFactors& t,
                              const std::vector<ModeCertificate>& certs) {
  const auto s = to_scalars(certs);
  return xi(w, t, std::span<const CertScalars>(s));
}

struct ContractivityReport {
  bool contractive = false;
  std::vector<double> xi;
  std::vector<double> margins;  // eps_i = -Xi_i
};

inline ContractivityReport is_T_contractive(const Cycle& w, const TFactors& t,
                                            std::span<const CertScalars> certs) {
  ContractivityReport rep;
  rep.xi = xi(w, t, certs);
  rep.contractive = true;
  for (double x : rep.xi) {
    rep.margins.push_back(-x);
    if (!(x < -kXiMargin)) rep.contractive = false;
  }
  return rep;
}

inline ContractivityReport is_T_contractive(const Cycle& w, const TFactors& t,
                                            const std::vector<ModeCertificate>& certs) {
  const auto s = to_scalars(certs);
  return is_T_contractive(w, t, std::span<const CertScalars>(s));
}

namespace detail {

/// Lower bound of Xi_i over all completions of a partial dwell assignment:
/// assigned vertices contribute exactly, free ones their best case.
inline double xi_lower_bound(const XiForm& f, int plant, const std::vector<int>& dwell,
                             std::size_t assigned, int t_max) {
  double v = f.edge[plant];
  const auto& c = f.coeff[plant];
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (j < assigned) v += c[j] * dwell[j];
    else v += (c[j] < 0.0) ? c[j] * t_max : c[j];  // T_j in [1, t_max]
  }
  return v;
}

inline bool all_feasible(const std::vector<double>& xs) {
  return std::all_of(xs.begin(), xs.end(), [](double x) { return x < -kXiMargin; });
}

/// Exhaustive lexicographic search with branch-and-bound pruning. Returns the
/// lexicographically smallest feasible dwell vector.
inline std::optional<std::vector<int>> search_lex(const XiForm& f, std::size_t n, int t_max) {
  const int n_plants = static_cast<int>(f.edge.size());
  std::vector<int> dwell(n, 1);
  // Depth-first over positions; values ascend so the first hit is lex-smallest.
  std::vector<int> stack_val(n, 0);
  std::size_t depth = 0;
  stack_val[0] = 1;
  while (true) {
    if (stack_val[depth] > t_max) {
      if (depth == 0) break;
      --depth;
      ++stack_val[depth];
      continue;
    }
    dwell[depth] = stack_val[depth];
    bool prune = false;
    for (int i = 0; i < n_plants; ++i)
      if (xi_lower_bound(f, i, dwell, depth + 1, t_max) >= -kXiMargin) {
        prune = true;
        break;
      }
    if (prune) {
      ++stack_val[depth];
      continue;
    }
    if (depth + 1 == n) {
      if (all_feasible(eval_xi(f, dwell))) return dwell;
      ++stack_val[depth];
      continue;
    }
    ++depth;
    stack_val[depth] = 1;
  }
  return std::nullopt;
}

/// Heuristic for long cycles: smallest feasible uniform dwell if one exists;
/// otherwise grow the dwell of the most helpful vertex for the worst plant
/// until feasible or capped. Either way, finish with a greedy sweep that
/// shrinks dwells one step at a time while feasibility holds.
inline std::optional<std::vector<int>> search_large(const XiForm& f, std::size_t n, int t_max) {
  const int n_plants = static_cast<int>(f.edge.size());
  std::vector<int> dwell;
  std::vector<double> xs;
  for (int u = 1; u <= t_max; ++u) {
    std::vector<int> cand(n, u);
    auto cx = eval_xi(f, cand);
    if (all_feasible(cx)) {
      dwell = std::move(cand);
      xs = std::move(cx);
      break;
    }
  }
  if (dwell.empty()) {
    // Demand-raising pass from all-ones: repeatedly bump the dwell of the
    // stable vertex that improves the currently worst plant the most.
    // Incremental Xi updates keep this linear in N per step.
    std::vector<int> cand(n, 1);
    auto cx = eval_xi(f, cand);
    while (true) {
      int worst = -1;
      for (int i = 0; i < n_plants; ++i)
        if (!(cx[i] < -kXiMargin) && (worst < 0 || cx[i] > cx[worst])) worst = i;
      if (worst < 0) {
        dwell = std::move(cand);
        xs = std::move(cx);
        break;
      }
      std::size_t best_j = n;
      double best_gain = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (cand[j] >= t_max) continue;
        const double gain = -f.coeff[worst][j];
        if (gain > best_gain) {
          best_gain = gain;
          best_j = j;
        }
      }
      if (best_j == n) return std::nullopt;  // worst plant cannot be helped
      ++cand[best_j];
      for (int i = 0; i < n_plants; ++i) cx[i] += f.coeff[i][best_j];
    }
  }
  // Greedy reduction sweep.
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t j = 0; j < n; ++j) {
      while (dwell[j] > 1) {
        for (int i = 0; i < n_plants; ++i) xs[i] -= f.coeff[i][j];
        if (all_feasible(xs)) {
          --dwell[j];
          changed = true;
        } else {
          for (int i = 0; i < n_plants; ++i) xs[i] += f.coeff[i][j];
          break;
        }
      }
    }
  }
  return dwell;
}

}  // namespace detail

/// Feasibility search for dwell times making W T-contractive, over
/// [1, t_max]^n. For n <= 6 the result is the lexicographically smallest
/// feasible vector (exhaustive search with per-plant pruning); longer cycles
/// use the uniform-scan/greedy heuristic, which may miss solutions the way
/// any finite grid procedure does.
inline std::optional<TFactors> find_T_factors(const Cycle& w,
                                              std::span<const CertScalars> certs,
                                              int t_max) {
  if (t_max < 1) throw std::invalid_argument("find_T_factors: t_max must be positive");
  if (!is_candidate_contractive(w, w.n_plants())) return std::nullopt;
  const auto f = detail::xi_form(w, certs);
  const std::size_t n = w.length();
  const auto dwell = (n <= 6) ? detail::search_lex(f, n, t_max)
                              : detail::search_large(f, n, t_max);
  if (!dwell) return std::nullopt;
  return TFactors(*dwell);
}

inline std::optional<TFactors> find_T_factors(const Cycle& w,
                                              const std::vector<ModeCertificate>& certs,
                                              int t_max) {
  const auto s = to_scalars(certs);
  return find_T_factors(w, std::span<const CertScalars>(s), t_max);
}

// ---------------------------------------------------------------------------
// Sufficiency constructions for M = 1 and M >= N/2.

struct SufficiencyReport {
  std::vector<double> values;  // per-plant condition value; positive = pass
  bool pass = true;
};

/// M = 1 condition: |ln lambda_s| - (N-1)|ln lambda_u| > 0 per plant.
inline SufficiencyReport check_prop3(std::span<const CertScalars> certs, int n_plants) {
  require_cert_coverage(certs, n_plants, "check_prop3");
  SufficiencyReport rep;
  for (const auto& c : certs) {
    const double v =
        std::abs(std::log(c.lambda_s)) - (n_plants - 1) * std::abs(std::log(c.lambda_u));
    rep.values.push_back(v);
    if (!(v > 0.0)) rep.pass = false;
  }
  return rep;
}

/// M >= N/2 condition: |ln lambda_s| - |ln lambda_u| > 0 per plant.
inline SufficiencyReport check_prop4(std::span<const CertScalars> certs, int n_plants) {
  require_cert_coverage(certs, n_plants, "check_prop4");
  SufficiencyReport rep;
  for (const auto& c : certs) {
    const double v = std::abs(std::log(c.lambda_s)) - std::abs(std::log(c.lambda_u));
    rep.values.push_back(v);
    if (!(v > 0.0)) rep.pass = false;
  }
  return rep;
}

namespace detail {

/// Smallest positive integer T with coef*T + offset < 0, where coef < 0.
inline int smallest_uniform_dwell(double coef, double offset) {
  const double ratio = offset / (-coef);
  int t = static_cast<int>(std::floor(ratio)) + 1;
  if (t < 1) t = 1;
  while (!(coef * t + offset < 0.0)) ++t;  // guard against float boundary
  return t;
}

inline void require_sufficiency(const SufficiencyReport& rep, const char* who) {
  if (rep.pass) return;
  for (std::size_t i = 0; i < rep.values.size(); ++i)
    if (!(rep.values[i] > 0.0))
      throw std::invalid_argument(std::string(who) + ": sufficiency condition fails for plant " +
                                  std::to_string(i + 1));
}

}  // namespace detail

/// Rotation cycle for M = 1: vertex j stabilizes plant j+1 alone, with the
/// smallest common dwell that closes every plant's budget
/// (-|ln lambda_s| + (N-1)|ln lambda_u|) T + ln mu_su + ln mu_us < 0.
inline std::pair<Cycle, TFactors> construct_prop3_cycle(std::span<const CertScalars> certs,
                                                        int n_plants) {
  const auto rep = check_prop3(certs, n_plants);
  detail::require_sufficiency(rep, "construct_prop3_cycle");
  std::vector<VertexLabel> vs;
  for (int i = 1; i <= n_plants; ++i) vs.emplace_back(n_plants, std::vector<int>{i});
  Cycle w(std::move(vs));
  int t = 1;
  for (int i = 0; i < n_plants; ++i) {
    const double offset = std::log(certs[i].mu_su) + std::log(certs[i].mu_us);
    t = std::max(t, detail::smallest_uniform_dwell(-rep.values[i], offset));
  }
  TFactors tf(std::vector<int>(n_plants, t));
  if (!is_T_contractive(w, tf, certs).contractive)
    throw std::logic_error("construct_prop3_cycle: constructed cycle failed verification");
  return {std::move(w), std::move(tf)};
}

/// Two-vertex cycle for M >= N/2: v1 takes the complement of v0's stable set,
/// topped up to capacity with the highest-indexed plants of v0. Uniform dwell
/// from the worst-case budget (-|ln lambda_s| + |ln lambda_u|) T + ln mu_su +
/// ln mu_us < 0.
inline std::pair<Cycle, TFactors> construct_prop4_cycle(std::span<const CertScalars> certs,
                                                        int n_plants, int capacity,
                                                        const std::vector<int>& v0_stable) {
  if (2 * capacity < n_plants)
    throw std::invalid_argument("construct_prop4_cycle: requires M >= N/2");
  const auto rep = check_prop4(certs, n_plants);
  detail::require_sufficiency(rep, "construct_prop4_cycle");
  VertexLabel v0(n_plants, v0_stable);
  if (v0.capacity() != capacity)
    throw std::invalid_argument("construct_prop4_cycle: v0 stable set must have size M");
  std::vector<int> v1_stable;
  for (int i = 1; i <= n_plants; ++i)
    if (!v0.is_stable(i)) v1_stable.push_back(i);
  for (auto it = v0.stable.rbegin();
       it != v0.stable.rend() && static_cast<int>(v1_stable.size()) < capacity; ++it)
    v1_stable.push_back(*it);
  std::sort(v1_stable.begin(), v1_stable.end());
  Cycle w({v0, VertexLabel(n_plants, v1_stable)});
  int t = 1;
  for (int i = 0; i < n_plants; ++i) {
    const double offset = std::log(certs[i].mu_su) + std::log(certs[i].mu_us);
    t = std::max(t, detail::smallest_uniform_dwell(-rep.values[i], offset));
  }
  TFactors tf(std::vector<int>{t, t});
  if (!is_T_contractive(w, tf, certs).contractive)
    throw std::logic_error("construct_prop4_cycle: constructed cycle failed verification");
  return {std::move(w), std::move(tf)};
}

/// Random candidate contractive cycle: draw M-subsets until every plant has
/// been picked at least once, keeping the first occurrence of each distinct
/// subset as a vertex. Deterministic under the seed.
inline Cycle generate_candidate_cycle(int n_plants, int capacity, std::uint64_t seed) {
  if (capacity <= 0 || capacity >= n_plants)
    throw std::invalid_argument("generate_candidate_cycle: require 0 < M < N");
  Rng rng(seed);
  std::vector<VertexLabel> vs;
  std::set<std::vector<int>> seen_subsets;
  std::vector<bool> covered(static_cast<std::size_t>(n_plants) + 1, false);
  int n_covered = 0;
  while (n_covered < n_plants) {
    std::vector<int> s = rng.subset(n_plants, capacity);
    for (int i : s)
      if (!covered[i]) {
        covered[i] = true;
        ++n_covered;
      }
    if (seen_subsets.insert(s).second) vs.emplace_back(n_plants, std::move(s));
  }
  return Cycle(std::move(vs));
}

}  // namespace ncsched
