#pragma once

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ncsched/cycles.hpp"

namespace ncsched {

enum class Mode { stable, unstable };

struct Slot {
  std::vector<int> stable;  // ascending, size M
  int dwell = 1;
};

/// A scheduling policy: which M plants hold the channel at each time step.
/// Periodic policies repeat their slot list forever. Concatenated-static
/// policies play an explicit finite prefix once and then repeat a designated
/// tail, so lookups stay total.
class SchedulingPolicy {
 public:
  enum class Kind { periodic, concatenated_static };

  static SchedulingPolicy periodic(int n_plants, std::vector<Slot> slots) {
    SchedulingPolicy p;
    p.kind_ = Kind::periodic;
    p.n_plants_ = n_plants;
    p.tail_ = std::move(slots);
    p.finish_init();
    return p;
  }

  static SchedulingPolicy concatenated(int n_plants, std::vector<Slot> prefix,
                                       std::vector<Slot> tail) {
    SchedulingPolicy p;
    p.kind_ = Kind::concatenated_static;
    p.n_plants_ = n_plants;
    p.prefix_ = std::move(prefix);
    p.tail_ = std::move(tail);
    p.finish_init();
    return p;
  }

  Kind kind() const { return kind_; }
  int n_plants() const { return n_plants_; }
  int capacity() const { return capacity_; }
  long period() const { return period_; }   // of the repeating part
  long prefix_length() const { return prefix_total_; }

  /// Stable set active at time t.
  const std::vector<int>& gamma_at(long t) const {
    if (t < 0) throw std::invalid_argument("gamma_at: negative time");
    if (t < prefix_total_) return locate(prefix_cum_, prefix_, t)->stable;
    const long tm = (t - prefix_total_) % period_;
    return locate(tail_cum_, tail_, tm)->stable;
  }

  Mode sigma_at(int plant, long t) const {
    if (plant < 1 || plant > n_plants_)
      throw std::invalid_argument("sigma_at: plant index out of range");
    const auto& s = gamma_at(t);
    return std::binary_search(s.begin(), s.end(), plant) ? Mode::stable : Mode::unstable;
  }

  /// Steps per repeating period that plant i spends in stable mode.
  long stable_dwell_per_period(int plant) const {
    long d = 0;
    for (const auto& s : tail_)
      if (std::binary_search(s.stable.begin(), s.stable.end(), plant)) d += s.dwell;
    return d;
  }

  const std::vector<Slot>& period_slots() const { return tail_; }

 private:
  void finish_init() {
    if (tail_.empty()) throw std::invalid_argument("SchedulingPolicy: empty slot list");
    capacity_ = static_cast<int>(tail_.front().stable.size());
    auto check = [&](const Slot& s) {
      if (s.dwell < 1) throw std::invalid_argument("SchedulingPolicy: dwell must be >= 1");
      if (static_cast<int>(s.stable.size()) != capacity_)
        throw std::invalid_argument("SchedulingPolicy: slots with differing channel capacity");
      for (std::size_t i = 0; i < s.stable.size(); ++i) {
        if (s.stable[i] < 1 || s.stable[i] > n_plants_)
          throw std::invalid_argument("SchedulingPolicy: plant index out of range");
        if (i > 0 && s.stable[i] <= s.stable[i - 1])
          throw std::invalid_argument("SchedulingPolicy: slot sets must be strictly increasing");
      }
    };
    for (const auto& s : prefix_) check(s);
    for (const auto& s : tail_) check(s);
    prefix_total_ = build_cum(prefix_, prefix_cum_);
    period_ = build_cum(tail_, tail_cum_);
  }

  static long build_cum(const std::vector<Slot>& slots, std::vector<long>& cum) {
    cum.clear();
    long acc = 0;
    for (const auto& s : slots) {
      cum.push_back(acc);
      acc += s.dwell;
    }
    return acc;
  }

  static const Slot* locate(const std::vector<long>& cum, const std::vector<Slot>& slots,
                            long t) {
    // Last slot whose start time is <= t.
    const auto it = std::upper_bound(cum.begin(), cum.end(), t);
    return &slots[static_cast<std::size_t>(it - cum.begin()) - 1];
  }

  Kind kind_ = Kind::periodic;
  int n_plants_ = 0;
  int capacity_ = 0;
  std::vector<Slot> prefix_;  // empty for periodic policies
  std::vector<Slot> tail_;    // the repeating part
  std::vector<long> prefix_cum_;
  std::vector<long> tail_cum_;
  long prefix_total_ = 0;
  long period_ = 0;
};

/// Periodic policy from a T-contractive cycle: slot j grants the channel to
/// the stable set of vertex j for its dwell time; period is the dwell total.
inline SchedulingPolicy build_policy(const Cycle& w, const TFactors& t) {
  if (t.size() != w.length())
    throw std::invalid_argument("build_policy: |T| must equal cycle length");
  std::vector<Slot> slots;
  for (std::size_t j = 0; j < w.length(); ++j)
    slots.push_back({w.vertices[j].stable, t.dwell[j]});
  return SchedulingPolicy::periodic(w.n_plants(), std::move(slots));
}

/// Baseline that cycles fixed groups with a uniform dwell.
inline SchedulingPolicy round_robin(int n_plants, const std::vector<std::vector<int>>& groups,
                                    int dwell) {
  if (groups.empty()) throw std::invalid_argument("round_robin: no groups");
  std::vector<Slot> slots;
  for (const auto& g : groups) slots.push_back({g, dwell});
  return SchedulingPolicy::periodic(n_plants, std::move(slots));
}

/// Concatenated-static policy: play the named policies once in pattern order,
/// then repeat the tail pattern forever (defaults to the same pattern).
inline SchedulingPolicy concatenate(const std::vector<SchedulingPolicy>& policies,
                                    const std::vector<int>& pattern,
                                    const std::vector<int>& tail_pattern = {}) {
  if (policies.empty() || pattern.empty())
    throw std::invalid_argument("concatenate: empty pattern");
  const int n = policies.front().n_plants();
  const int m = policies.front().capacity();
  for (const auto& p : policies)
    if (p.n_plants() != n || p.capacity() != m)
      throw std::invalid_argument("concatenate: policies must share N and M");
  auto expand = [&](const std::vector<int>& pat) {
    std::vector<Slot> slots;
    for (int idx : pat) {
      if (idx < 0 || idx >= static_cast<int>(policies.size()))
        throw std::invalid_argument("concatenate: pattern index out of range");
      const auto& ps = policies[idx].period_slots();
      slots.insert(slots.end(), ps.begin(), ps.end());
    }
    return slots;
  };
  const auto& tail = tail_pattern.empty() ? pattern : tail_pattern;
  return SchedulingPolicy::concatenated(n, expand(pattern), expand(tail));
}

/// Text form consumed by the CLI: a period header, then one line per slot,
/// "t_start t_end {indices}".
inline void write_policy(std::ostream& os, const SchedulingPolicy& p) {
  os << "period " << p.period() << "\n";
  long t = 0;
  for (const auto& s : p.period_slots()) {
    os << t << ' ' << t + s.dwell << " {";
    for (std::size_t i = 0; i < s.stable.size(); ++i) {
      if (i) os << ',';
      os << s.stable[i];
    }
    os << "}\n";
    t += s.dwell;
  }
}

inline SchedulingPolicy read_policy(std::istream& is, int n_plants) {
  std::string word;
  long period = 0;
  if (!(is >> word) || word != "period" || !(is >> period))
    throw std::invalid_argument("read_policy: missing period header");
  std::vector<Slot> slots;
  long t0 = 0, t1 = 0;
  while (is >> t0 >> t1 >> word) {
    if (word.size() < 3 || word.front() != '{' || word.back() != '}')
      throw std::invalid_argument("read_policy: malformed slot set");
    Slot s;
    s.dwell = static_cast<int>(t1 - t0);
    std::stringstream ss(word.substr(1, word.size() - 2));
    std::string tok;
    while (std::getline(ss, tok, ',')) s.stable.push_back(std::stoi(tok));
    slots.push_back(std::move(s));
  }
  if (slots.empty()) throw std::invalid_argument("read_policy: no slots");
  SchedulingPolicy p = SchedulingPolicy::periodic(n_plants, std::move(slots));
  if (p.period() != period)
    throw std::invalid_argument("read_policy: period header disagrees with slot dwells");
  return p;
}

}  // namespace ncsched
