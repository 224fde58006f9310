#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ncsched/certificates.hpp"
#include "ncsched/cycles.hpp"
#include "ncsched/plants.hpp"

namespace ncsched {

enum class DesignStatus {
  success,
  not_candidate_contractive,
  no_feasible_certificates,  // some plant has no feasible grid point at all
  no_t_factors,              // certificates exist but no dwell vector was found
};

struct DesignResult {
  DesignStatus status = DesignStatus::no_t_factors;
  std::vector<ModeCertificate> certificates;
  std::optional<TFactors> t_factors;
  std::vector<double> xi;
  std::vector<double> margins;
  std::string detail;
  DesignGrid grid;
  int t_max = 0;
};

namespace detail {

/// A certificate can only take part in some T-contractive assignment if its
/// own Xi_i can be pushed negative somewhere in the dwell box [1, t_max]^n;
/// the minimum is attained at t_max on negative coefficients and 1 elsewhere.
inline bool individually_feasible(const Cycle& w, const ModeCertificate& cert, int t_max) {
  const std::vector<CertScalars> one{cert.scalars()};
  double best = 0.0;
  const std::size_t n = w.length();
  for (std::size_t j = 0; j < n; ++j) {
    const double wv = w.vertices[j].is_stable(cert.plant)
                          ? -std::abs(std::log(cert.lambda_s))
                          : std::abs(std::log(cert.lambda_u));
    best += (wv < 0.0) ? wv * t_max : wv;
    const auto& u = w.vertices[j];
    const auto& v = w.vertices[(j + 1) % n];
    const bool su = u.is_stable(cert.plant);
    const bool sv = v.is_stable(cert.plant);
    if (su && !sv) best += std::log(cert.mu_su);
    if (!su && sv) best += std::log(cert.mu_us);
  }
  return best < -kXiMargin;
}

inline std::optional<ModeCertificate> next_individually_feasible(const Cycle& w,
                                                                 CertificateStream& stream,
                                                                 int t_max, bool& saw_any) {
  while (auto cert = stream.next()) {
    saw_any = true;
    if (individually_feasible(w, *cert, t_max)) return cert;
  }
  return std::nullopt;
}

}  // namespace detail

/// The full design loop for a fixed candidate contractive cycle: per plant,
/// walk the certificate grid in deterministic order (ascending lambda_s, then
/// lambda_u) to the first candidate that could possibly work, then search for
/// common dwell times. When the joint search fails, streams advance one plant
/// at a time, round-robin, each advance followed by a fresh dwell search,
/// until success or the advance budget runs out. Everything is deterministic.
inline DesignResult design_tcontractive_cycle(const NCSConfig& cfg, const Cycle& w,
                                              const DesignGrid& grid, int t_max,
                                              int max_advances = 64) {
  DesignResult res;
  res.grid = grid;
  res.t_max = t_max;
  if (w.n_plants() != cfg.n_plants() || w.capacity() != cfg.capacity)
    throw std::invalid_argument("design_tcontractive_cycle: cycle and config disagree on N or M");
  if (!is_candidate_contractive(w, cfg.n_plants())) {
    res.status = DesignStatus::not_candidate_contractive;
    res.detail = "some plant is never granted the channel along this cycle";
    return res;
  }

  auto streams = design_certificates(cfg, grid);
  std::vector<ModeCertificate> chosen;
  for (auto& st : streams) {
    bool saw_any = false;
    auto cert = detail::next_individually_feasible(w, st, t_max, saw_any);
    if (!cert) {
      res.status = saw_any ? DesignStatus::no_t_factors : DesignStatus::no_feasible_certificates;
      res.detail = "plant " + std::to_string(st.plant()) +
                   (saw_any ? " has no certificate whose own dwell budget closes within t_max"
                            : " admits no feasible grid point");
      return res;
    }
    chosen.push_back(std::move(*cert));
  }

  int advances = 0;
  std::size_t rr = 0;
  while (true) {
    if (auto t = find_T_factors(w, chosen, t_max)) {
      res.status = DesignStatus::success;
      res.certificates = chosen;
      const auto rep = is_T_contractive(w, *t, chosen);
      res.xi = rep.xi;
      res.margins = rep.margins;
      res.t_factors = std::move(t);
      return res;
    }
    // Joint infeasibility: advance one stream and retry. Later grid points
    // trade decay margin for better conditioned P, hence smaller jumps.
    bool advanced = false;
    for (std::size_t k = 0; k < streams.size() && !advanced; ++k) {
      const std::size_t idx = (rr + k) % streams.size();
      bool saw_any = false;
      if (auto cert = detail::next_individually_feasible(w, streams[idx], t_max, saw_any)) {
        chosen[idx] = std::move(*cert);
        rr = idx + 1;
        advanced = true;
      }
    }
    if (!advanced || ++advances > max_advances) {
      res.status = DesignStatus::no_t_factors;
      res.detail =
          "grid search exhausted without common dwell times; this proves nothing about "
          "non-existence - a finer grid or a larger t_max may still succeed";
      return res;
    }
  }
}

// ---------------------------------------------------------------------------
// Design artifact serialization (consumed by the schedule/simulate commands).

namespace detail {

inline nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from_json(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw std::invalid_argument(std::string(what) + ": expected a nested numeric array");
  Matrix m(j.size(), j[0].size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (j[i].size() != m.cols())
      throw std::invalid_argument(std::string(what) + ": ragged matrix rows");
    for (std::size_t c = 0; c < m.cols(); ++c) m(i, c) = j[i][c].get<double>();
  }
  return m;
}

}  // namespace detail

inline nlohmann::json design_to_json(const DesignResult& res, const Cycle& w) {
  nlohmann::json j;
  j["cycle"] = nlohmann::json::array();
  for (const auto& v : w.vertices) j["cycle"].push_back(v.stable);
  j["n_plants"] = w.n_plants();
  j["capacity"] = w.capacity();
  j["t_factors"] = res.t_factors ? nlohmann::json(res.t_factors->dwell) : nlohmann::json();
  j["xi"] = res.xi;
  j["grid"] = {{"h_s", res.grid.h_s},
               {"h_u", res.grid.h_u},
               {"kappa_min", res.grid.kappa_min},
               {"lmi_tol", res.grid.lmi_tol},
               {"schur_tol", res.grid.schur_tol}};
  j["t_max"] = res.t_max;
  j["certificates"] = nlohmann::json::array();
  for (const auto& c : res.certificates) {
    j["certificates"].push_back({{"plant", c.plant},
                                 {"lambda_s", c.lambda_s},
                                 {"lambda_u", c.lambda_u},
                                 {"mu_su", c.mu_su},
                                 {"mu_us", c.mu_us},
                                 {"kappa_s", c.kappa_s},
                                 {"kappa_u", c.kappa_u},
                                 {"P_s", detail::matrix_to_json(c.P_s)},
                                 {"P_u", detail::matrix_to_json(c.P_u)}});
  }
  return j;
}

struct LoadedDesign {
  Cycle cycle;
  TFactors t_factors;
  std::vector<ModeCertificate> certificates;
};

inline LoadedDesign design_from_json(const nlohmann::json& j) {
  if (!j.contains("cycle") || !j.contains("t_factors") || !j.contains("n_plants"))
    throw std::invalid_argument("design artifact: missing cycle, t_factors, or n_plants");
  const int n = j.at("n_plants").get<int>();
  std::vector<VertexLabel> vs;
  for (const auto& s : j.at("cycle")) vs.emplace_back(n, s.get<std::vector<int>>());
  if (j.at("t_factors").is_null())
    throw std::invalid_argument("design artifact: no t_factors (infeasible design?)");
  TFactors t(j.at("t_factors").get<std::vector<int>>());
  std::vector<ModeCertificate> certs;
  for (const auto& cj : j.at("certificates")) {
    ModeCertificate c;
    c.plant = cj.at("plant").get<int>();
    c.lambda_s = cj.at("lambda_s").get<double>();
    c.lambda_u = cj.at("lambda_u").get<double>();
    c.mu_su = cj.at("mu_su").get<double>();
    c.mu_us = cj.at("mu_us").get<double>();
    c.kappa_s = cj.at("kappa_s").get<double>();
    c.kappa_u = cj.at("kappa_u").get<double>();
    c.P_s = detail::matrix_from_json(cj.at("P_s"), "P_s");
    c.P_u = detail::matrix_from_json(cj.at("P_u"), "P_u");
    certs.push_back(std::move(c));
  }
  return {Cycle(std::move(vs)), std::move(t), std::move(certs)};
}

}  // namespace ncsched
