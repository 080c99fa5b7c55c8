// Copyright 2026 The waveqed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// The four experiments behind the command-line tool. Each returns its table
// (and sidecar) in memory; writing files is left to the caller.

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "waveqed/amplitude_dynamics.hpp"
#include "waveqed/chain_model.hpp"
#include "waveqed/collective_states.hpp"
#include "waveqed/effective_hamiltonian.hpp"
#include "waveqed/io.hpp"
#include "waveqed/parallel.hpp"
#include "waveqed/pv_quadrature.hpp"
#include "waveqed/spectroscopy.hpp"

namespace waveqed {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitVerify = 3, kExitIo = 4 };

// Inclusive uniform grid.
struct Grid {
  double min = 0.0;
  double max = 0.0;
  std::size_t points = 1;

  std::vector<double> values() const {
    if (points == 0) throw config_error("grid needs at least one point");
    if (!std::isfinite(min) || !std::isfinite(max) || max < min) throw config_error("grid bounds invalid");
    if (points > 1 && max == min) throw config_error("grid with several points needs max > min");
    std::vector<double> v(points);
    for (std::size_t i = 0; i < points; ++i)
      v[i] = points == 1 ? min : min + (max - min) * static_cast<double>(i) / static_cast<double>(points - 1);
    if (points > 1) v.back() = max;
    return v;
  }
  nlohmann::json to_json() const { return {{"min", min}, {"max", max}, {"points", points}}; }
};

struct CommandResult {
  Table table;
  std::optional<nlohmann::json> sidecar;  // spectrum peaks
  double verify_deviation = std::numeric_limits<double>::quiet_NaN();
  double verify_tolerance = std::numeric_limits<double>::quiet_NaN();
  bool verify_failed = false;
};

// ---------------------------------------------------------------- eigen

inline CommandResult cmd_eigen(const ChainConfig& base, const std::vector<double>& kd_grid,
                               const std::vector<double>& delta_grid, bool verify, unsigned threads) {
  if (kd_grid.empty() || delta_grid.empty()) throw config_error("empty kd or delta_omega grid");
  const std::size_t nk = kd_grid.size();
  struct Point {
    ComplexRoots roots;
    double deviation;
  };
  auto points = parallel_map<Point>(nk * delta_grid.size(), threads, [&](std::size_t idx) {
    const ChainConfig c = base.with_delta_omega(delta_grid[idx / nk]).with_kd(kd_grid[idx % nk]);
    Point p{closed_form_roots_detuned(c), 0.0};
    if (verify) p.deviation = matched_distance(p.roots, numeric_eigenvalues(build_matrix(c)));
    return p;
  });
  CommandResult r;
  r.table.header = {"kd", "delta_omega", "re_l1", "im_l1", "re_l2", "im_l2", "re_l3", "im_l3"};
  double worst = 0.0;
  for (std::size_t idx = 0; idx < points.size(); ++idx) {
    const auto& l = points[idx].roots.lambda;
    r.table.rows.push_back({kd_grid[idx % nk], delta_grid[idx / nk], l[0].real(), l[0].imag(), l[1].real(),
                            l[1].imag(), l[2].real(), l[2].imag()});
    worst = std::max(worst, points[idx].deviation);
  }
  if (verify) {
    r.verify_deviation = worst;
    r.verify_tolerance = 1e-9 * base.gamma;
    r.verify_failed = !(worst <= r.verify_tolerance);
  }
  return r;
}

// ---------------------------------------------------------------- evolve

enum class Method { Ode, Closed, Collective };

inline Method parse_method(const std::string& s) {
  if (s == "ode") return Method::Ode;
  if (s == "closed") return Method::Closed;
  if (s == "collective") return Method::Collective;
  throw config_error("unknown method: " + s);
}

inline AmplitudeTrajectory trajectory_for(const ChainConfig& cfg, double t_max, double dt, Method m,
                                          std::size_t stride = 1) {
  switch (m) {
    case Method::Ode:
      return evolve_ode(cfg, t_max, dt, stride);
    case Method::Closed:
      return closed_form_trajectory(cfg, t_max, dt, stride);
    case Method::Collective: {
      require_valid(cfg);
      if (!cfg.identical()) throw config_error("collective method needs identical qubits (delta_omega = 0, gamma0 = gamma)");
      const auto states = eigenvectors_biorthogonal(cfg.kd, cfg.gamma);
      const auto coeffs = decompose_initial(states, cfg.excited_index);
      return sample_trajectory([&](double t) { return reconstruct_amplitudes(states, coeffs, t); }, t_max, dt,
                               stride);
    }
  }
  throw config_error("unknown method");
}

inline CommandResult cmd_evolve(const ChainConfig& cfg, double t_max, double dt, Method method, bool verify,
                                std::size_t stride = 1) {
  const AmplitudeTrajectory traj = trajectory_for(cfg, t_max, dt, method, stride);
  CommandResult r;
  r.table.header = {"t", "re_b1", "im_b1", "re_b2", "im_b2", "re_b3", "im_b3", "p1", "p2", "p3", "p_ph"};
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const Amplitudes& b = traj.beta[i];
    r.table.rows.push_back({traj.t_grid[i], b(0).real(), b(0).imag(), b(1).real(), b(1).imag(), b(2).real(),
                            b(2).imag(), std::norm(b(0)), std::norm(b(1)), std::norm(b(2)), traj.p_ph[i]});
  }
  if (verify) {
    double worst = 0.0;
    for (Method other : {Method::Ode, Method::Closed, Method::Collective}) {
      if (other == method || (other == Method::Collective && !cfg.identical())) continue;
      worst = std::max(worst, max_deviation(traj, trajectory_for(cfg, t_max, dt, other, stride)));
    }
    r.verify_deviation = worst;
    r.verify_tolerance = 1e-5;
    r.verify_failed = !(worst <= r.verify_tolerance);
  }
  return r;
}

// ---------------------------------------------------------------- spectrum

inline nlohmann::json peaks_json(const SpectralCurve& curve) {
  nlohmann::json j = nlohmann::json::object();
  nlohmann::json list = nlohmann::json::array();
  j["t"] = curve.t;
  for (const auto& p : curve.peaks) {
    nlohmann::json e = {{"position", p.position}, {"height", p.height}};
    e["fwhm"] = std::isfinite(p.fwhm) ? nlohmann::json(p.fwhm) : nlohmann::json(nullptr);
    list.push_back(e);
  }
  j["peaks"] = list;
  const double sep = peak_separation(curve.peaks);
  j["separation"] = std::isfinite(sep) ? nlohmann::json(sep) : nlohmann::json(nullptr);
  return j;
}

inline CommandResult cmd_spectrum(const ChainConfig& cfg, const std::vector<double>& grid, double t, double dt,
                                  const std::string& method, bool verify, unsigned threads) {
  if (!(t > 0.0)) throw config_error("spectrum evaluation time must be positive");
  if (grid.empty()) throw config_error("empty frequency grid");
  SpectralCurve curve;
  std::optional<AmplitudeTrajectory> traj;
  if (method == "numeric") {
    traj = evolve_ode(cfg, t, dt);
    curve = spectrum_numeric(*traj, cfg, grid, t, threads);
  } else if (method == "closed") {
    curve = spectrum_closed(cfg, grid, t, threads);
  } else {
    throw config_error("unknown spectrum method: " + method);
  }
  std::string note;
  try {
    curve.peaks = peak_analysis(curve);
  } catch (const std::exception& e) {
    note = e.what();
  }
  CommandResult r;
  r.table.header = {"omega_minus_Omega_over_Gamma", "S"};
  for (std::size_t i = 0; i < grid.size(); ++i) r.table.rows.push_back({grid[i], curve.s[i]});
  r.sidecar = peaks_json(curve);
  if (!note.empty()) (*r.sidecar)["note"] = note;
  if (verify) {
    // Numeric against closed form; only the special spacings have one.
    const SpecialKd special = special_kd_from(cfg);
    if (!traj) traj = evolve_ode(cfg, t, dt);
    auto err = parallel_map<double>(grid.size(), threads, [&](std::size_t i) {
      return std::abs(photon_amplitude_numeric(*traj, cfg, grid[i] * cfg.gamma, t) -
                      photon_amplitude_closed(special, grid[i] * cfg.gamma, t, cfg.excited_index).total());
    });
    auto ref = parallel_map<double>(grid.size(), threads, [&](std::size_t i) {
      return std::abs(photon_amplitude_closed(special, grid[i] * cfg.gamma, t, cfg.excited_index).total());
    });
    const double scale = *std::max_element(ref.begin(), ref.end());
    r.verify_deviation = *std::max_element(err.begin(), err.end()) / scale;
    r.verify_tolerance = 1e-4;
    r.verify_failed = !(r.verify_deviation <= r.verify_tolerance);
  }
  return r;
}

// ---------------------------------------------------------------- pvcheck

inline CommandResult cmd_pvcheck(const std::vector<double>& a_over_pi, bool verify, unsigned threads) {
  if (a_over_pi.empty()) throw config_error("empty a grid");
  for (double v : a_over_pi)
    if (!(v > 0.0)) throw config_error("a must be positive");
  auto rows = parallel_map<PvComparison>(a_over_pi.size(), threads,
                                         [&](std::size_t i) { return compare_pv(a_over_pi[i] * pi); });
  CommandResult r;
  r.table.header = {"a_over_pi", "exact", "approx", "quadrature"};
  double worst = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    r.table.rows.push_back({a_over_pi[i], rows[i].exact, rows[i].approx, rows[i].quadrature});
    worst = std::max(worst, std::abs(rows[i].exact - rows[i].quadrature));
  }
  if (verify) {
    r.verify_deviation = worst;
    r.verify_tolerance = 1e-6;
    r.verify_failed = !(worst <= r.verify_tolerance);
  }
  return r;
}

}  // namespace waveqed
