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

// Time evolution of the single-excitation amplitudes: fixed-step RK4 and
// the exact exponential solutions of the reduced two-mode problem.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "waveqed/chain_model.hpp"
#include "waveqed/effective_hamiltonian.hpp"

namespace waveqed {

inline Amplitudes initial_amplitudes(int n0) {
  if (n0 < 1 || n0 > 3) throw config_error("excited_index must be 1, 2 or 3");
  Amplitudes b = Amplitudes::Zero();
  b(n0 - 1) = 1.0;
  return b;
}

// 1 - sum |beta|^2, snapped to [0,1] only when within 1e-10 of a bound.
inline double emission_probability(const Amplitudes& b) {
  const double p = 1.0 - b.squaredNorm();
  if (p < -1e-6 || p > 1.0 + 1e-6)
    throw numeric_error("normalization violated beyond 1e-6 (integrator failure)");
  if (p < 0.0 && p > -1e-10) return 0.0;
  if (p > 1.0 && p < 1.0 + 1e-10) return 1.0;
  return p;
}

inline std::vector<double> photon_emission_probability(const AmplitudeTrajectory& traj) {
  if (traj.beta.empty()) return {};
  if (std::abs(traj.beta.front().squaredNorm() - 1.0) > 1e-6)
    throw numeric_error("initial state is not normalized");
  std::vector<double> p;
  p.reserve(traj.beta.size());
  for (const auto& b : traj.beta) p.push_back(emission_probability(b));
  return p;
}

inline constexpr double default_dt_factor = 1e-3;  // dt = 1e-3 / gamma

// Classical RK4 on a uniform grid t_i = i*h with h = t_max/ceil(t_max/dt).
// Every `stride`-th sample (plus the last) is stored.
inline AmplitudeTrajectory evolve_ode(const ChainConfig& cfg, double t_max, double dt,
                                      std::size_t stride = 1) {
  require_valid(cfg);
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw config_error("t_max must be positive");
  if (!(dt > 0.0) || dt > (0.01 / cfg.gamma) * (1.0 + 1e-12))
    throw config_error("dt must lie in (0, 0.01/gamma]");
  if (stride == 0) throw config_error("stride must be positive");
  const InteractionMatrix m = build_matrix(cfg);
  if (dt * numeric_eigenvalues(m).max_abs() > 0.1)
    throw config_error("step rejected: dt * max|lambda| exceeds 0.1");

  double ratio = t_max / dt;
  auto n = static_cast<std::size_t>(std::ceil(ratio));
  if (std::abs(ratio - std::round(ratio)) < 1e-9 * ratio) n = static_cast<std::size_t>(std::round(ratio));
  const double h = t_max / static_cast<double>(n);
  const Eigen::Matrix3cd& M = m.entries;

  AmplitudeTrajectory traj;
  const std::size_t kept = n / stride + 2;
  traj.t_grid.reserve(kept);
  traj.beta.reserve(kept);
  Amplitudes b = initial_amplitudes(cfg.excited_index);
  traj.t_grid.push_back(0.0);
  traj.beta.push_back(b);
  for (std::size_t i = 1; i <= n; ++i) {
    const Amplitudes k1 = M * b;
    const Amplitudes k2 = M * (b + 0.5 * h * k1);
    const Amplitudes k3 = M * (b + 0.5 * h * k2);
    const Amplitudes k4 = M * (b + h * k3);
    b += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (i % stride == 0 || i == n) {
      traj.t_grid.push_back(static_cast<double>(i) * h);
      traj.beta.push_back(b);
    }
  }
  traj.p_ph = photon_emission_probability(traj);
  return traj;
}

inline AmplitudeTrajectory evolve_ode(const ChainConfig& cfg, double t_max) {
  return evolve_ode(cfg, t_max, default_dt_factor / cfg.gamma);
}

// Reduced symmetric-sector solution. For central excitation
//   beta2 = b1 e^{l1 t} + b2 e^{l2 t},  beta_edge = a1 e^{l1 t} + a2 e^{l2 t}.
// c1 is the centre amplitude coefficient for edge excitation; it equals a1
// only for identical qubits.
struct ClosedFormCoefficients {
  cplx a1, a2, b1, b2, c1;
  cplx R;
  ComplexRoots lambda;
};

inline ClosedFormCoefficients closed_form_coefficients(const ChainConfig& cfg) {
  const InteractionMatrix m = build_matrix(cfg);
  ClosedFormCoefficients c;
  c.lambda = closed_form_roots_detuned(cfg);
  c.R = detuned_radical(cfg);
  const cplx l1 = c.lambda.lambda[0], l2 = c.lambda.lambda[1];
  const cplx gap = l1 - l2;  // = -(gamma/2) e^{ikd} R, never zero away from exceptional points
  if (std::abs(gap) == 0.0) throw numeric_error("degenerate symmetric-sector roots");
  const cplx D = m(2, 2);
  c.b1 = (D - l2) / gap;
  c.b2 = (l1 - D) / gap;
  c.a1 = m(1, 2) / gap;
  c.a2 = -c.a1;
  c.c1 = m(2, 1) / gap;
  return c;
}

struct CentralExcited {
  cplx beta2;
  cplx beta_edge;
};

inline CentralExcited closed_form_central_excited(const ClosedFormCoefficients& c, double t) {
  const cplx x1 = std::exp(c.lambda.lambda[0] * t), x2 = std::exp(c.lambda.lambda[1] * t);
  return {c.b1 * x1 + c.b2 * x2, c.a1 * x1 + c.a2 * x2};
}

inline CentralExcited closed_form_central_excited(const ChainConfig& cfg, double t) {
  if (cfg.excited_index != 2) throw config_error("central-excitation solution requires excited_index = 2");
  return closed_form_central_excited(closed_form_coefficients(cfg), t);
}

inline Amplitudes closed_form_edge_excited(const ClosedFormCoefficients& c, double t) {
  const cplx x1 = std::exp(c.lambda.lambda[0] * t), x2 = std::exp(c.lambda.lambda[1] * t);
  const cplx x3 = std::exp(c.lambda.lambda[2] * t);
  const cplx b1 = 0.5 * c.b2 * x1 + 0.5 * c.b1 * x2 + 0.5 * x3;
  return Amplitudes(b1, c.c1 * (x1 - x2), b1 - x3);
}

inline Amplitudes closed_form_edge_excited(const ChainConfig& cfg, double t) {
  if (cfg.excited_index != 1) throw config_error("edge-excitation solution requires excited_index = 1");
  return closed_form_edge_excited(closed_form_coefficients(cfg), t);
}

// Any excited_index; qubit 3 follows from qubit 1 by reflection.
inline Amplitudes closed_form_amplitudes(const ClosedFormCoefficients& c, int n0, double t) {
  if (n0 == 2) {
    const auto s = closed_form_central_excited(c, t);
    return Amplitudes(s.beta_edge, s.beta2, s.beta_edge);
  }
  Amplitudes b = closed_form_edge_excited(c, t);
  if (n0 == 3) std::swap(b(0), b(2));
  else if (n0 != 1) throw config_error("excited_index must be 1, 2 or 3");
  return b;
}

inline Amplitudes closed_form_amplitudes(const ChainConfig& cfg, double t) {
  return closed_form_amplitudes(closed_form_coefficients(cfg), cfg.excited_index, t);
}

// Samples an amplitude function on the same grid evolve_ode would use.
inline AmplitudeTrajectory sample_trajectory(const std::function<Amplitudes(double)>& f, double t_max,
                                             double dt, std::size_t stride = 1) {
  if (!(t_max > 0.0) || !(dt > 0.0)) throw config_error("t_max and dt must be positive");
  if (stride == 0) throw config_error("stride must be positive");
  double ratio = t_max / dt;
  auto n = static_cast<std::size_t>(std::ceil(ratio));
  if (std::abs(ratio - std::round(ratio)) < 1e-9 * ratio) n = static_cast<std::size_t>(std::round(ratio));
  const double h = t_max / static_cast<double>(n);
  AmplitudeTrajectory traj;
  for (std::size_t i = 0; i <= n; ++i) {
    if (i % stride != 0 && i != n) continue;
    const double t = static_cast<double>(i) * h;
    traj.t_grid.push_back(t);
    traj.beta.push_back(f(t));
  }
  traj.p_ph = photon_emission_probability(traj);
  return traj;
}

inline AmplitudeTrajectory closed_form_trajectory(const ChainConfig& cfg, double t_max, double dt,
                                                  std::size_t stride = 1) {
  require_valid(cfg);
  const auto c = closed_form_coefficients(cfg);
  const int n0 = cfg.excited_index;
  return sample_trajectory([&](double t) { return closed_form_amplitudes(c, n0, t); }, t_max, dt, stride);
}

inline double max_deviation(const AmplitudeTrajectory& a, const AmplitudeTrajectory& b) {
  if (a.size() != b.size()) throw config_error("trajectories sampled on different grids");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a.t_grid[i] - b.t_grid[i]) > 1e-12 * (1.0 + a.t_grid[i]))
      throw config_error("trajectories sampled on different grids");
    worst = std::max(worst, (a.beta[i] - b.beta[i]).cwiseAbs().maxCoeff());
  }
  return worst;
}

struct Plateau {
  double t_begin;
  double t_end;
};

// Maximal runs where |dP/dt| < threshold * gamma (central differences).
// A run reaching the final sample is the asymptotic regime; callers that
// want interior steps only can drop plateaus with t_end == t_grid.back().
inline std::vector<Plateau> find_plateaus(const AmplitudeTrajectory& traj, double gamma,
                                          double threshold = 1e-2, double min_duration = 0.0) {
  std::vector<Plateau> out;
  const std::size_t n = traj.size();
  if (n < 3 || traj.p_ph.size() != n) return out;
  bool open = false;
  double start = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1, hi = i + 1 == n ? n - 1 : i + 1;
    const double rate = (traj.p_ph[hi] - traj.p_ph[lo]) / (traj.t_grid[hi] - traj.t_grid[lo]);
    const bool flat = std::abs(rate) < threshold * gamma;
    if (flat && !open) {
      open = true;
      start = traj.t_grid[i];
    } else if (!flat && open) {
      open = false;
      if (traj.t_grid[i - 1] - start >= min_duration) out.push_back({start, traj.t_grid[i - 1]});
    }
  }
  if (open && traj.t_grid.back() - start >= min_duration) out.push_back({start, traj.t_grid.back()});
  return out;
}

// Sign changes of y located by linear interpolation.
inline std::vector<double> zero_crossings(const std::vector<double>& t, const std::vector<double>& y) {
  std::vector<double> out;
  for (std::size_t i = 1; i < std::min(t.size(), y.size()); ++i) {
    if (y[i - 1] == 0.0) {
      if (i == 1 || y[i - 2] != 0.0) out.push_back(t[i - 1]);
      continue;
    }
    if ((y[i - 1] < 0.0) != (y[i] < 0.0) && y[i] != 0.0)
      out.push_back(t[i - 1] + (t[i] - t[i - 1]) * y[i - 1] / (y[i - 1] - y[i]));
  }
  return out;
}

}  // namespace waveqed
