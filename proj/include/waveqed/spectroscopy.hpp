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

// Emitted photon amplitude and spectral density S = (gamma/omega)|f|^2.
//
// f is the photon amplitude with the waveguide coupling factored out,
// f = omega * gamma_k / g_k, so that for a single decaying mode at rate 3G/2
// the long-time limit is S = G W / ((w - W)^2 + (3G/2)^2) with no extra
// constant.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

#include "waveqed/amplitude_dynamics.hpp"
#include "waveqed/chain_model.hpp"
#include "waveqed/parallel.hpp"

namespace waveqed {

struct Peak {
  double position;  // (w - W)/G
  double height;
  double fwhm;      // units of G, NaN when a half-height crossing is missing
};

struct SpectralCurve {
  std::vector<double> omega_grid;  // (w - W)/G
  std::vector<double> s;
  double t = 0.0;
  std::vector<Peak> peaks;
};

// (exp(i z t) - 1)/z, continuous through z = 0.
inline cplx phase_integral(cplx z, double t) {
  const cplx x = I * z * t;
  if (std::abs(x) < 1e-3) return I * t * (1.0 + x / 2.0 + x * x / 6.0 + x * x * x / 24.0);
  return (std::exp(x) - 1.0) / z;
}

// Emission phases for a photon at detuning `offset` = w - W (same units as
// gamma): kd runs with frequency, kd -> kd (w/W); the centre term carries the
// coupling ratio sqrt(gamma0/gamma).
inline Amplitudes emission_weights(const ChainConfig& cfg, double offset) {
  const double running = cfg.kd * (1.0 + offset / cfg.omega);
  return Amplitudes(std::polar(1.0, running), std::sqrt(cfg.gamma0 / cfg.gamma), std::polar(1.0, -running));
}

// f(w, t) by trapezoid quadrature over the trajectory samples up to t.
inline cplx photon_amplitude_numeric(const AmplitudeTrajectory& traj, const ChainConfig& cfg, double offset,
                                     double t) {
  require_valid(cfg);
  const std::size_t n = traj.size();
  if (n == 0 || traj.beta.size() != n) throw config_error("empty trajectory");
  if (t < 0.0 || t > traj.t_grid.back() * (1.0 + 1e-12) + 1e-15)
    throw config_error("evaluation time lies outside the trajectory");
  if (t == 0.0) return 0.0;
  const Amplitudes w = emission_weights(cfg, offset);
  const double theta = offset + 0.5 * cfg.delta_omega;
  // On a uniform grid the phase advances by a fixed factor; it is re-anchored
  // with an exact polar every 64 samples to keep rounding drift negligible.
  const double h = n > 1 ? traj.t_grid[1] - traj.t_grid[0] : 0.0;
  const cplx step = std::polar(1.0, theta * h);
  cplx phase = std::polar(1.0, theta * traj.t_grid[0]);
  auto advance = [&](std::size_t i) {
    const bool uniform = std::abs(traj.t_grid[i] - traj.t_grid[i - 1] - h) <= 1e-12 * h;
    phase = (uniform && i % 64 != 0) ? phase * step : std::polar(1.0, theta * traj.t_grid[i]);
  };
  auto integrand = [&](std::size_t i) {
    return w.cwiseProduct(traj.beta[i]).sum() * std::polar(1.0, theta * traj.t_grid[i]);
  };
  auto sample = [&](std::size_t i) { return w.cwiseProduct(traj.beta[i]).sum() * phase; };
  cplx sum = 0.0;
  cplx prev = sample(0);
  std::size_t i = 1;
  for (; i < n && traj.t_grid[i] <= t; ++i) {
    advance(i);
    const cplx cur = sample(i);
    sum += 0.5 * (traj.t_grid[i] - traj.t_grid[i - 1]) * (prev + cur);
    prev = cur;
  }
  if (i < n && traj.t_grid[i - 1] < t) {
    // Partial last interval: linear interpolation of the integrand.
    const double frac = (t - traj.t_grid[i - 1]) / (traj.t_grid[i] - traj.t_grid[i - 1]);
    const cplx end = prev + frac * (integrand(i) - prev);
    sum += 0.5 * (t - traj.t_grid[i - 1]) * (prev + end);
  }
  return -I * cfg.omega * sum;
}

inline double spectral_density(cplx f, double gamma, double omega_nominal) {
  return gamma / omega_nominal * std::norm(f);
}

// G W / (x^2 + (3G/2)^2), the long-time single-mode lineshape.
inline double lorentzian_limit(double offset, double gamma, double omega_nominal) {
  return gamma * omega_nominal / (offset * offset + 2.25 * gamma * gamma);
}

// Spacings for which the stationary-phase closed forms are available.
struct SpecialKd {
  enum class Kind { IntegerPi, HalfIntegerPi };
  Kind kind;
  int n;  // kd = n pi, or kd = (2n+1) pi/2
  double gamma;
  double omega;

  double nominal_kd() const { return kind == Kind::IntegerPi ? n * pi : (2 * n + 1) * 0.5 * pi; }
};

inline SpecialKd special_kd_from(const ChainConfig& cfg) {
  require_valid(cfg);
  if (!cfg.identical()) throw config_error("closed-form spectra require identical qubits");
  const double m = std::round(cfg.kd / (0.5 * pi));
  if (std::abs(cfg.kd - m * 0.5 * pi) > 1e-9) throw config_error("closed-form spectra need kd = n pi or (2n+1) pi/2");
  const auto mi = static_cast<int>(m);
  if (mi % 2 == 0) return {SpecialKd::Kind::IntegerPi, mi / 2, cfg.gamma, cfg.omega};
  return {SpecialKd::Kind::HalfIntegerPi, (mi - 1) / 2, cfg.gamma, cfg.omega};
}

// Closed-form f split into the non-decaying (dark-state) part and the part
// built from decaying modes.
struct ClosedPhotonAmplitude {
  cplx dark;
  cplx radiative;
  cplx total() const { return dark + radiative; }
};

inline ClosedPhotonAmplitude photon_amplitude_closed(const SpecialKd& c, double offset, double t, int n0) {
  if (n0 < 1 || n0 > 3) throw config_error("excited_index must be 1, 2 or 3");
  if (t < 0.0) throw config_error("t must be non-negative");
  const double G = c.gamma;
  const double s = (c.n % 2 == 0) ? 1.0 : -1.0;
  // Running phase kd (w/W) expanded about the nominal value so that the
  // nominal cos/sin are exact and resonance gives exactly zero dark terms.
  const double shift = c.nominal_kd() * offset / c.omega;
  const double cs = std::cos(shift), sn = std::sin(shift);
  ClosedPhotonAmplitude out{};
  if (c.kind == SpecialKd::Kind::IntegerPi) {
    const double cos_run = s * cs;  // cos(n pi) = s, sin(n pi) = 0
    const cplx e_run = s * cplx(cs, sn);
    const cplx p0 = phase_integral(offset, t);
    const cplx p3 = phase_integral(cplx(offset, 1.5 * G), t);
    if (n0 == 2) {
      out.dark = -(2.0 / 3.0) * (1.0 - s * cos_run) * p0;
      out.radiative = -(1.0 / 3.0) * (1.0 + 2.0 * s * cos_run) * p3;
    } else {
      const cplx near = n0 == 1 ? e_run : std::conj(e_run);
      const cplx far = std::conj(near);
      out.dark = -(1.0 / 3.0) * (2.0 * near - far - s) * p0;
      out.radiative = -(1.0 / 3.0) * (s + 2.0 * cos_run) * p3;
    }
  } else {
    // cos((2n+1)pi/2) = 0, sin((2n+1)pi/2) = s.
    const double cos_run = -s * sn, sin_run = s * cs;
    const double r7 = std::sqrt(7.0), w = 0.25 * r7 * G;
    const cplx pp = phase_integral(cplx(offset + w, 0.25 * G), t);
    const cplx pm = phase_integral(cplx(offset - w, 0.25 * G), t);
    if (n0 == 2) {
      // The centre amplitude is e^{-Gt/4}(cos - sin/sqrt7) for every n, so
      // the i/sqrt7 weights carry no (-1)^n.
      out.radiative = -(0.5 * (1.0 + I / r7) - 2.0 * s / r7 * cos_run) * pp -
                      (0.5 * (1.0 - I / r7) + 2.0 * s / r7 * cos_run) * pm;
    } else {
      const double mirror = n0 == 1 ? 1.0 : -1.0;
      out.radiative = -(0.5 * (1.0 - I / r7) * cos_run - s / r7) * pp -
                      (0.5 * (1.0 + I / r7) * cos_run + s / r7) * pm -
                      mirror * I * sin_run * phase_integral(cplx(offset, G), t);
    }
  }
  out.dark *= c.omega;
  out.radiative *= c.omega;
  return out;
}

// Local maxima (3-point stencil) at least `min_relative_height` of the
// global maximum; FWHM by linear interpolation of the half-height crossings.
inline std::vector<Peak> peak_analysis(const SpectralCurve& curve, double min_relative_height = 0.05) {
  const auto& x = curve.omega_grid;
  const auto& y = curve.s;
  const std::size_t n = x.size();
  if (n < 3 || y.size() != n) throw config_error("spectral curve needs at least 3 samples");
  for (std::size_t i = 1; i < n; ++i)
    if (!(x[i] > x[i - 1]) || x[i] - x[i - 1] > 0.05 * (1.0 + 1e-9))
      throw config_error("spectral grid must be ascending with at least 20 points per gamma");
  const double top = *std::max_element(y.begin(), y.end());
  std::vector<Peak> peaks;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(y[i] > y[i - 1] && y[i] >= y[i + 1]) || y[i] < min_relative_height * top) continue;
    const double half = 0.5 * y[i];
    double left = std::numeric_limits<double>::quiet_NaN(), right = left;
    for (std::size_t j = i; j > 0; --j) {
      if (y[j - 1] > y[j]) break;  // rising again: neighbour peak before half height
      if (y[j - 1] < half) {
        left = x[j - 1] + (half - y[j - 1]) * (x[j] - x[j - 1]) / (y[j] - y[j - 1]);
        break;
      }
    }
    for (std::size_t j = i; j + 1 < n; ++j) {
      if (y[j + 1] > y[j]) break;
      if (y[j + 1] < half) {
        right = x[j] + (y[j] - half) * (x[j + 1] - x[j]) / (y[j] - y[j + 1]);
        break;
      }
    }
    peaks.push_back({x[i], y[i], right - left});
  }
  if (peaks.empty()) throw numeric_error("no peak found");
  return peaks;
}

// Distance between the two highest peaks (NaN if fewer than two).
inline double peak_separation(const std::vector<Peak>& peaks) {
  if (peaks.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  std::vector<Peak> p = peaks;
  std::partial_sort(p.begin(), p.begin() + 2, p.end(),
                    [](const Peak& a, const Peak& b) { return a.height > b.height; });
  return std::abs(p[0].position - p[1].position);
}

// S on a grid of (w - W)/G from an existing trajectory.
inline SpectralCurve spectrum_numeric(const AmplitudeTrajectory& traj, const ChainConfig& cfg,
                                      const std::vector<double>& grid, double t, unsigned threads = 1) {
  SpectralCurve curve;
  curve.omega_grid = grid;
  curve.t = t;
  curve.s = parallel_map<double>(grid.size(), threads, [&](std::size_t i) {
    return spectral_density(photon_amplitude_numeric(traj, cfg, grid[i] * cfg.gamma, t), cfg.gamma, cfg.omega);
  });
  return curve;
}

inline SpectralCurve spectrum_closed(const ChainConfig& cfg, const std::vector<double>& grid, double t,
                                     unsigned threads = 1) {
  const SpecialKd c = special_kd_from(cfg);
  SpectralCurve curve;
  curve.omega_grid = grid;
  curve.t = t;
  curve.s = parallel_map<double>(grid.size(), threads, [&](std::size_t i) {
    return spectral_density(photon_amplitude_closed(c, grid[i] * cfg.gamma, t, cfg.excited_index).total(),
                            cfg.gamma, cfg.omega);
  });
  return curve;
}

}  // namespace waveqed
