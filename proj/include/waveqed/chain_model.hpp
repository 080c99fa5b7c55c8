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

// Parameter and result types shared by every module.
//
// Units: rates and frequencies share one unit (canonically Gamma = 1) and
// times are measured in 1/Gamma. Amplitudes live in the rotating frame where
// each qubit's own transition frequency has been removed.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

namespace waveqed {

using cplx = std::complex<double>;
using Amplitudes = Eigen::Vector3cd;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

// Invalid parameters, grids or options. Maps to CLI exit code 2.
class config_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical self-check failed (normalization drift, bad conditioning,
// non-convergence).
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Three qubits at x = -d, 0, +d. The two edge qubits share (gamma, omega);
// the central one has (gamma0, omega - delta_omega).
struct ChainConfig {
  double gamma = 1.0;
  double gamma0 = 1.0;
  double omega = 1000.0;
  double delta_omega = 0.0;
  double kd = 0.0;
  double k0d = 0.0;  // derived, kept consistent by validate_config
  int excited_index = 2;

  bool operator==(const ChainConfig&) const = default;

  double omega0() const { return omega - delta_omega; }
  bool identical() const { return delta_omega == 0.0 && gamma0 == gamma; }

  // Sanctioned mutation paths: each returns a revalidated copy.
  ChainConfig with_kd(double v) const;
  ChainConfig with_delta_omega(double v) const;
  ChainConfig with_gamma0(double v) const;
  ChainConfig with_excited(int n0) const;
};

inline double derived_k0d(double kd, double omega, double delta_omega) {
  return kd * ((omega - delta_omega) / omega);
}

inline ChainConfig validate_config(ChainConfig c) {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(c.gamma) || c.gamma <= 0.0) throw config_error("gamma must be positive and finite");
  if (!finite(c.gamma0) || c.gamma0 <= 0.0) throw config_error("gamma0 must be positive and finite");
  if (!finite(c.omega) || c.omega <= 0.0) throw config_error("omega must be positive and finite");
  if (!finite(c.delta_omega) || std::abs(c.delta_omega) >= c.omega)
    throw config_error("|delta_omega| must be finite and below omega");
  if (!finite(c.kd) || c.kd < 0.0) throw config_error("kd must be finite and non-negative");
  if (c.excited_index < 1 || c.excited_index > 3) throw config_error("excited_index must be 1, 2 or 3");
  c.k0d = derived_k0d(c.kd, c.omega, c.delta_omega);
  return c;
}

// Entry guard used by the numeric modules: rejects configs that bypassed
// validate_config or were edited field by field afterwards.
inline const ChainConfig& require_valid(const ChainConfig& c) {
  if (validate_config(c) != c) throw config_error("config not validated (k0d inconsistent)");
  return c;
}

inline ChainConfig ChainConfig::with_kd(double v) const {
  ChainConfig c = *this;
  c.kd = v;
  return validate_config(c);
}
inline ChainConfig ChainConfig::with_delta_omega(double v) const {
  ChainConfig c = *this;
  c.delta_omega = v;
  return validate_config(c);
}
inline ChainConfig ChainConfig::with_gamma0(double v) const {
  ChainConfig c = *this;
  c.gamma0 = v;
  return validate_config(c);
}
inline ChainConfig ChainConfig::with_excited(int n0) const {
  ChainConfig c = *this;
  c.excited_index = n0;
  return validate_config(c);
}

// Flat JSON object. Every key is optional (defaults above) but unknown keys
// are rejected; k0d is derived and never read from input.
inline nlohmann::json config_to_json(const ChainConfig& c) {
  return nlohmann::json{{"gamma", c.gamma},         {"gamma0", c.gamma0}, {"omega", c.omega},
                        {"delta_omega", c.delta_omega}, {"kd", c.kd},       {"excited_index", c.excited_index}};
}

inline ChainConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw config_error("config must be a JSON object");
  ChainConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "excited_index") {
      if (!value.is_number_integer()) throw config_error("excited_index must be an integer");
      c.excited_index = value.get<int>();
      continue;
    }
    double* slot = nullptr;
    if (key == "gamma") slot = &c.gamma;
    else if (key == "gamma0") slot = &c.gamma0;
    else if (key == "omega") slot = &c.omega;
    else if (key == "delta_omega") slot = &c.delta_omega;
    else if (key == "kd") slot = &c.kd;
    else throw config_error("unknown config key: " + key);
    if (!value.is_number()) throw config_error("config key " + key + " must be a number");
    *slot = value.get<double>();
  }
  return validate_config(c);
}

// Triple of characteristic roots. Closed-form routines keep formula labels
// (lambda[0] is lambda_1 etc.); numeric_eigenvalues returns sorted order.
struct ComplexRoots {
  std::array<cplx, 3> lambda{};

  cplx sum() const { return lambda[0] + lambda[1] + lambda[2]; }
  double max_abs() const {
    return std::max({std::abs(lambda[0]), std::abs(lambda[1]), std::abs(lambda[2])});
  }
  double max_real() const {
    return std::max({lambda[0].real(), lambda[1].real(), lambda[2].real()});
  }
  // Ascending by real part, ties (within tol) broken by imaginary part.
  ComplexRoots sorted(double tol = 1e-12) const {
    ComplexRoots r = *this;
    std::sort(r.lambda.begin(), r.lambda.end(), [tol](const cplx& a, const cplx& b) {
      if (std::abs(a.real() - b.real()) > tol) return a.real() < b.real();
      return a.imag() < b.imag();
    });
    return r;
  }
};

// Largest distance between two root triples under the best of the six
// pairings. Used to compare label-ordered against sort-ordered results.
inline double matched_distance(const ComplexRoots& a, const ComplexRoots& b) {
  std::array<int, 3> p{0, 1, 2};
  double best = INFINITY;
  do {
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) worst = std::max(worst, std::abs(a.lambda[i] - b.lambda[p[i]]));
    best = std::min(best, worst);
  } while (std::next_permutation(p.begin(), p.end()));
  return best;
}

struct AmplitudeTrajectory {
  std::vector<double> t_grid;
  std::vector<Amplitudes> beta;
  std::vector<double> p_ph;

  std::size_t size() const { return t_grid.size(); }
};

}  // namespace waveqed
