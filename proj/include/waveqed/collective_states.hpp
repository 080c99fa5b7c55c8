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

// Collective eigenstates of the identical-qubit chain, normalized with the
// unconjugated bilinear form sum_n a_n b_n (not the Hermitian product).

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>
#include <Eigen/LU>
#include <nlohmann/json.hpp>

#include "waveqed/chain_model.hpp"
#include "waveqed/effective_hamiltonian.hpp"

namespace waveqed {

inline constexpr const char* kSignConvention = "re_alpha1_positive";

struct CollectiveStateSet {
  double kd = 0.0;
  double gamma = 1.0;
  std::array<cplx, 3> energies{};     // E_i = i * lambda_i
  std::array<Amplitudes, 3> vectors;  // alpha^(i), components n = 1..3
  std::string sign_convention = kSignConvention;

  cplx lambda(int i) const { return -I * energies[i]; }
  Eigen::Matrix3cd matrix() const {
    Eigen::Matrix3cd v;
    for (int i = 0; i < 3; ++i) v.col(i) = vectors[i];
    return v;
  }
};

namespace detail {

// Bilinear normalization and sign fixing: Re alpha_1 > 0, or Im alpha_1 > 0
// when the real part vanishes.
inline Amplitudes bilinear_normalize(const Amplitudes& v) {
  const cplx norm2 = v.transpose() * v;
  Amplitudes a = v / std::sqrt(norm2);
  const double scale = a.cwiseAbs().maxCoeff();
  const double tol = 1e-12 * scale;
  const bool flip = std::abs(a(0).real()) > tol ? a(0).real() < 0.0 : a(0).imag() < 0.0;
  if (flip) a = -a;
  return a;
}

}  // namespace detail

// Symmetric states are written as (e + s R, 4, e + s R) with s = +1 for
// lambda_1 and s = -1 for lambda_2. Neither the vector nor its bilinear norm
// 4e^2 + 4seR + 32 can vanish, so the formula holds uniformly in kd with no
// 0/0 limits to resolve.
inline CollectiveStateSet eigenvectors_biorthogonal(double kd, double gamma) {
  if (!std::isfinite(kd)) throw config_error("kd must be finite");
  const ComplexRoots roots = closed_form_roots_identical(kd, gamma);
  const cplx e = std::polar(1.0, kd);
  const cplx R = std::sqrt(std::polar(1.0, 2.0 * kd) + 8.0);
  CollectiveStateSet s;
  s.kd = kd;
  s.gamma = gamma;
  for (int i = 0; i < 3; ++i) s.energies[i] = I * roots.lambda[i];
  s.vectors[0] = detail::bilinear_normalize(Amplitudes(e + R, 4.0, e + R));
  s.vectors[1] = detail::bilinear_normalize(Amplitudes(e - R, 4.0, e - R));
  s.vectors[2] = Amplitudes(1.0, 0.0, -1.0) / std::sqrt(2.0);
  return s;
}

// max |sum_n alpha_n^(i) alpha_n^(j) - delta_ij|
inline double biorthogonality_residual(const CollectiveStateSet& s) {
  const Eigen::Matrix3cd v = s.matrix();
  return (v.transpose() * v - Eigen::Matrix3cd::Identity()).cwiseAbs().maxCoeff();
}

// max_i || M alpha^(i) - lambda_i alpha^(i) ||
inline double eigen_residual(const CollectiveStateSet& s, const InteractionMatrix& m) {
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    worst = std::max(worst, (m.entries * s.vectors[i] - s.lambda(i) * s.vectors[i]).norm());
  return worst;
}

struct DecompositionCoefficients {
  std::array<cplx, 3> A{};
  int n0 = 2;
};

inline DecompositionCoefficients decompose_initial(const CollectiveStateSet& s, int n0) {
  if (n0 < 1 || n0 > 3) throw config_error("excited_index must be 1, 2 or 3");
  if (biorthogonality_residual(s) > 1e-8) throw numeric_error("state set is not bi-orthonormal");
  const Eigen::Matrix3cd v = s.matrix();
  const Eigen::PartialPivLU<Eigen::Matrix3cd> lu(v);
  // rcond is a 1-norm estimate of the reciprocal condition number.
  if (!(lu.rcond() > 1e-8)) throw numeric_error("ill-conditioned decomposition");
  Amplitudes rhs = Amplitudes::Zero();
  rhs(n0 - 1) = 1.0;
  const Amplitudes a = lu.solve(rhs);
  if ((v * a - rhs).cwiseAbs().maxCoeff() > 1e-10) throw numeric_error("decomposition residual too large");
  return {{a(0), a(1), a(2)}, n0};
}

inline Amplitudes reconstruct_amplitudes(const CollectiveStateSet& s, const DecompositionCoefficients& c,
                                         double t) {
  Amplitudes b = Amplitudes::Zero();
  for (int i = 0; i < 3; ++i) b += c.A[i] * std::exp(-I * s.energies[i] * t) * s.vectors[i];
  return b;
}

// True when kd is an odd multiple of pi/2 (within 1e-9).
inline bool is_half_integer_kd(double kd) {
  const double m = std::round(kd / (0.5 * pi));
  return std::fmod(std::abs(m), 2.0) == 1.0 && std::abs(kd - m * 0.5 * pi) < 1e-9;
}

// Rows are states, columns the components on
// {|D>|g2>, |B>|g2>, |G>|e2>} with D, B = (|e1 g3> +- |g1 e3>)/sqrt2.
inline Eigen::Matrix3cd dark_bright_projection(const CollectiveStateSet& s) {
  if (!is_half_integer_kd(s.kd)) throw config_error("dark/bright basis requires kd = (2n+1)pi/2");
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::Matrix3cd out;
  for (int i = 0; i < 3; ++i) {
    const Amplitudes& a = s.vectors[i];
    out(i, 0) = r * (a(0) + a(2));
    out(i, 1) = r * (a(0) - a(2));
    out(i, 2) = a(1);
  }
  return out;
}

inline nlohmann::json states_to_json(const CollectiveStateSet& s) {
  auto pair = [](const cplx& z) { return nlohmann::json::array({z.real(), z.imag()}); };
  nlohmann::json energies = nlohmann::json::array(), vectors = nlohmann::json::array();
  for (int i = 0; i < 3; ++i) {
    energies.push_back(pair(s.energies[i]));
    nlohmann::json v = nlohmann::json::array();
    for (int n = 0; n < 3; ++n) v.push_back(pair(s.vectors[i](n)));
    vectors.push_back(v);
  }
  return {{"kd", s.kd}, {"gamma", s.gamma}, {"energies", energies}, {"vectors", vectors},
          {"sign_convention", s.sign_convention}};
}

inline CollectiveStateSet states_from_json(const nlohmann::json& j) {
  auto z = [](const nlohmann::json& p) { return cplx(p.at(0).get<double>(), p.at(1).get<double>()); };
  CollectiveStateSet s;
  s.kd = j.at("kd").get<double>();
  s.gamma = j.at("gamma").get<double>();
  s.sign_convention = j.at("sign_convention").get<std::string>();
  for (int i = 0; i < 3; ++i) {
    s.energies[i] = z(j.at("energies").at(i));
    for (int n = 0; n < 3; ++n) s.vectors[i](n) = z(j.at("vectors").at(i).at(n));
  }
  return s;
}

}  // namespace waveqed
