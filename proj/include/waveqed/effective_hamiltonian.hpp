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

// Interaction matrix M of d(beta)/dt = M beta and its characteristic roots.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <utility>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "waveqed/chain_model.hpp"

namespace waveqed {

struct InteractionMatrix {
  Eigen::Matrix3cd entries;

  // 1-based access, matching the qubit labels.
  cplx operator()(int m, int n) const { return entries(m - 1, n - 1); }
  cplx trace() const { return entries.trace(); }
  bool is_symmetric(double tol = 0.0) const {
    return (entries - entries.transpose()).cwiseAbs().maxCoeff() <= tol;
  }
  // Invariance under the 1 <-> 3 relabelling.
  bool is_reflection_symmetric(double tol = 0.0) const {
    Eigen::Matrix3cd p = Eigen::Matrix3cd::Zero();
    p(0, 2) = p(1, 1) = p(2, 0) = 1.0;
    return (p * entries * p - entries).cwiseAbs().maxCoeff() <= tol;
  }
};

// Edge-centre couplings carry (omega0/omega)^(+-1/2) sqrt(gamma gamma0); the
// detuning enters as -+i delta_omega/2 on the diagonal in the rotating frame.
inline InteractionMatrix build_matrix(const ChainConfig& cfg) {
  require_valid(cfg);
  const double g = cfg.gamma, g0 = cfg.gamma0;
  const double r = std::sqrt(cfg.omega0() / cfg.omega);
  const double cross = std::sqrt(g * g0);
  const cplx half_det = 0.5 * I * cfg.delta_omega;
  const cplx e1 = std::polar(1.0, cfg.kd);
  const cplx e2 = std::polar(1.0, 2.0 * cfg.kd);
  const cplx e0 = std::polar(1.0, cfg.k0d);

  Eigen::Matrix3cd m;
  const cplx edge = -0.5 * g - half_det;
  const cplx outer = -0.5 * g * e2;
  const cplx to_edge = -0.5 * r * cross * e0;     // M12 = M32
  const cplx to_center = -0.5 / r * cross * e1;   // M21 = M23
  m << edge, to_edge, outer,
       to_center, -0.5 * g0 + half_det, to_center,
       outer, to_edge, edge;
  return {m};
}

// Principal branch throughout. |exp(2ikd) + 8| >= 7, so no branch point is
// ever reached for identical qubits.
inline ComplexRoots closed_form_roots_identical(double kd, double gamma) {
  if (!(gamma > 0.0)) throw config_error("gamma must be positive");
  const cplx e = std::polar(1.0, kd);
  const cplx e2 = std::polar(1.0, 2.0 * kd);
  const cplx R = std::sqrt(e2 + 8.0);
  const double q = 0.25 * gamma;
  return {{-q * e2 - q * e * R - 0.5 * gamma, -q * e2 + q * e * R - 0.5 * gamma,
           0.5 * gamma * (e2 - 1.0)}};
}

// Square root appearing in lambda_{1,2} = mean -+ (gamma/4) e^{ikd} R.
// Reduces to sqrt(exp(2ikd) + 8) for identical qubits.
inline cplx detuned_radical(const ChainConfig& cfg) {
  const double gr = cfg.gamma0 / cfg.gamma;
  const cplx eps = (1.0 - gr) + 2.0 * I * (cfg.delta_omega / cfg.gamma);
  const cplx e2 = std::polar(1.0, 2.0 * cfg.kd);
  const cplx rad = e2 + 2.0 * eps + eps * eps * std::conj(e2) +
                   8.0 * gr * std::polar(1.0, cfg.k0d - cfg.kd);
  return std::sqrt(rad);
}

// Antisymmetric mode (1,0,-1) decouples; the symmetric pair solves a 2x2
// problem whose off-diagonal product is free of the frequency-ratio factors.
inline ComplexRoots closed_form_roots_detuned(const ChainConfig& cfg) {
  require_valid(cfg);
  const cplx e = std::polar(1.0, cfg.kd);
  const cplx e2 = std::polar(1.0, 2.0 * cfg.kd);
  const double q = 0.25 * cfg.gamma;
  const cplx mean = -q * (1.0 + cfg.gamma0 / cfg.gamma + e2);
  const cplx s = q * e * detuned_radical(cfg);
  return {{mean - s, mean + s, 0.5 * cfg.gamma * (e2 - 1.0) - 0.5 * I * cfg.delta_omega}};
}

namespace detail {

inline ComplexRoots eigen_qr_roots(const Eigen::Matrix3cd& m) {
  Eigen::ComplexEigenSolver<Eigen::Matrix3cd> solver(m, false);
  if (solver.info() != Eigen::Success) throw numeric_error("complex eigensolver did not converge");
  const auto& v = solver.eigenvalues();
  return {{v(0), v(1), v(2)}};
}

// Roots of l^3 + c2 l^2 + c1 l + c0 via Cardano, polished by Newton.
inline ComplexRoots cardano(cplx c2, cplx c1, cplx c0) {
  const cplx shift = -c2 / 3.0;
  const cplx p = c1 - c2 * c2 / 3.0;
  const cplx q = 2.0 * c2 * c2 * c2 / 27.0 - c2 * c1 / 3.0 + c0;
  const cplx disc = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
  // Larger-modulus branch avoids cancellation in u^3.
  cplx u3 = -q / 2.0 + disc;
  const cplx alt = -q / 2.0 - disc;
  if (std::abs(alt) > std::abs(u3)) u3 = alt;
  const cplx u = std::pow(u3, 1.0 / 3.0);
  const cplx w = std::polar(1.0, 2.0 * pi / 3.0);
  ComplexRoots r;
  for (int k = 0; k < 3; ++k) {
    const cplx uk = u * std::pow(w, k);
    const cplx vk = std::abs(uk) > 0.0 ? -p / (3.0 * uk) : cplx{0.0};
    r.lambda[k] = uk + vk + shift;
  }
  for (auto& l : r.lambda) {
    for (int it = 0; it < 2; ++it) {
      const cplx f = ((l + c2) * l + c1) * l + c0;
      const cplx df = (3.0 * l + 2.0 * c2) * l + c1;
      if (std::abs(df) == 0.0) break;
      l -= f / df;
    }
  }
  return r;
}

}  // namespace detail

// Cardano on the characteristic polynomial, falling back to QR iteration
// when roots cluster (where the cubic formula loses half the digits) or when
// the polynomial residual is poor. Result sorted by (Re, Im).
inline ComplexRoots numeric_eigenvalues(const InteractionMatrix& mat) {
  const Eigen::Matrix3cd& m = mat.entries;
  if (!m.allFinite()) throw numeric_error("matrix has non-finite entries");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const cplx tr = m.trace();
  const cplx minors = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) + m(0, 0) * m(2, 2) -
                      m(0, 2) * m(2, 0) + m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
  const cplx det = m.determinant();
  ComplexRoots r = detail::cardano(-tr, minors, -det);

  double gap = INFINITY;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) gap = std::min(gap, std::abs(r.lambda[i] - r.lambda[j]));
  double residual = std::abs(r.sum() - tr);
  for (const auto& l : r.lambda)
    residual = std::max(residual, std::abs(((l - tr) * l + minors) * l - det));
  const bool finite = std::all_of(r.lambda.begin(), r.lambda.end(),
                                  [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
  if (!finite || gap < 1e-4 * scale || residual > 1e-13 * scale * scale * scale)
    r = detail::eigen_qr_roots(m);
  return r.sorted(1e-12 * scale);
}

struct CouplingRates {
  double J;      // coherent exchange
  double Gamma;  // collective dissipative rate
};

inline CouplingRates coherent_dissipative_rates(const ChainConfig& cfg, int m, int n) {
  if (m < 1 || m > 3 || n < 1 || n > 3) throw config_error("qubit indices must be 1, 2 or 3");
  const double phase = cfg.kd * std::abs(m - n);
  if (m == n) return {0.0, cfg.gamma};
  return {0.5 * cfg.gamma * std::sin(phase), cfg.gamma * std::cos(phase)};
}

}  // namespace waveqed
