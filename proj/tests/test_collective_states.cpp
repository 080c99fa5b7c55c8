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

#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "waveqed/amplitude_dynamics.hpp"
#include "waveqed/collective_states.hpp"

using namespace waveqed;

namespace {

ChainConfig identical(double kd, int n0) {
  ChainConfig c;
  c.kd = kd;
  c.excited_index = n0;
  return validate_config(c);
}

double vec_dist(const Amplitudes& a, const Amplitudes& b) { return (a - b).cwiseAbs().maxCoeff(); }

// Residuals checked against the matrix of the full model at the same kd.
void expect_consistent(double kd, double tol = 1e-10) {
  const auto s = eigenvectors_biorthogonal(kd, 1.0);
  EXPECT_LT(biorthogonality_residual(s), tol) << kd;
  EXPECT_LT(eigen_residual(s, build_matrix(identical(kd, 2))), tol) << kd;
}

}  // namespace

TEST(CollectiveStates, ResidualsOnGrid) {
  for (int i = 0; i < 500; ++i) {
    const double kd = 4 * pi * (i + 0.5) / 500.0;
    expect_consistent(kd);
  }
}

TEST(CollectiveStates, ResidualsAtLimitPoints) {
  for (int n = 0; n < 4; ++n) {
    expect_consistent(2 * pi * n);
    expect_consistent((2 * n + 1) * pi);
    expect_consistent((2 * n + 1) * pi / 2);
    // just off the limits the formulas stay smooth
    expect_consistent(2 * pi * n + 1e-9);
    expect_consistent((2 * n + 1) * pi - 1e-9);
  }
}

TEST(CollectiveStates, FullWaveLimitVectors) {
  const Amplitudes bright = Amplitudes(1, 1, 1) / std::sqrt(3.0);
  const Amplitudes dark = Amplitudes(1, -2, 1) / std::sqrt(6.0);
  const Amplitudes anti = Amplitudes(1, 0, -1) / std::sqrt(2.0);
  for (int n = 0; n < 3; ++n) {
    const auto s = eigenvectors_biorthogonal(2 * pi * n, 1.0);
    EXPECT_LT(vec_dist(s.vectors[0], bright), 1e-12);
    EXPECT_LT(vec_dist(s.vectors[1], dark), 1e-12);
    EXPECT_LT(vec_dist(s.vectors[2], anti), 1e-15);
    EXPECT_NEAR(std::abs(s.lambda(0) + 1.5), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(s.lambda(1)), 0.0, 1e-12);
  }
}

// At odd multiples of pi the neighbour coupling flips sign, so the centre
// component alternates: (1,2,1)/sqrt6 is dark and (1,-1,1)/sqrt3 radiates.
TEST(CollectiveStates, HalfWaveLimitVectors) {
  for (int n = 0; n < 3; ++n) {
    const double kd = (2 * n + 1) * pi;
    const auto s = eigenvectors_biorthogonal(kd, 1.0);
    EXPECT_LT(vec_dist(s.vectors[0], Amplitudes(1, 2, 1) / std::sqrt(6.0)), 1e-12);
    EXPECT_LT(vec_dist(s.vectors[1], Amplitudes(1, -1, 1) / std::sqrt(3.0)), 1e-12);
    EXPECT_NEAR(std::abs(s.lambda(0)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(s.lambda(1) + 1.5), 0.0, 1e-12);
    // the roles of the two symmetric states are exchanged relative to 2 pi n
    const auto full = eigenvectors_biorthogonal(2 * pi * n, 1.0);
    EXPECT_NEAR(std::abs(s.vectors[0](1)), std::abs(full.vectors[1](1)), 1e-12);
    EXPECT_NEAR(std::abs(s.vectors[1](1)), std::abs(full.vectors[0](1)), 1e-12);
  }
}

TEST(CollectiveStates, QuarterWaveFirstComponent) {
  const double s7 = std::sqrt(7.0);
  const cplx expected = cplx(s7, -1.0) / (std::sqrt(2.0) * std::sqrt(cplx(7.0, -5.0 * s7)));
  const auto s = eigenvectors_biorthogonal(pi / 2, 1.0);
  EXPECT_LT(std::abs(s.vectors[0](0) - expected), 1e-12);
  EXPECT_LT(std::abs(s.lambda(0) - cplx(-0.25, -0.25 * s7)), 1e-12);
}

TEST(CollectiveStates, AntisymmetricStateIsKdIndependent) {
  for (double kd : {0.0, 0.4, pi / 2, 2.9, 7.7}) {
    const auto s = eigenvectors_biorthogonal(kd, 1.0);
    EXPECT_EQ(s.vectors[2](1), cplx(0.0));
    EXPECT_EQ(s.vectors[2](0), -s.vectors[2](2));
    EXPECT_LT(std::abs(s.energies[2] - I * 0.5 * (std::polar(1.0, 2 * kd) - 1.0)), 1e-14);
  }
}

TEST(CollectiveStates, SignConventionIsDeterministic) {
  for (int i = 0; i < 200; ++i) {
    const auto s = eigenvectors_biorthogonal(0.063 * i, 1.0);
    EXPECT_EQ(s.sign_convention, kSignConvention);
    for (int k = 0; k < 2; ++k) EXPECT_GT(s.vectors[k](0).real(), 0.0);
  }
}

TEST(CollectiveStates, ScalesWithGamma) {
  const auto a = eigenvectors_biorthogonal(1.7, 1.0), b = eigenvectors_biorthogonal(1.7, 2.5);
  for (int i = 0; i < 3; ++i) {
    EXPECT_LT(std::abs(b.energies[i] - 2.5 * a.energies[i]), 1e-13);
    EXPECT_LT(vec_dist(a.vectors[i], b.vectors[i]), 1e-15);
  }
  EXPECT_THROW(eigenvectors_biorthogonal(1.0, 0.0), config_error);
}

TEST(Decomposition, FullWaveCentreExcitation) {
  const auto c = decompose_initial(eigenvectors_biorthogonal(2 * pi, 1.0), 2);
  EXPECT_LT(std::abs(c.A[0] - 1.0 / std::sqrt(3.0)), 1e-12);
  EXPECT_LT(std::abs(c.A[1] + std::sqrt(6.0) / 3.0), 1e-12);
  EXPECT_LT(std::abs(c.A[2]), 1e-15);
}

TEST(Decomposition, CentreExcitationNeverFeedsAntisymmetricState) {
  for (int i = 0; i < 100; ++i) {
    const auto c = decompose_initial(eigenvectors_biorthogonal(0.1257 * i, 1.0), 2);
    EXPECT_LT(std::abs(c.A[2]), 1e-14);
  }
}

TEST(Decomposition, SatisfiesInitialCondition) {
  for (int n0 = 1; n0 <= 3; ++n0)
    for (double kd : {0.0, 0.3, pi / 2, pi, 5.1}) {
      const auto s = eigenvectors_biorthogonal(kd, 1.0);
      const auto c = decompose_initial(s, n0);
      EXPECT_LT(vec_dist(reconstruct_amplitudes(s, c, 0.0), initial_amplitudes(n0)), 1e-10);
    }
}

TEST(Decomposition, RejectsBadInput) {
  const auto s = eigenvectors_biorthogonal(1.0, 1.0);
  EXPECT_THROW(decompose_initial(s, 0), config_error);
  EXPECT_THROW(decompose_initial(s, 4), config_error);
  auto broken = s;
  broken.vectors[0] *= 2.0;
  EXPECT_THROW(decompose_initial(broken, 1), numeric_error);
  auto degenerate = s;
  degenerate.vectors[1] = degenerate.vectors[0];
  EXPECT_THROW(decompose_initial(degenerate, 1), numeric_error);
}

TEST(Reconstruction, FullWaveCentreAmplitude) {
  const auto s = eigenvectors_biorthogonal(2 * pi, 1.0);
  const auto c = decompose_initial(s, 2);
  for (double t : {0.0, 0.5, 2.0, 10.0}) {
    const cplx b2 = reconstruct_amplitudes(s, c, t)(1);
    EXPECT_LT(std::abs(b2 - (std::exp(-1.5 * t) / 3.0 + 2.0 / 3.0)), 1e-12);
  }
}

TEST(Reconstruction, MatchesFrozenOdeValue) {
  const Amplitudes frozen(cplx(0.09683054040216355, 0.14200217413757454),
                          cplx(-0.14767413087043912, -0.3041162750319186),
                          cplx(0.06448530024398968, 0.05555921751198628));
  const auto s = eigenvectors_biorthogonal(1.1, 1.0);
  const Amplitudes b = reconstruct_amplitudes(s, decompose_initial(s, 1), 3.0);
  EXPECT_LT(vec_dist(b, frozen), 1e-12);
  const auto traj = evolve_ode(identical(1.1, 1), 3.0, 1e-3);
  EXPECT_LT(vec_dist(b, traj.beta.back()), 1e-6);
}

TEST(Reconstruction, AgreesWithClosedFormOnRandomConfigs) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> kd_dist(0.0, 4 * pi), t_dist(0.0, 20.0);
  for (int i = 0; i < 20; ++i) {
    const auto cfg = identical(kd_dist(rng), 1 + i % 3);
    const auto s = eigenvectors_biorthogonal(cfg.kd, cfg.gamma);
    const auto c = decompose_initial(s, cfg.excited_index);
    for (int k = 0; k < 5; ++k) {
      const double t = t_dist(rng);
      EXPECT_LT(vec_dist(reconstruct_amplitudes(s, c, t), closed_form_amplitudes(cfg, t)), 1e-8) << cfg.kd;
      EXPECT_LT(vec_dist(reconstruct_amplitudes(s, c, t), oracle::amplitudes_expm(cfg, t)), 1e-8) << cfg.kd;
    }
  }
}

// Zero-width states keep a finite share of the excitation for every n0.
TEST(Reconstruction, DarkStatesRetainExcitation) {
  for (int n = 0; n < 5; ++n) {
    const auto s = eigenvectors_biorthogonal(n * pi, 1.0);
    for (int n0 = 1; n0 <= 3; ++n0) {
      const auto c = decompose_initial(s, n0);
      Amplitudes limit = Amplitudes::Zero();
      bool participates = false;
      for (int i = 0; i < 3; ++i) {
        if (std::abs(s.lambda(i).real()) > 1e-12) continue;
        limit += c.A[i] * s.vectors[i];
        participates = participates || std::abs(c.A[i]) > 0.1;
      }
      EXPECT_TRUE(participates) << n << " " << n0;
      EXPECT_GT(limit.cwiseAbs().maxCoeff(), 0.1);
      EXPECT_LT(vec_dist(reconstruct_amplitudes(s, c, 60.0), limit), 1e-12);
    }
  }
}

TEST(DarkBright, AntisymmetricStateIsPureBright) {
  for (int n = 0; n < 3; ++n) {
    const auto p = dark_bright_projection(eigenvectors_biorthogonal((2 * n + 1) * pi / 2, 1.0));
    EXPECT_LT(std::abs(p(2, 0)), 1e-15);
    EXPECT_LT(std::abs(p(2, 1) - 1.0), 1e-15);
    EXPECT_LT(std::abs(p(2, 2)), 1e-15);
  }
}

TEST(DarkBright, SymmetricStateDarkComponent) {
  const auto s = eigenvectors_biorthogonal(pi / 2, 1.0);
  const auto p = dark_bright_projection(s);
  EXPECT_LT(std::abs(p(0, 0) - std::sqrt(2.0) * s.vectors[0](0)), 1e-15);
  EXPECT_LT(std::abs(p(0, 1)), 1e-15);
  EXPECT_EQ(p(0, 2), s.vectors[0](1));
}

TEST(DarkBright, ChangeOfBasisIsUnitaryOnEdgePair) {
  const auto p = dark_bright_projection(eigenvectors_biorthogonal(3 * pi / 2, 1.0));
  const auto s = eigenvectors_biorthogonal(3 * pi / 2, 1.0);
  for (int i = 0; i < 3; ++i) {
    const double edge = std::norm(s.vectors[i](0)) + std::norm(s.vectors[i](2));
    EXPECT_NEAR(std::norm(p(i, 0)) + std::norm(p(i, 1)), edge, 1e-15);
  }
}

TEST(DarkBright, RejectsOtherPhases) {
  EXPECT_THROW(dark_bright_projection(eigenvectors_biorthogonal(1.0, 1.0)), config_error);
  EXPECT_THROW(dark_bright_projection(eigenvectors_biorthogonal(pi, 1.0)), config_error);
  EXPECT_NO_THROW(dark_bright_projection(eigenvectors_biorthogonal(5 * pi / 2, 1.0)));
}

TEST(StatesJson, RoundTripIsExact) {
  const auto s = eigenvectors_biorthogonal(2.345, 1.3);
  const auto back = states_from_json(nlohmann::json::parse(states_to_json(s).dump()));
  EXPECT_EQ(back.kd, s.kd);
  EXPECT_EQ(back.gamma, s.gamma);
  EXPECT_EQ(back.sign_convention, s.sign_convention);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(back.energies[i], s.energies[i]);
    EXPECT_EQ(back.vectors[i], s.vectors[i]);
  }
}
