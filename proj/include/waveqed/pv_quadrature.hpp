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

// Principal value P int_0^inf cos(a x)/(x - 1) dx three ways: through the
// sine and cosine integrals, through the -pi sin(a) approximation that
// underlies the local-in-time equations, and by direct quadrature.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include "waveqed/chain_model.hpp"

namespace waveqed {

struct SiCi {
  double si;
  double ci;
};

// Si(x) = int_0^x sin t/t dt,  Ci(x) = -int_x^inf cos t/t dt.
// Power series up to x = 4, continued fraction for E1(ix) beyond.
inline SiCi si_ci(double x) {
  if (!(x > 0.0)) {
    if (x == 0.0) throw config_error("Ci is undefined at x = 0");
    throw config_error("si_ci requires x > 0");
  }
  constexpr double eps = 1e-16;
  if (x <= 4.0) {
    const double x2 = x * x;
    double si = 0.0, ci = 0.0;
    double term = x;  // x^(2k+1)/(2k+1)!, signed
    for (int k = 0; k < 60; ++k) {
      const double add = term / (2 * k + 1);
      si += add;
      term *= -x2 / ((2.0 * k + 2) * (2.0 * k + 3));
      if (std::abs(add) < eps * std::abs(si)) break;
    }
    term = -x2 / 2.0;  // x^(2k)/(2k)!, signed
    for (int k = 1; k < 60; ++k) {
      const double add = term / (2 * k);
      ci += add;
      term *= -x2 / ((2.0 * k + 1) * (2.0 * k + 2));
      if (std::abs(add) < eps * (std::abs(ci) + 1e-300)) break;
    }
    return {si, std::numbers::egamma + std::log(x) + ci};
  }
  // Modified Lentz evaluation of E1(ix) e^{ix}.
  constexpr double tiny = std::numeric_limits<double>::min() / eps;
  cplx b(1.0, x);
  cplx c = 1.0 / tiny;
  cplx d = 1.0 / b;
  cplx h = d;
  for (int i = 2; i < 10000; ++i) {
    const double a = -static_cast<double>(i - 1) * (i - 1);
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const cplx del = c * d;
    h *= del;
    if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < eps) {
      h *= cplx(std::cos(x), -std::sin(x));
      return {0.5 * pi + h.imag(), -h.real()};
    }
  }
  throw numeric_error("continued fraction for Si/Ci did not converge");
}

inline double pv_exact(double a) {
  if (!(a > 0.0)) throw config_error("pv_exact requires a > 0");
  const SiCi s = si_ci(a);
  return -std::cos(a) * s.ci - std::sin(a) * (s.si + 0.5 * pi);
}

inline double pv_approx(double a) { return -pi * std::sin(a); }

// |Ci(a)| + |Si(a) - pi/2|, a pointwise bound on |exact - approx|.
inline double pv_error_envelope(double a) {
  const SiCi s = si_ci(a);
  return std::abs(s.ci) + std::abs(s.si - 0.5 * pi);
}

namespace detail {

template <int N>
struct GaussLegendre {
  std::array<double, N> x{}, w{};
  GaussLegendre() {
    for (int i = 0; i < (N + 1) / 2; ++i) {
      double z = std::cos(pi * (i + 0.75) / (N + 0.5));
      double dp = 1.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= N; ++k) {
          const double p2 = ((2.0 * k - 1) * z * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = N * (z * p1 - p0) / (z * z - 1.0);
        const double dz = p1 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      x[i] = -z;
      x[N - 1 - i] = z;
      w[i] = w[N - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
  }
};

template <class F>
double gauss20(F&& f, double lo, double hi) {
  static const GaussLegendre<20> rule;
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  double s = 0.0;
  for (int i = 0; i < 20; ++i) s += rule.w[i] * f(mid + half * rule.x[i]);
  return s * half;
}

template <class F>
double gauss_panels(F&& f, double lo, double hi, int panels) {
  double s = 0.0;
  const double h = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) s += gauss20(f, lo + p * h, p + 1 == panels ? hi : lo + (p + 1) * h);
  return s;
}

// Euler transform of sum_j (-1)^j u_j from the first `m` terms.
inline double euler_sum(const std::vector<double>& u, std::size_t m) {
  std::vector<double> diff(u.begin(), u.begin() + static_cast<std::ptrdiff_t>(m));
  double s = 0.0, sign = 1.0, pow2 = 0.5;
  for (std::size_t n = 0; n < m; ++n) {
    s += sign * diff[0] * pow2;
    for (std::size_t j = 0; j + 1 < diff.size(); ++j) diff[j] = diff[j + 1] - diff[j];
    diff.pop_back();
    sign = -sign;
    pow2 *= 0.5;
  }
  return s;
}

// int_{x0}^inf cos(a x)/(x - pole) dx for x0 > pole: Gauss-Legendre up to the
// first zero of cos(a x), half periods summed directly to `cutoff`, the
// alternating remainder by Euler transform.
inline double oscillatory_tail(double a, double x0, double pole, double cutoff) {
  auto f = [a, pole](double x) { return std::cos(a * x) / (x - pole); };
  const double period = pi / a;
  const double k0 = std::floor(x0 / period - 0.5) + 1.0;
  double z = (k0 + 0.5) * period;
  // Up to the first zero the 1/(x - pole) factor may vary much faster than
  // cos(ax) when a is small, so panels double in length away from the pole.
  double total = 0.0;
  for (double lo = x0; lo < z;) {
    const double hi = std::min(z, pole + 2.0 * (lo - pole));
    total += gauss_panels(f, lo, hi, std::max(1, static_cast<int>(std::ceil((hi - lo) / period))));
    lo = hi;
  }
  // At least 40 half periods are summed directly so the Euler remainder starts
  // where successive terms are already close in size.
  const double direct_end = std::max(cutoff, 40.0 * period);
  while (z < direct_end) {
    total += gauss20(f, z, z + period);
    z += period;
  }
  constexpr std::size_t terms = 40;
  std::vector<double> u(terms);
  double first = 0.0;
  for (std::size_t j = 0; j < terms; ++j) {
    const double v = gauss20(f, z + j * period, z + (j + 1) * period);
    if (j == 0) first = v;
    u[j] = (j % 2 == 0 ? 1.0 : -1.0) * v;
  }
  if (first == 0.0) return total;
  const double sign = first > 0.0 ? 1.0 : -1.0;
  for (auto& v : u) v *= sign;
  const double s_lo = euler_sum(u, terms / 2), s_hi = euler_sum(u, terms);
  if (!(std::abs(s_hi - s_lo) <= 1e-12 * (1.0 + std::abs(s_hi))) || u.back() <= 0.0)
    throw numeric_error("tail acceleration did not converge");
  return total + sign * s_hi;
}

}  // namespace detail

// The pole at x = 1 is removed by pairing x = 1 + u with x = 1 - u over
// u in (0, 1], which covers [0, 2]; the excised sliver u < excision adds a
// midpoint estimate of the (finite) paired integrand.
inline double pv_quadrature(double a, double excision = 1e-4, double cutoff = 2e3) {
  if (!(a > 0.0)) throw config_error("pv_quadrature requires a > 0");
  if (!(excision > 0.0 && excision < 1e-3)) throw config_error("excision must lie in (0, 1e-3)");
  if (!(cutoff > 1e3)) throw config_error("cutoff must exceed 1e3");
  auto paired = [a](double u) { return (std::cos(a * (1.0 + u)) - std::cos(a * (1.0 - u))) / u; };
  const int panels = std::max(8, static_cast<int>(std::ceil(4.0 * a)));
  const double near = detail::gauss_panels(paired, excision, 1.0, panels) + excision * paired(0.5 * excision);
  return near + detail::oscillatory_tail(a, 2.0, 1.0, cutoff);
}

// int_0^inf cos(a x)/(x + 1) dx. Equals minus the x < 0 half of the full-line
// integral that replaces the half-line one in the -pi sin(a) approximation,
// so exact - approx = this value.
inline double pv_negative_half_line(double a, double cutoff = 2e3) {
  if (!(a > 0.0)) throw config_error("requires a > 0");
  return detail::oscillatory_tail(a, 0.0, -1.0, cutoff);
}

struct PvComparison {
  double a;
  double exact;
  double approx;
  double quadrature;
  double abs_error;  // |exact - approx|
};

inline PvComparison compare_pv(double a) {
  const double ex = pv_exact(a), ap = pv_approx(a);
  return {a, ex, ap, pv_quadrature(a), std::abs(ex - ap)};
}

}  // namespace waveqed
