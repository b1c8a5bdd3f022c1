#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "dosc/error.hpp"
#include "dosc/pole.hpp"

namespace dosc {

inline constexpr double euler_gamma = 0.57721566490153286061;

namespace detail {

// Relative perturbation applied to every complex_gamma result. Only the
// self-check fault-injection path sets it.
inline double& gamma_fault() {
  static double fault = 0.0;
  return fault;
}

// Lanczos approximation, g = 7, n = 9.
inline constexpr double lanczos_g = 7.0;
inline constexpr std::array<double, 9> lanczos_coef = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

inline bool is_nonpositive_integer(cplx s) {
  return s.imag() == 0.0 && s.real() <= 0.0 && s.real() == std::floor(s.real());
}

// log Gamma for Re s >= 1/2.
inline cplx lgamma_right(cplx s) {
  const cplx z = s - 1.0;
  cplx a = lanczos_coef[0];
  for (std::size_t i = 1; i < lanczos_coef.size(); ++i) a += lanczos_coef[i] / (z + static_cast<double>(i));
  const cplx t = z + lanczos_g + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(a);
}

}  // namespace detail

// Principal-ish branch of log Gamma(s) (continuous in Im s on Re s >= 1/2;
// via reflection elsewhere). Used where |Gamma| over- or underflows.
inline cplx complex_lgamma(cplx s) {
  if (detail::is_nonpositive_integer(s)) {
    throw PoleError(PoleSpec(s, {cplx{std::pow(-1.0, -s.real()) / std::tgamma(1.0 - s.real()), 0.0}}));
  }
  if (s.real() >= 0.5) return detail::lgamma_right(s);
  // Gamma(s) Gamma(1-s) = pi / sin(pi s)
  return std::log(std::numbers::pi) - std::log(std::sin(std::numbers::pi * s)) -
         detail::lgamma_right(1.0 - s);
}

inline cplx complex_gamma(cplx s) {
  if (detail::is_nonpositive_integer(s)) {
    const double n = -s.real();
    throw PoleError(PoleSpec(s, {cplx{std::pow(-1.0, n) / std::tgamma(n + 1.0), 0.0}}));
  }
  cplx g;
  if (s.real() >= 0.5) {
    g = std::exp(detail::lgamma_right(s));
  } else {
    g = std::numbers::pi / (std::sin(std::numbers::pi * s) * std::exp(detail::lgamma_right(1.0 - s)));
  }
  return g * (1.0 + detail::gamma_fault());
}

// H_n = 1 + 1/2 + ... + 1/n; digamma(n+1) = H_n - gamma.
inline double harmonic(int n) {
  double h = 0.0;
  for (int k = n; k >= 1; --k) h += 1.0 / k;
  return h;
}

namespace detail {

// B_2, B_4, ..., B_30
inline constexpr std::array<double, 15> bernoulli_even = {
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0};

// Euler-Maclaurin summation with N = 40 and 15 Bernoulli corrections.
// Near double precision for Re s >= 0, |Im s| <= 60, s != 1; the direct
// sum cancels badly further left.
inline std::pair<cplx, cplx> zeta_em(cplx s) {
  constexpr int n_terms = 40;
  cplx z{}, dz{};
  for (int n = 1; n < n_terms; ++n) {
    const double ln = std::log(static_cast<double>(n));
    const cplx t = std::exp(-s * ln);
    z += t;
    dz -= ln * t;
  }
  const double N = n_terms;
  const double lN = std::log(N);
  const cplx Ns = std::exp(-s * lN);  // N^{-s}
  // N^{1-s}/(s-1)
  z += N * Ns / (s - 1.0);
  dz += -lN * N * Ns / (s - 1.0) - N * Ns / ((s - 1.0) * (s - 1.0));
  z += 0.5 * Ns;
  dz += -0.5 * lN * Ns;
  // B_{2k}/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}
  cplx poch{1.0, 0.0}, dpoch{};  // rising product and its derivative
  double fact = 1.0;
  cplx Npow = Ns / N;            // N^{-s-1}
  for (int k = 1; k <= static_cast<int>(detail::bernoulli_even.size()); ++k) {
    const int j0 = 2 * k - 2;
    if (k == 1) {
      dpoch = cplx{1.0, 0.0};
      poch = s;
    } else {
      // extend by (s + 2k-3)(s + 2k-2)
      for (int j = j0 - 1; j <= j0; ++j) {
        dpoch = dpoch * (s + static_cast<double>(j)) + poch;
        poch *= (s + static_cast<double>(j));
      }
      Npow /= N * N;
    }
    fact *= (2.0 * k - 1.0) * (2.0 * k);
    const double b = detail::bernoulli_even[static_cast<std::size_t>(k - 1)] / fact;
    z += b * poch * Npow;
    dz += b * (dpoch * Npow - lN * poch * Npow);
  }
  return {z, dz};
}

}  // namespace detail

// Complex digamma: upward recurrence to Re z >= 15, then the asymptotic series.
inline cplx digamma(cplx z) {
  if (detail::is_nonpositive_integer(z)) throw PoleError(PoleSpec(z, {cplx{-1.0, 0.0}}));
  if (z.real() < 0.5) return digamma(1.0 - z) - std::numbers::pi / std::tan(std::numbers::pi * z);
  cplx acc{};
  while (z.real() < 15.0) {
    acc -= 1.0 / z;
    z += 1.0;
  }
  const cplx w = 1.0 / (z * z);
  // B_2k / (2k), k = 1..6
  const cplx series =
      w * (1.0 / 12 - w * (1.0 / 120 - w * (1.0 / 252 - w * (1.0 / 240 - w * (1.0 / 132 - w * (691.0 / 32760))))));
  return acc + std::log(z) - 0.5 / z - series;
}

// zeta(s) and zeta'(s). Left of the critical strip the functional equation
// zeta(s) = chi(s) zeta(1-s) is used, chi(s) = 2^s pi^{s-1} sin(pi s/2) Gamma(1-s).
inline std::pair<cplx, cplx> zeta_and_derivative(cplx s) {
  if (s == cplx{1.0, 0.0}) throw PoleError(PoleSpec(s, {cplx{1.0, 0.0}}));
  if (s.real() >= 0.0) return detail::zeta_em(s);
  const double pi = std::numbers::pi;
  const auto [z1, dz1] = detail::zeta_em(1.0 - s);
  const cplx pre = std::pow(2.0 * pi, s) / pi * complex_gamma(1.0 - s);
  const cplx sn = std::sin(pi * s / 2.0), cs = std::cos(pi * s / 2.0);
  const cplx chi = pre * sn;
  const cplx dchi = pre * ((std::log(2.0 * pi) - digamma(1.0 - s)) * sn + 0.5 * pi * cs);
  return {chi * z1, dchi * z1 - chi * dz1};
}

inline cplx zeta(cplx s) { return zeta_and_derivative(s).first; }

}  // namespace dosc
