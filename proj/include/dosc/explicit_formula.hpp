#pragma once

#include <cmath>
#include <complex>
#include <fstream>
#include <istream>
#include <numbers>
#include <string>
#include <vector>

#include "dosc/analytic.hpp"
#include "dosc/error.hpp"
#include "dosc/pole.hpp"
#include "dosc/sequences.hpp"
#include "dosc/special.hpp"
#include "dosc/weights.hpp"

namespace dosc {

// Ordinates 0 < gamma_1 < gamma_2 < ... of zeta zeros, read from a table
// with one decimal ordinate per line (blank lines and `#` comments skipped).
struct ZerosTable {
  std::vector<double> ordinates;
  std::string source;

  std::size_t count() const noexcept { return ordinates.size(); }
  double max_ordinate() const noexcept { return ordinates.empty() ? 0.0 : ordinates.back(); }

  // Ordinates strictly below t_max.
  std::vector<double> below(double t_max) const {
    std::vector<double> out;
    for (double g : ordinates)
      if (g < t_max) out.push_back(g);
    return out;
  }
};

inline ZerosTable parse_zeros(std::istream& in, std::string source) {
  ZerosTable z;
  z.source = std::move(source);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    const std::string tok = line.substr(b, e - b + 1);
    std::size_t used = 0;
    double g = 0.0;
    try {
      g = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw ParseError("malformed zero ordinate '" + tok + "'", lineno);
    if (!(g > 0.0)) throw ParseError("zero ordinates must be positive", lineno);
    if (!z.ordinates.empty() && !(g > z.ordinates.back())) throw ParseError("zero ordinates not strictly increasing", lineno);
    z.ordinates.push_back(g);
  }
  if (z.ordinates.empty()) throw ParseError("zeros table is empty", 0);
  if (std::abs(z.ordinates.front() - 14.134725) > 0.01)
    throw ParseError("first ordinate " + std::to_string(z.ordinates.front()) + " is not the first zeta zero 14.1347", 1);
  return z;
}

inline ZerosTable load_zeros(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open zeros file " + path, 0);
  return parse_zeros(in, path);
}

namespace explicit_formula {

// -zeta'/zeta(s) Gamma(s) X^s has poles at s = 1 (zeta pole), at the
// nontrivial zeros rho (residue -Gamma(rho) X^rho), at s = 0 and at every
// negative integer (Gamma poles; doubled at the trivial zeros -2k).
//
// Near s = -n, n >= 1, the functional equation gives
//   -zeta'/zeta(s) = [n even] * (-1/(s+n)) + A_n + O(s+n),
//   A_n = -log(2 pi) + digamma(n+1) + zeta'/zeta(n+1),
// and Gamma(s) = (-1)^n/n! * (1/(s+n) + digamma(n+1) + O(s+n)).
inline double log_derivative_constant(int n) {
  const auto [z, dz] = zeta_and_derivative(cplx{n + 1.0, 0.0});
  return -std::log(2.0 * std::numbers::pi) + harmonic(n) - euler_gamma + (dz / z).real();
}

inline std::vector<PoleSpec> real_poles(int lowest = -10) {
  std::vector<PoleSpec> out;
  out.emplace_back(cplx{1.0, 0.0}, std::vector<cplx>{1.0});
  out.emplace_back(cplx{0.0, 0.0}, std::vector<cplx>{-std::log(2.0 * std::numbers::pi)});
  double fact = 1.0;
  for (int n = 1; -n >= lowest; ++n) {
    fact *= n;
    const cplx u{-1.0 * n, 0.0};
    const double g = std::pow(-1.0, n) / fact;
    const double psi = harmonic(n) - euler_gamma;
    const LaurentSeries gamma_s{u, -1, {g, g * psi}};
    const double a = log_derivative_constant(n);
    const LaurentSeries logderiv = n % 2 == 0 ? LaurentSeries{u, -1, {-1.0, a}} : LaurentSeries{u, 0, {a}};
    out.push_back(compose_poles(logderiv, gamma_s));
  }
  return out;
}

// Poles rho = 1/2 + i gamma (ordinates as given, critical line assumed),
// residue -Gamma(rho). One entry per pair; the conjugate is added on use.
inline std::vector<PoleSpec> zero_poles(const std::vector<double>& ordinates) {
  std::vector<PoleSpec> out;
  for (double g : ordinates) {
    const cplx rho{0.5, g};
    out.emplace_back(rho, std::vector<cplx>{-complex_gamma(rho)});
  }
  return out;
}

// Bound on the zeros above T: |Gamma(1/2+it)| <= sqrt(2 pi) e^{-pi t/2}, and
// at most 2 + log(t+1) ordinates in any unit interval [t, t+1].
inline double zero_tail_bound(double T, double X) {
  double s = 0.0;
  for (int j = 0; j < 2000; ++j) {
    const double t = T + j;
    const double term = (2.0 + std::log(t + 1.0)) * std::exp(-std::numbers::pi * t / 2.0);
    s += term;
    if (term < 1e-30 * s) break;
  }
  return 2.0 * std::sqrt(X) * std::sqrt(2.0 * std::numbers::pi) * s;
}

inline double required_zero_cutoff(double X, double tol) {
  double T = 0.0;
  while (zero_tail_bound(T, X) > tol) T += 0.5;
  return T;
}

struct Row {
  double X = 0.0;
  double direct = 0.0;          // sum Lambda(n) e^{-n/X}
  double reconstruction = 0.0;  // X + real-pole corrections - sum_rho Gamma(rho) X^rho
  double difference = 0.0;
  std::size_t zeros_used = 0;   // pairs
  double t_cutoff = 0.0;
};

inline double reconstruct(double X, const std::vector<double>& ordinates) {
  cplx acc{};
  for (const auto& p : real_poles()) acc += residue_term(p, X);
  double zero_sum = 0.0;
  for (const auto& p : zero_poles(ordinates)) zero_sum += 2.0 * residue_term(p, X).real();
  return acc.real() + zero_sum;
}

inline double direct_sum(double X) {
  const auto w = WeightFunction::exponential();
  const double cutoff = std::max(10.0, required_cutoff(TailMajorant{1.0, 1.0, 1.0}, w, X, 1e-13));
  const auto seq = build_catalog(Catalog::von_mangoldt, cutoff);
  return SummatoryEvaluator(seq, w, 1e-13)(X);
}

inline Row evaluate(double X, const ZerosTable& zeros, double t_cutoff) {
  if (!(X >= 1.0)) throw DomainError("explicit formula needs X >= 1");
  Row r;
  r.X = X;
  r.t_cutoff = t_cutoff;
  const auto used = zeros.below(t_cutoff);
  r.zeros_used = used.size();
  r.direct = direct_sum(X);
  r.reconstruction = reconstruct(X, used);
  r.difference = r.direct - r.reconstruction;
  return r;
}

}  // namespace explicit_formula
}  // namespace dosc
