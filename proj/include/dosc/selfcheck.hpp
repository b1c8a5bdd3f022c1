#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "dosc/analytic.hpp"
#include "dosc/pole.hpp"
#include "dosc/quadrature.hpp"
#include "dosc/sequences.hpp"
#include "dosc/special.hpp"
#include "dosc/synthesis.hpp"
#include "dosc/weights.hpp"

namespace dosc::selfcheck {

struct Check {
  std::string name;
  bool pass = false;
  double worst = 0.0;    // largest observed error
  double allowed = 0.0;  // tolerance it was held to
};

// Closed-form V(s) against quadrature of v(x) x^{s-1} at `points` random s
// with Re s in [0.5, 4], |Im s| <= 20.
inline Check mellin_pairs(double tol, std::uint64_t seed, int points = 20) {
  Check c{"mellin_pairs", true, 0.0, tol};
  std::mt19937_64 rng(seed);
  for (const auto& w : {WeightFunction::perron(), WeightFunction::exponential(), WeightFunction::riesz(1.5),
                        WeightFunction::gaussian()}) {
    for (int i = 0; i < points; ++i) {
      const cplx s{0.5 + 3.5 * unit_uniform(rng), -20.0 + 40.0 * unit_uniform(rng)};
      const MellinCheck m = mellin_selfcheck(w, s, tol);
      c.worst = std::max(c.worst, m.error / (1.0 + std::abs(m.closed_form)));
      c.pass = c.pass && m.pass;
    }
  }
  return c;
}

// residue_term against (1/2 pi i) \oint principal_part(s) x^s ds.
inline Check residue_vs_contour(double tol, std::uint64_t seed, int cases = 50) {
  Check c{"residue_vs_contour", true, 0.0, tol};
  std::mt19937_64 rng(seed);
  for (int i = 0; i < cases; ++i) {
    const int r = 1 + static_cast<int>(rng() % 3);
    const cplx u{-2.0 + 4.0 * unit_uniform(rng), -18.0 + 36.0 * unit_uniform(rng)};
    std::vector<cplx> lc;
    for (int m = 0; m < r; ++m) lc.push_back(std::polar(0.2 + unit_uniform(rng), 2.0 * std::numbers::pi * unit_uniform(rng)));
    const PoleSpec p(u, lc);
    const double x = std::exp(5.0 * unit_uniform(rng));
    const cplx lhs = residue_term(p, x);
    const cplx rhs = quad::contour_integral([&](cplx s) { return p.principal_part(s) * std::exp(s * std::log(x)); }, u, 0.5);
    const double err = std::abs(lhs - rhs) / (1.0 + std::abs(rhs));
    c.worst = std::max(c.worst, err);
    c.pass = c.pass && err <= tol;
  }
  return c;
}

// \int_1^inf (log x)^m x^{-s-1} dx = m! / s^{m+1}, integrated in y = log x.
inline Check log_power_mellin(double tol) {
  Check c{"log_power_mellin", true, 0.0, tol};
  for (const cplx s : {cplx{1.0, 0.0}, cplx{2.0, 0.0}, cplx{1.0, 1.0}}) {
    for (int m = 0; m <= 4; ++m) {
      const double y_end = 100.0 / s.real();  // y^m e^{-y Re s} < 1e-35 beyond
      const auto q = quad::panels([&](double y) { return std::pow(y, m) * std::exp(-s * y); }, 0.0, y_end, 1.0,
                                  1e-3 * tol);
      const cplx exact = std::tgamma(m + 1.0) / std::pow(s, m + 1);
      const double err = std::abs(q.value - exact) / (1.0 + std::abs(exact));
      c.worst = std::max(c.worst, err);
      c.pass = c.pass && err <= tol;
    }
  }
  return c;
}

// inverse_mellin_eval against summatory on Dirichlet polynomials.
inline Check duality_spot(double tol, std::uint64_t seed) {
  Check c{"duality_spot", true, 0.0, tol};
  std::mt19937_64 rng(seed);
  const auto w = WeightFunction::exponential();
  for (Catalog cat : {Catalog::von_mangoldt, Catalog::divisor}) {
    const auto seq = build_catalog(cat, 500).as_polynomial();
    const DirichletSeriesEvaluator D(seq);
    const double x = 2.0 + 48.0 * unit_uniform(rng);
    const double direct = summatory(seq, w, x);
    const double dual = inverse_mellin_eval(D, w, x, 2.0, 60.0).value.real();
    const double err = std::abs(dual - direct) / std::max(1.0, std::abs(direct));
    c.worst = std::max(c.worst, err);
    c.pass = c.pass && err <= tol;
  }
  return c;
}

// Gamma(s+1) / Gamma(s) = s on a 10 x 10 grid of the strip 0 < Re s <= 10, |Im s| <= 100.
inline Check gamma_recurrence(double tol) {
  Check c{"gamma_recurrence", true, 0.0, tol};
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      const cplx s{0.3 + 0.95 * i, -100.0 + 200.0 * j / 9.0};
      const cplx ratio = std::exp(complex_lgamma(s + 1.0) - complex_lgamma(s));
      const cplx direct = complex_gamma(s + 1.0) / complex_gamma(s);
      const double err = std::max(std::abs(ratio - s), std::abs(direct - s)) / std::abs(s);
      c.worst = std::max(c.worst, err);
      c.pass = c.pass && err <= tol;
    }
  // pins the absolute scale, which the recurrence alone does not
  const double e1 = std::abs(complex_gamma(0.5).real() - std::sqrt(std::numbers::pi)) / std::sqrt(std::numbers::pi);
  const double e2 = std::abs(std::norm(complex_gamma({1.0, 1.0})) - std::numbers::pi / std::sinh(std::numbers::pi)) /
                    (std::numbers::pi / std::sinh(std::numbers::pi));
  c.worst = std::max({c.worst, e1, e2});
  c.pass = c.pass && e1 <= tol && e2 <= tol;
  return c;
}

// Runs every check. `tol` overrides each check's default tolerance.
inline std::vector<Check> run_all(std::uint64_t seed = 1, double tol = 0.0) {
  auto pick = [&](double dflt) { return tol > 0.0 ? tol : dflt; };
  // a quadrature that cannot reach the requested tolerance is a failed check
  auto guarded = [](const char* name, double t, auto&& fn) {
    try {
      return fn();
    } catch (const Error&) {
      return Check{name, false, std::numeric_limits<double>::infinity(), t};
    }
  };
  return {guarded("gamma_recurrence", pick(1e-9), [&] { return gamma_recurrence(pick(1e-9)); }),
          guarded("mellin_pairs", pick(1e-7), [&] { return mellin_pairs(pick(1e-7), seed); }),
          guarded("residue_vs_contour", pick(1e-9), [&] { return residue_vs_contour(pick(1e-9), seed); }),
          guarded("log_power_mellin", pick(1e-8), [&] { return log_power_mellin(pick(1e-8)); }),
          guarded("duality_spot", pick(1e-5), [&] { return duality_spot(pick(1e-5), seed); })};
}

}  // namespace dosc::selfcheck
