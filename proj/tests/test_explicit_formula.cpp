#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "dosc/explicit_formula.hpp"

using namespace dosc;
namespace ef = dosc::explicit_formula;

namespace {

const ZerosTable& zeros() {
  static const ZerosTable z = load_zeros(std::string(DOSC_DATA_DIR) + "/zeta_zeros.txt");
  return z;
}

// (1/2 pi i) \oint -zeta'/zeta(s) Gamma(s) X^s ds around u, trapezoid rule.
double contour_residue(double u, double X, double r = 0.3, int n = 512) {
  cplx acc{};
  for (int j = 0; j < n; ++j) {
    const cplx e = std::polar(1.0, 2.0 * std::numbers::pi * j / n);
    const cplx s = u + r * e;
    const auto [z, dz] = zeta_and_derivative(s);
    acc += -dz / z * complex_gamma(s) * std::pow(X, s) * r * e;
  }
  return (acc / static_cast<double>(n)).real();
}

// sum Lambda(n) e^{-n/X} over n <= N by trial division
double smoothed_psi_bruteforce(double X, int N) {
  double s = 0.0;
  for (int n = 2; n <= N; ++n) {
    int p = 2;
    while (n % p != 0) ++p;
    int m = n;
    while (m % p == 0) m /= p;
    if (m == 1) s += std::log(static_cast<double>(p)) * std::exp(-n / X);
  }
  return s;
}

}  // namespace

TEST(Zeros, ShippedTable) {
  const auto& z = zeros();
  EXPECT_EQ(z.count(), 100u);
  EXPECT_NEAR(z.ordinates[0], 14.134725141734693, 1e-12);
  EXPECT_NEAR(z.ordinates[1], 21.022039638771555, 1e-12);
  EXPECT_GT(z.max_ordinate(), 236.0);
  EXPECT_EQ(z.below(25.0).size(), 2u);
  EXPECT_EQ(z.below(100.0).size(), 29u);
}

TEST(Zeros, ParseErrors) {
  std::istringstream ok("# header\n14.134725\n\n21.022  # second\n");
  EXPECT_EQ(parse_zeros(ok, "mem").count(), 2u);
  auto line_of = [](const std::string& text) -> std::size_t {
    std::istringstream in(text);
    try {
      parse_zeros(in, "mem");
    } catch (const ParseError& e) {
      return e.line();
    }
    return 999;
  };
  EXPECT_EQ(line_of("14.134725\n21.02\nabc\n"), 3u);
  EXPECT_EQ(line_of("14.134725\n21.02\n20.0\n"), 3u);
  EXPECT_EQ(line_of("14.134725\n-3\n"), 2u);
  EXPECT_EQ(line_of("15.0\n21.02\n"), 1u);
  EXPECT_EQ(line_of("# nothing\n"), 0u);
  EXPECT_THROW(load_zeros("/nonexistent/zeros.txt"), ParseError);
}

TEST(ExplicitFormula, RealPoleResiduesMatchContour) {
  const auto poles = ef::real_poles(-10);
  ASSERT_EQ(poles.size(), 12u);
  for (double X : {1.0, 3.5, 50.0}) {
    for (const auto& p : poles) {
      const double u = p.u.real();
      const double oracle = contour_residue(u, X);
      const double got = residue_term(p, X).real();
      EXPECT_NEAR(got, oracle, 1e-10 * std::max(1.0, std::abs(oracle))) << "u=" << u << " X=" << X;
    }
  }
}

TEST(ExplicitFormula, PolesAtOneAndZero) {
  const auto poles = ef::real_poles(-10);
  EXPECT_NEAR(residue_term(poles[0], 100).real(), 100.0, 1e-12);
  EXPECT_NEAR(residue_term(poles[1], 100).real(), -std::log(2 * std::numbers::pi), 1e-14);
  // trivial zeros make the even poles double
  EXPECT_EQ(poles[2].order(), 1);  // s = -1
  EXPECT_EQ(poles[3].order(), 2);  // s = -2
}

TEST(ExplicitFormula, ZeroTermsAreGammaWeighted) {
  const auto zp = ef::zero_poles({14.134725141734693});
  ASSERT_EQ(zp.size(), 1u);
  const double X = 100;
  const cplx rho{0.5, 14.134725141734693};
  const double expect = -2.0 * (complex_gamma(rho) * std::pow(X, rho)).real();
  EXPECT_NEAR(2.0 * residue_term(zp[0], X).real(), expect, 1e-22);
}

TEST(ExplicitFormula, AtOneHundred) {
  const auto row = ef::evaluate(100.0, zeros(), 1e9);
  EXPECT_EQ(row.zeros_used, 100u);
  EXPECT_NEAR(row.direct, smoothed_psi_bruteforce(100.0, 6000), 1e-10);
  EXPECT_LT(std::abs(row.difference), 0.05 * std::sqrt(100.0));
  EXPECT_LT(std::abs(row.difference), 1e-9 * row.direct);
}

TEST(ExplicitFormula, AtOneAgainstDirectOracle) {
  const double oracle = smoothed_psi_bruteforce(1.0, 60);
  EXPECT_NEAR(ef::direct_sum(1.0), oracle, 1e-14);
  const auto row = ef::evaluate(1.0, zeros(), 1e9);
  // X = 1 does not damp the omitted poles s = -11, -12, ...: 1/11! ~ 2.5e-8
  EXPECT_LT(std::abs(row.difference), 1e-7);
}

TEST(ExplicitFormula, EmptyZeroListLeavesOutExactlyTheZeroTerms) {
  const double X = 20.0;
  const auto all = zeros().ordinates;
  double zero_sum = 0.0;
  for (double g : all) {
    const cplx rho{0.5, g};
    zero_sum -= 2.0 * (complex_gamma(rho) * std::pow(X, rho)).real();
  }
  EXPECT_NEAR(ef::reconstruct(X, all) - ef::reconstruct(X, {}), zero_sum, 1e-14);  // a few ulps of ~20
}

TEST(ExplicitFormula, ErrorShrinksAsZerosAreAdded) {
  const double X = 100.0;
  const double noise = 1e-9 * ef::direct_sum(X);
  double prev = std::numeric_limits<double>::infinity();
  for (double T : {20.0, 50.0, 100.0}) {
    const double d = std::abs(ef::evaluate(X, zeros(), T).difference);
    EXPECT_LE(d, prev + noise) << T;
    prev = d;
  }
}

TEST(ExplicitFormula, ZeroTailBound) {
  EXPECT_GT(ef::zero_tail_bound(10, 100), ef::zero_tail_bound(20, 100));
  const double T = ef::required_zero_cutoff(100, 1e-12);
  EXPECT_LE(ef::zero_tail_bound(T, 100), 1e-12);
  EXPECT_LT(T, zeros().max_ordinate());
  // the bound really dominates the omitted zero terms
  double omitted = 0.0;
  for (double g : zeros().ordinates)
    if (g >= 20) omitted += 2 * std::abs(complex_gamma({0.5, g}) * std::pow(100.0, cplx{0.5, g}));
  EXPECT_LE(omitted, ef::zero_tail_bound(20, 100));
}

TEST(ExplicitFormula, RejectsSmallX) { EXPECT_THROW(ef::evaluate(0.5, zeros(), 50), DomainError); }
