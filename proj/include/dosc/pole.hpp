#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "dosc/error.hpp"

namespace dosc {

using cplx = std::complex<double>;

// Principal part of a meromorphic function at s = u:
//   sum_{m=1}^{order} laurent[m-1] / (s - u)^m
// The analytic remainder is not stored; nothing downstream consumes it.
struct PoleSpec {
  cplx u;
  std::vector<cplx> laurent;  // c_1 .. c_r, c_r != 0

  PoleSpec() = default;
  PoleSpec(cplx location, std::vector<cplx> coeffs)
      : u(location), laurent(std::move(coeffs)) {
    if (laurent.empty()) throw DomainError("pole must have order >= 1");
    if (laurent.back() == cplx{}) throw DomainError("leading Laurent coefficient c_r must be nonzero");
  }

  int order() const noexcept { return static_cast<int>(laurent.size()); }
  bool is_real() const noexcept { return u.imag() == 0.0; }

  PoleSpec conjugate() const {
    std::vector<cplx> c(laurent.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = std::conj(laurent[i]);
    return PoleSpec(std::conj(u), std::move(c));
  }

  // Principal part evaluated at s.
  cplx principal_part(cplx s) const {
    const cplx z = s - u;
    cplx acc{}, zp{1.0, 0.0};
    for (const auto& c : laurent) {
      zp *= z;
      acc += c / zp;
    }
    return acc;
  }

  friend bool operator==(const PoleSpec&, const PoleSpec&) = default;
};

class PoleError : public Error {
 public:
  explicit PoleError(PoleSpec pole)
      : Error("evaluation at a pole s = (" + std::to_string(pole.u.real()) + ", " +
              std::to_string(pole.u.imag()) + ")"),
        pole_(std::move(pole)) {}

  const PoleSpec& pole() const noexcept { return pole_; }

 private:
  PoleSpec pole_;
};

// Residue of (principal part) * x^s at s = u:
//   sum_m c_m x^u (log x)^{m-1} / (m-1)!
inline cplx residue_term(const PoleSpec& p, double x) {
  if (!(x >= 1.0)) throw DomainError("residue_term requires x >= 1");
  const double lx = std::log(x);
  const cplx xu = std::exp(p.u * lx);
  cplx acc{};
  double pow_over_fact = 1.0;  // (log x)^{m-1} / (m-1)!
  for (std::size_t m = 0; m < p.laurent.size(); ++m) {
    if (m > 0) pow_over_fact *= lx / static_cast<double>(m);
    acc += p.laurent[m] * pow_over_fact;
  }
  return acc * xu;
}

// Finite Laurent polynomial sum_{k=lowest}^{lowest+n-1} coeffs[k-lowest] (s-u)^k.
struct LaurentSeries {
  cplx u;
  int lowest = 0;
  std::vector<cplx> coeffs;

  cplx coefficient(int power) const {
    const int idx = power - lowest;
    if (idx < 0 || idx >= static_cast<int>(coeffs.size())) return {};
    return coeffs[static_cast<std::size_t>(idx)];
  }
  int highest() const { return lowest + static_cast<int>(coeffs.size()) - 1; }
};

// Product of two expansions about the same point, truncated to the powers
// that are fully determined by the inputs.
inline LaurentSeries multiply(const LaurentSeries& a, const LaurentSeries& b) {
  if (a.u != b.u) throw DomainError("Laurent expansions about different points");
  LaurentSeries out;
  out.u = a.u;
  out.lowest = a.lowest + b.lowest;
  const int top = std::min(a.highest() + b.lowest, b.highest() + a.lowest);
  for (int k = out.lowest; k <= top; ++k) {
    cplx acc{};
    for (int i = a.lowest; i <= a.highest(); ++i) acc += a.coefficient(i) * b.coefficient(k - i);
    out.coeffs.push_back(acc);
  }
  return out;
}

// Principal part of a Laurent expansion as a PoleSpec. Coefficients smaller
// than `zero_tol` times the largest one count as zero when fixing the order.
inline PoleSpec principal_part(const LaurentSeries& s, double zero_tol = 0.0) {
  std::vector<cplx> c;
  double scale = 0.0;
  for (int m = 1; m <= -s.lowest; ++m) scale = std::max(scale, std::abs(s.coefficient(-m)));
  for (int m = 1; m <= -s.lowest; ++m) c.push_back(s.coefficient(-m));
  while (!c.empty() && std::abs(c.back()) <= zero_tol * scale) c.pop_back();
  if (c.empty()) throw DomainError("expansion has no principal part");
  return PoleSpec(s.u, std::move(c));
}

// Product of the principal-part-plus-Taylor data of two factors at the same
// point, reduced to the PoleSpec of the product.
inline PoleSpec compose_poles(const LaurentSeries& d, const LaurentSeries& v) {
  return principal_part(multiply(d, v));
}

// Coefficients of f(s) = sum_k a_k (s-u)^k for lowest <= k <= highest,
// from the trapezoid rule on the circle |s-u| = radius. f must be analytic
// on the closed punctured disc.
template <typename F>
LaurentSeries laurent_expand(F&& f, cplx u, int lowest, int highest, double radius,
                             int nodes = 128) {
  LaurentSeries out;
  out.u = u;
  out.lowest = lowest;
  std::vector<cplx> vals(static_cast<std::size_t>(nodes));
  const double two_pi = 2.0 * std::acos(-1.0);
  for (int j = 0; j < nodes; ++j) {
    const double th = two_pi * j / nodes;
    vals[static_cast<std::size_t>(j)] = f(u + std::polar(radius, th));
  }
  for (int k = lowest; k <= highest; ++k) {
    cplx acc{};
    for (int j = 0; j < nodes; ++j) {
      const double th = two_pi * j / nodes;
      acc += vals[static_cast<std::size_t>(j)] * std::polar(1.0, -k * th);
    }
    out.coeffs.push_back(acc / (static_cast<double>(nodes) * std::pow(radius, k)));
  }
  return out;
}

}  // namespace dosc
