#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "dosc/error.hpp"
#include "dosc/pole.hpp"

namespace dosc::quad {

namespace detail {

// Gauss-Kronrod 7/15 nodes on [-1, 1] (non-negative half).
inline constexpr std::array<double, 8> xgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> wgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

}  // namespace detail

struct Result {
  cplx value;
  double error = 0.0;
  int evaluations = 0;
};

// One G7/K15 panel. error = |K15 - G7|.
template <typename F>
Result gk15(F& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const cplx fc = f(c);
  cplx rk = fc * detail::wgk[7];
  cplx rg = fc * detail::wg[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = h * detail::xgk[j];
    const cplx f1 = f(c - dx), f2 = f(c + dx);
    rk += detail::wgk[j] * (f1 + f2);
    if (j % 2 == 1) rg += detail::wg[j / 2] * (f1 + f2);
  }
  return {rk * h, std::abs((rk - rg) * h), 15};
}

namespace detail {

// Global adaptive strategy: repeatedly bisect the subinterval with the
// largest error estimate until the summed estimate meets the tolerance.
// Endpoint singularities such as (1 - e^{-y})^delta converge this way,
// where a per-interval tolerance split would not.
template <typename F>
Result adapt(F& f, double a, double b, double abs_tol, int max_splits) {
  struct Piece {
    double a, b;
    Result r;
    bool operator<(const Piece& o) const { return r.error < o.r.error; }
  };
  std::vector<Piece> heap{{a, b, gk15(f, a, b)}};
  cplx value = heap.front().r.value;
  double error = heap.front().r.error;
  int evals = 15;
  for (int k = 0; error > abs_tol; ++k) {
    if (k >= max_splits)
      throw NumericError("adaptive quadrature failed to converge on [" + std::to_string(a) + ", " +
                         std::to_string(b) + "]");
    std::pop_heap(heap.begin(), heap.end());
    const Piece worst = heap.back();
    heap.pop_back();
    const double m = 0.5 * (worst.a + worst.b);
    if (!(m > worst.a && m < worst.b))
      throw NumericError("adaptive quadrature exhausted double precision near " + std::to_string(m));
    Piece l{worst.a, m, gk15(f, worst.a, m)}, r{m, worst.b, gk15(f, m, worst.b)};
    value += l.r.value + r.r.value - worst.r.value;
    error += l.r.error + r.r.error - worst.r.error;
    evals += 30;
    heap.push_back(l);
    std::push_heap(heap.begin(), heap.end());
    heap.push_back(r);
    std::push_heap(heap.begin(), heap.end());
  }
  // re-sum to shed drift from the incremental updates
  value = {};
  error = 0.0;
  for (const auto& p : heap) {
    value += p.r.value;
    error += p.r.error;
  }
  return {value, error, evals};
}

}  // namespace detail

// Adaptive G7/K15 quadrature; throws NumericError when the tolerance cannot
// be met within `max_splits` bisections.
template <typename F>
Result adaptive(F&& f, double a, double b, double abs_tol, int max_splits = 2000) {
  return detail::adapt(f, a, b, abs_tol, max_splits);
}

// Integrates over [a, b] split into equal panels no wider than `max_width`,
// each integrated adaptively. The tolerance is shared evenly across panels.
template <typename F>
Result panels(F&& f, double a, double b, double max_width, double abs_tol, int max_splits = 2000) {
  if (!(b > a)) return {};
  const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / max_width)));
  const double w = (b - a) / static_cast<double>(n);
  Result total;
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = a + w * static_cast<double>(i);
    const double hi = (i + 1 == n) ? b : lo + w;
    Result r = detail::adapt(f, lo, hi, abs_tol / static_cast<double>(n), max_splits);
    total.value += r.value;
    total.error += r.error;
    total.evaluations += r.evaluations;
  }
  return total;
}

// (1/2 pi i) \oint f(s) ds over |s - u| = radius by the trapezoid rule,
// which converges geometrically for integrands analytic on an annulus.
template <typename F>
cplx contour_integral(F&& f, cplx u, double radius, int nodes = 256) {
  cplx acc{};
  for (int j = 0; j < nodes; ++j) {
    const cplx e = std::polar(1.0, 2.0 * std::numbers::pi * j / nodes);
    acc += f(u + radius * e) * (radius * e);
  }
  return acc / static_cast<double>(nodes);
}

}  // namespace dosc::quad
