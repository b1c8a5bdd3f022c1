#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "dosc/error.hpp"
#include "dosc/parallel.hpp"
#include "dosc/pole.hpp"
#include "dosc/quadrature.hpp"
#include "dosc/sequences.hpp"
#include "dosc/series.hpp"
#include "dosc/special.hpp"
#include "dosc/weights.hpp"

namespace dosc {

// Sum of residues of D(s)V(s)x^s at real poles.
class MainTerm {
 public:
  MainTerm() = default;
  explicit MainTerm(std::vector<PoleSpec> terms, std::string label = "custom")
      : terms_(std::move(terms)), label_(std::move(label)) {
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      if (!terms_[i].is_real()) throw DomainError("main-term poles must lie on the real axis");
      for (std::size_t j = 0; j < i; ++j)
        if (terms_[j].u == terms_[i].u) throw DomainError("duplicate pole location in main term");
    }
  }

  const std::vector<PoleSpec>& terms() const noexcept { return terms_; }
  const std::string& label() const noexcept { return label_; }
  bool empty() const noexcept { return terms_.empty(); }

 private:
  std::vector<PoleSpec> terms_;
  std::string label_ = "none";
};

inline double main_term_eval(const MainTerm& mt, double x) {
  if (!(x >= 1.0)) throw DomainError("main_term_eval requires x >= 1");
  cplx acc{};
  double mag = 0.0;
  for (const auto& p : mt.terms()) {
    const cplx r = residue_term(p, x);
    acc += r;
    mag += std::abs(r);
  }
  if (std::abs(acc.imag()) > 1e-12 * std::max(1.0, mag))
    throw InconsistentPoleData("main term has imaginary part " + std::to_string(acc.imag()));
  return acc.real();
}

// Preset main terms. Laurent data of V comes from its closed form by a
// contour expansion, so the presets follow whichever weight is in use.
namespace presets {

// zeta(s)^2 V(s) x^s: double pole at 1, simple pole at 0 (zeta(0)^2 = 1/4).
inline MainTerm divisor(const WeightFunction& w) {
  auto V = [&](cplx s) { return w.mellin(s); };
  const LaurentSeries zeta_sq_at_1{{1.0, 0.0}, -2, {1.0, 2.0 * euler_gamma}};
  const LaurentSeries v_at_1 = laurent_expand(V, {1.0, 0.0}, 0, 1, 0.25);
  std::vector<PoleSpec> poles{compose_poles(zeta_sq_at_1, v_at_1)};
  for (const auto& p : w.mellin_poles())
    if (p.u == cplx{0.0, 0.0}) {
      const LaurentSeries zeta_sq_at_0{{0.0, 0.0}, 0, {0.25}};
      const LaurentSeries v_at_0{{0.0, 0.0}, -1, {p.laurent[0]}};
      poles.push_back(compose_poles(zeta_sq_at_0, v_at_0));
    }
  // contour noise leaves ~1e-16 imaginary parts; the data is real
  for (auto& p : poles)
    for (auto& c : p.laurent) c = {c.real(), 0.0};
  return MainTerm(std::move(poles), "divisor");
}

// -zeta'/zeta(s) V(s) x^s at s = 1: residue V(1) x.
inline MainTerm psi(const WeightFunction& w) {
  return MainTerm({PoleSpec({1.0, 0.0}, {cplx{w.mellin(1.0).real(), 0.0}})}, "psi");
}

inline MainTerm none() { return MainTerm({}, "none"); }

}  // namespace presets

// Smallest cutoff for which the terms of `seq` beyond it contribute less than
// `tol` to sum a(n) v(lambda_n/x). Infinity if the weight admits no bound.
inline double required_cutoff(const TailMajorant& t, const WeightFunction& w, double x, double tol = 1e-9) {
  if (w.compact()) return x;
  auto ok = [&](double c) { return w.tail_bound(t.bound, t.exponent, t.min_gap, c, x) <= tol; };
  double hi = std::max(2.0 * x, 2.0 * t.min_gap);
  int guard = 0;
  while (!ok(hi)) {
    hi *= 2.0;
    if (++guard > 200) return std::numeric_limits<double>::infinity();
  }
  double lo = hi / 2.0;
  if (ok(lo)) lo = x;
  for (int i = 0; i < 60 && hi - lo > 1e-6 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? hi : lo) = mid;
  }
  return std::ceil(hi);
}

inline double required_cutoff(const CoefficientSequence& seq, const WeightFunction& w, double x,
                              double tol = 1e-9) {
  return seq.is_finite() ? 0.0 : required_cutoff(*seq.tail(), w, x, tol);
}

// A_v(x) = sum a(n) v(lambda_n / x).
// Prefix sums make repeated evaluation O(log n) for the sharp cutoff.
class SummatoryEvaluator {
 public:
  SummatoryEvaluator(const CoefficientSequence& seq, WeightFunction w, double tail_tol = 1e-9)
      : seq_(seq), w_(w), tail_tol_(tail_tol) {
    if (w_.kind() == WeightKind::perron) {
      prefix_.resize(seq_.size() + 1, 0.0L);
      long double s = 0.0L;
      for (std::size_t i = 0; i < seq_.size(); ++i) {
        s += seq_.terms()[i].a;
        prefix_[i + 1] = s;
      }
    }
  }

  double operator()(double x) const {
    if (!(x >= 1.0)) throw DomainError("summatory requires x >= 1");
    const double need = required_cutoff(seq_, w_, x, tail_tol_);
    if (need > seq_.cutoff())
      throw InsufficientCutoffError("sequence '" + seq_.label() + "' too short for x = " + std::to_string(x), need);
    const auto& t = seq_.terms();
    if (w_.kind() == WeightKind::perron) {
      const auto lt = std::lower_bound(t.begin(), t.end(), x, [](const Term& a, double v) { return a.lambda < v; });
      const auto i = static_cast<std::size_t>(lt - t.begin());
      long double v = prefix_[i];
      if (lt != t.end() && lt->lambda == x) v += 0.5L * lt->a;
      return static_cast<double>(v);
    }
    const double limit = seq_.is_finite() ? std::numeric_limits<double>::infinity() : need;
    long double acc = 0.0L;
    for (const auto& term : t) {
      if (term.lambda > limit) break;
      const double r = term.lambda / x;
      if (w_.compact() && r >= 1.0) break;
      const double v = w_.evaluate(r);
      if (v == 0.0 && !w_.compact()) break;  // smooth kinds decrease monotonically
      acc += term.a * static_cast<long double>(v);
    }
    return static_cast<double>(acc);
  }

  const CoefficientSequence& sequence() const noexcept { return seq_; }
  const WeightFunction& weight() const noexcept { return w_; }

 private:
  const CoefficientSequence& seq_;
  WeightFunction w_;
  double tail_tol_;
  std::vector<long double> prefix_;
};

inline double summatory(const CoefficientSequence& seq, const WeightFunction& w, double x) {
  return SummatoryEvaluator(seq, w)(x);
}

struct ErrorTable {
  std::vector<double> grid, summatory, main_term, error;
};

inline ErrorTable error_table(const CoefficientSequence& seq, const WeightFunction& w, const MainTerm& mt,
                              const std::vector<double>& grid, unsigned threads = thread_count()) {
  ErrorTable out;
  out.grid = grid;
  out.summatory.resize(grid.size());
  out.main_term.resize(grid.size());
  out.error.resize(grid.size());
  const SummatoryEvaluator eval(seq, w);
  parallel_for(
      grid.size(),
      [&](std::size_t i) {
        out.summatory[i] = eval(grid[i]);
        out.main_term[i] = main_term_eval(mt, grid[i]);
        out.error[i] = out.summatory[i] - out.main_term[i];
      },
      threads);
  return out;
}

inline ErrorSeries error_series(const CoefficientSequence& seq, const WeightFunction& w, const MainTerm& mt,
                                const std::vector<double>& grid, unsigned threads = thread_count()) {
  ErrorTable t = error_table(seq, w, mt, grid, threads);
  return ErrorSeries(std::move(t.grid), std::move(t.error),
                     {{"sequence", seq.label()}, {"weight", w.name()}, {"main_term", mt.label()}});
}

// D(s) = sum a(n) lambda_n^{-s} by direct summation. For infinite sequences
// the neglected tail is bounded through the sequence's majorant and must stay
// below `tail_tol`.
class DirichletSeriesEvaluator {
 public:
  explicit DirichletSeriesEvaluator(const CoefficientSequence& seq, double tail_tol = 1e-12)
      : seq_(seq), tail_tol_(tail_tol) {
    log_lambda_.reserve(seq.size());
    coef_.reserve(seq.size());
    for (const auto& t : seq.terms()) {
      log_lambda_.push_back(std::log(t.lambda));
      coef_.push_back(t.a);
    }
  }

  // Bound on |sum_{lambda > cutoff} a lambda^{-s}| for Re s = sigma.
  double tail_bound(double sigma) const {
    if (seq_.is_finite()) return 0.0;
    const auto& m = *seq_.tail();
    const double p = sigma - m.exponent;
    const double start = seq_.cutoff() - m.min_gap;
    if (!(p > 1.0) || !(start > 0.0)) return std::numeric_limits<double>::infinity();
    return m.bound / m.min_gap * std::pow(start, 1.0 - p) / (p - 1.0);
  }

  // sum |a| lambda^{-sigma}
  double absolute_sum(double sigma) const {
    double s = 0.0;
    for (std::size_t i = 0; i < coef_.size(); ++i) s += std::abs(coef_[i]) * std::exp(-sigma * log_lambda_[i]);
    return s + tail_bound(sigma);
  }

  // D restricted to the vertical line Re s = sigma, with lambda^{-sigma}
  // folded into the coefficients once.
  class Line {
   public:
    cplx operator()(double t) const {
      double re = 0.0, im = 0.0;
      for (std::size_t i = 0; i < damped_.size(); ++i) {
        const double ph = t * (*log_lambda_)[i];
        re += damped_[i] * std::cos(ph);
        im -= damped_[i] * std::sin(ph);
      }
      return {re, im};
    }

   private:
    friend class DirichletSeriesEvaluator;
    const std::vector<double>* log_lambda_ = nullptr;
    std::vector<double> damped_;
  };

  Line on_line(double sigma) const {
    if (tail_bound(sigma) > tail_tol_)
      throw NumericError("Dirichlet series tail not certified at Re s = " + std::to_string(sigma));
    Line l;
    l.log_lambda_ = &log_lambda_;
    l.damped_.resize(coef_.size());
    for (std::size_t i = 0; i < coef_.size(); ++i) l.damped_[i] = coef_[i] * std::exp(-sigma * log_lambda_[i]);
    return l;
  }

  cplx operator()(cplx s) const { return on_line(s.real())(s.imag()); }

  double min_log_lambda() const { return log_lambda_.front(); }
  double max_log_lambda() const { return log_lambda_.back(); }

 private:
  const CoefficientSequence& seq_;
  double tail_tol_;
  std::vector<double> log_lambda_, coef_;
};

struct InverseMellinResult {
  cplx value;
  double error_estimate = 0.0;
  int evaluations = 0;
};

// (1/2 pi i) \int_{sigma-iT}^{sigma+iT} D(s) V(s) x^s ds
//   = (1/2 pi) \int_{-T}^{T} D(sigma+it) V(sigma+it) x^{sigma+it} dt.
// Real coefficients make the integrand conjugate-symmetric in t, so only
// [0, T] is integrated. Panels are at most a quarter period of the fastest
// oscillation (x/lambda_n)^{it} wide.
inline InverseMellinResult inverse_mellin_eval(const DirichletSeriesEvaluator& D, const WeightFunction& w,
                                               double x, double sigma, double T, double rel_tol = 1e-11) {
  if (!(x >= 1.0)) throw DomainError("inverse_mellin_eval requires x >= 1");
  if (!(sigma > w.abscissa())) throw DomainError("sigma must lie right of the poles of V");
  if (!(T > 0.0)) throw DomainError("T must be positive");
  const double lx = std::log(x);
  const double freq = std::max({1.0, std::abs(lx - D.min_log_lambda()), std::abs(lx - D.max_log_lambda())});
  const double width = std::numbers::pi / (2.0 * freq);
  const double scale = std::exp(sigma * lx) * D.absolute_sum(sigma) * std::abs(w.mellin(sigma));
  const auto line = D.on_line(sigma);
  auto integrand = [&](double t) -> cplx {
    const cplx s{sigma, t};
    return line(t) * w.mellin(s) * std::exp(s * lx);
  };
  const quad::Result r = quad::panels(integrand, 0.0, T, width, rel_tol * scale);
  return {cplx{r.value.real() / std::numbers::pi, 0.0}, r.error / std::numbers::pi, r.evaluations};
}

enum class Verdict { converging, diverging, indeterminate };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::converging: return "converging";
    case Verdict::diverging: return "diverging";
    case Verdict::indeterminate: return "indeterminate";
  }
  return "?";
}

struct AbscissaProbe {
  double sigma = 0.0;
  std::vector<double> x;         // upper limits X_k (the grid)
  std::vector<double> partial;   // \int_{x_0}^{X_k} f(x) x^{-sigma-1} dx
  double slope = 0.0;            // d ln(window spread) / d log10 X over the last decade
  Verdict verdict = Verdict::indeterminate;
};

// Partial Dirichlet integrals of the sampled f by the trapezoid rule in log x.
// Decision rule: for each X_k in the last decade take the spread (max - min)
// of the partial integrals over [X_k / sqrt(10), X_k]; fit ln(spread) against
// log10 X_k by least squares. slope > 0.05 means diverging, < -0.05
// converging, otherwise indeterminate.
inline std::vector<AbscissaProbe> abscissa_probe(const ErrorSeries& es, const std::vector<double>& sigmas) {
  if (es.decades() < 3.0 - 1e-9) throw DomainError("abscissa_probe needs a grid spanning >= 3 decades");
  constexpr double threshold = 0.05;
  const std::size_t n = es.size();
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = std::log(es.grid[i]);
  std::vector<AbscissaProbe> out;
  for (double sigma : sigmas) {
    AbscissaProbe p;
    p.sigma = sigma;
    p.x = es.grid;
    p.partial.assign(n, 0.0);
    double prev = es.values[0] * std::exp(-sigma * u[0]);
    for (std::size_t i = 1; i < n; ++i) {
      const double cur = es.values[i] * std::exp(-sigma * u[i]);
      p.partial[i] = p.partial[i - 1] + 0.5 * (u[i] - u[i - 1]) * (prev + cur);
      prev = cur;
    }
    const double x_end = es.grid.back();
    std::vector<double> lx, ly;
    std::size_t lo = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (es.grid[k] < x_end / 10.0 * (1.0 - 1e-12)) continue;
      const double left = es.grid[k] / std::sqrt(10.0);
      while (es.grid[lo] < left) ++lo;
      double mn = p.partial[k], mx = p.partial[k];
      for (std::size_t j = lo; j <= k; ++j) {
        mn = std::min(mn, p.partial[j]);
        mx = std::max(mx, p.partial[j]);
      }
      if (mx - mn > 0.0) {
        lx.push_back(std::log10(es.grid[k]));
        ly.push_back(std::log(mx - mn));
      }
    }
    if (lx.size() < 2) {
      p.slope = -std::numeric_limits<double>::infinity();
      p.verdict = Verdict::converging;
    } else {
      double mxv = 0, myv = 0;
      for (std::size_t i = 0; i < lx.size(); ++i) {
        mxv += lx[i];
        myv += ly[i];
      }
      mxv /= lx.size();
      myv /= ly.size();
      double sxy = 0, sxx = 0;
      for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mxv) * (ly[i] - myv);
        sxx += (lx[i] - mxv) * (lx[i] - mxv);
      }
      p.slope = sxx > 0 ? sxy / sxx : 0.0;
      p.verdict = p.slope > threshold    ? Verdict::diverging
                  : p.slope < -threshold ? Verdict::converging
                                         : Verdict::indeterminate;
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace dosc
