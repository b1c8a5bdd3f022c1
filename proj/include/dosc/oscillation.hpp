#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "dosc/error.hpp"
#include "dosc/pole.hpp"
#include "dosc/series.hpp"
#include "dosc/synthesis.hpp"

namespace dosc {

// g(x) = k x^sigma0 (log x)^{r-1}
struct Envelope {
  double sigma0 = 0.5;
  int r = 1;
  double k = 1.0;

  Envelope() = default;
  Envelope(double s0, int order, double scale) : sigma0(s0), r(order), k(scale) {
    if (!(k > 0.0) || !std::isfinite(k)) throw DomainError("envelope k must be positive");
    if (r < 1) throw DomainError("envelope r must be >= 1");
    if (!std::isfinite(sigma0)) throw DomainError("envelope sigma0 must be finite");
  }

  double operator()(double x) const {
    const double lg = r == 1 ? 1.0 : std::pow(std::log(x), r - 1);
    return k * std::pow(x, sigma0) * lg;
  }

  friend bool operator==(const Envelope&, const Envelope&) = default;
};

struct SignChanges {
  std::size_t count = 0;
  std::vector<std::pair<double, double>> brackets;  // (x_i, x_{i+1}) with a strict sign change
};

// Adjacent pairs of strictly opposite sign. A zero sample is a boundary on
// both sides, so [1, 0, -1] has no strict change.
inline SignChanges sign_changes(const ErrorSeries& es) {
  if (es.empty()) throw DomainError("sign_changes on an empty series");
  SignChanges out;
  for (std::size_t i = 0; i + 1 < es.size(); ++i) {
    const double a = es.values[i], b = es.values[i + 1];
    if ((a > 0.0 && b < 0.0) || (a < 0.0 && b > 0.0)) out.brackets.emplace_back(es.grid[i], es.grid[i + 1]);
  }
  out.count = out.brackets.size();
  return out;
}

struct Witness {
  double x = 0.0;
  double normalized = 0.0;  // E(x) / envelope(x)

  friend bool operator==(const Witness&, const Witness&) = default;
};

struct DecadeSupport {
  double lo = 0.0, hi = 0.0;  // [lo, hi); the last decade also holds its right end
  bool plus = false, minus = false;

  friend bool operator==(const DecadeSupport&, const DecadeSupport&) = default;
};

struct WitnessReport {
  Envelope envelope;
  std::vector<Witness> plus, minus;
  std::optional<Witness> best_plus, best_minus;  // extremal normalized values over the grid
  std::vector<DecadeSupport> decades;
  // Witnesses of both signs in the final decade of the grid. This is a finite
  // proxy for limsup/liminf and proves nothing about the asymptotics.
  bool omega_supported = false;
};

// Decade boundaries starting at the first grid point.
inline std::vector<DecadeSupport> decade_bins(const ErrorSeries& es) {
  std::vector<DecadeSupport> bins;
  const double x0 = es.grid.front(), x1 = es.grid.back();
  const auto n = static_cast<int>(std::ceil(std::log10(x1 / x0) - 1e-9));
  for (int j = 0; j < std::max(n, 1); ++j) bins.push_back({x0 * std::pow(10.0, j), x0 * std::pow(10.0, j + 1), false, false});
  return bins;
}

inline std::size_t decade_index(const std::vector<DecadeSupport>& bins, double x) {
  for (std::size_t j = 0; j + 1 < bins.size(); ++j)
    if (x < bins[j].hi * (1.0 - 1e-12)) return j;
  return bins.size() - 1;
}

inline WitnessReport omega_witnesses(const ErrorSeries& es, const Envelope& env) {
  if (es.decades() < 2.0 - 1e-9) throw DomainError("omega_witnesses needs a grid spanning >= 2 decades");
  WitnessReport rep;
  rep.envelope = env;
  rep.decades = decade_bins(es);
  for (std::size_t i = 0; i < es.size(); ++i) {
    const double x = es.grid[i], e = es.values[i], g = env(x);
    if (!(g > 0.0)) continue;  // x = 1 with r > 1
    const Witness w{x, e / g};
    if (!rep.best_plus || w.normalized > rep.best_plus->normalized) rep.best_plus = w;
    if (!rep.best_minus || w.normalized < rep.best_minus->normalized) rep.best_minus = w;
    auto& bin = rep.decades[decade_index(rep.decades, x)];
    if (e > g) {
      rep.plus.push_back(w);
      bin.plus = true;
    } else if (e < -g) {
      rep.minus.push_back(w);
      bin.minus = true;
    }
  }
  const double last = es.grid.back() / 10.0 * (1.0 - 1e-12);
  auto in_last = [&](const Witness& w) { return w.x >= last; };
  rep.omega_supported = std::any_of(rep.plus.begin(), rep.plus.end(), in_last) &&
                        std::any_of(rep.minus.begin(), rep.minus.end(), in_last);
  return rep;
}

struct ExponentFit {
  double sigma_hat = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0, ci_high = 0.0;  // sigma_hat -+ 2 standard errors
  std::vector<std::pair<double, double>> points;  // (decade end, running sup |E|)
};

// Slope of log(running sup |E|) against log x, one point per complete decade.
inline ExponentFit fit_exponent(const ErrorSeries& es) {
  if (es.decades() < 3.0 - 1e-9) throw DomainError("fit_exponent needs >= 3 decades");
  ExponentFit fit;
  const int n_dec = static_cast<int>(std::floor(es.decades() + 1e-9));
  const double x0 = es.grid.front();
  double sup = 0.0;
  std::size_t i = 0;
  for (int j = 1; j <= n_dec; ++j) {
    const double end = x0 * std::pow(10.0, j) * (1.0 + 1e-12);
    while (i < es.size() && es.grid[i] <= end) sup = std::max(sup, std::abs(es.values[i++]));
    if (sup > 0.0) fit.points.emplace_back(std::min(end, es.grid[i - 1]), sup);
  }
  if (fit.points.size() < 3) throw DomainError("fit_exponent needs three decades with nonzero error");
  const double m = static_cast<double>(fit.points.size());
  double mx = 0, my = 0;
  for (const auto& [x, s] : fit.points) {
    mx += std::log(x);
    my += std::log(s);
  }
  mx /= m;
  my /= m;
  double sxx = 0, sxy = 0;
  for (const auto& [x, s] : fit.points) {
    sxx += (std::log(x) - mx) * (std::log(x) - mx);
    sxy += (std::log(x) - mx) * (std::log(s) - my);
  }
  fit.sigma_hat = sxy / sxx;
  double rss = 0;
  for (const auto& [x, s] : fit.points) {
    const double r = std::log(s) - (my + fit.sigma_hat * (std::log(x) - mx));
    rss += r * r;
  }
  fit.std_error = m > 2 ? std::sqrt(rss / (m - 2) / sxx) : 0.0;
  fit.ci_low = fit.sigma_hat - 2.0 * fit.std_error;
  fit.ci_high = fit.sigma_hat + 2.0 * fit.std_error;
  return fit;
}

struct SpectralPeak {
  double t = 0.0;
  double power = 0.0;

  friend bool operator==(const SpectralPeak&, const SpectralPeak&) = default;
};

struct PeriodogramOptions {
  double t_min = 1.0;
  double t_max = 100.0;
  double t_step = 0.005;
  std::size_t max_peaks = 10;
};

// Power of E(x)/x^sigma0 at frequency t in log x:
//   P(t) = |sum_k w_k (y_k - mean) e^{-i t log x_k}|^2 / (sum_k w_k)^2
// with a Hann taper w. Local maxima of the scan are refined by parabolic
// interpolation and returned by decreasing power.
inline std::vector<SpectralPeak> log_periodogram(const ErrorSeries& es, double sigma0,
                                                 const PeriodogramOptions& opt = {}) {
  if (!is_log_uniform(es.grid)) throw DomainError("log_periodogram needs a log-uniform grid");
  if (es.size() < 8) throw DomainError("log_periodogram needs at least 8 samples");
  if (!(opt.t_max > opt.t_min) || !(opt.t_step > 0.0)) throw DomainError("bad frequency range");
  const std::size_t n = es.size();
  std::vector<double> u(n), y(n), w(n);
  double wsum = 0.0, mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = std::log(es.grid[i]);
    y[i] = es.values[i] * std::exp(-sigma0 * u[i]);
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * (static_cast<double>(i) + 0.5) / static_cast<double>(n));
    wsum += w[i];
    mean += w[i] * y[i];
  }
  mean /= wsum;
  for (std::size_t i = 0; i < n; ++i) y[i] = w[i] * (y[i] - mean);
  auto power = [&](double t) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      re += y[i] * std::cos(t * u[i]);
      im -= y[i] * std::sin(t * u[i]);
    }
    return (re * re + im * im) / (wsum * wsum);
  };
  const auto m = static_cast<std::size_t>(std::floor((opt.t_max - opt.t_min) / opt.t_step)) + 1;
  std::vector<double> p(m);
  for (std::size_t j = 0; j < m; ++j) p[j] = power(opt.t_min + opt.t_step * static_cast<double>(j));
  std::vector<SpectralPeak> peaks;
  for (std::size_t j = 1; j + 1 < m; ++j) {
    if (!(p[j] > p[j - 1] && p[j] >= p[j + 1])) continue;
    const double denom = p[j - 1] - 2.0 * p[j] + p[j + 1];
    const double off = denom < 0.0 ? 0.5 * (p[j - 1] - p[j + 1]) / denom : 0.0;
    const double t = opt.t_min + opt.t_step * (static_cast<double>(j) + off);
    peaks.push_back({t, power(t)});
  }
  std::stable_sort(peaks.begin(), peaks.end(), [](const SpectralPeak& a, const SpectralPeak& b) { return a.power > b.power; });
  if (peaks.size() > opt.max_peaks) peaks.resize(opt.max_peaks);
  return peaks;
}

struct CancellationRun {
  double epsilon = 0.0;
  WitnessReport witnesses;
  bool every_decade = false;  // plus and minus witnesses in every decade of the grid
};

struct CancellationReport {
  double sigma0 = 0.0;
  std::size_t poles = 0;
  std::vector<CancellationRun> runs;
};

// Synthesizes E from a line of non-real poles at common real part sigma0 and
// checks, per decade, for witnesses against k x^{sigma0 - eps} (r fixed at 1).
inline CancellationReport cancellation_study(const std::vector<PoleSpec>& poles, const std::vector<double>& grid,
                                             const std::vector<double>& epsilons = {0.05, 0.1}, double k = 1.0) {
  if (poles.empty()) throw DomainError("cancellation_study needs poles");
  const double sigma0 = poles.front().u.real();
  for (const auto& p : poles) {
    if (p.is_real()) throw DomainError("cancellation_study takes non-real poles only");
    if (p.u.real() != sigma0) throw DomainError("poles must share a common real part");
  }
  const ErrorSeries es = synthesize_pole_spectrum(poles, grid);
  CancellationReport rep;
  rep.sigma0 = sigma0;
  rep.poles = conjugate_closure(poles).size();
  for (double eps : epsilons) {
    CancellationRun run;
    run.epsilon = eps;
    run.witnesses = omega_witnesses(es, Envelope(sigma0 - eps, 1, k));
    run.every_decade = std::all_of(run.witnesses.decades.begin(), run.witnesses.decades.end(),
                                   [](const DecadeSupport& d) { return d.plus && d.minus; });
    rep.runs.push_back(std::move(run));
  }
  return rep;
}

}  // namespace dosc
