#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dosc/error.hpp"
#include "dosc/pole.hpp"
#include "dosc/quadrature.hpp"
#include "dosc/special.hpp"

namespace dosc {

enum class WeightKind { perron, exponential, riesz, gaussian };

// Weight v on (0, inf) together with its closed-form Mellin transform
//   V(s) = \int_0^inf v(x) x^{s-1} dx,   Re s > abscissa().
// The closed form is authoritative; quadrature only serves as a check.
class WeightFunction {
 public:
  static WeightFunction perron() { return WeightFunction(WeightKind::perron, 0.0); }
  static WeightFunction exponential() { return WeightFunction(WeightKind::exponential, 0.0); }
  static WeightFunction gaussian() { return WeightFunction(WeightKind::gaussian, 0.0); }
  static WeightFunction riesz(double delta) {
    if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("riesz delta must be positive");
    return WeightFunction(WeightKind::riesz, delta);
  }

  WeightKind kind() const noexcept { return kind_; }
  double delta() const noexcept { return delta_; }
  double abscissa() const noexcept { return 0.0; }

  // Support of v is (0, 1] for the compact kinds.
  bool compact() const noexcept { return kind_ == WeightKind::perron || kind_ == WeightKind::riesz; }

  std::string name() const {
    switch (kind_) {
      case WeightKind::perron: return "perron";
      case WeightKind::exponential: return "exp";
      case WeightKind::gaussian: return "gauss";
      case WeightKind::riesz: {
        std::string d = std::to_string(delta_);
        while (d.size() > 1 && d.back() == '0') d.pop_back();
        if (d.back() == '.') d.pop_back();
        return "riesz:" + d;
      }
    }
    return "?";
  }

  double evaluate(double x) const {
    if (!(x > 0.0)) throw DomainError("weight evaluated at x <= 0");
    switch (kind_) {
      case WeightKind::perron:
        if (x < 1.0) return 1.0;
        return x == 1.0 ? 0.5 : 0.0;
      case WeightKind::exponential: return std::exp(-x);
      case WeightKind::gaussian: return std::exp(-x * x);
      case WeightKind::riesz: return x < 1.0 ? std::pow(1.0 - x, delta_) : 0.0;
    }
    return 0.0;
  }

  cplx mellin(cplx s) const {
    if (s.imag() == 0.0 && s.real() <= 0.0 && s.real() == std::floor(s.real())) {
      for (const auto& p : mellin_poles(s.real() - 1.0))
        if (p.u == s) throw PoleError(p);
    }
    switch (kind_) {
      case WeightKind::perron: return 1.0 / s;
      case WeightKind::exponential: return complex_gamma(s);
      case WeightKind::gaussian: return 0.5 * complex_gamma(0.5 * s);
      case WeightKind::riesz: {
        if (delta_ == std::floor(delta_) && delta_ <= 64.0) {
          // Gamma(s) delta! / Gamma(s+delta+1) = delta! / (s (s+1) ... (s+delta))
          cplx den{1.0, 0.0};
          for (int j = 0; j <= static_cast<int>(delta_); ++j) den *= s + static_cast<double>(j);
          return std::tgamma(delta_ + 1.0) / den * (1.0 + detail::gamma_fault());
        }
        // Gamma(s) Gamma(delta+1) / Gamma(s+delta+1), through log Gamma so that
        // large |Im s| does not overflow the individual factors.
        if (detail::is_nonpositive_integer(s + delta_ + 1.0)) return {};  // 1/Gamma vanishes
        const cplx lg = complex_lgamma(s) - complex_lgamma(s + delta_ + 1.0);
        return std::exp(lg) * std::tgamma(delta_ + 1.0) * (1.0 + detail::gamma_fault());
      }
    }
    return {};
  }

  // Poles of V with Re s > floor, all simple, at non-positive (even for
  // gaussian) integers.
  std::vector<PoleSpec> mellin_poles(double floor = -10.0) const {
    std::vector<PoleSpec> out;
    switch (kind_) {
      case WeightKind::perron:
        if (0.0 > floor) out.emplace_back(cplx{0.0, 0.0}, std::vector<cplx>{1.0});
        break;
      case WeightKind::exponential: {
        double fact = 1.0;
        for (int n = 0; -n > floor; ++n) {
          if (n > 0) fact *= n;
          out.emplace_back(cplx{-1.0 * n, 0.0}, std::vector<cplx>{std::pow(-1.0, n) / fact});
        }
        break;
      }
      case WeightKind::gaussian: {
        double fact = 1.0;
        for (int n = 0; -2 * n > floor; ++n) {
          if (n > 0) fact *= n;
          out.emplace_back(cplx{-2.0 * n, 0.0}, std::vector<cplx>{std::pow(-1.0, n) / fact});
        }
        break;
      }
      case WeightKind::riesz: {
        // residue (-1)^n/n! * Gamma(delta+1)/Gamma(delta+1-n)
        double fact = 1.0, falling = 1.0;
        for (int n = 0; -n > floor; ++n) {
          if (n > 0) {
            fact *= n;
            falling *= delta_ + 1.0 - n;
          }
          const double c = std::pow(-1.0, n) / fact * falling;
          if (c != 0.0) out.emplace_back(cplx{-1.0 * n, 0.0}, std::vector<cplx>{c});
        }
        break;
      }
    }
    return out;
  }

  // Upper bound for  sum_{lambda_n > a} M lambda_n^beta v(lambda_n / x)  when
  // consecutive lambdas are >= gap apart. Infinity when no bound is available.
  double tail_bound(double M, double beta, double gap, double a, double x) const {
    const double start = a - gap;  // integral majorant starts one gap early
    if (compact()) return a >= x ? 0.0 : std::numeric_limits<double>::infinity();
    if (start <= 0.0) return std::numeric_limits<double>::infinity();
    // t^beta <= start^beta exp(beta (t - start)/start) for t >= start
    double rate = 0.0, head = 0.0;
    if (kind_ == WeightKind::exponential) {
      if (start < beta * x) return std::numeric_limits<double>::infinity();
      rate = 1.0 / x - beta / start;
      head = -start / x;
    } else {
      // exp(-t^2/x^2) <= exp(-start^2/x^2 - 2 start (t - start)/x^2)
      rate = 2.0 * start / (x * x) - beta / start;
      head = -(start * start) / (x * x);
    }
    if (!(rate > 0.0)) return std::numeric_limits<double>::infinity();
    return M / gap * std::pow(start, beta) * std::exp(head) / rate;
  }

 private:
  WeightFunction(WeightKind k, double delta) : kind_(k), delta_(delta) {}

  WeightKind kind_;
  double delta_;
};

// "perron", "exp", "gauss", "riesz:<delta>"
inline WeightFunction parse_weight(std::string_view spec) {
  if (spec == "perron") return WeightFunction::perron();
  if (spec == "exp" || spec == "exponential") return WeightFunction::exponential();
  if (spec == "gauss" || spec == "gaussian") return WeightFunction::gaussian();
  if (spec.starts_with("riesz:")) {
    const std::string d(spec.substr(6));
    std::size_t used = 0;
    double delta = 0.0;
    try {
      delta = std::stod(d, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != d.size() || d.empty()) throw DomainError("bad riesz delta '" + d + "'");
    return WeightFunction::riesz(delta);
  }
  throw DomainError("unknown weight '" + std::string(spec) + "' (expected perron|exp|riesz:<delta>|gauss)");
}

inline cplx mellin(const WeightFunction& w, cplx s) { return w.mellin(s); }

struct MellinCheck {
  bool pass = false;
  cplx closed_form;
  cplx quadrature;
  double error = 0.0;      // |quadrature - closed_form|
  double allowed = 0.0;    // tol * (1 + |closed_form|)
};

// Compares V(s) with direct quadrature of \int_0^inf v(x) x^{s-1} dx.
// With x = e^{-y} on (0,1) and x = e^{y} on (1,inf) both pieces become
// integrals over y in [0, inf) of bounded, exponentially damped integrands.
inline MellinCheck mellin_selfcheck(const WeightFunction& w, cplx s, double tol) {
  if (!(s.real() > w.abscissa())) throw DomainError("mellin_selfcheck needs Re s > abscissa");
  MellinCheck out;
  out.closed_form = w.mellin(s);
  const double quad_tol = 1e-3 * tol * (1.0 + std::abs(out.closed_form));
  const double width = std::min(1.0, std::numbers::pi / (2.0 * std::max(1.0, std::abs(s.imag()))));

  // (0, 1]: |v| <= 1 so the piece beyond Y is below e^{-Re s Y}/Re s.
  const double sig = s.real();
  const double y0 = std::max(1.0, std::log(1.0 / (1e-3 * quad_tol * sig)) / sig);
  auto lower = [&](double y) -> cplx { return w.evaluate(std::exp(-y)) * std::exp(-s * y); };
  cplx total = quad::panels(lower, 0.0, y0, width, 0.5 * quad_tol).value;

  if (!w.compact()) {
    // integrand exp(log v(e^y) + s y); find where it has decayed for good
    auto log_mag = [&](double y) {
      const double x = std::exp(y);
      const double lv = w.kind() == WeightKind::exponential ? -x : -x * x;
      return lv + sig * y;
    };
    double y1 = 1.0;
    while (log_mag(y1) > std::log(1e-3 * quad_tol) || log_mag(y1 + 0.5) > log_mag(y1)) y1 += 0.5;
    auto upper = [&](double y) -> cplx { return w.evaluate(std::exp(y)) * std::exp(s * y); };
    total += quad::panels(upper, 0.0, y1, width, 0.5 * quad_tol).value;
  }
  out.quadrature = total;
  out.error = std::abs(total - out.closed_form);
  out.allowed = tol * (1.0 + std::abs(out.closed_form));
  out.pass = out.error <= out.allowed;
  return out;
}

}  // namespace dosc
