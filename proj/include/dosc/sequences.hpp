#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dosc/error.hpp"

namespace dosc {

struct Term {
  double lambda;
  double a;

  friend bool operator==(const Term&, const Term&) = default;
};

// Growth certificate for the terms beyond the stored cutoff:
// |a(n)| <= bound * lambda_n^exponent, and consecutive lambdas are at least
// `min_gap` apart. Absent for finite sequences (nothing beyond the cutoff).
struct TailMajorant {
  double bound = 1.0;
  double exponent = 1.0;
  double min_gap = 1.0;

  friend bool operator==(const TailMajorant&, const TailMajorant&) = default;
};

// Truncated generalized Dirichlet series data (lambda_n, a(n)).
// Every term with lambda <= cutoff is present; lambdas strictly increase.
class CoefficientSequence {
 public:
  CoefficientSequence(std::vector<Term> terms, std::string label, double cutoff,
                      std::optional<TailMajorant> tail = std::nullopt)
      : terms_(std::move(terms)), label_(std::move(label)), cutoff_(cutoff), tail_(tail) {
    if (terms_.empty()) throw DomainError("coefficient sequence is empty");
    bool any_nonzero = false;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      if (!(terms_[i].lambda > 0.0) || !std::isfinite(terms_[i].lambda))
        throw DomainError("lambda must be positive and finite");
      if (!std::isfinite(terms_[i].a)) throw DomainError("coefficient must be finite");
      if (i > 0 && !(terms_[i].lambda > terms_[i - 1].lambda))
        throw DomainError("lambdas must be strictly increasing");
      any_nonzero = any_nonzero || terms_[i].a != 0.0;
    }
    if (!any_nonzero) throw DomainError("all coefficients are zero");
    if (cutoff_ < terms_.back().lambda) throw DomainError("cutoff below the last lambda");
  }

  const std::vector<Term>& terms() const noexcept { return terms_; }
  const std::string& label() const noexcept { return label_; }
  double cutoff() const noexcept { return cutoff_; }
  const std::optional<TailMajorant>& tail() const noexcept { return tail_; }
  bool is_finite() const noexcept { return !tail_.has_value(); }
  std::size_t size() const noexcept { return terms_.size(); }

  // Same terms, but declared to be the whole series (a Dirichlet polynomial).
  CoefficientSequence as_polynomial() const {
    return CoefficientSequence(terms_, label_, cutoff_, std::nullopt);
  }

  // Keeps terms with lambda <= new_cutoff.
  CoefficientSequence truncated(double new_cutoff) const {
    std::vector<Term> t;
    for (const auto& term : terms_)
      if (term.lambda <= new_cutoff) t.push_back(term);
    return CoefficientSequence(std::move(t), label_, std::min(new_cutoff, cutoff_), tail_);
  }

 private:
  std::vector<Term> terms_;
  std::string label_;
  double cutoff_;
  std::optional<TailMajorant> tail_;
};

enum class Catalog { von_mangoldt, moebius, divisor, gauss_r2, unit };

inline std::string to_string(Catalog c) {
  switch (c) {
    case Catalog::von_mangoldt: return "von_mangoldt";
    case Catalog::moebius: return "moebius";
    case Catalog::divisor: return "divisor";
    case Catalog::gauss_r2: return "gauss_r2";
    case Catalog::unit: return "unit";
  }
  return "?";
}

inline std::optional<Catalog> parse_catalog(std::string_view name) {
  if (name == "von_mangoldt" || name == "psi") return Catalog::von_mangoldt;
  if (name == "moebius" || name == "mobius") return Catalog::moebius;
  if (name == "divisor") return Catalog::divisor;
  if (name == "gauss_r2" || name == "r2") return Catalog::gauss_r2;
  if (name == "unit") return Catalog::unit;
  return std::nullopt;
}

inline constexpr double default_cutoff_budget = 1e8;

// Multiplicative data for 1..n from one linear sieve pass.
struct SieveTables {
  std::vector<std::uint32_t> spf;         // smallest prime factor
  std::vector<std::uint32_t> prime_power; // p^e exactly dividing n, p = spf[n]
  std::vector<std::uint8_t> exponent;     // e
};

inline SieveTables linear_sieve(std::uint32_t n) {
  SieveTables t;
  t.spf.assign(n + 1, 0);
  t.prime_power.assign(n + 1, 0);
  t.exponent.assign(n + 1, 0);
  std::vector<std::uint32_t> primes;
  for (std::uint32_t i = 2; i <= n; ++i) {
    if (t.spf[i] == 0) {
      t.spf[i] = i;
      t.prime_power[i] = i;
      t.exponent[i] = 1;
      primes.push_back(i);
    }
    for (std::uint32_t p : primes) {
      const std::uint64_t ip = static_cast<std::uint64_t>(i) * p;
      if (p > t.spf[i] || ip > n) break;
      const auto k = static_cast<std::uint32_t>(ip);
      t.spf[k] = p;
      if (p == t.spf[i]) {
        t.prime_power[k] = t.prime_power[i] * p;
        t.exponent[k] = static_cast<std::uint8_t>(t.exponent[i] + 1);
      } else {
        t.prime_power[k] = p;
        t.exponent[k] = 1;
      }
    }
  }
  return t;
}

namespace detail {

// f(n) for a multiplicative f given its values on prime powers.
template <typename OnPrimePower>
std::vector<double> multiplicative(const SieveTables& t, std::uint32_t n, OnPrimePower fpe) {
  std::vector<double> f(n + 1, 0.0);
  if (n >= 1) f[1] = 1.0;
  for (std::uint32_t k = 2; k <= n; ++k) {
    const std::uint32_t pe = t.prime_power[k];
    f[k] = f[k / pe] * fpe(t.spf[k], t.exponent[k]);
  }
  return f;
}

}  // namespace detail

// r2(n) = #{(u, v) in Z^2 : u^2 + v^2 = n} = 4 prod_{p = 1 mod 4} (e+1) * prod_{q = 3 mod 4} [e even]
inline std::vector<double> sum_of_two_squares_table(const SieveTables& t, std::uint32_t n) {
  auto f = detail::multiplicative(t, n, [](std::uint32_t p, int e) -> double {
    if (p == 2) return 1.0;
    if (p % 4 == 1) return e + 1.0;
    return (e % 2 == 0) ? 1.0 : 0.0;
  });
  for (std::uint32_t k = 1; k <= n; ++k) f[k] *= 4.0;
  return f;
}

inline CoefficientSequence build_catalog(Catalog name, double cutoff,
                                         double budget = default_cutoff_budget) {
  if (!(cutoff >= 1.0)) throw DomainError("catalog cutoff must be >= 1");
  if (cutoff > budget)
    throw ResourceError("cutoff " + std::to_string(cutoff) + " exceeds memory budget " +
                        std::to_string(budget));
  const auto n = static_cast<std::uint32_t>(std::floor(cutoff));
  std::vector<Term> terms;
  const std::string label = to_string(name);

  if (name == Catalog::unit) {
    return CoefficientSequence({{1.0, 1.0}}, label, cutoff, std::nullopt);
  }

  const SieveTables t = linear_sieve(n);
  std::vector<double> a;
  TailMajorant tail;
  switch (name) {
    case Catalog::von_mangoldt:
      a.assign(n + 1, 0.0);
      for (std::uint32_t k = 2; k <= n; ++k)
        if (t.prime_power[k] == k) a[k] = std::log(static_cast<double>(t.spf[k]));
      tail = {1.0, 1.0, 1.0};  // Lambda(n) <= log n <= n
      break;
    case Catalog::moebius:
      a = detail::multiplicative(t, n, [](std::uint32_t, int e) { return e == 1 ? -1.0 : 0.0; });
      tail = {1.0, 0.0, 1.0};
      break;
    case Catalog::divisor:
      a = detail::multiplicative(t, n, [](std::uint32_t, int e) { return e + 1.0; });
      tail = {2.0, 0.5, 1.0};  // d(n) <= 2 sqrt(n)
      break;
    case Catalog::gauss_r2:
      a = sum_of_two_squares_table(t, n);
      tail = {8.0, 0.5, 1.0};  // r2(n) <= 4 d(n)
      break;
    case Catalog::unit:
      break;
  }
  terms.reserve(n);
  for (std::uint32_t k = 1; k <= n; ++k)
    if (a[k] != 0.0) terms.push_back({static_cast<double>(k), a[k]});
  return CoefficientSequence(std::move(terms), label, cutoff, tail);
}

// Parses `lambda,a` rows; blank lines and `#` comments are skipped.
inline CoefficientSequence parse_sequence_csv(std::istream& in, std::string label = "file") {
  std::vector<Term> terms;
  std::string line;
  std::size_t lineno = 0;
  auto parse_num = [&](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (!s.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (s.empty() || ec != std::errc{} || ptr != last || !std::isfinite(v))
      throw ParseError("malformed number '" + std::string(s) + "'", lineno);
    return v;
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view sv(line);
    if (auto hash = sv.find('#'); hash != std::string_view::npos) sv = sv.substr(0, hash);
    if (sv.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    const auto comma = sv.find(',');
    if (comma == std::string_view::npos || sv.find(',', comma + 1) != std::string_view::npos)
      throw ParseError("expected 'lambda,a'", lineno);
    const double lambda = parse_num(sv.substr(0, comma));
    const double a = parse_num(sv.substr(comma + 1));
    if (!(lambda > 0.0)) throw ParseError("lambda must be positive", lineno);
    if (!terms.empty() && !(lambda > terms.back().lambda))
      throw ParseError("lambdas not strictly increasing", lineno);
    terms.push_back({lambda, a});
  }
  if (terms.empty()) throw ParseError("no coefficient rows", 0);
  const double cutoff = terms.back().lambda;
  try {
    return CoefficientSequence(std::move(terms), std::move(label), cutoff, std::nullopt);
  } catch (const DomainError& e) {
    throw ParseError(e.what(), lineno);
  }
}

inline CoefficientSequence from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path, 0);
  return parse_sequence_csv(in, path);
}

// Rescales lambdas by 1/lambda_1 so the first denominator is 1. The scale
// lambda_1 is returned so results can be translated back.
inline std::pair<CoefficientSequence, double> normalize(const CoefficientSequence& seq) {
  const double scale = seq.terms().front().lambda;
  std::vector<Term> t = seq.terms();
  for (auto& term : t) term.lambda /= scale;
  std::optional<TailMajorant> tail = seq.tail();
  if (tail) {
    tail->bound *= std::pow(scale, tail->exponent);
    tail->min_gap /= scale;
  }
  return {CoefficientSequence(std::move(t), seq.label(), seq.cutoff() / scale, tail), scale};
}

}  // namespace dosc
