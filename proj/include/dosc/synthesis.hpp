#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "dosc/error.hpp"
#include "dosc/parallel.hpp"
#include "dosc/pole.hpp"
#include "dosc/series.hpp"

namespace dosc {

// Adds the conjugate of every non-real pole whose partner is missing.
inline std::vector<PoleSpec> conjugate_closure(const std::vector<PoleSpec>& poles) {
  std::vector<PoleSpec> out = poles;
  for (const auto& p : poles) {
    if (p.is_real()) continue;
    bool found = false;
    for (const auto& q : poles) found = found || q.u == std::conj(p.u);
    if (!found) out.push_back(p.conjugate());
  }
  return out;
}

// E(x) = sum over poles of residue_term(pole, x), for an error term made only
// of the given poles. Missing conjugates are added so the signal is real.
inline ErrorSeries synthesize_pole_spectrum(const std::vector<PoleSpec>& poles, const std::vector<double>& xs,
                                            unsigned threads = thread_count()) {
  if (poles.empty()) throw DomainError("synthesize_pole_spectrum needs at least one pole");
  const std::vector<PoleSpec> closed = conjugate_closure(poles);
  std::vector<double> values(xs.size());
  std::vector<double> imag_ratio(xs.size());
  parallel_for(
      xs.size(),
      [&](std::size_t i) {
        cplx acc{};
        double mag = 0.0;
        for (const auto& p : closed) {
          const cplx r = residue_term(p, xs[i]);
          acc += r;
          mag += std::abs(r);
        }
        values[i] = acc.real();
        imag_ratio[i] = mag > 0.0 ? std::abs(acc.imag()) / mag : 0.0;
      },
      threads);
  for (double r : imag_ratio)
    if (r > 1e-12) throw NumericError("synthesized signal is not real (conjugate data inconsistent)");
  return ErrorSeries(xs, std::move(values),
                     {{"sequence", "synthetic"}, {"poles", std::to_string(closed.size())}});
}

// Uniform double in [0, 1) from the top 53 bits; stable across standard
// libraries, unlike std::uniform_real_distribution.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

enum class CoefficientPattern { random_phase, alternating };

// `pairs` poles sigma0 + i t_j with t_j uniform in [t_min, t_max] and simple
// residues: unit modulus with random phase, or +-1 alternating. The returned
// list holds one member per pair; synthesis adds the conjugates.
inline std::vector<PoleSpec> random_pole_line(std::uint64_t seed, int pairs, double sigma0, double t_min,
                                              double t_max, CoefficientPattern pattern) {
  if (pairs < 1) throw DomainError("need at least one pole pair");
  if (!(t_max > t_min) || !(t_min > 0.0)) throw DomainError("need 0 < t_min < t_max");
  std::mt19937_64 rng(seed);
  std::vector<PoleSpec> out;
  out.reserve(static_cast<std::size_t>(pairs));
  for (int j = 0; j < pairs; ++j) {
    const double t = t_min + (t_max - t_min) * unit_uniform(rng);
    const double phase = 2.0 * std::numbers::pi * unit_uniform(rng);
    cplx c = pattern == CoefficientPattern::random_phase ? std::polar(1.0, phase)
                                                          : cplx{(j % 2 == 0) ? 1.0 : -1.0, 0.0};
    out.emplace_back(cplx{sigma0, t}, std::vector<cplx>{c});
  }
  return out;
}

}  // namespace dosc
