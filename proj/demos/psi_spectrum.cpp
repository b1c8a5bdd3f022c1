// psi(x) - x on [1e2, 1e6]: witnesses against x^(1/2) and the log-frequency
// peaks, next to the zeta zeros read from a table.
#include <cstdio>
#include <string>

#include "dosc/analytic.hpp"
#include "dosc/explicit_formula.hpp"
#include "dosc/oscillation.hpp"

int main(int argc, char** argv) {
  using namespace dosc;
  const std::string zeros_path = argc > 1 ? argv[1] : "data/zeta_zeros.txt";
  const auto w = WeightFunction::perron();
  const auto es =
      error_series(build_catalog(Catalog::von_mangoldt, 1e6), w, presets::psi(w), log_grid(100, 1e6, 200));

  const auto rep = omega_witnesses(es, Envelope(0.5, 1, 0.05));
  std::printf("witnesses above 0.05 x^(1/2): %zu, below: %zu\n", rep.plus.size(), rep.minus.size());

  PeriodogramOptions opt;
  opt.t_max = 60.0;
  opt.max_peaks = 5;
  const auto peaks = log_periodogram(es, 0.5, opt);
  try {
    const auto zeros = load_zeros(zeros_path);
    for (std::size_t i = 0; i < peaks.size() && i < zeros.count(); ++i)
      std::printf("peak %8.4f  power %10.4g   zero %8.4f\n", peaks[i].t, peaks[i].power, zeros.ordinates[i]);
  } catch (const Error& e) {
    for (const auto& p : peaks) std::printf("peak %8.4f  power %10.4g\n", p.t, p.power);
    std::fprintf(stderr, "%s\n", e.what());
  }
}
