// Error term of the divisor summatory function against its residue main term.
#include <cmath>
#include <cstdio>

#include "dosc/analytic.hpp"
#include "dosc/oscillation.hpp"

int main() {
  using namespace dosc;
  const auto w = WeightFunction::perron();
  const auto es = error_series(build_catalog(Catalog::divisor, 1e6), w, presets::divisor(w), log_grid(10, 1e6, 200));

  double worst = 0.0, at = 0.0;
  for (std::size_t i = 0; i < es.size(); ++i) {
    const double r = std::abs(es.values[i]) / std::cbrt(es.grid[i]);
    if (r > worst) worst = r, at = es.grid[i];
  }
  std::printf("E(10)            %.6f\n", es.values.front());
  std::printf("sign changes     %zu\n", sign_changes(es).count);
  std::printf("max |E|/x^(1/3)  %.3f at x = %.1f\n", worst, at);
  const auto fit = fit_exponent(es);
  std::printf("growth exponent  %.3f  [%.3f, %.3f]\n", fit.sigma_hat, fit.ci_low, fit.ci_high);
}
