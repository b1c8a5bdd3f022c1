#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "dosc/error.hpp"

namespace dosc {

// Sampled error term E(x) on an increasing grid of x >= 1.
struct ErrorSeries {
  std::vector<double> grid;
  std::vector<double> values;
  std::map<std::string, std::string> meta;

  ErrorSeries() = default;
  ErrorSeries(std::vector<double> g, std::vector<double> v, std::map<std::string, std::string> m = {})
      : grid(std::move(g)), values(std::move(v)), meta(std::move(m)) {
    validate();
  }

  std::size_t size() const noexcept { return grid.size(); }
  bool empty() const noexcept { return grid.empty(); }

  // log10(x_max / x_min); 0 for fewer than two points.
  double decades() const { return grid.size() < 2 ? 0.0 : std::log10(grid.back() / grid.front()); }

  void validate() const {
    if (grid.size() != values.size()) throw DomainError("grid and values differ in length");
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!(grid[i] >= 1.0) || !std::isfinite(grid[i])) throw DomainError("grid values must be finite and >= 1");
      if (i > 0 && !(grid[i] > grid[i - 1])) throw DomainError("grid must be strictly increasing");
      if (!std::isfinite(values[i])) throw DomainError("error series has a non-finite value");
    }
  }
};

// x_i = x_min * 10^{i / per_decade}, i = 0, 1, ... while x_i <= x_max.
inline std::vector<double> log_grid(double x_min, double x_max, int per_decade) {
  if (!(x_min >= 1.0)) throw DomainError("grid x_min must be >= 1");
  if (!(x_max >= x_min)) throw DomainError("grid x_max must be >= x_min");
  if (per_decade < 1) throw DomainError("points per decade must be positive");
  const double span = std::log10(x_max / x_min) * per_decade;
  const auto n = static_cast<std::size_t>(std::floor(span + 1e-9));
  std::vector<double> g(n + 1);
  for (std::size_t i = 0; i <= n; ++i) g[i] = x_min * std::pow(10.0, static_cast<double>(i) / per_decade);
  return g;
}

// True when log x is uniformly spaced to relative 1e-6.
inline bool is_log_uniform(const std::vector<double>& grid) {
  if (grid.size() < 3) return grid.size() == 2;
  const double step = (std::log(grid.back()) - std::log(grid.front())) / static_cast<double>(grid.size() - 1);
  if (!(step > 0.0)) return false;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double d = std::log(grid[i]) - std::log(grid[i - 1]);
    if (std::abs(d - step) > 1e-6 * step) return false;
  }
  return true;
}

}  // namespace dosc
