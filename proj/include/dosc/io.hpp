#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "dosc/analytic.hpp"
#include "dosc/error.hpp"
#include "dosc/oscillation.hpp"
#include "dosc/pole.hpp"
#include "dosc/series.hpp"

namespace dosc::io {

using nlohmann::json;

// Shortest decimal that parses back to the same double.
inline std::string fmt(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

// ---- PoleSpec files: [{re, im, order, laurent: [{re, im}, ...]}, ...]

inline json to_json(const PoleSpec& p) {
  json lc = json::array();
  for (const auto& c : p.laurent) lc.push_back({{"re", c.real()}, {"im", c.imag()}});
  return {{"re", p.u.real()}, {"im", p.u.imag()}, {"order", p.order()}, {"laurent", lc}};
}

inline PoleSpec pole_from_json(const json& j) {
  try {
    std::vector<cplx> c;
    for (const auto& e : j.at("laurent")) c.emplace_back(e.at("re").get<double>(), e.value("im", 0.0));
    const int order = j.at("order").get<int>();
    if (order != static_cast<int>(c.size())) throw ParseError("pole order does not match laurent length", 0);
    return PoleSpec({j.at("re").get<double>(), j.value("im", 0.0)}, std::move(c));
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad pole entry: ") + e.what(), 0);
  } catch (const DomainError& e) {
    throw ParseError(e.what(), 0);
  }
}

inline std::vector<PoleSpec> parse_poles(std::istream& in) {
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(std::string("pole file is not JSON: ") + e.what(), 0);
  }
  if (!j.is_array()) throw ParseError("pole file must hold a JSON array", 0);
  std::vector<PoleSpec> out;
  for (const auto& e : j) out.push_back(pole_from_json(e));
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t k = 0; k < i; ++k)
      if (out[i].u == out[k].u) throw ParseError("two poles at the same location", 0);
  return out;
}

inline std::vector<PoleSpec> load_poles(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open pole file " + path, 0);
  return parse_poles(in);
}

inline json to_json(const std::vector<PoleSpec>& poles) {
  json a = json::array();
  for (const auto& p : poles) a.push_back(to_json(p));
  return a;
}

// ---- Error-series CSV: header `x,A_v,MT,E` (synthetic series: `x,E`)

inline void write_error_csv(std::ostream& out, const ErrorTable& t) {
  out << "x,A_v,MT,E\n";
  for (std::size_t i = 0; i < t.grid.size(); ++i)
    out << fmt(t.grid[i]) << ',' << fmt(t.summatory[i]) << ',' << fmt(t.main_term[i]) << ',' << fmt(t.error[i]) << '\n';
}

inline void write_series_csv(std::ostream& out, const ErrorSeries& es) {
  out << "x,E\n";
  for (std::size_t i = 0; i < es.size(); ++i) out << fmt(es.grid[i]) << ',' << fmt(es.values[i]) << '\n';
}

// Reads any CSV with a header naming columns `x` and `E`.
inline ErrorSeries read_series_csv(std::istream& in, const std::string& source = "csv") {
  std::string line;
  std::size_t lineno = 0;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
      while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
      out.push_back(cell);
    }
    return out;
  };
  int cx = -1, ce = -1;
  std::vector<double> xs, es;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split(line);
    if (cx < 0) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i] == "x") cx = static_cast<int>(i);
        if (cells[i] == "E") ce = static_cast<int>(i);
      }
      if (cx < 0 || ce < 0) throw ParseError("header must name columns x and E", lineno);
      continue;
    }
    if (static_cast<int>(cells.size()) <= std::max(cx, ce)) throw ParseError("short row", lineno);
    auto num = [&](const std::string& s) {
      double v = 0.0;
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc{} || p != s.data() + s.size()) throw ParseError("malformed number '" + s + "'", lineno);
      return v;
    };
    xs.push_back(num(cells[static_cast<std::size_t>(cx)]));
    es.push_back(num(cells[static_cast<std::size_t>(ce)]));
  }
  if (cx < 0) throw ParseError("empty error-series file", 0);
  try {
    return ErrorSeries(std::move(xs), std::move(es), {{"source", source}});
  } catch (const DomainError& e) {
    throw ParseError(e.what(), 0);
  }
}

inline ErrorSeries load_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path, 0);
  return read_series_csv(in, path);
}

// ---- Reports

inline json to_json(const Witness& w) { return {{"x", w.x}, {"normalized", w.normalized}}; }

inline Witness witness_from_json(const json& j) { return {j.at("x").get<double>(), j.at("normalized").get<double>()}; }

inline json to_json(const WitnessReport& r) {
  json plus = json::array(), minus = json::array(), dec = json::array();
  for (const auto& w : r.plus) plus.push_back(to_json(w));
  for (const auto& w : r.minus) minus.push_back(to_json(w));
  for (const auto& d : r.decades) dec.push_back({{"lo", d.lo}, {"hi", d.hi}, {"plus", d.plus}, {"minus", d.minus}});
  json j{{"envelope", {{"sigma0", r.envelope.sigma0}, {"r", r.envelope.r}, {"k", r.envelope.k}}},
         {"plus_witnesses", plus},
         {"minus_witnesses", minus},
         {"best_plus", r.best_plus ? to_json(*r.best_plus) : json(nullptr)},
         {"best_minus", r.best_minus ? to_json(*r.best_minus) : json(nullptr)},
         {"decades", dec},
         {"omega_pm_supported_final_decade", r.omega_supported}};
  return j;
}

inline WitnessReport witness_report_from_json(const json& j) {
  WitnessReport r;
  const auto& e = j.at("envelope");
  r.envelope = Envelope(e.at("sigma0").get<double>(), e.at("r").get<int>(), e.at("k").get<double>());
  for (const auto& w : j.at("plus_witnesses")) r.plus.push_back(witness_from_json(w));
  for (const auto& w : j.at("minus_witnesses")) r.minus.push_back(witness_from_json(w));
  if (!j.at("best_plus").is_null()) r.best_plus = witness_from_json(j.at("best_plus"));
  if (!j.at("best_minus").is_null()) r.best_minus = witness_from_json(j.at("best_minus"));
  for (const auto& d : j.at("decades"))
    r.decades.push_back({d.at("lo").get<double>(), d.at("hi").get<double>(), d.at("plus").get<bool>(), d.at("minus").get<bool>()});
  r.omega_supported = j.at("omega_pm_supported_final_decade").get<bool>();
  return r;
}

inline void write_witness_csv(std::ostream& out, const WitnessReport& r) {
  out << "sign,x,normalized\n";
  for (const auto& w : r.plus) out << "+," << fmt(w.x) << ',' << fmt(w.normalized) << '\n';
  for (const auto& w : r.minus) out << "-," << fmt(w.x) << ',' << fmt(w.normalized) << '\n';
}

inline json to_json(const ExponentFit& f) {
  json pts = json::array();
  for (const auto& [x, s] : f.points) pts.push_back({x, s});
  return {{"sigma_hat", f.sigma_hat}, {"std_error", f.std_error}, {"ci", {f.ci_low, f.ci_high}}, {"points", pts}};
}

inline json to_json(const std::vector<SpectralPeak>& peaks) {
  json a = json::array();
  for (const auto& p : peaks) a.push_back({{"t", p.t}, {"power", p.power}});
  return a;
}

inline json to_json(const SignChanges& s) {
  json b = json::array();
  for (const auto& [lo, hi] : s.brackets) b.push_back({lo, hi});
  return {{"count", s.count}, {"brackets", b}};
}

inline json to_json(const ErrorSeries& es) {
  json meta = json::object();
  for (const auto& [k, v] : es.meta) meta[k] = v;
  return {{"grid", es.grid}, {"values", es.values}, {"meta", meta}};
}

inline ErrorSeries series_from_json(const json& j) {
  std::map<std::string, std::string> meta;
  if (j.contains("meta"))
    for (const auto& [k, v] : j.at("meta").items()) meta[k] = v.get<std::string>();
  return ErrorSeries(j.at("grid").get<std::vector<double>>(), j.at("values").get<std::vector<double>>(), meta);
}

// Polyline plot of E(x)/x^sigma0 against log10 x.
inline void write_svg(std::ostream& out, const ErrorSeries& es, double sigma0, const std::string& title) {
  const double W = 800, H = 400, pad = 40;
  std::vector<double> lx(es.size()), y(es.size());
  double ymin = 0, ymax = 0;
  for (std::size_t i = 0; i < es.size(); ++i) {
    lx[i] = std::log10(es.grid[i]);
    y[i] = es.values[i] / std::pow(es.grid[i], sigma0);
    ymin = std::min(ymin, y[i]);
    ymax = std::max(ymax, y[i]);
  }
  if (ymax == ymin) ymax = ymin + 1.0;
  const double x0 = lx.empty() ? 0 : lx.front(), x1 = lx.empty() ? 1 : std::max(lx.back(), x0 + 1e-9);
  auto px = [&](double v) { return pad + (v - x0) / (x1 - x0) * (W - 2 * pad); };
  auto py = [&](double v) { return H - pad - (v - ymin) / (ymax - ymin) * (H - 2 * pad); };
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  out << "<text x=\"" << pad << "\" y=\"20\" font-size=\"14\">" << title << " : E(x)/x^" << fmt(sigma0)
      << " vs log10 x</text>\n";
  out << "<line x1=\"" << pad << "\" y1=\"" << py(0) << "\" x2=\"" << W - pad << "\" y2=\"" << py(0)
      << "\" stroke=\"#999\"/>\n";
  out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1\" points=\"";
  for (std::size_t i = 0; i < es.size(); ++i) out << px(lx[i]) << ',' << py(y[i]) << ' ';
  out << "\"/>\n</svg>\n";
}

}  // namespace dosc::io
