#pragma once

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dosc/analytic.hpp"
#include "dosc/error.hpp"
#include "dosc/explicit_formula.hpp"
#include "dosc/io.hpp"
#include "dosc/oscillation.hpp"
#include "dosc/selfcheck.hpp"
#include "dosc/sequences.hpp"
#include "dosc/series.hpp"
#include "dosc/synthesis.hpp"
#include "dosc/weights.hpp"

namespace dosc::cli {

using nlohmann::json;

enum ExitCode : int { ok = 0, selfcheck_failed = 1, config_error = 2, numeric_error = 3 };

inline constexpr const char* mt_presets = "divisor|psi|none|file:<path>";

struct GridSpec {
  double x_min = 10.0;
  double x_max = 1e6;
  int per_decade = 200;

  std::vector<double> build() const {
    if (per_decade < 10) throw DomainError("points per decade must be >= 10");
    return log_grid(x_min, x_max, per_decade);
  }
  json to_json() const { return {{"xmin", x_min}, {"xmax", x_max}, {"ppd", per_decade}}; }
};

// Everything that determines a run's output.
struct RunConfig {
  std::string seq;
  std::string weight = "perron";
  std::string mt;
  GridSpec grid;
  double budget = default_cutoff_budget;
  std::uint64_t seed = 1;

  json to_json() const {
    return {{"seq", seq}, {"weight", weight}, {"mt", mt}, {"grid", grid.to_json()}, {"budget", budget}, {"seed", seed}};
  }
};

// Fails with a configuration error when the whole file cannot be written.
inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DomainError("cannot write " + path);
  f << content;
}

inline CoefficientSequence load_sequence(const std::string& spec, double cutoff, double budget) {
  if (spec.starts_with("file:")) return from_file(spec.substr(5));
  const auto cat = parse_catalog(spec);
  if (!cat) throw DomainError("unknown sequence '" + spec + "' (expected von_mangoldt|psi|moebius|divisor|gauss_r2|unit|file:<path>)");
  return build_catalog(*cat, std::max(1.0, cutoff), budget);
}

inline MainTerm load_main_term(const std::string& spec, const WeightFunction& w) {
  if (spec.empty()) throw DomainError(std::string("missing --mt; presets: ") + mt_presets);
  if (spec == "divisor") return presets::divisor(w);
  if (spec == "psi") return presets::psi(w);
  if (spec == "none") return presets::none();
  if (spec.starts_with("file:")) return MainTerm(io::load_poles(spec.substr(5)), spec);
  throw DomainError("unknown main term '" + spec + "'; presets: " + mt_presets);
}

// Sequence long enough for every grid point: the certificate is monotone in
// x, so the largest x decides.
inline ErrorTable compute_error_table(const RunConfig& cfg, std::string* label = nullptr) {
  const auto w = parse_weight(cfg.weight);
  const MainTerm mt = load_main_term(cfg.mt, w);
  const auto grid = cfg.grid.build();
  double cutoff = grid.back();
  if (!cfg.seq.starts_with("file:") && !w.compact()) {
    const auto cat = parse_catalog(cfg.seq);
    if (cat && *cat != Catalog::unit) {
      const auto probe = build_catalog(*cat, 2.0);
      cutoff = required_cutoff(*probe.tail(), w, grid.back(), 1e-9);
    }
  }
  const auto seq = load_sequence(cfg.seq, cutoff, cfg.budget);
  if (label) *label = seq.label() + "/" + w.name() + "/" + mt.label();
  return error_table(seq, w, mt, grid);
}

inline Envelope parse_envelope(const std::string& s) {
  std::stringstream ss(s);
  std::string a, b, c;
  if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c, ','))
    throw DomainError("--env expects sigma0,r,k");
  try {
    const double s0 = std::stod(a);
    const int r = std::stoi(b);
    const double k = std::stod(c);
    return Envelope(s0, r, k);
  } catch (const std::invalid_argument&) {
    throw DomainError("--env expects numbers: sigma0,r,k");
  }
}

inline std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw DomainError("bad number '" + item + "' in list");
    }
  }
  return out;
}

inline std::vector<PoleSpec> synthetic_poles(const std::string& poles_file, int pairs, std::uint64_t seed,
                                             double sigma0, double t_min, double t_max, const std::string& pattern) {
  if (!poles_file.empty()) return io::load_poles(poles_file);
  if (pattern != "random" && pattern != "alternating") throw DomainError("--pattern must be random|alternating");
  return random_pole_line(seed, pairs, sigma0, t_min, t_max,
                          pattern == "random" ? CoefficientPattern::random_phase : CoefficientPattern::alternating);
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weighted Dirichlet-series sums, residue main terms and error-term oscillation"};
  app.set_config("--config", "", "TOML configuration file");
  app.require_subcommand(1);

  RunConfig cfg;
  auto add_grid = [&](CLI::App* sub) {
    sub->add_option("--xmin", cfg.grid.x_min, "grid start (>= 1)");
    sub->add_option("--xmax", cfg.grid.x_max, "grid end");
    sub->add_option("--ppd", cfg.grid.per_decade, "log-uniform points per decade (>= 10)");
  };
  auto add_source = [&](CLI::App* sub) {
    sub->add_option("--seq", cfg.seq, "von_mangoldt|psi|moebius|divisor|gauss_r2|unit|file:<csv>");
    sub->add_option("--weight", cfg.weight, "perron|exp|riesz:<delta>|gauss");
    sub->add_option("--mt", cfg.mt, std::string("main term: ") + mt_presets);
    sub->add_option("--budget", cfg.budget, "largest sieve cutoff allowed");
    add_grid(sub);
  };

  // err
  auto* err_cmd = app.add_subcommand("err", "write the error series E(x) = A_v(x) - MT(x)");
  add_source(err_cmd);
  std::string out_csv, out_json, out_svg, witness_csv;
  double svg_sigma0 = 0.5;
  err_cmd->add_option("--out", out_csv, "CSV path (x,A_v,MT,E); stdout if omitted");
  err_cmd->add_option("--json", out_json, "also write the series as JSON");
  err_cmd->add_option("--svg", out_svg, "plot E(x)/x^sigma0");
  err_cmd->add_option("--sigma0", svg_sigma0, "normalization exponent for the plot");

  // oscillate
  auto* osc_cmd = app.add_subcommand("oscillate", "sign changes, Omega+- witnesses, exponent fit, log-periodogram");
  add_source(osc_cmd);
  std::string in_path, env_spec, periodogram_spec, probe_spec, zeros_path;
  bool do_fit = false;
  osc_cmd->add_option("--in", in_path, "read E from a CSV (columns x,E) or JSON series instead of computing it");
  osc_cmd->add_option("--env", env_spec, "envelope sigma0,r,k for g(x) = k x^sigma0 log^{r-1} x")->required();
  osc_cmd->add_option("--periodogram", periodogram_spec, "tmin,tmax[,sigma0] for the log-frequency spectrum");
  osc_cmd->add_flag("--fit", do_fit, "fit the growth exponent (>= 3 decades)");
  osc_cmd->add_option("--probe", probe_spec, "comma-separated sigmas for the abscissa probe");
  osc_cmd->add_option("--zeros", zeros_path, "zeta-zero table to compare periodogram peaks with");
  osc_cmd->add_option("--json", out_json, "report path; stdout if omitted");
  osc_cmd->add_option("--witness-csv", witness_csv, "witness table path");

  // explicit
  auto* exp_cmd = app.add_subcommand("explicit", "exponentially weighted psi against its pole expansion");
  std::string x_list = "100";
  double t_cutoff = -1.0, ef_tol = 1e-6;
  exp_cmd->add_option("--zeros", zeros_path, "zeta-zero ordinates, one per line")->required();
  exp_cmd->add_option("--X", x_list, "comma-separated X values");
  exp_cmd->add_option("--tmax", t_cutoff, "use zeros with ordinate below this (default: from --tol)");
  exp_cmd->add_option("--tol", ef_tol, "allowed truncation error of the zero sum");
  exp_cmd->add_option("--json", out_json, "report path; stdout if omitted");
  exp_cmd->add_option("--out", out_csv, "CSV table path");

  // synth
  auto* syn_cmd = app.add_subcommand("synth", "error series made of a line of poles");
  std::string poles_file, pattern = "random", eps_spec = "0.05,0.1";
  int pairs = 50;
  double sigma0 = 0.5, t_lo = 10.0, t_hi = 500.0, k_env = 1.0;
  bool cancellation = false;
  syn_cmd->add_option("--poles", poles_file, "PoleSpec JSON file");
  syn_cmd->add_option("--pairs", pairs, "random conjugate pairs when no --poles");
  syn_cmd->add_option("--seed", cfg.seed, "random seed");
  syn_cmd->add_option("--sigma0", sigma0, "real part of the random poles");
  syn_cmd->add_option("--tmin", t_lo, "smallest random ordinate");
  syn_cmd->add_option("--tmax", t_hi, "largest random ordinate");
  syn_cmd->add_option("--pattern", pattern, "random|alternating residues");
  syn_cmd->add_flag("--cancellation", cancellation, "run the per-decade witness study");
  syn_cmd->add_option("--eps", eps_spec, "epsilons for the cancellation study");
  syn_cmd->add_option("--k", k_env, "envelope constant for the cancellation study");
  syn_cmd->add_option("--out", out_csv, "CSV path (x,E); stdout if omitted");
  syn_cmd->add_option("--json", out_json, "report path (cancellation study)");
  add_grid(syn_cmd);

  // selfcheck
  auto* chk_cmd = app.add_subcommand("selfcheck", "numerical self-checks of the library");
  double chk_tol = 0.0;
  std::string fault;
  chk_cmd->add_option("--tol", chk_tol, "override every check tolerance");
  chk_cmd->add_option("--seed", cfg.seed, "random seed");
  chk_cmd->add_option("--inject-fault", fault, "test hook: 'gamma' perturbs complex_gamma")->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    if (err_cmd->parsed() || osc_cmd->parsed()) err << "main-term presets: " << mt_presets << "\n";
    return config_error;
  }

  auto emit = [&](const std::string& path, const std::string& content) {
    if (path.empty())
      out << content;
    else
      write_file(path, content);
  };

  try {
    if (err_cmd->parsed()) {
      if (cfg.seq.empty()) throw DomainError("missing --seq");
      if (cfg.mt.empty()) throw DomainError(std::string("missing --mt for --seq ") + cfg.seq + "; presets: " + mt_presets);
      std::string label;
      const ErrorTable t = compute_error_table(cfg, &label);
      std::ostringstream csv;
      io::write_error_csv(csv, t);
      emit(out_csv, csv.str());
      const ErrorSeries es(t.grid, t.error, {{"run", label}});
      if (!out_json.empty()) {
        json j = io::to_json(es);
        j["config"] = cfg.to_json();
        write_file(out_json, j.dump(2) + "\n");
      }
      if (!out_svg.empty()) {
        std::ostringstream svg;
        io::write_svg(svg, es, svg_sigma0, label);
        write_file(out_svg, svg.str());
      }
      return ok;
    }

    if (osc_cmd->parsed()) {
      const Envelope env = parse_envelope(env_spec);
      ErrorSeries es;
      json source;
      if (!in_path.empty()) {
        if (in_path.ends_with(".json")) {
          std::ifstream f(in_path);
          if (!f) throw ParseError("cannot open " + in_path, 0);
          json j;
          try {
            f >> j;
            es = io::series_from_json(j);
          } catch (const json::exception& e) {
            throw ParseError(std::string("bad series JSON: ") + e.what(), 0);
          }
        } else {
          es = io::load_series_csv(in_path);
        }
        source = {{"in", in_path}};
      } else {
        if (cfg.seq.empty()) throw DomainError("oscillate needs --in or --seq");
        if (cfg.mt.empty()) throw DomainError(std::string("missing --mt for --seq ") + cfg.seq + "; presets: " + mt_presets);
        std::string label;
        const ErrorTable t = compute_error_table(cfg, &label);
        es = ErrorSeries(t.grid, t.error, {{"run", label}});
        source = cfg.to_json();
      }
      json rep;
      rep["source"] = source;
      rep["points"] = es.size();
      rep["sign_changes"] = io::to_json(sign_changes(es));
      const WitnessReport wr = omega_witnesses(es, env);
      rep["witnesses"] = io::to_json(wr);
      if (do_fit) rep["fit"] = io::to_json(fit_exponent(es));
      if (!probe_spec.empty()) {
        json probes = json::array();
        for (const auto& p : abscissa_probe(es, parse_list(probe_spec)))
          probes.push_back({{"sigma", p.sigma}, {"slope", p.slope}, {"verdict", to_string(p.verdict)},
                            {"final_partial_integral", p.partial.back()}});
        rep["abscissa_probe"] = probes;
      }
      if (!periodogram_spec.empty()) {
        const auto v = parse_list(periodogram_spec);
        if (v.size() < 2 || v.size() > 3) throw DomainError("--periodogram expects tmin,tmax[,sigma0]");
        PeriodogramOptions opt;
        opt.t_min = v[0];
        opt.t_max = v[1];
        const double s0 = v.size() == 3 ? v[2] : env.sigma0;
        const auto peaks = log_periodogram(es, s0, opt);
        rep["periodogram"] = {{"sigma0", s0}, {"peaks", io::to_json(peaks)}};
        if (!zeros_path.empty() && !peaks.empty()) {
          const ZerosTable z = load_zeros(zeros_path);
          double nearest = z.ordinates.front();
          for (double g : z.ordinates)
            if (std::abs(g - peaks.front().t) < std::abs(nearest - peaks.front().t)) nearest = g;
          rep["zeros_check"] = {{"source", z.source}, {"top_peak", peaks.front().t}, {"nearest_ordinate", nearest},
                                {"offset", peaks.front().t - nearest}};
        }
      }
      emit(out_json, rep.dump(2) + "\n");
      if (!witness_csv.empty()) {
        std::ostringstream csv;
        io::write_witness_csv(csv, wr);
        write_file(witness_csv, csv.str());
      }
      return ok;
    }

    if (exp_cmd->parsed()) {
      const ZerosTable z = load_zeros(zeros_path);
      json rows = json::array();
      std::ostringstream csv;
      csv << "X,direct,reconstruction,difference,zeros_used,tmax\n";
      for (double X : parse_list(x_list)) {
        const double need = explicit_formula::required_zero_cutoff(X, ef_tol);
        const double T = t_cutoff > 0.0 ? t_cutoff : need;
        if (z.max_ordinate() < T)
          throw NumericError("zeros file " + z.source + " ends at " + io::fmt(z.max_ordinate()) +
                             "; required T = " + io::fmt(T));
        const auto r = explicit_formula::evaluate(X, z, T);
        rows.push_back({{"X", r.X}, {"direct", r.direct}, {"reconstruction", r.reconstruction},
                        {"difference", r.difference}, {"zeros_used", r.zeros_used}, {"tmax", r.t_cutoff},
                        {"tmax_for_tol", need}});
        csv << io::fmt(r.X) << ',' << io::fmt(r.direct) << ',' << io::fmt(r.reconstruction) << ','
            << io::fmt(r.difference) << ',' << r.zeros_used << ',' << io::fmt(r.t_cutoff) << '\n';
      }
      json rep{{"zeros", {{"source", z.source}, {"count", z.count()}, {"max_ordinate", z.max_ordinate()}}},
               {"weight", "exp"},
               {"tol", ef_tol},
               {"rows", rows}};
      emit(out_json, rep.dump(2) + "\n");
      if (!out_csv.empty()) write_file(out_csv, csv.str());
      return ok;
    }

    if (syn_cmd->parsed()) {
      const auto poles = synthetic_poles(poles_file, pairs, cfg.seed, sigma0, t_lo, t_hi, pattern);
      const auto grid = cfg.grid.build();
      const ErrorSeries es = synthesize_pole_spectrum(poles, grid);
      std::ostringstream csv;
      io::write_series_csv(csv, es);
      if (cancellation) {
        const CancellationReport cr = cancellation_study(poles, grid, parse_list(eps_spec), k_env);
        json runs = json::array();
        for (const auto& run : cr.runs)
          runs.push_back({{"epsilon", run.epsilon}, {"every_decade", run.every_decade},
                          {"witnesses", io::to_json(run.witnesses)}});
        json rep{{"seed", cfg.seed}, {"poles_file", poles_file}, {"pairs", pairs}, {"pattern", pattern},
                 {"grid", cfg.grid.to_json()}, {"sigma0", cr.sigma0}, {"poles", cr.poles}, {"runs", runs}};
        if (!out_csv.empty()) write_file(out_csv, csv.str());
        emit(out_json, rep.dump(2) + "\n");
      } else {
        emit(out_csv, csv.str());
      }
      return ok;
    }

    if (chk_cmd->parsed()) {
      struct FaultReset {
        ~FaultReset() { detail::gamma_fault() = 0.0; }
      } reset_fault;
      if (!fault.empty()) {
        if (fault != "gamma") throw DomainError("unknown fault '" + fault + "'");
        detail::gamma_fault() = 1e-6;
      }
      const auto checks = selfcheck::run_all(cfg.seed, chk_tol);
      bool all = true;
      json rep = json::array();
      for (const auto& c : checks) {
        out << (c.pass ? "PASS " : "FAIL ") << c.name << "  worst=" << io::fmt(c.worst)
            << " allowed=" << io::fmt(c.allowed) << "\n";
        all = all && c.pass;
      }
      if (!all) {
        err << "failing checks:";
        for (const auto& c : checks)
          if (!c.pass) err << ' ' << c.name;
        err << "\n";
        return selfcheck_failed;
      }
      return ok;
    }
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << "\n";
    return numeric_error;
  } catch (const PoleError& e) {
    err << "numeric error: " << e.what() << "\n";
    return numeric_error;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return config_error;
  }
  return config_error;
}

}  // namespace dosc::cli
