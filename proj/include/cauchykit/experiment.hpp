#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cauchykit/cylinder_cauchy.hpp"
#include "cauchykit/direct_corrosion.hpp"
#include "cauchykit/nonlin_ident.hpp"
#include "cauchykit/spectral_basis.hpp"

namespace cauchykit {

struct LawSpec {
  std::string name = "linear";  // linear | saturating | piecewise
  double a = 0.2;
  std::vector<double> t;  // piecewise nodes
  std::vector<double> f;  // piecewise values

  NonlinearLaw build() const;
};

struct ExperimentConfig {
  CrossSection cross_section;
  int modes = 16;
  LawSpec law;
  std::vector<double> flux_coeffs{1.0};  // prescribed g in mode coefficients

  std::vector<double> eps_list{1e-1, 1e-2, 1e-3, 1e-4};
  std::uint64_t seed = 20240101;
  int noise_support_begin = 0;
  int noise_support_end = 1;  // [begin, end) mode positions, -1 = all
  bool noise_on_psi = false;
  bool noise_on_g = true;

  double gamma = 0.5;
  CutoffPolicy policy = CutoffPolicy::MuThreshold;

  int bins = 32;
  double delta = -1.0;  // <0: default floor

  double direct_tol = 1e-12;
  int direct_max_iter = 200;
  double direct_damping = 1.0;

  std::string out_dir = "out";

  static ExperimentConfig from_json_file(const std::string& path);
  static ExperimentConfig from_json_text(const std::string& text);
  std::string to_json() const;  // all defaults materialized
  void validate() const;
};

struct EpsResult {
  double eps = 0.0;
  double alpha = 0.0;
  int retained = 0;
  int picard_iterations = 0;
  double trace_error = 0.0;      // Gamma1 trace error, H_half_00 norm
  double flux_error = 0.0;       // Gamma1 flux error, dual norm
  double f_sup_error = 0.0;      // sup |f_eps - f| over interior regular bins
  NonlinearityTable table;
  TraceFunction u_recovered;
  TraceFunction flux_recovered;
};

struct RunReport {
  ExperimentConfig config;
  TraceFunction u_true;      // exact Gamma1 trace from the direct solve
  TraceFunction flux_true;   // exact Gamma1 flux
  std::vector<EpsResult> results;
  std::vector<double> timings_seconds;  // per eps; excluded from report files
};

// simulate -> perturb -> reconstruct -> identify for the first eps in the list.
RunReport run_pipeline(const ExperimentConfig& cfg);
// Same chain for every eps; summary with observed convergence ratios.
RunReport run_sweep(const ExperimentConfig& cfg);

// report.csv (+ summary.csv for multi-eps reports) under dir.
void write_report(const RunReport& report, const std::string& dir);
RunReport load_report(const ExperimentConfig& cfg, const std::string& dir);

// Plot data files plus a gnuplot script; byte-stable for a fixed report.
void emit_plots(const RunReport& report, const std::string& dir);

// CLI entry: command is one of simulate | cauchy | identify | pipeline |
// sweep | svdtable.  Writes artifacts to cfg.out_dir; returns lines to print.
std::string run_command(const ExperimentConfig& cfg, const std::string& command);

}  // namespace cauchykit
