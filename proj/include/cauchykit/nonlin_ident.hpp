#pragma once

#include <vector>

#include "cauchykit/trace_space.hpp"

namespace cauchykit {

struct BinRow {
  double t_center = 0.0;
  double f_value = 0.0;
  double weight = 0.0;      // accumulated surface measure
  double min_grad = 0.0;    // min |grad' u| over contributing nodes
  double dispersion = 0.0;  // weighted variance of the flux within the bin
  int count = 0;
  bool regular = false;
};

// Sampled reconstruction t -> f_eps(t) on V = [t_min, t_max].
struct NonlinearityTable {
  double t_min = 0.0;
  double t_max = 0.0;
  std::vector<BinRow> rows;

  double bin_width() const;
  // Piecewise-linear interpolation through regular-bin centers, clamped at
  // the ends; requires at least one regular bin.
  double evaluate(double t) const;
  // Shifted so f(0) = 0 (no-op when 0 is outside V).
  NonlinearityTable anchored_at_zero() const;
};

// Coarea-weighted binned average: each Gamma1 quadrature node deposits its
// surface element into the bin of u(x) and (element * flux(x)) into the
// numerator; f_i = numerator / weight.  delta < 0 picks the default floor
// 1e-3 * range(u) / |Gamma1|; delta = 0 disables the floor.
NonlinearityTable identify(const TraceFunction& u_trace, const TraceFunction& flux_trace,
                           int bins, double delta = -1.0);

// Quadrature of integral (f(u) - flux)^2 over Gamma1.
double best_fit(const NonlinearityTable& table, const TraceFunction& u_trace,
                const TraceFunction& flux_trace);

struct BinDiagnostics {
  double t_lo = 0.0, t_hi = 0.0;
  double min_grad = 0.0;
  int count = 0;
  bool regular = false;
};

std::vector<BinDiagnostics> regular_value_report(const TraceFunction& u_trace,
                                                 int bins, double delta);

}  // namespace cauchykit
