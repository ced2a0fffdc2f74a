#include "cauchykit/nonlin_ident.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cauchykit/errors.hpp"

namespace cauchykit {

double NonlinearityTable::bin_width() const {
  if (rows.empty()) return 0.0;
  return (t_max - t_min) / static_cast<double>(rows.size());
}

double NonlinearityTable::evaluate(double t) const {
  // Interpolate through regular-bin centers; clamp outside their span.
  const BinRow* prev = nullptr;
  for (const BinRow& row : rows) {
    if (!row.regular) continue;
    if (t <= row.t_center) {
      if (!prev) return row.f_value;
      const double w = (t - prev->t_center) / (row.t_center - prev->t_center);
      return (1.0 - w) * prev->f_value + w * row.f_value;
    }
    prev = &row;
  }
  if (!prev) throw ValidationError("nonlinearity table has no regular bins");
  return prev->f_value;
}

NonlinearityTable NonlinearityTable::anchored_at_zero() const {
  if (t_min > 0.0 || t_max < 0.0 || rows.empty()) return *this;
  NonlinearityTable out = *this;
  const double shift = evaluate(0.0);
  for (BinRow& row : out.rows) row.f_value -= shift;
  return out;
}

namespace {

struct NodeData {
  std::vector<double> u, flux, grad;
  double element = 0.0;  // surface measure per node
};

NodeData sample_traces(const TraceFunction& u_trace, const TraceFunction& flux_trace) {
  if (u_trace.basis != flux_trace.basis)
    throw ValidationError("trace and flux use different bases");
  NodeData d;
  d.u = u_trace.basis->synthesize(u_trace.coeffs);
  d.flux = flux_trace.basis->synthesize(flux_trace.coeffs);
  d.grad = u_trace.basis->synthesize_gradient_norm(u_trace.coeffs);
  d.element = u_trace.basis->cell_measure();
  return d;
}

double default_gradient_floor(const TraceFunction& u_trace, const std::vector<double>& u) {
  const auto [lo, hi] = std::minmax_element(u.begin(), u.end());
  return 1e-3 * (*hi - *lo) / u_trace.basis->section_measure();
}

}  // namespace

NonlinearityTable identify(const TraceFunction& u_trace, const TraceFunction& flux_trace,
                           int bins, double delta) {
  if (bins < 2) throw ValidationError("identify needs at least 2 bins");
  const NodeData d = sample_traces(u_trace, flux_trace);

  NonlinearityTable table;
  const auto [lo, hi] = std::minmax_element(d.u.begin(), d.u.end());
  table.t_min = *lo;
  table.t_max = *hi;
  int n_bins = bins;
  if (table.t_max <= table.t_min) {
    n_bins = 1;  // constant trace: single-bin table
    table.t_max = table.t_min;
  }
  if (delta < 0.0) delta = default_gradient_floor(u_trace, d.u);

  table.rows.resize(n_bins);
  const double width = n_bins > 1 ? (table.t_max - table.t_min) / n_bins : 1.0;
  for (int b = 0; b < n_bins; ++b) {
    table.rows[b].t_center = table.t_min + (b + 0.5) * width;
    table.rows[b].min_grad = std::numeric_limits<double>::infinity();
  }
  if (n_bins == 1) table.rows[0].t_center = table.t_min;

  std::vector<double> num(n_bins, 0.0), sq(n_bins, 0.0);
  for (size_t i = 0; i < d.u.size(); ++i) {
    int b = n_bins == 1 ? 0
                        : std::min(n_bins - 1, static_cast<int>((d.u[i] - table.t_min) / width));
    BinRow& row = table.rows[b];
    row.weight += d.element;
    row.count += 1;
    row.min_grad = std::min(row.min_grad, d.grad[i]);
    num[b] += d.element * d.flux[i];
    sq[b] += d.element * d.flux[i] * d.flux[i];
  }

  for (int b = 0; b < n_bins; ++b) {
    BinRow& row = table.rows[b];
    if (row.count == 0) {
      row.min_grad = 0.0;
      row.regular = false;
      continue;
    }
    row.f_value = num[b] / row.weight;
    row.dispersion = std::max(0.0, sq[b] / row.weight - row.f_value * row.f_value);
    row.regular = delta == 0.0 || row.min_grad >= delta;
  }
  return table;
}

double best_fit(const NonlinearityTable& table, const TraceFunction& u_trace,
                const TraceFunction& flux_trace) {
  const NodeData d = sample_traces(u_trace, flux_trace);
  double acc = 0.0;
  for (size_t i = 0; i < d.u.size(); ++i) {
    const double r = table.evaluate(d.u[i]) - d.flux[i];
    acc += d.element * r * r;
  }
  return acc;
}

std::vector<BinDiagnostics> regular_value_report(const TraceFunction& u_trace,
                                                 int bins, double delta) {
  if (bins < 1) throw ValidationError("regular_value_report needs at least 1 bin");
  const std::vector<double> u = u_trace.basis->synthesize(u_trace.coeffs);
  const std::vector<double> grad = u_trace.basis->synthesize_gradient_norm(u_trace.coeffs);
  const auto [lo, hi] = std::minmax_element(u.begin(), u.end());
  if (delta < 0.0) delta = default_gradient_floor(u_trace, u);

  const double width = (*hi - *lo) / bins;
  std::vector<BinDiagnostics> out(bins);
  for (int b = 0; b < bins; ++b) {
    out[b].t_lo = *lo + b * width;
    out[b].t_hi = *lo + (b + 1) * width;
    out[b].min_grad = std::numeric_limits<double>::infinity();
  }
  for (size_t i = 0; i < u.size(); ++i) {
    const int b = width > 0.0
                      ? std::min(bins - 1, static_cast<int>((u[i] - *lo) / width))
                      : 0;
    out[b].count += 1;
    out[b].min_grad = std::min(out[b].min_grad, grad[i]);
  }
  for (BinDiagnostics& row : out) {
    if (row.count == 0) row.min_grad = 0.0;
    row.regular = row.count > 0 && (delta == 0.0 || row.min_grad >= delta);
  }
  return out;
}

}  // namespace cauchykit
