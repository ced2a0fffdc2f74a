#include "cauchykit/direct_corrosion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cauchykit/errors.hpp"

namespace cauchykit {

void NonlinearLaw::validate(double t_min, double t_max, int samples) const {
  if (!f) throw ValidationError("nonlinear law has no callable");
  if (std::abs(f(0.0)) > 1e-12) throw ValidationError("nonlinear law must satisfy f(0) = 0");
  const double h = (t_max - t_min) / samples;
  double prev_t = t_min, prev_f = f(t_min);
  for (int i = 1; i <= samples; ++i) {
    const double t = t_min + i * h;
    const double v = f(t);
    const double quotient = std::abs(v - prev_f) / (t - prev_t);
    if (quotient > lipschitz + 1e-9)
      throw ValidationError("sampled difference quotient " + std::to_string(quotient) +
                            " exceeds the declared Lipschitz constant");
    prev_t = t;
    prev_f = v;
  }
}

NonlinearLaw linear_law(double a) {
  return {[a](double t) { return a * t; }, std::abs(a), "linear"};
}

NonlinearLaw saturating_law(double a) {
  return {[a](double t) { return a * t / (1.0 + std::abs(t)); }, std::abs(a), "saturating"};
}

NonlinearLaw piecewise_law(const std::vector<double>& t, const std::vector<double>& f) {
  if (t.size() != f.size() || t.size() < 2)
    throw ValidationError("piecewise law needs matching t/f tables with >= 2 nodes");
  for (size_t i = 1; i < t.size(); ++i)
    if (!(t[i] > t[i - 1])) throw ValidationError("piecewise law nodes must be increasing");

  auto raw = [t, f](double x) {
    if (x <= t.front()) return f.front();
    if (x >= t.back()) return f.back();
    const auto it = std::upper_bound(t.begin(), t.end(), x);
    const size_t i = static_cast<size_t>(it - t.begin());
    const double w = (x - t[i - 1]) / (t[i] - t[i - 1]);
    return (1.0 - w) * f[i - 1] + w * f[i];
  };
  const double shift = raw(0.0);
  double lip = 0.0;
  for (size_t i = 1; i < t.size(); ++i)
    lip = std::max(lip, std::abs(f[i] - f[i - 1]) / (t[i] - t[i - 1]));
  return {[raw, shift](double x) { return raw(x) - shift; }, lip, "piecewise"};
}

namespace {

// Closed spectral solve of the linear mixed problem: Neumann g on Gamma2
// (nu = -x_n), Neumann q on Gamma1 (nu = +x_n), Dirichlet 0 on Gamma_D.
CylinderField linear_mixed_solve(const BasisPtr& basis, const TraceFunction& g,
                                 const TraceFunction& q) {
  CylinderField u;
  u.basis = basis;
  u.gamma1_value.resize(basis->count());
  u.gamma2_value.resize(basis->count());
  for (int k = 0; k < basis->count(); ++k) {
    const double s = std::sqrt(basis->eigenvalue(k));
    const double sh = std::sinh(s);
    const double ch = std::cosh(s);
    u.gamma1_value[k] = (g.coeffs[k] + q.coeffs[k] * ch) / (s * sh);
    u.gamma2_value[k] = (g.coeffs[k] * ch + q.coeffs[k]) / (s * sh);
  }
  return u;
}

}  // namespace

DirectSolution solve_direct(const BasisPtr& basis, const NonlinearLaw& law,
                            const TraceFunction& g, double tol, int max_iter,
                            double damping) {
  if (!basis) throw ValidationError("null basis");
  if (g.tag != SpaceTag::HHalf00Dual) throw ValidationError("flux g must be dual-tagged");
  if (g.basis != basis) throw ValidationError("flux g uses a different basis");
  if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
  if (!(damping > 0.0 && damping <= 1.0)) throw ValidationError("damping must lie in (0,1]");
  law.validate();
  // Aliasing control: f is sampled on the section grid, so keep it at least
  // 4x oversampled relative to the retained modes.
  for (int a = 0; a < basis->section().dim(); ++a)
    if (basis->section().resolution[a] < 4 * basis->modes().back().axis[a])
      throw ValidationError("section grid must oversample the retained modes by 4x");

  DirectSolution sol;
  sol.basis = basis;
  TraceFunction q = make_trace(basis, std::vector<double>(basis->count(), 0.0),
                               SpaceTag::HHalf00Dual);

  for (int it = 0; it < max_iter; ++it) {
    CylinderField u = linear_mixed_solve(basis, g, q);
    const std::vector<double> u1 = basis->synthesize(u.gamma1_value);
    std::vector<double> fu(u1.size());
    for (size_t i = 0; i < u1.size(); ++i) fu[i] = law.f(u1[i]);
    const std::vector<double> target = basis->analyze(fu);

    TraceFunction q_next = q;
    for (int k = 0; k < basis->count(); ++k)
      q_next.coeffs[k] = (1.0 - damping) * q.coeffs[k] + damping * target[k];

    TraceFunction diff = q_next;
    for (int k = 0; k < basis->count(); ++k) diff.coeffs[k] -= q.coeffs[k];
    const double residual = trace_norm(diff);
    sol.residuals.push_back(residual);
    q = q_next;

    if (residual <= tol) {
      sol.converged = true;
      sol.field = linear_mixed_solve(basis, g, q);
      sol.gamma1_flux = q;
      return sol;
    }
  }
  throw ConvergenceError("Picard iteration did not reach tol " + std::to_string(tol) +
                         " within " + std::to_string(max_iter) + " iterations (last residual " +
                         std::to_string(sol.residuals.back()) + ")");
}

double energy(const DirectSolution& sol) {
  // Per mode, with a = trace at Gamma1 and b = trace at Gamma2:
  // integral_0^1 (u_k'^2 + lambda u_k^2) = s [ (a^2+b^2) coth s - 2ab / sinh s ].
  double acc = 0.0;
  for (int k = 0; k < sol.basis->count(); ++k) {
    const double s = std::sqrt(sol.basis->eigenvalue(k));
    const double a = sol.field.gamma1_value[k];
    const double b = sol.field.gamma2_value[k];
    acc += s * ((a * a + b * b) / std::tanh(s) - 2.0 * a * b / std::sinh(s));
  }
  return acc;
}

double oscillation_gamma1(const DirectSolution& sol) {
  const std::vector<double> u1 = sol.basis->synthesize(sol.field.gamma1_value);
  const auto [lo, hi] = std::minmax_element(u1.begin(), u1.end());
  return *hi - *lo;
}

CauchyPair measure(const DirectSolution& sol, const TraceFunction& g,
                   const NoiseSpec& psi_noise, const NoiseSpec& g_noise) {
  CauchyPair pair;
  pair.psi = inject_noise(sol.gamma2_trace(), psi_noise);
  pair.g = inject_noise(g, g_noise);
  pair.eps_psi = psi_noise.eps;
  pair.eps_g = g_noise.eps;
  return pair;
}

}  // namespace cauchykit
