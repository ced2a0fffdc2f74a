#include "cauchykit/cylinder_cauchy.hpp"

#include <cmath>
#include <string>

#include "cauchykit/errors.hpp"

namespace cauchykit {

namespace {

// Guards exp overflow in sinh/cosh; reached only for absurd mode counts.
void check_mode_scale(double s) {
  if (s > 700.0)
    throw ValidationError("sqrt(lambda) = " + std::to_string(s) +
                          " exceeds the floating-point range of sinh; reduce the mode count");
}

}  // namespace

void RegularizationConfig::validate() const {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ValidationError("gamma must lie in (0,1)");
  if (eps < 0.0) throw ValidationError("eps must be nonnegative");
}

double alpha_of_eps(const RegularizationConfig& cfg) {
  cfg.validate();
  if (cfg.eps == 0.0) return 0.0;
  return std::pow(cfg.eps, 2.0 * (1.0 - cfg.gamma));
}

double mu_of_mode(const SpectralBasis& basis, int k) {
  const double s = std::sqrt(basis.eigenvalue(k));
  check_mode_scale(s);
  return 1.0 / std::sinh(s);
}

int cutoff_index_threshold(const SpectralBasis& basis, double alpha) {
  if (alpha < 0.0) throw ValidationError("alpha must be nonnegative");
  if (alpha == 0.0) return basis.count();  // exact data: retain everything
  int retained = 0;
  while (retained < basis.count() && mu_of_mode(basis, retained) >= alpha) ++retained;
  if (retained == basis.count() && mu_of_mode(basis, basis.count() - 1) >= alpha)
    throw ValidationError("basis too small: every retained mode clears the cutoff; enlarge n_modes");
  return retained;
}

int cutoff_index(const SpectralBasis& basis, const RegularizationConfig& cfg) {
  cfg.validate();
  if (cfg.policy == CutoffPolicy::MuThreshold)
    return cutoff_index_threshold(basis, alpha_of_eps(cfg));
  if (cfg.eps == 0.0) return basis.count();
  const double base = std::floor((cfg.gamma - 1.0) * std::log(cfg.eps));
  const double k = std::pow(std::max(base, 0.0), basis.section().dim());
  const int retained = static_cast<int>(k);
  if (retained > basis.count())
    throw ValidationError("basis too small for the literal-order cutoff; enlarge n_modes");
  return retained;
}

double CylinderField::value_at(const std::array<double, 2>& xprime, double xn) const {
  if (xn < 0.0 || xn > 1.0) throw ValidationError("point outside the cylinder");
  double acc = 0.0;
  for (int k = 0; k < basis->count(); ++k) {
    const double a = gamma1_value[k];
    const double b = gamma2_value[k];
    if (a == 0.0 && b == 0.0) continue;
    const double s = std::sqrt(basis->eigenvalue(k));
    check_mode_scale(s);
    const double sh = std::sinh(s);
    acc += (a * std::sinh(s * xn) + b * std::sinh(s * (1.0 - xn))) / sh *
           basis->mode_value_at(k, xprime);
  }
  return acc;
}

TraceFunction CylinderField::trace_gamma1() const {
  return make_trace(basis, gamma1_value, SpaceTag::HHalf00);
}

TraceFunction CylinderField::trace_gamma2() const {
  return make_trace(basis, gamma2_value, SpaceTag::HHalf00);
}

TraceFunction CylinderField::flux_gamma1() const {
  // u' at x_n = 1 (nu = +x_n): s (a cosh s - b) / sinh s.
  std::vector<double> c(basis->count());
  for (int k = 0; k < basis->count(); ++k) {
    const double s = std::sqrt(basis->eigenvalue(k));
    check_mode_scale(s);
    c[k] = s * (gamma1_value[k] / std::tanh(s) - gamma2_value[k] / std::sinh(s));
  }
  return make_trace(basis, std::move(c), SpaceTag::HHalf00Dual);
}

TraceFunction CylinderField::flux_gamma2() const {
  // -u' at x_n = 0 (nu = -x_n): s (b cosh s - a) / sinh s.
  std::vector<double> c(basis->count());
  for (int k = 0; k < basis->count(); ++k) {
    const double s = std::sqrt(basis->eigenvalue(k));
    check_mode_scale(s);
    c[k] = s * (gamma2_value[k] / std::tanh(s) - gamma1_value[k] / std::sinh(s));
  }
  return make_trace(basis, std::move(c), SpaceTag::HHalf00Dual);
}

TraceFunction svd_operator_apply(const TraceFunction& xi) {
  std::vector<double> c(xi.basis->count(), 0.0);
  for (size_t k = 0; k < xi.coeffs.size(); ++k) {
    const double s = std::sqrt(xi.basis->eigenvalue(static_cast<int>(k)));
    check_mode_scale(s);
    c[k] = -xi.coeffs[k] * s / std::sinh(s);
  }
  return make_trace(xi.basis, std::move(c), SpaceTag::HHalf00Dual);
}

SingularTriple singular_system(const BasisPtr& basis, int k) {
  if (!basis) throw ValidationError("null basis");
  if (k < 0 || k >= basis->count()) throw ValidationError("singular_system: mode index out of range");
  const double lambda = basis->eigenvalue(k);
  SingularTriple triple;
  triple.mu = mu_of_mode(*basis, k);
  triple.left = unit_trace(basis, k, SpaceTag::HHalf00);
  triple.left.coeffs[k] = std::pow(lambda, -0.25);
  triple.right = unit_trace(basis, k, SpaceTag::HHalf00Dual);
  triple.right.coeffs[k] = -std::pow(lambda, 0.25);
  return triple;
}

CylinderField dirichlet_lift(const TraceFunction& psi) {
  if (psi.tag != SpaceTag::HHalf00)
    throw ValidationError("dirichlet_lift expects an H_half_00 trace");
  CylinderField w;
  w.basis = psi.basis;
  w.gamma1_value.assign(psi.basis->count(), 0.0);
  w.gamma2_value = psi.coeffs;
  return w;
}

TraceFunction neumann_defect(const TraceFunction& psi, const TraceFunction& g) {
  if (psi.basis != g.basis) throw ValidationError("psi and g use different bases");
  std::vector<double> c(psi.basis->count());
  for (int k = 0; k < psi.basis->count(); ++k) {
    const double s = std::sqrt(psi.basis->eigenvalue(k));
    check_mode_scale(s);
    c[k] = g.coeffs[k] - psi.coeffs[k] * s / std::tanh(s);
  }
  return make_trace(psi.basis, std::move(c), SpaceTag::HHalf00Dual);
}

TraceFunction regularize(const TraceFunction& G, const RegularizationConfig& cfg) {
  const int retained = cutoff_index(*G.basis, cfg);
  std::vector<double> c(G.basis->count(), 0.0);
  for (int k = 0; k < retained; ++k) {
    const double s = std::sqrt(G.basis->eigenvalue(k));
    check_mode_scale(s);
    c[k] = -G.coeffs[k] * std::sinh(s) / s;
  }
  return make_trace(G.basis, std::move(c), SpaceTag::HHalf00);
}

CauchyRecovery reconstruct_gamma1(const TraceFunction& psi, const TraceFunction& g,
                                  const RegularizationConfig& cfg) {
  if (psi.basis != g.basis) throw ValidationError("psi and g use different bases");
  const BasisPtr& basis = psi.basis;
  const TraceFunction defect = neumann_defect(psi, g);

  CauchyRecovery out;
  out.alpha = alpha_of_eps(cfg);
  out.retained = cutoff_index(*basis, cfg);
  out.u_trace = regularize(defect, cfg);

  std::vector<double> flux(basis->count(), 0.0);
  for (int k = 0; k < basis->count(); ++k) {
    const double s = std::sqrt(basis->eigenvalue(k));
    check_mode_scale(s);
    if (k < out.retained) flux[k] -= defect.coeffs[k] * std::cosh(s);
    flux[k] -= psi.coeffs[k] * s / std::sinh(s);
  }
  out.flux_trace = make_trace(basis, std::move(flux), SpaceTag::HHalf00Dual);
  return out;
}

double evaluate_interior(const TraceFunction& psi, const TraceFunction& g,
                         const RegularizationConfig& cfg,
                         const std::array<double, 2>& xprime, double xn) {
  if (xn < 0.0 || xn > 1.0) throw ValidationError("point outside the cylinder");
  const CauchyRecovery rec = reconstruct_gamma1(psi, g, cfg);
  CylinderField field;
  field.basis = psi.basis;
  field.gamma1_value = rec.u_trace.coeffs;  // truncated series amplitude at x_n = 1
  field.gamma2_value = psi.coeffs;          // Dirichlet lift
  return field.value_at(xprime, xn);
}

}  // namespace cauchykit
