#pragma once

#include <array>
#include <vector>

#include "cauchykit/trace_space.hpp"

namespace cauchykit {

enum class CutoffPolicy { MuThreshold, LiteralOrder };

struct RegularizationConfig {
  double gamma = 0.5;  // in (0,1)
  double eps = 0.0;    // noise level; 0 means exact data (retain everything)
  CutoffPolicy policy = CutoffPolicy::MuThreshold;

  void validate() const;
};

// alpha(eps) = eps^{2(1-gamma)}
double alpha_of_eps(const RegularizationConfig& cfg);

double mu_of_mode(const SpectralBasis& basis, int k);  // 1/sinh(sqrt(lambda_k))

// Number of retained modes.  Threshold policy: modes with mu_k >= alpha.
// Literal policy: floor(log(eps^{gamma-1}))^{dim(D)} (natural log).
int cutoff_index(const SpectralBasis& basis, const RegularizationConfig& cfg);
int cutoff_index_threshold(const SpectralBasis& basis, double alpha);

// Harmonic field on D x (0,1), one amplitude profile per mode, stored by its
// lid traces: u_k(y) = [g1_k sinh(s y) + g2_k sinh(s(1-y))] / sinh(s),
// s = sqrt(lambda_k).  This form is exact at both lids for any s.
struct CylinderField {
  BasisPtr basis;
  std::vector<double> gamma1_value;  // trace at x_n = 1
  std::vector<double> gamma2_value;  // trace at x_n = 0

  double value_at(const std::array<double, 2>& xprime, double xn) const;
  TraceFunction trace_gamma1() const;
  TraceFunction trace_gamma2() const;
  // Outward-normal fluxes; nu on Gamma2 points in -x_n, on Gamma1 in +x_n.
  TraceFunction flux_gamma1() const;
  TraceFunction flux_gamma2() const;
};

// T xi = sum_k (-xi_k sqrt(lambda_k)/sinh(sqrt(lambda_k))) phi_k.
TraceFunction svd_operator_apply(const TraceFunction& xi);

struct SingularTriple {
  double mu;            // 1/sinh(sqrt(lambda_k))
  TraceFunction left;   // lambda^{-1/4} phi_k in H_half_00
  TraceFunction right;  // -lambda^{+1/4} phi_k in the dual (sign folded here)
};
SingularTriple singular_system(const BasisPtr& basis, int k);

// W = sum psi_k sinh(sqrt(lambda_k)(1-x_n))/sinh(sqrt(lambda_k)) phi_k.
CylinderField dirichlet_lift(const TraceFunction& psi);

// G_k = g_k - psi_k sqrt(lambda_k) coth(sqrt(lambda_k)).
TraceFunction neumann_defect(const TraceFunction& psi, const TraceFunction& g);

// R_alpha(G): per-mode -lambda^{-1/2} sinh(sqrt(lambda)) G_k on retained
// modes, zero beyond the cutoff.
TraceFunction regularize(const TraceFunction& G, const RegularizationConfig& cfg);

struct CauchyRecovery {
  TraceFunction u_trace;     // u_eps restricted to Gamma1, H_half_00
  TraceFunction flux_trace;  // du_eps/dnu on Gamma1, dual
  double alpha = 0.0;
  int retained = 0;
};

CauchyRecovery reconstruct_gamma1(const TraceFunction& psi, const TraceFunction& g,
                                  const RegularizationConfig& cfg);

// Truncated series plus lift, evaluated pointwise inside the cylinder.
double evaluate_interior(const TraceFunction& psi, const TraceFunction& g,
                         const RegularizationConfig& cfg,
                         const std::array<double, 2>& xprime, double xn);

}  // namespace cauchykit
