#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cauchykit/cylinder_cauchy.hpp"
#include "cauchykit/trace_space.hpp"

namespace cauchykit {

// Lipschitz nonlinearity with f(0) = 0.
struct NonlinearLaw {
  std::function<double(double)> f;
  double lipschitz = 0.0;
  std::string name;

  // Checks f(0)=0 and sampled difference quotients <= lipschitz (small slack).
  void validate(double t_min = -2.0, double t_max = 2.0, int samples = 512) const;
};

NonlinearLaw linear_law(double a);
NonlinearLaw saturating_law(double a);  // f(t) = a t / (1 + |t|)
// Table with linear interpolation, clamped outside, shifted so f(0) = 0.
NonlinearLaw piecewise_law(const std::vector<double>& t, const std::vector<double>& f);

struct DirectSolution {
  BasisPtr basis;
  CylinderField field;
  TraceFunction gamma1_flux;      // converged Neumann trace q on Gamma1 (dual)
  std::vector<double> residuals;  // dual-norm Picard increments
  bool converged = false;

  TraceFunction gamma1_trace() const { return field.trace_gamma1(); }
  TraceFunction gamma2_trace() const { return field.trace_gamma2(); }
};

// Damped Picard iteration for Delta u = 0, du/dnu = g on Gamma2,
// du/dnu = f(u) on Gamma1, u = 0 on Gamma_D; each linear step is solved in
// closed spectral form.  Throws ConvergenceError after max_iter.
DirectSolution solve_direct(const BasisPtr& basis, const NonlinearLaw& law,
                            const TraceFunction& g, double tol = 1e-12,
                            int max_iter = 200, double damping = 1.0);

// integral over Omega of |grad u|^2, closed form per mode.
double energy(const DirectSolution& sol);

double oscillation_gamma1(const DirectSolution& sol);

struct CauchyPair {
  TraceFunction psi;  // measured trace on Gamma2 (H_half_00)
  TraceFunction g;    // prescribed flux on Gamma2 (dual)
  double eps_psi = 0.0;
  double eps_g = 0.0;
};

CauchyPair measure(const DirectSolution& sol, const TraceFunction& g,
                   const NoiseSpec& psi_noise, const NoiseSpec& g_noise);

}  // namespace cauchykit
