#pragma once

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "cauchykit/cylinder_cauchy.hpp"
#include "cauchykit/trace_space.hpp"

namespace cauchykit {

enum class Side { Bottom, Top, Left, Right };

// Symmetric conductivity tensor sampled at the nodes of a uniform
// (nx+1) x (ny+1) grid, row-major, (s11, s12, s22) per node.
struct ConductivityField {
  int nx = 0;
  int ny = 0;
  std::vector<std::array<double, 3>> sigma;

  static ConductivityField identity(int nx, int ny);
  // Plain-text format: header "nx ny", then row-major s11 s12 s22 triples.
  static ConductivityField load(const std::string& path);
  void save(const std::string& path) const;

  const std::array<double, 3>& at(int i, int j) const { return sigma[j * (nx + 1) + i]; }
  // Min/max tensor eigenvalue over all nodes.
  std::pair<double, double> ellipticity_range() const;
  double lipschitz_quotient(double hx, double hy) const;
  void validate() const;  // positive definiteness at every node
};

struct BoundaryPartition {
  Side cauchy = Side::Bottom;  // Sigma: Cauchy data side
  Side flux = Side::Top;       // Gamma: trial Neumann side (remaining sides grounded)
  double rho = 0.1;            // inset of Sigma_rho at both ends, absolute length

  void validate(double cauchy_side_length) const;
};

struct GridField {
  int nx = 0, ny = 0;
  double lx = 1.0, ly = 1.0;
  std::vector<double> v;  // nodal, row-major

  double at(int i, int j) const { return v[j * (nx + 1) + i]; }
  // Bilinear interpolation.
  double value(double x, double y) const;
};

using BoundaryFn = std::function<double(double)>;  // coordinate along the side

struct MixedSolution {
  GridField u;
  std::vector<double> load;  // assembled RHS over all nodes
};

// Q1 finite elements for div(sigma grad v) = 0 on [0,lx] x [0,ly] with
// homogeneous (or lifted) Dirichlet sides and natural Neumann sides.
// The factorization of the constrained stiffness matrix is cached.
class MixedSolver {
 public:
  MixedSolver(double lx, double ly, const ConductivityField& sigma,
              std::set<Side> dirichlet_sides);
  ~MixedSolver();
  MixedSolver(MixedSolver&&) noexcept;
  MixedSolver& operator=(MixedSolver&&) noexcept;

  MixedSolution solve(const std::map<Side, BoundaryFn>& neumann,
                      const std::map<Side, BoundaryFn>& dirichlet = {}) const;

  // Variationally consistent boundary flux on a Dirichlet side: nodal
  // functionals r_i = integral of (sigma grad v . nu) against the trace of
  // the nodal hat function, obtained from the stiffness residual.
  std::vector<double> reaction(Side side, const MixedSolution& sol) const;

  double energy(const GridField& v) const;  // integral sigma grad v . grad v
  int node_count() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Sine modes on a subinterval [offset, offset+length] of a boundary side,
// extended by zero outside; chi_k(s) = sqrt(2/length) sin(k pi (s-offset)/length).
struct SineBasis1D {
  double offset = 0.0;
  double length = 1.0;
  int count = 0;

  double lambda(int k) const;  // ((k+1) pi / length)^2, k 0-based
  double value(int k, double s) const;
};

// Discrete T_rho: trial Dirichlet trace on Gamma (grounded elsewhere) -> flux
// functional on Sigma_rho, matrix expressed in the orthonormal weighted bases
// on both sides (H_half_00 on Gamma, its dual on Sigma_rho) so the matrix
// 2-norm realizes the operator norm.
struct DiscreteOperator {
  std::vector<std::vector<double>> matrix;  // [row=Sigma_rho mode][col=Gamma mode]
  SineBasis1D gamma_basis;
  SineBasis1D sigma_rho_basis;
  std::shared_ptr<MixedSolver> solver;  // cached factorization
  double lx = 1.0, ly = 1.0;

  int rows() const { return static_cast<int>(matrix.size()); }
  int cols() const { return matrix.empty() ? 0 : static_cast<int>(matrix.front().size()); }
};

DiscreteOperator assemble_T_rho(double lx, double ly, const ConductivityField& sigma,
                                const BoundaryPartition& partition, int n_modes);

struct NumericSvd {
  std::vector<double> values;               // non-increasing
  std::vector<std::vector<double>> left;    // h_j coords in the Gamma basis
  std::vector<std::vector<double>> right;   // g_j coords in the Sigma_rho basis
};

NumericSvd numeric_svd(const DiscreteOperator& op);

// sum_{sigma_k >= alpha} sigma_k^{-1} (data, g_k) h_k; data and result are
// coordinates in the dual-orthonormal bases of the operator.
std::vector<double> regularized_invert(const DiscreteOperator& op,
                                       const std::vector<double>& data,
                                       const RegularizationConfig& cfg);

struct GeneralRecovery {
  TraceFunction u_trace;     // on Gamma, H_half_00 coefficients vs trace basis
  TraceFunction flux_trace;  // on Gamma, dual pairing coefficients
  GridField field;           // regularized interior solution
  double alpha = 0.0;
  int retained = 0;
};

// Full rectangle pipeline: Dirichlet lift of psi, flux defect on Sigma_rho,
// regularized inversion for the Gamma trace, final Dirichlet solve for the
// interior field and the Gamma flux.  psi and g live on the Cauchy side
// expressed in an interval basis of length lx; outputs use the same basis.
GeneralRecovery solve_regularized_cauchy(double lx, double ly,
                                         const ConductivityField& sigma,
                                         const BoundaryPartition& partition,
                                         const TraceFunction& psi,
                                         const TraceFunction& g,
                                         const RegularizationConfig& cfg,
                                         int n_modes);

}  // namespace cauchykit
