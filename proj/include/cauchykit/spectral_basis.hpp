#pragma once

#include <array>
#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace cauchykit {

enum class SectionKind { Interval, Rectangle };

// Cross-section D of the cylinder: an interval (1-D) or an axis-aligned
// rectangle (2-D), carrying a uniform midpoint grid.
struct CrossSection {
  SectionKind kind = SectionKind::Interval;
  std::array<double, 2> extents{1.0, 1.0};  // side lengths, [L] or [Lx, Ly]
  std::array<int, 2> resolution{256, 256};  // cells per axis

  int dim() const { return kind == SectionKind::Interval ? 1 : 2; }
  void validate() const;
};

struct Mode {
  double lambda = 0.0;
  std::array<int, 2> axis{1, 0};  // sine index per axis (1-based; second is 0 for intervals)
};

// Dirichlet eigenpairs of -Laplace on D.  Eigenfunctions are generated
// analytically (L2-normalized sine products); coefficient transforms use
// composite midpoint quadrature on the section grid, so analyze() is a fixed
// deterministic linear map and the discrete Gram matrix is the identity to
// machine precision for retained modes.
class SpectralBasis {
 public:
  SpectralBasis(const CrossSection& section, int n_modes);

  const CrossSection& section() const { return section_; }
  int count() const { return static_cast<int>(modes_.size()); }
  const std::vector<Mode>& modes() const { return modes_; }
  double eigenvalue(int k) const;  // k is 0-based mode position

  int grid_size() const { return grid_size_; }
  double cell_measure() const { return cell_measure_; }
  double section_measure() const;
  // Midpoint node coordinates, flattened row-major for rectangles.
  std::vector<std::array<double, 2>> grid_nodes() const;

  double mode_value_at(int k, const std::array<double, 2>& x) const;
  std::span<const double> mode_samples(int k) const;

  std::vector<double> analyze(std::span<const double> samples) const;
  std::vector<double> synthesize(std::span<const double> coeffs) const;
  // Pointwise |grad' u| of the synthesized field at every grid node.
  std::vector<double> synthesize_gradient_norm(std::span<const double> coeffs) const;

  // Tightest (c, C) with c*k^{2/d} <= lambda_k <= C*k^{2/d} over retained
  // modes, k 1-based, d = dim(D).
  std::pair<double, double> weyl_envelope() const;

 private:
  CrossSection section_;
  std::vector<Mode> modes_;
  int grid_size_ = 0;
  double cell_measure_ = 0.0;
  std::vector<double> samples_;  // count x grid_size, row per mode
};

using BasisPtr = std::shared_ptr<const SpectralBasis>;

BasisPtr build_basis(const CrossSection& section, int n_modes);

}  // namespace cauchykit
