#include "cauchykit/spectral_basis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cauchykit/errors.hpp"

namespace cauchykit {

namespace {
constexpr double kPi = std::numbers::pi;
}

void CrossSection::validate() const {
  const int d = dim();
  for (int a = 0; a < d; ++a) {
    if (!(extents[a] > 0.0)) throw ValidationError("cross-section extent must be positive");
    if (resolution[a] < 4) throw ValidationError("cross-section resolution must be >= 4");
  }
}

SpectralBasis::SpectralBasis(const CrossSection& section, int n_modes) : section_(section) {
  section_.validate();
  if (n_modes < 1) throw ValidationError("n_modes must be >= 1");

  const int d = section_.dim();
  if (d == 1) {
    const double l = section_.extents[0];
    modes_.resize(n_modes);
    for (int k = 0; k < n_modes; ++k) {
      modes_[k].axis = {k + 1, 0};
      modes_[k].lambda = std::pow((k + 1) * kPi / l, 2);
    }
    grid_size_ = section_.resolution[0];
    cell_measure_ = l / grid_size_;
  } else {
    const double lx = section_.extents[0];
    const double ly = section_.extents[1];
    // The m-th smallest tensor eigenvalue has both indices <= m.
    std::vector<Mode> candidates;
    candidates.reserve(static_cast<size_t>(n_modes) * n_modes);
    for (int i = 1; i <= n_modes; ++i)
      for (int j = 1; j <= n_modes; ++j) {
        Mode m;
        m.axis = {i, j};
        m.lambda = std::pow(i * kPi / lx, 2) + std::pow(j * kPi / ly, 2);
        candidates.push_back(m);
      }
    std::sort(candidates.begin(), candidates.end(), [](const Mode& a, const Mode& b) {
      if (a.lambda != b.lambda) return a.lambda < b.lambda;
      return a.axis < b.axis;  // deterministic tie-break, lexicographic
    });
    modes_.assign(candidates.begin(), candidates.begin() + n_modes);
    grid_size_ = section_.resolution[0] * section_.resolution[1];
    cell_measure_ = (lx / section_.resolution[0]) * (ly / section_.resolution[1]);
  }

  samples_.resize(static_cast<size_t>(count()) * grid_size_);
  const auto nodes = grid_nodes();
  for (int k = 0; k < count(); ++k)
    for (int g = 0; g < grid_size_; ++g)
      samples_[static_cast<size_t>(k) * grid_size_ + g] = mode_value_at(k, nodes[g]);
}

double SpectralBasis::eigenvalue(int k) const {
  if (k < 0 || k >= count()) throw ValidationError("mode index out of range");
  return modes_[k].lambda;
}

double SpectralBasis::section_measure() const {
  return section_.dim() == 1 ? section_.extents[0] : section_.extents[0] * section_.extents[1];
}

std::vector<std::array<double, 2>> SpectralBasis::grid_nodes() const {
  std::vector<std::array<double, 2>> nodes(grid_size_);
  if (section_.dim() == 1) {
    const int n = section_.resolution[0];
    const double h = section_.extents[0] / n;
    for (int i = 0; i < n; ++i) nodes[i] = {(i + 0.5) * h, 0.0};
  } else {
    const int nx = section_.resolution[0];
    const int ny = section_.resolution[1];
    const double hx = section_.extents[0] / nx;
    const double hy = section_.extents[1] / ny;
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) nodes[j * nx + i] = {(i + 0.5) * hx, (j + 0.5) * hy};
  }
  return nodes;
}

double SpectralBasis::mode_value_at(int k, const std::array<double, 2>& x) const {
  const Mode& m = modes_[k];
  if (section_.dim() == 1) {
    const double l = section_.extents[0];
    return std::sqrt(2.0 / l) * std::sin(m.axis[0] * kPi * x[0] / l);
  }
  const double lx = section_.extents[0];
  const double ly = section_.extents[1];
  return std::sqrt(2.0 / lx) * std::sin(m.axis[0] * kPi * x[0] / lx) *
         std::sqrt(2.0 / ly) * std::sin(m.axis[1] * kPi * x[1] / ly);
}

std::span<const double> SpectralBasis::mode_samples(int k) const {
  return {samples_.data() + static_cast<size_t>(k) * grid_size_, static_cast<size_t>(grid_size_)};
}

std::vector<double> SpectralBasis::analyze(std::span<const double> samples) const {
  if (static_cast<int>(samples.size()) != grid_size_)
    throw ValidationError("analyze: sample count does not match the basis grid");
  std::vector<double> coeffs(count(), 0.0);
  for (int k = 0; k < count(); ++k) {
    const double* row = samples_.data() + static_cast<size_t>(k) * grid_size_;
    double acc = 0.0;
    for (int g = 0; g < grid_size_; ++g) acc += samples[g] * row[g];
    coeffs[k] = acc * cell_measure_;
  }
  return coeffs;
}

std::vector<double> SpectralBasis::synthesize(std::span<const double> coeffs) const {
  if (static_cast<int>(coeffs.size()) > count())
    throw ValidationError("synthesize: more coefficients than retained modes");
  std::vector<double> values(grid_size_, 0.0);
  for (size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k] == 0.0) continue;
    const double* row = samples_.data() + k * grid_size_;
    for (int g = 0; g < grid_size_; ++g) values[g] += coeffs[k] * row[g];
  }
  return values;
}

std::vector<double> SpectralBasis::synthesize_gradient_norm(std::span<const double> coeffs) const {
  if (static_cast<int>(coeffs.size()) > count())
    throw ValidationError("synthesize_gradient_norm: more coefficients than retained modes");
  const auto nodes = grid_nodes();
  std::vector<double> out(grid_size_, 0.0);
  if (section_.dim() == 1) {
    const double l = section_.extents[0];
    for (int g = 0; g < grid_size_; ++g) {
      double du = 0.0;
      for (size_t k = 0; k < coeffs.size(); ++k) {
        const double w = modes_[k].axis[0] * kPi / l;
        du += coeffs[k] * std::sqrt(2.0 / l) * w * std::cos(w * nodes[g][0]);
      }
      out[g] = std::abs(du);
    }
  } else {
    const double lx = section_.extents[0];
    const double ly = section_.extents[1];
    for (int g = 0; g < grid_size_; ++g) {
      double dx = 0.0, dy = 0.0;
      for (size_t k = 0; k < coeffs.size(); ++k) {
        const double wx = modes_[k].axis[0] * kPi / lx;
        const double wy = modes_[k].axis[1] * kPi / ly;
        const double sx = std::sqrt(2.0 / lx), sy = std::sqrt(2.0 / ly);
        dx += coeffs[k] * sx * wx * std::cos(wx * nodes[g][0]) * sy * std::sin(wy * nodes[g][1]);
        dy += coeffs[k] * sx * std::sin(wx * nodes[g][0]) * sy * wy * std::cos(wy * nodes[g][1]);
      }
      out[g] = std::hypot(dx, dy);
    }
  }
  return out;
}

std::pair<double, double> SpectralBasis::weyl_envelope() const {
  if (modes_.empty()) throw ValidationError("weyl_envelope: empty basis");
  const double p = 2.0 / section_.dim();
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (int k = 0; k < count(); ++k) {
    const double q = modes_[k].lambda / std::pow(k + 1.0, p);
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  return {lo, hi};
}

BasisPtr build_basis(const CrossSection& section, int n_modes) {
  return std::make_shared<SpectralBasis>(section, n_modes);
}

}  // namespace cauchykit
