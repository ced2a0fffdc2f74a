#include "cauchykit/trace_space.hpp"

#include <cmath>
#include <random>

#include "cauchykit/errors.hpp"

namespace cauchykit {

namespace {

double weight(SpaceTag tag, double lambda) {
  switch (tag) {
    case SpaceTag::HHalf00:
      return std::sqrt(lambda);
    case SpaceTag::HHalf00Dual:
      return 1.0 / std::sqrt(lambda);
    case SpaceTag::L2:
      return 1.0;
  }
  throw ValidationError("unknown space tag");
}

void require_same_basis(const TraceFunction& a, const TraceFunction& b) {
  if (a.basis != b.basis) throw ValidationError("trace functions use different bases");
}

}  // namespace

TraceFunction make_trace(BasisPtr basis, std::vector<double> coeffs, SpaceTag tag) {
  if (!basis) throw ValidationError("null basis");
  if (static_cast<int>(coeffs.size()) > basis->count())
    throw ValidationError("more coefficients than retained modes");
  coeffs.resize(basis->count(), 0.0);
  return {std::move(basis), std::move(coeffs), tag};
}

TraceFunction unit_trace(BasisPtr basis, int k, SpaceTag tag) {
  if (!basis) throw ValidationError("null basis");
  if (k < 0 || k >= basis->count()) throw ValidationError("mode index out of range");
  std::vector<double> c(basis->count(), 0.0);
  c[k] = 1.0;
  return {std::move(basis), std::move(c), tag};
}

double trace_norm(const TraceFunction& t) {
  double acc = 0.0;
  for (size_t k = 0; k < t.coeffs.size(); ++k)
    acc += weight(t.tag, t.basis->eigenvalue(static_cast<int>(k))) * t.coeffs[k] * t.coeffs[k];
  return std::sqrt(acc);
}

double dual_pair(const TraceFunction& h, const TraceFunction& psi) {
  require_same_basis(h, psi);
  double acc = 0.0;
  const size_t n = std::min(h.coeffs.size(), psi.coeffs.size());
  for (size_t k = 0; k < n; ++k) acc += h.coeffs[k] * psi.coeffs[k];
  return acc;
}

TraceFunction inject_noise(const TraceFunction& t, const NoiseSpec& spec) {
  if (spec.eps < 0.0) throw ValidationError("noise level must be nonnegative");
  if (spec.eps == 0.0) return t;

  const int n = t.basis->count();
  const int begin = spec.support_begin;
  const int end = spec.support_end < 0 ? n : spec.support_end;
  if (begin < 0 || end > n || begin >= end)
    throw ValidationError("noise support is empty or outside the retained modes");

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  TraceFunction delta = make_trace(t.basis, std::vector<double>(n, 0.0), spec.tag);
  for (int k = begin; k < end; ++k) delta.coeffs[k] = uni(rng);

  const double raw = trace_norm(delta);
  if (raw == 0.0) throw ValidationError("degenerate noise draw");  // probability zero
  const double scale = spec.eps / raw;

  TraceFunction out = t;
  for (int k = begin; k < end; ++k) out.coeffs[k] += scale * delta.coeffs[k];
  return out;
}

TraceFunction extend_by_zero(const TraceFunction& t) {
  if (t.tag != SpaceTag::HHalf00)
    throw ValidationError("extend_by_zero requires an H_half_00 trace");
  return t;  // E0 is the identity on eigen-coefficients
}

}  // namespace cauchykit
