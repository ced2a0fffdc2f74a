#pragma once

#include <cstdint>
#include <vector>

#include "cauchykit/spectral_basis.hpp"

namespace cauchykit {

// Weighted-coefficient realizations of the fractional trace spaces on D:
// H_half_00 carries lambda^{+1/2} weights, its dual lambda^{-1/2}, L2 none.
enum class SpaceTag { HHalf00, HHalf00Dual, L2 };

struct TraceFunction {
  BasisPtr basis;
  std::vector<double> coeffs;  // indexed by mode position
  SpaceTag tag = SpaceTag::L2;
};

TraceFunction make_trace(BasisPtr basis, std::vector<double> coeffs, SpaceTag tag);
// Unit coefficient at mode k.
TraceFunction unit_trace(BasisPtr basis, int k, SpaceTag tag);

double trace_norm(const TraceFunction& t);
// <h, psi> = sum h_k psi_k (L2(D)-based pairing).
double dual_pair(const TraceFunction& h, const TraceFunction& psi);

struct NoiseSpec {
  double eps = 0.0;
  SpaceTag tag = SpaceTag::HHalf00Dual;
  std::uint64_t seed = 0;
  int support_begin = 0;   // mode positions [begin, end)
  int support_end = -1;    // -1: all retained modes
};

// t + delta with independent seeded uniform[-1,1] coefficients on the
// support, rescaled so the tagged norm of delta equals eps exactly.
TraceFunction inject_noise(const TraceFunction& t, const NoiseSpec& spec);

// E0: identity on coefficients (the eigenbasis is already supported in D).
TraceFunction extend_by_zero(const TraceFunction& t);

}  // namespace cauchykit
