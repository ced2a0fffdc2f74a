#include <cmath>
#include <random>

#include "cauchykit/errors.hpp"
#include "cauchykit/nonlin_ident.hpp"
#include "doctest.h"

using namespace cauchykit;

namespace {

BasisPtr interval_basis(int modes = 8, int res = 512) {
  CrossSection cs;
  cs.resolution = {res, res};
  return build_basis(cs, modes);
}

// Trace/flux pair consistent with a pointwise law flux = f(u).
std::pair<TraceFunction, TraceFunction> lawful_pair(const BasisPtr& b,
                                                    const std::vector<double>& u_coeffs,
                                                    double (*f)(double)) {
  const TraceFunction u = make_trace(b, u_coeffs, SpaceTag::HHalf00);
  const std::vector<double> samples = b->synthesize(u.coeffs);
  std::vector<double> fs(samples.size());
  for (size_t i = 0; i < samples.size(); ++i) fs[i] = f(samples[i]);
  const TraceFunction flux = make_trace(b, b->analyze(fs), SpaceTag::HHalf00Dual);
  return {u, flux};
}

double linear02(double t) { return 0.2 * t; }
double sat04(double t) { return 0.4 * t / (1.0 + std::abs(t)); }

}  // namespace

TEST_CASE("identify recovers a linear law up to binning bias") {
  const BasisPtr b = interval_basis();
  const auto [u, flux] = lawful_pair(b, {1.0}, linear02);
  const NonlinearityTable table = identify(u, flux, 32);
  CHECK(table.rows.size() == 32);
  const double width = table.bin_width();
  for (const BinRow& row : table.rows) {
    if (!row.regular || row.count == 0) continue;
    CHECK(std::abs(row.f_value - 0.2 * row.t_center) <= 0.2 * width + 1e-12);
    CHECK(row.dispersion <= std::pow(0.2 * width, 2) + 1e-12);
  }
  // The fundamental mode on (0,1) fills every bin.
  for (const BinRow& row : table.rows) CHECK(row.count > 0);
}

TEST_CASE("identify recovers a saturating law") {
  const BasisPtr b = interval_basis(16);
  const auto [u, flux] = lawful_pair(b, {0.9, 0.2}, sat04);
  const NonlinearityTable table = identify(u, flux, 24);
  const double width = table.bin_width();
  for (const BinRow& row : table.rows) {
    if (!row.regular || row.count == 0) continue;
    // Lipschitz constant of the law is 0.4.
    CHECK(std::abs(row.f_value - sat04(row.t_center)) <= 2.0 * 0.4 * width);
  }
}

TEST_CASE("gradient floor flags the critical-point bins") {
  const BasisPtr b = interval_basis();
  const auto [u, flux] = lawful_pair(b, {1.0}, linear02);
  // sqrt(2) sin(pi x): |u'| = sqrt(2) pi |cos|; demand more than the maximum
  // near the peak so the top bin cannot be regular.
  const NonlinearityTable table = identify(u, flux, 32, 1.5);
  CHECK_FALSE(table.rows.back().regular);
  CHECK(table.rows.front().regular);  // steep near u = 0

  const auto report = regular_value_report(u, 32, 1.5);
  CHECK(report.size() == 32);
  CHECK_FALSE(report.back().regular);
  CHECK(report.front().regular);
  CHECK(report.front().min_grad > 1.5);

  // delta = 0 disables the floor entirely.
  const auto all = regular_value_report(u, 32, 0.0);
  for (const auto& row : all) CHECK(row.regular == (row.count > 0));
}

TEST_CASE("constant traces collapse to a single bin") {
  const BasisPtr b = interval_basis(4, 64);
  const TraceFunction u = make_trace(b, {}, SpaceTag::HHalf00);
  const TraceFunction flux = make_trace(b, {}, SpaceTag::HHalf00Dual);
  const NonlinearityTable table = identify(u, flux, 16);
  CHECK(table.rows.size() == 1);
  CHECK(table.rows[0].t_center == 0.0);
  CHECK(table.rows[0].f_value == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("anchoring shifts the table only when zero is inside its range") {
  const BasisPtr b = interval_basis();
  const auto [u, flux] = lawful_pair(b, {1.0}, linear02);
  const NonlinearityTable table = identify(u, flux, 32);
  // u = sqrt(2) sin is positive: range excludes 0, anchoring is a no-op.
  CHECK(table.t_min > 0.0);
  const NonlinearityTable anchored = table.anchored_at_zero();
  for (size_t i = 0; i < table.rows.size(); ++i)
    CHECK(anchored.rows[i].f_value == table.rows[i].f_value);

  // A sign-changing trace gets shifted so f(0) = 0.
  const auto [u2, flux2] = lawful_pair(b, {0.6, -0.4}, sat04);
  const NonlinearityTable t2 = identify(u2, flux2, 32);
  REQUIRE(t2.t_min < 0.0);
  REQUIRE(t2.t_max > 0.0);
  const NonlinearityTable a2 = t2.anchored_at_zero();
  CHECK(a2.evaluate(0.0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("identified table minimizes the quadrature misfit") {
  const BasisPtr b = interval_basis(16);
  const auto [u, flux] = lawful_pair(b, {0.9, 0.2}, sat04);
  const NonlinearityTable table = identify(u, flux, 24);
  const double best = best_fit(table, u, flux);

  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  double range = 0.0;
  for (const BinRow& row : table.rows) range = std::max(range, std::abs(row.f_value));
  for (int trial = 0; trial < 25; ++trial) {
    NonlinearityTable perturbed = table;
    for (BinRow& row : perturbed.rows) {
      double d = uni(rng);
      d += d >= 0.0 ? 0.25 : -0.25;  // keep perturbations away from zero
      row.f_value += 0.5 * range * d;
    }
    CHECK(best_fit(perturbed, u, flux) > best);
  }
}

TEST_CASE("input validation") {
  const BasisPtr b = interval_basis(4, 64);
  const auto [u, flux] = lawful_pair(b, {1.0}, linear02);
  CHECK_THROWS_AS(identify(u, flux, 1), ValidationError);

  NonlinearityTable empty;
  CHECK_THROWS_AS(empty.evaluate(0.0), ValidationError);
}
