// Acceptance suite: one pass/fail line per criterion, pinned tolerances.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cauchykit/experiment.hpp"
#include "cauchykit/general_cauchy.hpp"

using namespace cauchykit;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;
int failures = 0;

void report(int n, const std::string& what, bool ok, const std::string& detail) {
  std::printf("%s  criterion %d: %s  (%s)\n", ok ? "PASS" : "FAIL", n, what.c_str(),
              detail.c_str());
  if (!ok) ++failures;
}

double elapsed(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

BasisPtr interval_basis(int modes, int res = 512) {
  CrossSection cs;
  cs.resolution = {res, res};
  return build_basis(cs, modes);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// ---------------------------------------------------------------------------

void criterion1_analytic_svd() {
  const auto t0 = std::chrono::steady_clock::now();
  const BasisPtr b = interval_basis(16, 64);
  double worst = 0.0;
  for (int k = 0; k < 16; ++k) {
    const double mu = mu_of_mode(*b, k);
    const double exact = 1.0 / std::sinh((k + 1) * kPi);
    worst = std::max(worst, std::abs(mu - exact) / exact);
    const SingularTriple tr = singular_system(b, k);
    const TraceFunction img = svd_operator_apply(tr.left);
    for (int j = 0; j < 16; ++j) {
      const double want = tr.mu * tr.right.coeffs[j];
      const double scale = std::max(1.0, std::abs(want));
      worst = std::max(worst, std::abs(img.coeffs[j] - want) / scale);
    }
  }
  const double dt = elapsed(t0);
  report(1, "analytic singular system mu_k = 1/sinh(k pi), k <= 16", worst <= 1e-12 && dt < 1.0,
         "max deviation " + fmt(worst) + ", " + fmt(dt) + " s");
}

void criterion2_cross_method_svd() {
  const auto t0 = std::chrono::steady_clock::now();
  BoundaryPartition part;
  part.rho = 0.0;

  auto max_rel_err = [&](int n) {
    const DiscreteOperator op =
        assemble_T_rho(1.0, 1.0, ConductivityField::identity(n, n), part, 8);
    const NumericSvd svd = numeric_svd(op);
    double worst = 0.0;
    for (int k = 0; k < 8; ++k) {
      const double exact = 1.0 / std::sinh((k + 1) * kPi);
      worst = std::max(worst, std::abs(svd.values[k] - exact) / exact);
    }
    return worst;
  };

  const double err128 = max_rel_err(128);
  const double err256 = max_rel_err(256);
  const double dt = elapsed(t0);
  const bool ok = err128 <= 0.02 && err256 <= err128 / 2.0 && dt < 120.0;
  report(2, "discrete operator reproduces the leading 8 singular values",
         ok, "err(128^2) " + fmt(err128) + ", err(256^2) " + fmt(err256) + ", " + fmt(dt) + " s");
}

void criterion3_regularization_limit() {
  bool ok = true;
  std::string detail;

  // Cylinder path: exact inversion once alpha < mu_m.  One spare mode keeps
  // the cutoff inside the basis.
  const BasisPtr b = interval_basis(13, 64);
  double worst_cyl = 0.0;
  for (int m = 0; m < 12; ++m) {
    RegularizationConfig cfg;
    cfg.gamma = 0.5;
    cfg.eps = 0.5 * mu_of_mode(*b, m);  // alpha just below mu_m
    const TraceFunction h = unit_trace(b, m, SpaceTag::HHalf00);
    const TraceFunction back = regularize(svd_operator_apply(h), cfg);
    for (int k = 0; k < 12; ++k)
      worst_cyl = std::max(worst_cyl, std::abs(back.coeffs[k] - h.coeffs[k]));
  }
  ok = ok && worst_cyl <= 1e-12;
  detail += "cylinder " + fmt(worst_cyl);

  // General path: matrix-level inversion of mode-supported data.
  BoundaryPartition part;
  part.rho = 0.0;
  const DiscreteOperator op =
      assemble_T_rho(1.0, 1.0, ConductivityField::identity(96, 96), part, 8);
  double worst_gen = 0.0;
  for (int m = 0; m < 8; ++m) {
    std::vector<double> data(8, 0.0);
    for (int r = 0; r < 8; ++r) data[r] = op.matrix[r][m];
    RegularizationConfig cfg;
    cfg.gamma = 0.5;
    cfg.eps = 0.5 / std::sinh((m + 1) * kPi);
    const std::vector<double> back = regularized_invert(op, data, cfg);
    for (int c = 0; c < 8; ++c)
      worst_gen = std::max(worst_gen, std::abs(back[c] - (c == m ? 1.0 : 0.0)));
  }
  ok = ok && worst_gen <= 1e-6;
  detail += ", general " + fmt(worst_gen);

  report(3, "R_alpha T h = h below the cutoff", ok, detail);
}

void criterion4_manufactured_continuation() {
  const auto t0 = std::chrono::steady_clock::now();
  const BasisPtr b = interval_basis(16, 64);
  const TraceFunction psi = make_trace(b, {}, SpaceTag::HHalf00);
  const TraceFunction g = make_trace(b, {-kPi}, SpaceTag::HHalf00Dual);
  const TraceFunction u_exact = make_trace(b, {std::sinh(kPi)}, SpaceTag::HHalf00);

  RegularizationConfig cfg;
  cfg.gamma = 0.5;
  cfg.eps = 0.0;
  const CauchyRecovery exact = reconstruct_gamma1(psi, g, cfg);
  double worst = 0.0;
  for (int k = 0; k < 16; ++k)
    worst = std::max(worst, std::abs(exact.u_trace.coeffs[k] - u_exact.coeffs[k]));
  bool ok = worst <= 1e-10;
  std::string detail = "exact-data deviation " + fmt(worst);

  // Noise on the fundamental mode; errors must decrease at each step.
  std::vector<double> errs;
  for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
    NoiseSpec spec{eps, SpaceTag::HHalf00Dual, 20240101, 0, 1};
    const TraceFunction g_noisy = inject_noise(g, spec);
    cfg.eps = eps;
    const CauchyRecovery rec = reconstruct_gamma1(psi, g_noisy, cfg);
    std::vector<double> d(16);
    for (int k = 0; k < 16; ++k) d[k] = rec.u_trace.coeffs[k] - u_exact.coeffs[k];
    errs.push_back(trace_norm(make_trace(b, d, SpaceTag::HHalf00)));
  }
  detail += ", sweep errors";
  for (double e : errs) detail += " " + fmt(e);
  for (size_t i = 1; i < errs.size(); ++i) ok = ok && errs[i] <= 1.5 * errs[i - 1];
  ok = ok && errs.back() < errs.front();

  const double dt = elapsed(t0);
  ok = ok && dt < 10.0;
  report(4, "manufactured continuation u = sinh(pi x_n) phi_1", ok, detail + ", " + fmt(dt) + " s");
}

void criterion5_direct_fixed_point() {
  const BasisPtr b = interval_basis(16, 128);
  const TraceFunction g = unit_trace(b, 0, SpaceTag::HHalf00Dual);
  const NonlinearLaw law = linear_law(0.1);
  bool ok = true;
  std::string detail;
  try {
    const DirectSolution sol = solve_direct(b, law, g, 1e-12, 50);
    ok = sol.converged && sol.residuals.size() <= 50 && sol.residuals.back() < 1e-10;
    const std::vector<double> u1 = b->synthesize(sol.field.gamma1_value);
    std::vector<double> fu(u1.size());
    for (size_t i = 0; i < u1.size(); ++i) fu[i] = law.f(u1[i]);
    const std::vector<double> proj = b->analyze(fu);
    double worst = 0.0;
    for (int k = 0; k < 16; ++k)
      worst = std::max(worst, std::abs(sol.gamma1_flux.coeffs[k] - proj[k]));
    ok = ok && worst <= 1e-10;
    detail = std::to_string(sol.residuals.size()) + " iterations, residual " +
             fmt(sol.residuals.back()) + ", flux-projection gap " + fmt(worst);
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  report(5, "Picard fixed point for f(u) = 0.1 u", ok, detail);
}

void criterion6_identification() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;

  const BasisPtr b = interval_basis(16, 512);
  const TraceFunction g = unit_trace(b, 0, SpaceTag::HHalf00Dual);
  const std::vector<NonlinearLaw> laws = {linear_law(0.2), saturating_law(0.2)};

  for (const NonlinearLaw& law : laws) {
    const DirectSolution sol = solve_direct(b, law, g);
    const TraceFunction u_true = sol.gamma1_trace();
    const TraceFunction flux_true = sol.gamma1_flux;

    // Zero noise: sup error over interior flagged bins <= 5 * width * L.
    const NonlinearityTable table = identify(u_true, flux_true, 32);
    double sup = 0.0;
    for (size_t i = 1; i + 1 < table.rows.size(); ++i) {
      const BinRow& row = table.rows[i];
      if (!row.regular || row.count == 0) continue;
      sup = std::max(sup, std::abs(row.f_value - law.f(row.t_center)));
    }
    const double bound = 5.0 * table.bin_width() * law.lipschitz;
    ok = ok && sup <= bound;
    detail += law.name + ": clean " + fmt(sup) + " <= " + fmt(bound);

    // Noise sweep: monotone decrease within a 1.5x slack.
    std::vector<double> errs;
    for (double eps : {1e-2, 1e-3, 1e-4, 1e-5}) {
      NoiseSpec spec{eps, SpaceTag::HHalf00Dual, 7, 0, 1};
      const TraceFunction g_noisy = inject_noise(g, spec);
      RegularizationConfig cfg;
      cfg.gamma = 0.5;
      cfg.eps = eps;
      const CauchyRecovery rec = reconstruct_gamma1(sol.gamma2_trace(), g_noisy, cfg);
      const NonlinearityTable noisy = identify(rec.u_trace, rec.flux_trace, 32);
      double e = 0.0;
      const size_t n = noisy.rows.size();
      for (size_t i = 0; i < n; ++i) {
        const BinRow& row = noisy.rows[i];
        if (!row.regular || row.count == 0) continue;
        if (n > 2 && (i == 0 || i + 1 == n)) continue;
        e = std::max(e, std::abs(row.f_value - law.f(row.t_center)));
      }
      errs.push_back(e);
    }
    detail += ", noisy";
    for (double e : errs) detail += " " + fmt(e);
    for (size_t i = 1; i < errs.size(); ++i) ok = ok && errs[i] <= 1.5 * errs[i - 1];
    ok = ok && errs.back() < errs.front();
    detail += "; ";
  }
  const double dt = elapsed(t0);
  ok = ok && dt < 60.0;
  report(6, "end-to-end identification, clean bound and noisy sweep", ok,
         detail + fmt(dt) + " s");
}

void criterion7_minimizer() {
  const BasisPtr b = interval_basis(16, 512);
  const TraceFunction g = unit_trace(b, 0, SpaceTag::HHalf00Dual);
  const DirectSolution sol = solve_direct(b, saturating_law(0.2), g);
  const NonlinearityTable table = identify(sol.gamma1_trace(), sol.gamma1_flux, 32);
  const double best = best_fit(table, sol.gamma1_trace(), sol.gamma1_flux);

  double range = 0.0;
  for (const BinRow& row : table.rows) range = std::max(range, std::abs(row.f_value));

  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  int wins = 0;
  for (int trial = 0; trial < 100; ++trial) {
    NonlinearityTable perturbed = table;
    for (BinRow& row : perturbed.rows) {
      double d = uni(rng);
      d += d >= 0.0 ? 0.25 : -0.25;
      row.f_value += 0.5 * range * d;
    }
    if (best_fit(perturbed, sol.gamma1_trace(), sol.gamma1_flux) > best) ++wins;
  }
  report(7, "identified table beats 100 perturbed tables under best_fit", wins == 100,
         std::to_string(wins) + "/100 wins, misfit " + fmt(best));
}

void criterion8_determinism() {
  const fs::path root = fs::temp_directory_path() / "ck_acceptance_determinism";
  fs::remove_all(root);

  ExperimentConfig cfg;
  cfg.cross_section.resolution = {64, 64};
  cfg.modes = 8;
  cfg.law.name = "saturating";
  cfg.law.a = 0.2;
  cfg.eps_list = {1e-2, 1e-3};
  cfg.bins = 16;
  cfg.seed = 20240101;

  const RunReport r1 = run_sweep(cfg);
  const RunReport r2 = run_sweep(cfg);
  write_report(r1, (root / "a").string());
  write_report(r2, (root / "b").string());
  emit_plots(r1, (root / "a").string());
  emit_plots(r2, (root / "b").string());

  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };

  bool ok = true;
  int compared = 0;
  for (const auto& entry : fs::recursive_directory_iterator(root / "a")) {
    if (!entry.is_regular_file()) continue;
    if (entry.path().filename() == "timings.txt") continue;
    const fs::path twin = root / "b" / fs::relative(entry.path(), root / "a");
    ok = ok && fs::exists(twin) && slurp(entry.path()) == slurp(twin);
    ++compared;
  }
  ok = ok && compared >= 8;
  fs::remove_all(root);
  report(8, "seeded pipeline reports are byte-identical", ok,
         std::to_string(compared) + " files compared");
}

}  // namespace

int main() {
  criterion1_analytic_svd();
  criterion2_cross_method_svd();
  criterion3_regularization_limit();
  criterion4_manufactured_continuation();
  criterion5_direct_fixed_point();
  criterion6_identification();
  criterion7_minimizer();
  criterion8_determinism();
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
