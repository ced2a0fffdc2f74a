#include "cauchykit/general_cauchy.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "cauchykit/errors.hpp"

namespace cauchykit {

namespace {
constexpr double kPi = std::numbers::pi;
}

ConductivityField ConductivityField::identity(int nx, int ny) {
  ConductivityField f;
  f.nx = nx;
  f.ny = ny;
  f.sigma.assign(static_cast<size_t>(nx + 1) * (ny + 1), {1.0, 0.0, 1.0});
  return f;
}

ConductivityField ConductivityField::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open conductivity file: " + path);
  ConductivityField f;
  if (!(in >> f.nx >> f.ny)) throw IoError("conductivity file: bad header (expected 'nx ny')");
  if (f.nx < 1 || f.ny < 1) throw ValidationError("conductivity grid must have >= 1 cell per axis");
  const size_t n = static_cast<size_t>(f.nx + 1) * (f.ny + 1);
  f.sigma.resize(n);
  for (size_t i = 0; i < n; ++i)
    if (!(in >> f.sigma[i][0] >> f.sigma[i][1] >> f.sigma[i][2]))
      throw IoError("conductivity file: truncated at node " + std::to_string(i));
  f.validate();
  return f;
}

void ConductivityField::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write conductivity file: " + path);
  out << nx << " " << ny << "\n";
  char buf[96];
  for (const auto& s : sigma) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", s[0], s[1], s[2]);
    out << buf;
  }
}

std::pair<double, double> ConductivityField::ellipticity_range() const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& s : sigma) {
    const double mean = 0.5 * (s[0] + s[2]);
    const double rad = std::hypot(0.5 * (s[0] - s[2]), s[1]);
    lo = std::min(lo, mean - rad);
    hi = std::max(hi, mean + rad);
  }
  return {lo, hi};
}

double ConductivityField::lipschitz_quotient(double hx, double hy) const {
  double q = 0.0;
  auto entrydiff = [](const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return std::max({std::abs(a[0] - b[0]), std::abs(a[1] - b[1]), std::abs(a[2] - b[2])});
  };
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      if (i < nx) q = std::max(q, entrydiff(at(i, j), at(i + 1, j)) / hx);
      if (j < ny) q = std::max(q, entrydiff(at(i, j), at(i, j + 1)) / hy);
    }
  return q;
}

void ConductivityField::validate() const {
  if (static_cast<size_t>(nx + 1) * (ny + 1) != sigma.size())
    throw ValidationError("conductivity node count does not match grid");
  const auto [lo, hi] = ellipticity_range();
  if (!(lo > 0.0))
    throw ValidationError("conductivity tensor is not positive definite everywhere (min eig " +
                          std::to_string(lo) + ")");
  (void)hi;
}

void BoundaryPartition::validate(double cauchy_side_length) const {
  if (cauchy != Side::Bottom || flux != Side::Top)
    throw ValidationError("supported partition: Cauchy side = bottom, flux side = top");
  if (rho < 0.0 || 2.0 * rho >= cauchy_side_length)
    throw ValidationError("margin rho leaves Sigma_rho empty");
}

double GridField::value(double x, double y) const {
  const double hx = lx / nx, hy = ly / ny;
  double fx = std::clamp(x / hx, 0.0, static_cast<double>(nx));
  double fy = std::clamp(y / hy, 0.0, static_cast<double>(ny));
  int i = std::min(nx - 1, static_cast<int>(fx));
  int j = std::min(ny - 1, static_cast<int>(fy));
  const double sx = fx - i, sy = fy - j;
  return (1 - sx) * (1 - sy) * at(i, j) + sx * (1 - sy) * at(i + 1, j) +
         (1 - sx) * sy * at(i, j + 1) + sx * sy * at(i + 1, j + 1);
}

double SineBasis1D::lambda(int k) const { return std::pow((k + 1) * kPi / length, 2); }

double SineBasis1D::value(int k, double s) const {
  const double t = s - offset;
  if (t <= 0.0 || t >= length) return 0.0;
  return std::sqrt(2.0 / length) * std::sin((k + 1) * kPi * t / length);
}

// ---------------------------------------------------------------------------

struct MixedSolver::Impl {
  double lx, ly;
  int nx, ny;
  double hx, hy;
  std::set<Side> dirichlet;
  Eigen::SparseMatrix<double> full;         // stiffness over all nodes
  std::vector<int> free_of_node;            // node -> free index or -1
  std::vector<int> node_of_free;
  std::vector<int> constrained_nodes;
  Eigen::SparseMatrix<double> a_ff, a_fc;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;

  int node(int i, int j) const { return j * (nx + 1) + i; }
  int n_nodes() const { return (nx + 1) * (ny + 1); }

  bool on_side(int i, int j, Side s) const {
    switch (s) {
      case Side::Bottom: return j == 0;
      case Side::Top: return j == ny;
      case Side::Left: return i == 0;
      case Side::Right: return i == nx;
    }
    return false;
  }
  bool is_constrained(int i, int j) const {
    for (Side s : dirichlet)
      if (on_side(i, j, s)) return true;
    return false;
  }

  // Nodes along a side ordered by the running coordinate.
  std::vector<int> side_nodes(Side s) const {
    std::vector<int> out;
    if (s == Side::Bottom || s == Side::Top) {
      const int j = s == Side::Bottom ? 0 : ny;
      for (int i = 0; i <= nx; ++i) out.push_back(node(i, j));
    } else {
      const int i = s == Side::Left ? 0 : nx;
      for (int j = 0; j <= ny; ++j) out.push_back(node(i, j));
    }
    return out;
  }
  double side_coord(Side s, int idx) const {
    return (s == Side::Bottom || s == Side::Top) ? idx * hx : idx * hy;
  }
  double side_step(Side s) const { return (s == Side::Bottom || s == Side::Top) ? hx : hy; }
};

MixedSolver::MixedSolver(double lx, double ly, const ConductivityField& sigma,
                         std::set<Side> dirichlet_sides)
    : impl_(std::make_unique<Impl>()) {
  if (!(lx > 0.0 && ly > 0.0)) throw ValidationError("domain extents must be positive");
  sigma.validate();
  if (dirichlet_sides.empty())
    throw ValidationError("at least one Dirichlet side is required for well-posedness");

  Impl& im = *impl_;
  im.lx = lx;
  im.ly = ly;
  im.nx = sigma.nx;
  im.ny = sigma.ny;
  im.hx = lx / im.nx;
  im.hy = ly / im.ny;
  im.dirichlet = std::move(dirichlet_sides);

  // Q1 stiffness with a dispersion-corrected quadrature: half 2x2 Gauss plus
  // half vertex rule.  The blend cancels the O(h^2) phase error of the plain
  // consistent-mass stencil (Marfurt's alpha = 1/2), which matters a lot for
  // the tiny trailing singular values; sigma is interpolated bilinearly from
  // the nodes either way.
  const double g = 1.0 / std::sqrt(3.0);
  const double qpt[8][3] = {{-g, -g, 0.5}, {g, -g, 0.5}, {g, g, 0.5},  {-g, g, 0.5},
                            {-1, -1, 0.5}, {1, -1, 0.5}, {1, 1, 0.5}, {-1, 1, 0.5}};
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(im.nx) * im.ny * 16 + 1);
  for (int ej = 0; ej < im.ny; ++ej)
    for (int ei = 0; ei < im.nx; ++ei) {
      const int nodes[4] = {im.node(ei, ej), im.node(ei + 1, ej), im.node(ei + 1, ej + 1),
                            im.node(ei, ej + 1)};
      const std::array<double, 3>* sig[4] = {&sigma.at(ei, ej), &sigma.at(ei + 1, ej),
                                             &sigma.at(ei + 1, ej + 1), &sigma.at(ei, ej + 1)};
      double ke[4][4] = {};
      for (const auto& q : qpt) {
          const double xi = q[0], eta = q[1];
          const double shape[4] = {0.25 * (1 - xi) * (1 - eta), 0.25 * (1 + xi) * (1 - eta),
                                   0.25 * (1 + xi) * (1 + eta), 0.25 * (1 - xi) * (1 + eta)};
          // d/dx = (2/hx) d/dxi, d/dy = (2/hy) d/deta
          const double dx[4] = {-0.25 * (1 - eta) * 2 / im.hx, 0.25 * (1 - eta) * 2 / im.hx,
                                0.25 * (1 + eta) * 2 / im.hx, -0.25 * (1 + eta) * 2 / im.hx};
          const double dy[4] = {-0.25 * (1 - xi) * 2 / im.hy, -0.25 * (1 + xi) * 2 / im.hy,
                                0.25 * (1 + xi) * 2 / im.hy, 0.25 * (1 - xi) * 2 / im.hy};
          double s11 = 0, s12 = 0, s22 = 0;
          for (int a = 0; a < 4; ++a) {
            s11 += shape[a] * (*sig[a])[0];
            s12 += shape[a] * (*sig[a])[1];
            s22 += shape[a] * (*sig[a])[2];
          }
          const double w = q[2] * 0.25 * im.hx * im.hy;  // jacobian * blended weight
          for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
              ke[a][b] += w * (s11 * dx[a] * dx[b] + s12 * (dx[a] * dy[b] + dy[a] * dx[b]) +
                               s22 * dy[a] * dy[b]);
        }
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) trips.emplace_back(nodes[a], nodes[b], ke[a][b]);
    }
  im.full.resize(im.n_nodes(), im.n_nodes());
  im.full.setFromTriplets(trips.begin(), trips.end());

  im.free_of_node.assign(im.n_nodes(), -1);
  for (int j = 0; j <= im.ny; ++j)
    for (int i = 0; i <= im.nx; ++i) {
      const int n = im.node(i, j);
      if (im.is_constrained(i, j))
        im.constrained_nodes.push_back(n);
      else {
        im.free_of_node[n] = static_cast<int>(im.node_of_free.size());
        im.node_of_free.push_back(n);
      }
    }

  const int nf = static_cast<int>(im.node_of_free.size());
  const int nc = static_cast<int>(im.constrained_nodes.size());
  std::vector<int> cons_index(im.n_nodes(), -1);
  for (int c = 0; c < nc; ++c) cons_index[im.constrained_nodes[c]] = c;

  std::vector<Eigen::Triplet<double>> tff, tfc;
  for (int col = 0; col < im.full.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(im.full, col); it; ++it) {
      const int rf = im.free_of_node[it.row()];
      if (rf < 0) continue;
      const int cf = im.free_of_node[it.col()];
      if (cf >= 0)
        tff.emplace_back(rf, cf, it.value());
      else
        tfc.emplace_back(rf, cons_index[it.col()], it.value());
    }
  im.a_ff.resize(nf, nf);
  im.a_ff.setFromTriplets(tff.begin(), tff.end());
  im.a_fc.resize(nf, nc);
  im.a_fc.setFromTriplets(tfc.begin(), tfc.end());

  im.ldlt.compute(im.a_ff);
  if (im.ldlt.info() != Eigen::Success)
    throw ConvergenceError("interior stiffness factorization failed (system not SPD?)");
}

MixedSolver::~MixedSolver() = default;
MixedSolver::MixedSolver(MixedSolver&&) noexcept = default;
MixedSolver& MixedSolver::operator=(MixedSolver&&) noexcept = default;

int MixedSolver::node_count() const { return impl_->n_nodes(); }

MixedSolution MixedSolver::solve(const std::map<Side, BoundaryFn>& neumann,
                                 const std::map<Side, BoundaryFn>& dirichlet) const {
  const Impl& im = *impl_;
  for (const auto& [side, fn] : neumann)
    if (im.dirichlet.count(side))
      throw ValidationError("Neumann data supplied on a Dirichlet side");

  Eigen::VectorXd load = Eigen::VectorXd::Zero(im.n_nodes());
  // Edge-wise 3-point Gauss for the Neumann boundary integrals.
  const double eg[3] = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
  const double ew[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  for (const auto& [side, fn] : neumann) {
    const auto nodes = im.side_nodes(side);
    const double h = im.side_step(side);
    for (size_t e = 0; e + 1 < nodes.size(); ++e) {
      const double s0 = im.side_coord(side, static_cast<int>(e));
      for (int q = 0; q < 3; ++q) {
        const double t = 0.5 * (eg[q] + 1.0);  // in [0,1] along the edge
        const double s = s0 + t * h;
        const double w = 0.5 * h * ew[q] * fn(s);
        load[nodes[e]] += w * (1.0 - t);
        load[nodes[e + 1]] += w * t;
      }
    }
  }

  Eigen::VectorXd u_c = Eigen::VectorXd::Zero(im.constrained_nodes.size());
  if (!dirichlet.empty()) {
    std::vector<int> cons_index(im.n_nodes(), -1);
    for (size_t c = 0; c < im.constrained_nodes.size(); ++c)
      cons_index[im.constrained_nodes[c]] = static_cast<int>(c);
    for (const auto& [side, fn] : dirichlet) {
      if (!im.dirichlet.count(side))
        throw ValidationError("Dirichlet values supplied on a non-Dirichlet side");
      const auto nodes = im.side_nodes(side);
      for (size_t idx = 0; idx < nodes.size(); ++idx)
        if (cons_index[nodes[idx]] >= 0)
          u_c[cons_index[nodes[idx]]] = fn(im.side_coord(side, static_cast<int>(idx)));
    }
  }

  Eigen::VectorXd b_f(im.node_of_free.size());
  for (size_t f = 0; f < im.node_of_free.size(); ++f) b_f[f] = load[im.node_of_free[f]];
  b_f -= im.a_fc * u_c;

  Eigen::VectorXd u_f = im.ldlt.solve(b_f);
  if (im.ldlt.info() != Eigen::Success) throw ConvergenceError("interior solve failed");
  // One step of iterative refinement: the trailing singular values of the
  // trace-to-flux operator sit many orders below the matrix scale, so plain
  // solve roundoff would otherwise leak into them.
  u_f += im.ldlt.solve(b_f - im.a_ff * u_f);

  MixedSolution sol;
  sol.u.nx = im.nx;
  sol.u.ny = im.ny;
  sol.u.lx = im.lx;
  sol.u.ly = im.ly;
  sol.u.v.assign(im.n_nodes(), 0.0);
  for (size_t f = 0; f < im.node_of_free.size(); ++f) sol.u.v[im.node_of_free[f]] = u_f[f];
  for (size_t c = 0; c < im.constrained_nodes.size(); ++c) sol.u.v[im.constrained_nodes[c]] = u_c[c];
  sol.load.assign(load.data(), load.data() + load.size());
  return sol;
}

std::vector<double> MixedSolver::reaction(Side side, const MixedSolution& sol) const {
  const Impl& im = *impl_;
  Eigen::Map<const Eigen::VectorXd> u(sol.u.v.data(), sol.u.v.size());
  Eigen::Map<const Eigen::VectorXd> b(sol.load.data(), sol.load.size());
  const Eigen::VectorXd r = im.full * u - b;
  std::vector<double> out;
  for (int n : im.side_nodes(side)) out.push_back(r[n]);
  return out;
}

double MixedSolver::energy(const GridField& v) const {
  Eigen::Map<const Eigen::VectorXd> u(v.v.data(), v.v.size());
  return u.dot(impl_->full * u);
}

// ---------------------------------------------------------------------------

DiscreteOperator assemble_T_rho(double lx, double ly, const ConductivityField& sigma,
                                const BoundaryPartition& partition, int n_modes) {
  partition.validate(lx);
  if (n_modes < 1) throw ValidationError("n_modes must be >= 1");

  DiscreteOperator op;
  op.lx = lx;
  op.ly = ly;
  op.gamma_basis = {0.0, lx, n_modes};
  op.sigma_rho_basis = {partition.rho, lx - 2.0 * partition.rho, n_modes};
  // Trial Dirichlet traces on Gamma, homogeneous Dirichlet elsewhere: the
  // operator maps the Gamma trace of the lifted-off part to its flux on the
  // data side.
  op.solver = std::make_shared<MixedSolver>(
      lx, ly, sigma, std::set<Side>{Side::Bottom, Side::Top, Side::Left, Side::Right});

  op.matrix.assign(n_modes, std::vector<double>(n_modes, 0.0));
  const auto bottom_nodes_x = [&] {
    std::vector<double> xs;
    for (int i = 0; i <= sigma.nx; ++i) xs.push_back(i * lx / sigma.nx);
    return xs;
  }();

  for (int j = 0; j < n_modes; ++j) {
    // H_half_00-orthonormal trial: lambda^{-1/4} phi_j.
    const double wj = std::pow(op.gamma_basis.lambda(j), -0.25);
    const SineBasis1D& gb = op.gamma_basis;
    const auto sol = op.solver->solve({}, {{Side::Top, [&gb, j, wj](double x) {
                                              return wj * gb.value(j, x);
                                            }}});
    const std::vector<double> r = op.solver->reaction(Side::Bottom, sol);
    for (int k = 0; k < n_modes; ++k) {
      // <flux, chi_k> via the nodal-functional identity, then the
      // dual-orthonormal coordinate weight.
      double t = 0.0;
      for (size_t i = 0; i < r.size(); ++i) t += r[i] * op.sigma_rho_basis.value(k, bottom_nodes_x[i]);
      op.matrix[k][j] = std::pow(op.sigma_rho_basis.lambda(k), -0.25) * t;
    }
  }
  return op;
}

namespace {

Eigen::MatrixXd to_eigen(const DiscreteOperator& op) {
  Eigen::MatrixXd m(op.rows(), op.cols());
  for (int r = 0; r < op.rows(); ++r)
    for (int c = 0; c < op.cols(); ++c) m(r, c) = op.matrix[r][c];
  return m;
}

}  // namespace

NumericSvd numeric_svd(const DiscreteOperator& op) {
  if (op.rows() == 0 || op.cols() == 0) throw ValidationError("operator not assembled");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(op), Eigen::ComputeFullU | Eigen::ComputeFullV);
  NumericSvd out;
  const int n = static_cast<int>(svd.singularValues().size());
  out.values.assign(svd.singularValues().data(), svd.singularValues().data() + n);
  for (int j = 0; j < n; ++j) {
    out.left.emplace_back(svd.matrixV().col(j).data(), svd.matrixV().col(j).data() + op.cols());
    out.right.emplace_back(svd.matrixU().col(j).data(), svd.matrixU().col(j).data() + op.rows());
  }
  return out;
}

std::vector<double> regularized_invert(const DiscreteOperator& op,
                                       const std::vector<double>& data,
                                       const RegularizationConfig& cfg) {
  if (static_cast<int>(data.size()) != op.rows())
    throw ValidationError("data length does not match the operator output space");
  const double alpha = alpha_of_eps(cfg);
  const NumericSvd svd = numeric_svd(op);

  std::vector<double> result(op.cols(), 0.0);
  for (size_t j = 0; j < svd.values.size(); ++j) {
    if (alpha > 0.0 && svd.values[j] < alpha) break;  // values are non-increasing
    if (svd.values[j] <= 0.0) break;
    double proj = 0.0;
    for (int r = 0; r < op.rows(); ++r) proj += data[r] * svd.right[j][r];
    const double c = proj / svd.values[j];
    for (int cidx = 0; cidx < op.cols(); ++cidx) result[cidx] += c * svd.left[j][cidx];
  }
  return result;
}

GeneralRecovery solve_regularized_cauchy(double lx, double ly,
                                         const ConductivityField& sigma,
                                         const BoundaryPartition& partition,
                                         const TraceFunction& psi,
                                         const TraceFunction& g,
                                         const RegularizationConfig& cfg,
                                         int n_modes) {
  partition.validate(lx);
  if (psi.basis != g.basis) throw ValidationError("psi and g use different bases");
  const BasisPtr trace_basis = psi.basis;
  if (trace_basis->section().dim() != 1 ||
      std::abs(trace_basis->section().extents[0] - lx) > 1e-12)
    throw ValidationError("trace basis must be an interval basis of length lx");
  if (n_modes > trace_basis->count()) throw ValidationError("n_modes exceeds the trace basis");

  auto psi_fn = [&](double x) {
    double acc = 0.0;
    for (int k = 0; k < trace_basis->count(); ++k)
      acc += psi.coeffs[k] * trace_basis->mode_value_at(k, {x, 0.0});
    return acc;
  };

  // Dirichlet lift W: E0(psi) on the whole boundary, so W vanishes on Gamma.
  MixedSolver lift_solver(lx, ly, sigma,
                          {Side::Bottom, Side::Top, Side::Left, Side::Right});
  const MixedSolution w = lift_solver.solve({}, {{Side::Bottom, psi_fn}});
  const std::vector<double> w_flux_bottom = lift_solver.reaction(Side::Bottom, w);

  // Defect on Sigma_rho in dual-orthonormal coordinates.
  const SineBasis1D srho{partition.rho, lx - 2.0 * partition.rho, n_modes};
  const auto nodes = trace_basis->grid_nodes();
  const double cell = trace_basis->cell_measure();
  std::vector<double> g_values = trace_basis->synthesize(g.coeffs);
  std::vector<double> defect(n_modes, 0.0);
  std::vector<double> xs_bottom(sigma.nx + 1);
  for (int i = 0; i <= sigma.nx; ++i) xs_bottom[i] = i * lx / sigma.nx;
  for (int k = 0; k < n_modes; ++k) {
    double g_k = 0.0;
    for (size_t m = 0; m < nodes.size(); ++m) g_k += g_values[m] * srho.value(k, nodes[m][0]) * cell;
    double w_k = 0.0;
    for (size_t i = 0; i < w_flux_bottom.size(); ++i)
      w_k += w_flux_bottom[i] * srho.value(k, xs_bottom[i]);
    defect[k] = std::pow(srho.lambda(k), -0.25) * (g_k - w_k);
  }

  DiscreteOperator op = assemble_T_rho(lx, ly, sigma, partition, n_modes);
  const std::vector<double> h_coords = regularized_invert(op, defect, cfg);

  // Gamma trace of u: W vanishes there, so u|Gamma = xi = R_alpha(defect),
  // with xi's phi-coefficients read off the orthonormal trial weights.
  std::vector<double> xi(trace_basis->count(), 0.0);
  for (int j = 0; j < n_modes; ++j)
    xi[j] = h_coords[j] * std::pow(op.gamma_basis.lambda(j), -0.25);
  auto xi_fn = [&](double x) {
    double acc = 0.0;
    for (int j = 0; j < n_modes; ++j) acc += xi[j] * op.gamma_basis.value(j, x);
    return acc;
  };

  // Final field: Dirichlet problem with psi below and the recovered trace on
  // Gamma; its reaction on Gamma carries the recovered flux functionals.
  const MixedSolution u_eps =
      lift_solver.solve({}, {{Side::Bottom, psi_fn}, {Side::Top, xi_fn}});
  const std::vector<double> flux_top = lift_solver.reaction(Side::Top, u_eps);

  GeneralRecovery rec;
  rec.alpha = alpha_of_eps(cfg);
  rec.field = u_eps.u;
  int retained = 0;
  {
    const NumericSvd svd = numeric_svd(op);
    for (double v : svd.values)
      if (v > 0.0 && (rec.alpha == 0.0 || v >= rec.alpha)) ++retained;
  }
  rec.retained = retained;

  rec.u_trace = make_trace(trace_basis, std::move(xi), SpaceTag::HHalf00);

  std::vector<double> flux_coeffs(trace_basis->count(), 0.0);
  for (int k = 0; k < trace_basis->count(); ++k) {
    double acc = 0.0;
    for (size_t i = 0; i < flux_top.size(); ++i)
      acc += flux_top[i] * trace_basis->mode_value_at(k, {xs_bottom[i], 0.0});
    flux_coeffs[k] = acc;
  }
  rec.flux_trace = make_trace(trace_basis, std::move(flux_coeffs), SpaceTag::HHalf00Dual);
  return rec;
}

}  // namespace cauchykit
