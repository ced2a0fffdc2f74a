#include "cauchykit/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cauchykit/errors.hpp"
#include "json.hpp"

namespace cauchykit {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

TraceFunction diff(const TraceFunction& a, const TraceFunction& b, SpaceTag tag) {
  std::vector<double> c(a.coeffs.size());
  for (size_t k = 0; k < c.size(); ++k) c[k] = a.coeffs[k] - b.coeffs[k];
  return make_trace(a.basis, std::move(c), tag);
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot write " + p.string());
  out << text;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(tok);
  return out;
}

}  // namespace

NonlinearLaw LawSpec::build() const {
  if (name == "linear") return linear_law(a);
  if (name == "saturating") return saturating_law(a);
  if (name == "piecewise") return piecewise_law(t, f);
  throw ValidationError("unknown law '" + name + "' (expected linear|saturating|piecewise)");
}

void ExperimentConfig::validate() const {
  cross_section.validate();
  if (modes < 1) throw ValidationError("modes must be >= 1");
  if (flux_coeffs.empty()) throw ValidationError("flux_coeffs must not be empty");
  if (static_cast<int>(flux_coeffs.size()) > modes)
    throw ValidationError("flux_coeffs has more entries than retained modes");
  if (eps_list.empty()) throw ValidationError("eps_list must not be empty");
  for (double e : eps_list)
    if (!(e >= 0.0)) throw ValidationError("noise levels must be >= 0");
  if (!(gamma > 0.0 && gamma < 1.0)) throw ValidationError("gamma must lie in (0,1)");
  if (bins < 2) throw ValidationError("bins must be >= 2");
  if (!(direct_tol > 0.0)) throw ValidationError("direct_tol must be > 0");
  if (direct_max_iter < 1) throw ValidationError("direct_max_iter must be >= 1");
  if (!(direct_damping > 0.0 && direct_damping <= 1.0))
    throw ValidationError("direct_damping must lie in (0,1]");
  if (noise_support_begin < 0) throw ValidationError("noise_support_begin must be >= 0");
  if (noise_support_end != -1 && noise_support_end <= noise_support_begin)
    throw ValidationError("noise support is empty");
  law.build().validate();
}

std::string ExperimentConfig::to_json() const {
  json j;
  j["cross_section"]["kind"] =
      cross_section.kind == SectionKind::Interval ? "interval" : "rectangle";
  j["cross_section"]["extents"] = cross_section.extents;
  j["cross_section"]["resolution"] = cross_section.resolution;
  j["modes"] = modes;
  j["law"]["name"] = law.name;
  j["law"]["a"] = law.a;
  j["law"]["t"] = law.t;
  j["law"]["f"] = law.f;
  j["flux_coeffs"] = flux_coeffs;
  j["eps_list"] = eps_list;
  j["seed"] = seed;
  j["noise_support_begin"] = noise_support_begin;
  j["noise_support_end"] = noise_support_end;
  j["noise_on_psi"] = noise_on_psi;
  j["noise_on_g"] = noise_on_g;
  j["gamma"] = gamma;
  j["policy"] = policy == CutoffPolicy::MuThreshold ? "mu-threshold" : "literal";
  j["bins"] = bins;
  j["delta"] = delta;
  j["direct_tol"] = direct_tol;
  j["direct_max_iter"] = direct_max_iter;
  j["direct_damping"] = direct_damping;
  j["out_dir"] = out_dir;
  return j.dump(2) + "\n";
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config parse error: ") + e.what());
  }
  ExperimentConfig cfg;
  try {
    if (j.contains("cross_section")) {
      const json& cs = j["cross_section"];
      if (cs.contains("kind")) {
        const std::string k = cs["kind"];
        if (k == "interval")
          cfg.cross_section.kind = SectionKind::Interval;
        else if (k == "rectangle")
          cfg.cross_section.kind = SectionKind::Rectangle;
        else
          throw ValidationError("cross_section.kind must be interval|rectangle");
      }
      if (cs.contains("extents")) {
        auto v = cs["extents"].get<std::vector<double>>();
        for (size_t i = 0; i < v.size() && i < 2; ++i) cfg.cross_section.extents[i] = v[i];
      }
      if (cs.contains("resolution")) {
        auto v = cs["resolution"].get<std::vector<int>>();
        for (size_t i = 0; i < v.size() && i < 2; ++i) cfg.cross_section.resolution[i] = v[i];
      }
    }
    if (j.contains("modes")) cfg.modes = j["modes"];
    if (j.contains("law")) {
      const json& l = j["law"];
      if (l.contains("name")) cfg.law.name = l["name"];
      if (l.contains("a")) cfg.law.a = l["a"];
      if (l.contains("t")) cfg.law.t = l["t"].get<std::vector<double>>();
      if (l.contains("f")) cfg.law.f = l["f"].get<std::vector<double>>();
    }
    if (j.contains("flux_coeffs")) cfg.flux_coeffs = j["flux_coeffs"].get<std::vector<double>>();
    if (j.contains("eps_list")) cfg.eps_list = j["eps_list"].get<std::vector<double>>();
    if (j.contains("seed")) cfg.seed = j["seed"];
    if (j.contains("noise_support_begin")) cfg.noise_support_begin = j["noise_support_begin"];
    if (j.contains("noise_support_end")) cfg.noise_support_end = j["noise_support_end"];
    if (j.contains("noise_on_psi")) cfg.noise_on_psi = j["noise_on_psi"];
    if (j.contains("noise_on_g")) cfg.noise_on_g = j["noise_on_g"];
    if (j.contains("gamma")) cfg.gamma = j["gamma"];
    if (j.contains("policy")) {
      const std::string p = j["policy"];
      if (p == "mu-threshold")
        cfg.policy = CutoffPolicy::MuThreshold;
      else if (p == "literal")
        cfg.policy = CutoffPolicy::LiteralOrder;
      else
        throw ValidationError("policy must be mu-threshold|literal");
    }
    if (j.contains("bins")) cfg.bins = j["bins"];
    if (j.contains("delta")) cfg.delta = j["delta"];
    if (j.contains("direct_tol")) cfg.direct_tol = j["direct_tol"];
    if (j.contains("direct_max_iter")) cfg.direct_max_iter = j["direct_max_iter"];
    if (j.contains("direct_damping")) cfg.direct_damping = j["direct_damping"];
    if (j.contains("out_dir")) cfg.out_dir = j["out_dir"];
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config field error: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

namespace {

struct SimulationState {
  BasisPtr basis;
  NonlinearLaw law;
  TraceFunction g_true;
  DirectSolution direct;
  TraceFunction u_true;
  TraceFunction flux_true;
};

SimulationState simulate_once(const ExperimentConfig& cfg) {
  SimulationState st;
  st.basis = build_basis(cfg.cross_section, cfg.modes);
  st.law = cfg.law.build();
  st.g_true = make_trace(st.basis, cfg.flux_coeffs, SpaceTag::HHalf00Dual);
  st.direct = solve_direct(st.basis, st.law, st.g_true, cfg.direct_tol, cfg.direct_max_iter,
                           cfg.direct_damping);
  st.u_true = st.direct.gamma1_trace();
  st.flux_true = st.direct.gamma1_flux;
  return st;
}

EpsResult run_one_eps(const ExperimentConfig& cfg, const SimulationState& st, double eps,
                      size_t eps_index) {
  NoiseSpec psi_noise{cfg.noise_on_psi ? eps : 0.0, SpaceTag::HHalf00,
                      cfg.seed + 2 * eps_index, cfg.noise_support_begin, cfg.noise_support_end};
  NoiseSpec g_noise{cfg.noise_on_g ? eps : 0.0, SpaceTag::HHalf00Dual,
                    cfg.seed + 2 * eps_index + 1, cfg.noise_support_begin, cfg.noise_support_end};
  const CauchyPair pair = measure(st.direct, st.g_true, psi_noise, g_noise);

  RegularizationConfig rc{cfg.gamma, eps, cfg.policy};
  const CauchyRecovery rec = reconstruct_gamma1(pair.psi, pair.g, rc);

  EpsResult r;
  r.eps = eps;
  r.alpha = rec.alpha;
  r.retained = rec.retained;
  r.picard_iterations = static_cast<int>(st.direct.residuals.size());
  r.u_recovered = rec.u_trace;
  r.flux_recovered = rec.flux_trace;
  r.trace_error = trace_norm(diff(rec.u_trace, st.u_true, SpaceTag::HHalf00));
  r.flux_error = trace_norm(diff(rec.flux_trace, st.flux_true, SpaceTag::HHalf00Dual));
  r.table = identify(rec.u_trace, rec.flux_trace, cfg.bins, cfg.delta);

  double sup = 0.0;
  bool any = false;
  const size_t n = r.table.rows.size();
  for (size_t i = 0; i < n; ++i) {
    const BinRow& row = r.table.rows[i];
    if (!row.regular) continue;
    if (n > 2 && (i == 0 || i + 1 == n)) continue;  // boundary bins are half-filled
    sup = std::max(sup, std::abs(row.f_value - st.law.f(row.t_center)));
    any = true;
  }
  r.f_sup_error = any ? sup : std::numeric_limits<double>::quiet_NaN();
  return r;
}

RunReport run_eps_set(const ExperimentConfig& cfg, const std::vector<double>& eps_set) {
  cfg.validate();
  const SimulationState st = simulate_once(cfg);
  RunReport rep;
  rep.config = cfg;
  rep.u_true = st.u_true;
  rep.flux_true = st.flux_true;
  for (size_t i = 0; i < eps_set.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    rep.results.push_back(run_one_eps(cfg, st, eps_set[i], i));
    const auto t1 = std::chrono::steady_clock::now();
    rep.timings_seconds.push_back(std::chrono::duration<double>(t1 - t0).count());
  }
  return rep;
}

}  // namespace

RunReport run_pipeline(const ExperimentConfig& cfg) {
  if (cfg.eps_list.empty()) throw ValidationError("eps_list must not be empty");
  return run_eps_set(cfg, {cfg.eps_list.front()});
}

RunReport run_sweep(const ExperimentConfig& cfg) { return run_eps_set(cfg, cfg.eps_list); }

void write_report(const RunReport& report, const std::string& dir) {
  fs::create_directories(dir);
  write_file(fs::path(dir) / "config.json", report.config.to_json());

  std::string csv =
      "eps [dual-norm noise],alpha [threshold],retained [modes],picard_iterations [count],"
      "trace_error [H_half_00],flux_error [H_half_00 dual],f_sup_error [sup over interior "
      "regular bins]\n";
  for (const EpsResult& r : report.results)
    csv += fmt(r.eps) + "," + fmt(r.alpha) + "," + std::to_string(r.retained) + "," +
           std::to_string(r.picard_iterations) + "," + fmt(r.trace_error) + "," +
           fmt(r.flux_error) + "," + fmt(r.f_sup_error) + "\n";
  write_file(fs::path(dir) / "report.csv", csv);

  std::string tr = "mode [position],u_true [H_half_00 coeff],flux_true [dual coeff]\n";
  for (size_t k = 0; k < report.u_true.coeffs.size(); ++k)
    tr += std::to_string(k) + "," + fmt(report.u_true.coeffs[k]) + "," +
          fmt(report.flux_true.coeffs[k]) + "\n";
  write_file(fs::path(dir) / "true_traces.csv", tr);

  for (size_t i = 0; i < report.results.size(); ++i) {
    const EpsResult& r = report.results[i];
    std::string rc = "mode [position],u_recovered [H_half_00 coeff],flux_recovered [dual coeff]\n";
    for (size_t k = 0; k < r.u_recovered.coeffs.size(); ++k)
      rc += std::to_string(k) + "," + fmt(r.u_recovered.coeffs[k]) + "," +
            fmt(r.flux_recovered.coeffs[k]) + "\n";
    write_file(fs::path(dir) / ("recovered_" + std::to_string(i) + ".csv"), rc);

    const NonlinearityTable anchored = r.table.anchored_at_zero();
    std::string tb =
        "t_center [trace value],f_value [flux],f_anchored [flux],weight [surface measure],"
        "min_grad [|grad u|],dispersion [flux variance],count [nodes],regular [0/1]\n";
    for (size_t b = 0; b < r.table.rows.size(); ++b) {
      const BinRow& row = r.table.rows[b];
      tb += fmt(row.t_center) + "," + fmt(row.f_value) + "," + fmt(anchored.rows[b].f_value) +
            "," + fmt(row.weight) + "," + fmt(row.min_grad) + "," + fmt(row.dispersion) + "," +
            std::to_string(row.count) + "," + (row.regular ? "1" : "0") + "\n";
    }
    write_file(fs::path(dir) / ("table_" + std::to_string(i) + ".csv"), tb);
  }

  if (report.results.size() > 1) {
    std::string sm =
        "eps [dual-norm noise],trace_error [H_half_00],ratio_to_previous [dimensionless]\n";
    for (size_t i = 0; i < report.results.size(); ++i) {
      const double ratio = i == 0 ? std::numeric_limits<double>::quiet_NaN()
                                  : report.results[i].trace_error /
                                        report.results[i - 1].trace_error;
      sm += fmt(report.results[i].eps) + "," + fmt(report.results[i].trace_error) + "," +
            fmt(ratio) + "\n";
    }
    write_file(fs::path(dir) / "summary.csv", sm);
  }

  // Wall-clock timings are machine-dependent; kept out of the deterministic set.
  std::string tm = "eps_index seconds\n";
  for (size_t i = 0; i < report.timings_seconds.size(); ++i)
    tm += std::to_string(i) + " " + fmt6(report.timings_seconds[i]) + "\n";
  write_file(fs::path(dir) / "timings.txt", tm);
}

RunReport load_report(const ExperimentConfig& cfg, const std::string& dir) {
  RunReport rep;
  rep.config = ExperimentConfig::from_json_file((fs::path(dir) / "config.json").string());
  (void)cfg;
  const BasisPtr basis = build_basis(rep.config.cross_section, rep.config.modes);

  auto read_lines = [&](const std::string& name) {
    std::ifstream in(fs::path(dir) / name);
    if (!in) throw IoError("cannot open report file: " + name);
    std::vector<std::string> lines;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line))
      if (!line.empty()) lines.push_back(line);
    return lines;
  };

  {
    std::vector<double> u, fl;
    for (const std::string& line : read_lines("true_traces.csv")) {
      const auto c = split_csv_line(line);
      u.push_back(std::stod(c[1]));
      fl.push_back(std::stod(c[2]));
    }
    rep.u_true = make_trace(basis, std::move(u), SpaceTag::HHalf00);
    rep.flux_true = make_trace(basis, std::move(fl), SpaceTag::HHalf00Dual);
  }

  for (const std::string& line : read_lines("report.csv")) {
    const auto c = split_csv_line(line);
    EpsResult r;
    r.eps = std::stod(c[0]);
    r.alpha = std::stod(c[1]);
    r.retained = std::stoi(c[2]);
    r.picard_iterations = std::stoi(c[3]);
    r.trace_error = std::stod(c[4]);
    r.flux_error = std::stod(c[5]);
    r.f_sup_error = std::stod(c[6]);
    rep.results.push_back(std::move(r));
  }

  for (size_t i = 0; i < rep.results.size(); ++i) {
    EpsResult& r = rep.results[i];
    std::vector<double> u, fl;
    for (const std::string& line : read_lines("recovered_" + std::to_string(i) + ".csv")) {
      const auto c = split_csv_line(line);
      u.push_back(std::stod(c[1]));
      fl.push_back(std::stod(c[2]));
    }
    r.u_recovered = make_trace(basis, std::move(u), SpaceTag::HHalf00);
    r.flux_recovered = make_trace(basis, std::move(fl), SpaceTag::HHalf00Dual);

    const auto lines = read_lines("table_" + std::to_string(i) + ".csv");
    r.table.rows.clear();
    for (const std::string& line : lines) {
      const auto c = split_csv_line(line);
      BinRow row;
      row.t_center = std::stod(c[0]);
      row.f_value = std::stod(c[1]);
      row.weight = std::stod(c[3]);
      row.min_grad = std::stod(c[4]);
      row.dispersion = std::stod(c[5]);
      row.count = std::stoi(c[6]);
      row.regular = c[7] == "1";
      r.table.rows.push_back(row);
    }
    if (!r.table.rows.empty()) {
      const double w = r.table.rows.size() > 1
                           ? r.table.rows[1].t_center - r.table.rows[0].t_center
                           : 0.0;
      r.table.t_min = r.table.rows.front().t_center - 0.5 * w;
      r.table.t_max = r.table.rows.back().t_center + 0.5 * w;
    }
  }
  return rep;
}

void emit_plots(const RunReport& report, const std::string& dir) {
  if (report.results.empty()) return;
  const fs::path pd = fs::path(dir) / "plots";
  fs::create_directories(pd);

  std::string conv = "# eps trace_error flux_error\n";
  for (const EpsResult& r : report.results)
    conv += fmt(r.eps) + " " + fmt(r.trace_error) + " " + fmt(r.flux_error) + "\n";
  write_file(pd / "convergence.dat", conv);

  const NonlinearLaw law = report.config.law.build();
  for (size_t i = 0; i < report.results.size(); ++i) {
    const EpsResult& r = report.results[i];
    std::string lawdat = "# t f_recovered f_true regular\n";
    for (const BinRow& row : r.table.rows)
      lawdat += fmt(row.t_center) + " " + fmt(row.f_value) + " " + fmt(law.f(row.t_center)) +
                " " + (row.regular ? "1" : "0") + "\n";
    write_file(pd / ("law_" + std::to_string(i) + ".dat"), lawdat);

    std::string trdat = "# mode u_true u_recovered\n";
    for (size_t k = 0; k < report.u_true.coeffs.size(); ++k)
      trdat += std::to_string(k) + " " + fmt(report.u_true.coeffs[k]) + " " +
               fmt(r.u_recovered.coeffs[k]) + "\n";
    write_file(pd / ("trace_" + std::to_string(i) + ".dat"), trdat);
  }

  std::string gp;
  gp += "set terminal pngcairo size 900,600\n";
  gp += "set output 'convergence.png'\n";
  gp += "set logscale xy\n";
  gp += "set xlabel 'noise level'\nset ylabel 'error'\n";
  gp += "plot 'convergence.dat' u 1:2 w lp t 'trace error', "
       "'convergence.dat' u 1:3 w lp t 'flux error'\n";
  gp += "unset logscale\n";
  for (size_t i = 0; i < report.results.size(); ++i) {
    gp += "set output 'law_" + std::to_string(i) + ".png'\n";
    gp += "set xlabel 't'\nset ylabel 'f(t)'\n";
    gp += "plot 'law_" + std::to_string(i) + ".dat' u 1:2 w lp t 'recovered', 'law_" +
          std::to_string(i) + ".dat' u 1:3 w l t 'true'\n";
    gp += "set output 'trace_" + std::to_string(i) + ".png'\n";
    gp += "set xlabel 'mode'\nset ylabel 'coefficient'\n";
    gp += "plot 'trace_" + std::to_string(i) + ".dat' u 1:2 w lp t 'true', 'trace_" +
          std::to_string(i) + ".dat' u 1:3 w lp t 'recovered'\n";
  }
  write_file(pd / "plots.gp", gp);
}

std::string run_command(const ExperimentConfig& cfg, const std::string& command) {
  cfg.validate();
  std::string out;

  if (command == "svdtable") {
    const BasisPtr basis = build_basis(cfg.cross_section, cfg.modes);
    std::string csv = "k [1-based],lambda_k [eigenvalue],mu_k [singular value]\n";
    out += "k  lambda_k  mu_k\n";
    for (int k = 0; k < basis->count(); ++k) {
      const double mu = mu_of_mode(*basis, k);
      csv += std::to_string(k + 1) + "," + fmt(basis->eigenvalue(k)) + "," + fmt(mu) + "\n";
      out += std::to_string(k + 1) + "  " + fmt6(basis->eigenvalue(k)) + "  " + fmt6(mu) + "\n";
    }
    fs::create_directories(cfg.out_dir);
    write_file(fs::path(cfg.out_dir) / "svdtable.csv", csv);
    return out;
  }

  if (command == "simulate") {
    const SimulationState st = simulate_once(cfg);
    fs::create_directories(cfg.out_dir);
    std::string tr = "mode [position],psi [H_half_00 coeff],g [dual coeff],u_gamma1 "
                     "[H_half_00 coeff],flux_gamma1 [dual coeff]\n";
    const TraceFunction psi = st.direct.gamma2_trace();
    for (size_t k = 0; k < psi.coeffs.size(); ++k)
      tr += std::to_string(k) + "," + fmt(psi.coeffs[k]) + "," + fmt(st.g_true.coeffs[k]) + "," +
            fmt(st.u_true.coeffs[k]) + "," + fmt(st.flux_true.coeffs[k]) + "\n";
    write_file(fs::path(cfg.out_dir) / "cauchy_data.csv", tr);
    out += "direct solve converged in " + std::to_string(st.direct.residuals.size()) +
           " iterations\n";
    out += "energy " + fmt6(energy(st.direct)) + "\n";
    out += "gamma1 oscillation " + fmt6(oscillation_gamma1(st.direct)) + "\n";
    return out;
  }

  if (command == "cauchy" || command == "identify" || command == "pipeline") {
    const RunReport rep = run_pipeline(cfg);
    write_report(rep, cfg.out_dir);
    emit_plots(rep, cfg.out_dir);
    const EpsResult& r = rep.results.front();
    out += "eps " + fmt6(r.eps) + "  alpha " + fmt6(r.alpha) + "  retained " +
           std::to_string(r.retained) + "\n";
    out += "trace error (H_half_00) " + fmt6(r.trace_error) + "\n";
    out += "flux error (dual) " + fmt6(r.flux_error) + "\n";
    if (command != "cauchy") {
      out += "law sup error on interior regular bins " + fmt6(r.f_sup_error) + "\n";
      int regular = 0;
      for (const BinRow& row : r.table.rows) regular += row.regular ? 1 : 0;
      out += "regular bins " + std::to_string(regular) + "/" +
             std::to_string(r.table.rows.size()) + "\n";
    }
    return out;
  }

  if (command == "sweep") {
    const RunReport rep = run_sweep(cfg);
    write_report(rep, cfg.out_dir);
    emit_plots(rep, cfg.out_dir);
    out += "eps  trace_error  flux_error  retained\n";
    for (const EpsResult& r : rep.results)
      out += fmt6(r.eps) + "  " + fmt6(r.trace_error) + "  " + fmt6(r.flux_error) + "  " +
             std::to_string(r.retained) + "\n";
    return out;
  }

  throw ValidationError("unknown command '" + command +
                        "' (expected simulate|cauchy|identify|pipeline|sweep|svdtable)");
}

}  // namespace cauchykit
