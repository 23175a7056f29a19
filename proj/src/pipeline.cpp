#include "speclab/pipeline.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace speclab {

namespace {

SweepNumerics numerics_of(const RunConfig& cfg, int threads) {
  SweepNumerics n;
  n.K = cfg.K;
  n.xi_points = cfg.xi_points;
  n.h = cfg.h;
  n.evans_steps = cfg.evans_steps;
  n.evans_scan = cfg.evans_scan;
  n.grid_n = cfg.grid_n;
  n.max_energy = cfg.max_energy;
  n.margin = cfg.margin;
  n.threads = threads;
  n.seed = cfg.seed;
  return n;
}

bool wants(const RunConfig& cfg, const std::string& fmt) {
  for (const auto& f : cfg.formats)
    if (f == fmt) return true;
  return false;
}

std::string out_path(const RunConfig& cfg, const std::string& sub, const std::string& ext) {
  std::filesystem::create_directories(cfg.out_dir);
  return cfg.out_dir + "/" + sub + "_" + config_hash(cfg) + "." + ext;
}

void write_json(const RunConfig& cfg, const std::string& sub, const nlohmann::json& j) {
  if (!wants(cfg, "json")) return;
  std::ofstream out(out_path(cfg, sub, "json"));
  out << j.dump(2) << "\n";
}

DiracPoint dirac_point_of(const RunConfig& cfg) {
  const auto V = cfg.make_V();
  const auto W = cfg.make_W();
  const auto dps = find_dirac_points(V, cfg.K, cfg.max_energy, cfg.degeneracy_tol);
  if (dps.empty()) throw NumericalError("no Dirac point below max_energy");
  DiracPoint dp = dirac_eigenbasis(V, dps[0].first, dps[0].second, cfg.K);
  return compute_invariants(dp, W);
}

}  // namespace

nlohmann::json run_bands(const RunConfig& cfg, int threads, bool emit) {
  const auto V = cfg.make_V();
  const auto W = cfg.make_W();
  const auto grid = uniform_xi_grid(cfg.xi_points);
  const auto bands = band_structure(V, W, cfg.bands_delta, grid, cfg.K, cfg.n_bands, threads);

  ResultTable t;
  t.provenance = "bands " + config_hash(cfg);
  t.columns.push_back("xi");
  for (std::size_t j = 0; j < bands.n_bands(); ++j)
    t.columns.push_back("band" + std::to_string(j + 1));
  for (std::size_t i = 0; i < bands.xi_grid.size(); ++i) {
    std::vector<ResultTable::Cell> row{ResultTable::real(bands.xi_grid[i])};
    for (std::size_t j = 0; j < bands.n_bands(); ++j)
      row.push_back(ResultTable::real(bands.curves[j][i]));
    t.add_row(std::move(row));
  }
  if (emit && wants(cfg, "csv")) emit_table_csv(t, out_path(cfg, "bands", "csv"));

  nlohmann::json j;
  j["delta"] = cfg.bands_delta;
  j["n_bands"] = bands.n_bands();
  j["xi_points"] = bands.xi_grid.size();
  if (emit) write_json(cfg, "bands", j);
  return j;
}

nlohmann::json run_dirac(const RunConfig& cfg, int /*threads*/, bool emit) {
  const auto V = cfg.make_V();
  const auto W = cfg.make_W();
  const DiracPoint dp = dirac_point_of(cfg);
  const auto [rD, rW] = pauli_identity_residuals(dp, W);

  nlohmann::json j;
  j["E_star"] = dp.E_star;
  j["j_star"] = dp.j_star;
  j["nu_star"] = dp.nu_star;
  j["theta_star"] = {dp.theta_star.real(), dp.theta_star.imag()};
  j["theta_star_abs"] = std::abs(dp.theta_star);
  j["residuals"] = {
      {"eigen", dp.eigen_residual(V)},
      {"norm", dp.norm_error()},
      {"odd_support", dp.odd_support()},
      {"pauli_D", rD},
      {"pauli_W", rW},
  };
  if (emit) write_json(cfg, "dirac", j);
  return j;
}

nlohmann::json run_effective(const RunConfig& cfg, int threads, bool emit) {
  const DiracPoint dp = dirac_point_of(cfg);
  const auto num = numerics_of(cfg, threads);
  const EffectiveSetup es = make_effective_setup(dp, cfg.wall_shape, cfg.wall_scale_rel, num);

  const auto sp_e = dirac_spectrum_evans(es.op, es.X_evans, es.evans_steps, cfg.evans_scan, threads);
  const auto sp_g = dirac_spectrum_grid(es.op, es.Y_grid, es.grid_n);
  const double gh = 2.0 * es.Y_grid / es.grid_n;
  const double disc =
      cross_validate_thetas(sp_e.thetas, sp_g.thetas, es.op.theta_abs(),
                            std::max(1e-6, 10.0 * gh * gh));

  nlohmann::json j;
  j["theta_star_abs"] = es.op.theta_abs();
  j["nu_star"] = es.op.nu;
  j["wall"] = {
      {"shape", cfg.wall_shape == DomainWall::Shape::Tanh ? "tanh" : "smoothstep"},
      {"scale", es.op.wall.scale},
      {"scale_rel", cfg.wall_scale_rel},
  };
  j["thetas_evans"] = sp_e.thetas;
  j["thetas_grid"] = sp_g.thetas;
  j["max_discrepancy"] = disc;
  if (emit) write_json(cfg, "effective", j);
  return j;
}

nlohmann::json run_dislocated(const RunConfig& cfg, int threads, bool emit) {
  const auto V = cfg.make_V();
  const auto W = cfg.make_W();
  const DiracPoint dp = dirac_point_of(cfg);
  const auto num = numerics_of(cfg, threads);
  const EffectiveSetup es = make_effective_setup(dp, cfg.wall_shape, cfg.wall_scale_rel, num);
  const auto sp_e =
      dirac_spectrum_evans(es.op, es.X_evans, es.evans_steps, cfg.evans_scan, threads);

  const double delta = cfg.dislocated_delta;
  const double ta = std::abs(dp.theta_star);
  const auto bands =
      band_structure(V, W, delta, uniform_xi_grid(cfg.xi_points), cfg.K, dp.j_star + 1, threads);
  const SpectralGap gap = essential_gap(bands, dp.j_star);

  double X = required_half_width(es.op.wall, delta, dp.nu_star, ta);
  X = std::ceil(X / cfg.h) * cfg.h;
  const auto op = assemble_dislocated(V, W, es.op.wall, delta, X, cfg.h);
  const auto pairs = gap_eigs(op, gap, cfg.margin, cfg.seed);

  nlohmann::json j;
  j["delta"] = delta;
  j["gap"] = {gap.lower_edge, gap.upper_edge};
  std::vector<double> evs, preds;
  std::vector<int> assign;
  for (const auto& p : pairs) {
    evs.push_back(p.E);
    int best = 0;
    for (std::size_t i = 1; i < sp_e.thetas.size(); ++i)
      if (std::abs(p.E - (dp.E_star + sp_e.thetas[i] * delta)) <
          std::abs(p.E - (dp.E_star + sp_e.thetas[best] * delta)))
        best = static_cast<int>(i);
    preds.push_back(dp.E_star + sp_e.thetas[best] * delta);
    assign.push_back(best);
  }
  j["eigenvalues"] = evs;
  j["predicted"] = preds;
  j["assignments"] = assign;
  if (emit) {
    write_json(cfg, "dislocated", j);
    if (wants(cfg, "csv") && !pairs.empty()) {
      // gap eigenfunctions of the real symmetric matrix are real
      ResultTable t;
      t.provenance = "dislocated " + config_hash(cfg);
      t.columns.push_back("x");
      for (std::size_t k = 0; k < pairs.size(); ++k)
        t.columns.push_back("u" + std::to_string(k + 1));
      for (std::size_t i = 0; i < op.size(); ++i) {
        std::vector<ResultTable::Cell> row{ResultTable::real(op.node(i))};
        for (const auto& p : pairs) row.push_back(ResultTable::real(p.vec[i]));
        t.add_row(std::move(row));
      }
      emit_table_csv(t, out_path(cfg, "dislocated", "csv"));
    }
  }
  return j;
}

nlohmann::json sweep_report_json(const SweepReport& rep) {
  nlohmann::json j;
  j["E_star"] = rep.E_star;
  j["j_star"] = rep.j_star;
  j["nu_star"] = rep.nu_star;
  j["theta_star"] = {rep.theta_star.real(), rep.theta_star.imag()};
  j["thetas_evans"] = rep.thetas;
  j["thetas_grid"] = rep.thetas_grid;
  j["effective_max_discrepancy"] = rep.effective_max_discrepancy;
  j["records"] = nlohmann::json::array();
  for (const auto& r : rep.records) {
    nlohmann::json rj;
    rj["delta"] = r.delta;
    rj["gap"] = {r.gap_lo, r.gap_hi};
    rj["window"] = {r.window_lo, r.window_hi};
    rj["count_window"] = r.count_window;
    rj["count_expected"] = r.count_expected;
    rj["assignment_ok"] = r.assignment_ok;
    rj["skipped"] = r.skipped;
    rj["branches"] = nlohmann::json::array();
    for (const auto& b : r.branches) {
      rj["branches"].push_back({
          {"j", b.j},
          {"theta_j", b.theta_j},
          {"E", b.E},
          {"predicted", b.predicted},
          {"residual", b.residual},
          {"overlap", b.overlap},
          {"qm_residual", b.qm_residual},
          {"boundary_amplitude", b.boundary_amplitude},
      });
    }
    j["records"].push_back(std::move(rj));
  }
  j["fits"] = nlohmann::json::array();
  for (const auto& f : rep.fits) {
    j["fits"].push_back({
        {"j", f.j},
        {"theta_j", f.theta_j},
        {"consistent", f.consistent},
        {"slope", f.fit.slope},
        {"curvature", f.fit.curvature},
        {"slope_err", f.fit.slope_err},
    });
  }
  return j;
}

nlohmann::json run_sweep_cmd(const RunConfig& cfg, int threads, bool emit) {
  const auto V = cfg.make_V();
  const auto W = cfg.make_W();
  SweepConfig sc;
  sc.deltas = cfg.deltas;
  sc.theta_sharp = cfg.theta_sharp;
  if (sc.deltas.empty()) throw ValidationError("sweep: deltas must be nonempty");
  const auto rep =
      run_sweep(V, W, cfg.wall_shape, cfg.wall_scale_rel, sc, numerics_of(cfg, threads));
  const nlohmann::json j = sweep_report_json(rep);
  if (!emit) return j;

  write_json(cfg, "sweep", j);
  if (wants(cfg, "csv")) {
    ResultTable t;
    t.provenance = "sweep " + config_hash(cfg);
    t.columns = {"j", "delta", "E", "prediction", "residual"};
    for (const auto& r : rep.records)
      for (const auto& b : r.branches)
        t.add_row({ResultTable::real(b.j), ResultTable::real(r.delta), ResultTable::real(b.E),
                   ResultTable::real(b.predicted), ResultTable::real(b.residual)});
    emit_table_csv(t, out_path(cfg, "sweep", "csv"));
  }
  if (wants(cfg, "svg")) {
    std::vector<SvgPoint> pts;
    for (const auto& r : rep.records)
      for (const auto& b : r.branches) pts.push_back({r.delta, b.E});
    std::vector<SvgLine> lines;
    const double dmax = cfg.deltas.front();
    for (double th : rep.thetas) {
      SvgLine l;
      l.label = "E = E* + theta*delta, theta=" + std::to_string(th);
      l.pts = {{0.0, rep.E_star}, {dmax, rep.E_star + th * dmax}};
      lines.push_back(std::move(l));
    }
    emit_svg_scatter(pts, lines, "delta", "E", out_path(cfg, "sweep", "svg"));
  }
  return j;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"spectral laboratory for 1D dislocated periodic operators"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  long seed = -1;
  int threads = 1;
  app.add_option("--config", config_path, "run configuration file")->required();
  app.add_option("--out", out_dir, "output directory override");
  app.add_option("--seed", seed, "seed override");
  app.add_option("--threads", threads, "worker threads for xi/z scans");

  auto* c_bands = app.add_subcommand("bands", "band structure CSV for P_delta");
  auto* c_dirac = app.add_subcommand("dirac", "Dirac point data and invariants");
  auto* c_eff = app.add_subcommand("effective", "effective operator spectrum, both routes");
  auto* c_disl = app.add_subcommand("dislocated", "gap eigenvalues of the dislocated operator");
  auto* c_sweep = app.add_subcommand("sweep", "delta sweep against the effective predictions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 1;
  }

  try {
    RunConfig cfg = load_config(config_path);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);

    nlohmann::json j;
    if (c_bands->parsed()) j = run_bands(cfg, threads, true);
    else if (c_dirac->parsed()) j = run_dirac(cfg, threads, true);
    else if (c_eff->parsed()) j = run_effective(cfg, threads, true);
    else if (c_disl->parsed()) j = run_dislocated(cfg, threads, true);
    else if (c_sweep->parsed()) j = run_sweep_cmd(cfg, threads, true);
    std::cout << j.dump(2) << "\n";
    return 0;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical invariant violated: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace speclab
