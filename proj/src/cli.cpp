#include "raman/cli.hpp"

#include <cmath>
#include <exception>
#include <stdexcept>

#include <Eigen/SVD>
#include <fmt/format.h>

#include "raman/decomposition.hpp"
#include "raman/errors.hpp"
#include "raman/io.hpp"
#include "raman/linalg.hpp"
#include "raman/log.hpp"
#include "raman/parallel.hpp"
#include "raman/propagator.hpp"
#include "raman/readout.hpp"
#include "raman/statistics.hpp"

namespace raman {

namespace fs = std::filesystem;

namespace {

struct Run {
  const std::string& name;
  const RunConfig& cfg;
  unsigned jobs;
  fs::path dir;
  json provenance;

  void csv(const std::string& rel, const std::string& text) const {
    if (cfg.output.wants("csv")) write_file(dir / rel, text);
  }
  void report(const std::string& rel, const json& j) const {
    if (cfg.output.wants("json")) write_file(dir / rel, json_text(j));
  }
};

SimulationGrid stokes_grid(const RunConfig& c) {
  return make_grid(c.grid.length, c.stokes.tau_p, c.stokes.delta_beta, c.grid.nz, c.grid.nt,
                   c.grid.margin);
}

SimulationGrid readout_grid(const RunConfig& c) {
  return make_grid(c.grid.length, c.readout.pump.tau_p, c.readout.pump.delta_beta, c.grid.nz,
                   c.grid.nt, c.grid.margin);
}

json base_provenance(const std::string& name, const RunConfig& cfg) {
  json p;
  p["schema_version"] = kSchemaVersion;
  p["program"] = "raman-modes";
  p["version"] = kVersion;
  p["subcommand"] = name;
  json c = json::object();
  for (const auto& [k, v] : config_entries(cfg)) c[k] = v;
  p["config"] = c;
  p["libraries"] = {{"eigen", fmt::format("{}.{}.{}", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION,
                                          EIGEN_MINOR_VERSION)},
                    {"fmt", FMT_VERSION}};
  return p;
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

Eigen::VectorXd linspace(double a, double b, int n) {
  return Eigen::VectorXd::LinSpaced(n, a, b);
}

void write_squeezer_functions(const Run& run, const SimulationGrid& grid,
                              const std::vector<ModePair>& modes) {
  const int k = std::min<int>(run.cfg.output.mode_functions, static_cast<int>(modes.size()));
  const Eigen::VectorXd t = grid.t_samples(), z = grid.z_samples();
  for (int n = 0; n < k; ++n) {
    const auto& m = modes[static_cast<std::size_t>(n)];
    const std::string tag = fmt::format("{:03d}", m.index);
    run.csv("modes/psi_in_" + tag + ".csv", function_csv("t", t, m.psi_in));
    run.csv("modes/psi_out_" + tag + ".csv", function_csv("t", t, m.psi_out));
    run.csv("modes/phi_in_" + tag + ".csv", function_csv("z", z, m.phi_in));
    run.csv("modes/phi_out_" + tag + ".csv", function_csv("z", z, m.phi_out));
  }
}

json stokes_summary(const SqueezerDecomposition& bm) {
  const PhotonStats st = photon_stats(bm.modes);
  json j;
  j["total_photons"] = st.total;
  j["equivalent_modes"] = st.total > 0.0 ? json(st.equivalent_modes) : json(nullptr);
  j["modes_returned"] = bm.modes.size();
  j["modes_dropped"] = bm.dropped;
  return j;
}

void cmd_stokes(Run& run) {
  const auto& cfg = run.cfg;
  const SimulationGrid grid = stokes_grid(cfg);
  log_info("stokes pass on {}x{} grid, T = {} ps", grid.nz(), grid.nt(), grid.half_window());
  const GreenSet g = build_green(grid, cfg.stokes, Pass::stokes, run.jobs);
  const ResidualReport structure = verify_structure(g);
  const SqueezerDecomposition bm = bloch_messiah(g);
  log_info("N_tot = {:.6g}, {} modes kept, {} dropped", bm.total_photons, bm.modes.size(), bm.dropped);

  run.csv("modes.csv", squeezer_catalog_csv(bm.modes));
  write_squeezer_functions(run, grid, bm.modes);

  json s;
  s["schema_version"] = kSchemaVersion;
  s["stokes"] = stokes_summary(bm);
  s["residuals"] = {{"structure", residuals_json(structure)},
                    {"decomposition", residuals_json(bm.residuals)}};
  run.report("stokes.json", s);

  run.provenance["grid"] = grid_json(grid);
  run.provenance["stokes_pump"] = pump_json(cfg.stokes, cfg.grid.length);
  run.provenance["residuals"] = s["residuals"];
}

void cmd_readout(Run& run) {
  const auto& cfg = run.cfg;
  const SimulationGrid grid = readout_grid(cfg);
  const GreenSet g = build_green(grid, cfg.readout.pump, Pass::antistokes, run.jobs);
  const ResidualReport structure = verify_structure(g);
  const BeamsplitterDecomposition bs = beamsplitter_reduce(g);

  run.csv("readout_modes.csv", readout_catalog_csv(bs.modes));
  const int k = std::min<int>(cfg.output.mode_functions, static_cast<int>(bs.modes.size()));
  const Eigen::VectorXd t = grid.t_samples(), z = grid.z_samples();
  for (int n = 0; n < k; ++n) {
    const auto& m = bs.modes[static_cast<std::size_t>(n)];
    const std::string tag = fmt::format("{:03d}", m.index);
    run.csv("modes/Psi_in_" + tag + ".csv", function_csv("t", t, m.Psi_in));
    run.csv("modes/Psi_out_" + tag + ".csv", function_csv("t", t, m.Psi_out));
    run.csv("modes/Phi_in_" + tag + ".csv", function_csv("z", z, m.Phi_in));
    run.csv("modes/Phi_out_" + tag + ".csv", function_csv("z", z, m.Phi_out));
  }

  int unit = 0;
  for (const auto& m : bs.modes)
    if (m.eta > 1.0 - 1e-3) ++unit;
  json s;
  s["schema_version"] = kSchemaVersion;
  s["modes"] = bs.modes.size();
  s["modes_eta_above_0.999"] = unit;
  s["residuals"] = {{"structure", residuals_json(structure)},
                    {"decomposition", residuals_json(bs.residuals)}};
  run.report("readout.json", s);

  run.provenance["readout_grid"] = grid_json(grid);
  run.provenance["readout_pump"] = pump_json(cfg.readout.pump, cfg.grid.length);
  run.provenance["residuals"] = s["residuals"];
}

ChainConfig chain_config(const RunConfig& cfg, unsigned jobs) {
  ChainConfig c;
  c.length = cfg.grid.length;
  c.nz = cfg.grid.nz;
  c.nt = cfg.grid.nt;
  c.margin = cfg.grid.margin;
  c.stokes = cfg.stokes;
  c.readout = cfg.readout.pump;
  c.delta_k = cfg.readout.delta_k;
  c.target_mode = cfg.readout.target_mode;
  c.jobs = jobs;
  return c;
}

void cmd_chain(Run& run) {
  const auto& cfg = run.cfg;
  const ChainResult r = full_chain(chain_config(cfg, run.jobs));
  log_info("readout residual 1 - eta = {:.6g}", r.readout.residual);

  run.csv("sigma.csv", function_csv("t", r.readout_grid.t_samples(), r.readout.sigma));
  run.csv("epsilon.csv", function_csv("z", r.stokes_grid.z_samples(), r.readout.epsilon));

  json s;
  s["schema_version"] = kSchemaVersion;
  s["target_mode"] = r.readout.target_mode_index;
  s["target_zeta"] = r.target_zeta;
  s["total_photons"] = r.total_photons;
  s["residual"] = r.readout.residual;
  s["sigma_norm2"] = r.readout.sigma_norm2;
  s["sigma_nodes"] = count_nodes(r.readout.sigma);
  s["residuals"] = {{"stokes_structure", residuals_json(r.stokes_structure)},
                    {"stokes_decomposition", residuals_json(r.stokes_decomposition)},
                    {"readout_structure", residuals_json(r.readout_structure)}};
  run.report("chain.json", s);

  run.provenance["grid"] = grid_json(r.stokes_grid);
  run.provenance["readout_grid"] = grid_json(r.readout_grid);
  run.provenance["stokes_pump"] = pump_json(cfg.stokes, cfg.grid.length);
  run.provenance["readout_pump"] = pump_json(cfg.readout.pump, cfg.grid.length);
  run.provenance["residuals"] = s["residuals"];
}

PmfPath pmf_path(const std::string& s) {
  if (s == "exact") return PmfPath::exact;
  if (s == "transform") return PmfPath::transform;
  return PmfPath::automatic;
}

const char* pmf_path_name(PmfPath p) {
  switch (p) {
    case PmfPath::exact:
      return "exact";
    case PmfPath::transform:
      return "transform";
    default:
      return "auto";
  }
}

void cmd_stats(Run& run) {
  const auto& cfg = run.cfg;
  const SimulationGrid grid = stokes_grid(cfg);
  const GreenSet g = build_green(grid, cfg.stokes, Pass::stokes, run.jobs);
  const SqueezerDecomposition bm = bloch_messiah(g);
  const std::vector<double> occ = occupancies(bm.modes);

  json s;
  s["schema_version"] = kSchemaVersion;
  s["stokes"] = stokes_summary(bm);
  if (bm.total_photons > 0.0) {
    PmfOptions opt;
    opt.n_max = cfg.stats.n_max;
    opt.resolution = cfg.stats.resolution;
    opt.path = pmf_path(cfg.stats.path);
    const PhotonPmf pmf = photon_pmf(occ, opt);
    CsvTable t({"n", "p"});
    for (std::size_t i = 0; i < pmf.n.size(); ++i)
      t.add_row({std::to_string(pmf.n[i]), format_number(pmf.p[i])});
    run.csv("pmf.csv", t.str());
    s["pmf"] = {{"path", pmf_path_name(pmf.path)}, {"n_max", pmf.n_max},
                {"stride", pmf.stride},            {"samples", pmf.n.size()},
                {"mass", pmf.mass},                {"truncated_mass", pmf.truncated_mass},
                {"mean", pmf.mean},                {"modes_used", pmf.modes_used},
                {"continuous_limit", pmf.continuous_limit}};
  } else {
    s["pmf"] = nullptr;
  }
  run.csv("modes.csv", squeezer_catalog_csv(bm.modes));
  run.report("statistics.json", s);

  run.provenance["grid"] = grid_json(grid);
  run.provenance["stokes_pump"] = pump_json(cfg.stokes, cfg.grid.length);
  run.provenance["residuals"] = {{"structure", residuals_json(verify_structure(g))},
                                 {"decomposition", residuals_json(bm.residuals)}};
}

void sweep_readout(Run& run) {
  const auto& cfg = run.cfg;
  const SimulationGrid sgrid = stokes_grid(cfg);
  const SimulationGrid rgrid = readout_grid(cfg);
  const GreenSet g = build_green(sgrid, cfg.stokes, Pass::stokes, run.jobs);
  DecompositionOptions opt;
  opt.truncate = false;
  const SqueezerDecomposition bm = bloch_messiah(g, opt);
  const int target = cfg.readout.target_mode;
  if (target > static_cast<int>(bm.modes.size()))
    throw std::invalid_argument(fmt::format("readout.target_mode {} exceeds {} modes", target,
                                            bm.modes.size()));
  Eigen::VectorXcd phi = bm.modes[static_cast<std::size_t>(target - 1)].phi_out;
  for (Eigen::Index i = 0; i < phi.size(); ++i)
    phi(i) *= std::polar(1.0, -cfg.readout.delta_k * sgrid.z(i));

  const Eigen::VectorXd xs = linspace(cfg.sweep.start, cfg.sweep.stop, cfg.sweep.count);
  std::vector<double> x(xs.begin(), xs.end()), residual(x.size());
  std::vector<int> nodes(x.size());
  parallel_chunks(static_cast<long>(x.size()), run.jobs, [&](long first, long last) {
    for (long k = first; k < last; ++k) {
      const auto i = static_cast<std::size_t>(k);
      PumpConfig p = cfg.readout.pump;
      p.g0 = x[i];
      const ReadoutResult r = readout_direct(rgrid, p, phi);
      residual[i] = r.residual;
      nodes[i] = count_nodes(r.sigma);
      json pt;
      pt["g0_prime"] = x[i];
      pt["residual"] = r.residual;
      pt["sigma_nodes"] = nodes[i];
      run.report(fmt::format("points/point_{:04d}.json", k), pt);
    }
  });

  auto f = [&](double g0) {
    PumpConfig p = cfg.readout.pump;
    p.g0 = g0;
    return readout_direct(rgrid, p, phi).residual;
  };
  const std::vector<Minimum> minima = locate_minima(x, residual, f);

  CsvTable t({"g0_prime", "residual", "sigma_nodes"});
  for (std::size_t i = 0; i < x.size(); ++i)
    t.add_row({format_number(x[i]), format_number(residual[i]), std::to_string(nodes[i])});
  run.csv("sweep.csv", t.str());

  json s;
  s["schema_version"] = kSchemaVersion;
  s["parameter"] = cfg.sweep.parameter;
  s["points"] = x.size();
  json mins = json::array();
  for (const auto& m : minima) {
    PumpConfig p = cfg.readout.pump;
    p.g0 = m.x;
    mins.push_back({{"g0_prime", m.x},
                    {"residual", m.y},
                    {"sigma_nodes", count_nodes(readout_direct(rgrid, p, phi).sigma)}});
  }
  s["minima"] = mins;
  s["total_photons"] = bm.total_photons;
  run.report("sweep.json", s);

  run.provenance["grid"] = grid_json(sgrid);
  run.provenance["readout_grid"] = grid_json(rgrid);
  run.provenance["stokes_pump"] = pump_json(cfg.stokes, cfg.grid.length);
  run.provenance["readout_pump"] = pump_json(cfg.readout.pump, cfg.grid.length);
  run.provenance["residuals"] = {{"stokes_decomposition", residuals_json(bm.residuals)}};
}

void sweep_stokes(Run& run) {
  const auto& cfg = run.cfg;
  const SimulationGrid grid = stokes_grid(cfg);
  const Eigen::VectorXd xs = linspace(cfg.sweep.start, cfg.sweep.stop, cfg.sweep.count);
  std::vector<double> x(xs.begin(), xs.end()), photons(x.size()), modes(x.size());
  parallel_chunks(static_cast<long>(x.size()), run.jobs, [&](long first, long last) {
    for (long k = first; k < last; ++k) {
      const auto i = static_cast<std::size_t>(k);
      PumpConfig p = cfg.stokes;
      p.g0 = x[i];
      const Eigen::MatrixXcd kab = stokes_source_kernel(grid, p, 1);
      const Eigen::VectorXd s = singular_values(kab);
      const double n = s.squaredNorm();
      photons[i] = n;
      modes[i] = n > 0.0 ? n * n / s.array().pow(4).sum() : std::nan("");
      json pt;
      pt["g0"] = x[i];
      pt["total_photons"] = n;
      pt["equivalent_modes"] = number_or_null(modes[i]);
      run.report(fmt::format("points/point_{:04d}.json", k), pt);
    }
  });

  CsvTable t({"g0", "total_photons", "equivalent_modes"});
  for (std::size_t i = 0; i < x.size(); ++i)
    t.add_row({format_number(x[i]), format_number(photons[i]), format_number(modes[i])});
  run.csv("sweep.csv", t.str());

  json s;
  s["schema_version"] = kSchemaVersion;
  s["parameter"] = cfg.sweep.parameter;
  s["points"] = x.size();
  run.report("sweep.json", s);

  run.provenance["grid"] = grid_json(grid);
  run.provenance["stokes_pump"] = pump_json(cfg.stokes, cfg.grid.length);
}

void cmd_sweep(Run& run) {
  if (run.cfg.sweep.parameter == "readout.g0_prime")
    sweep_readout(run);
  else
    sweep_stokes(run);
}

void cmd_calibrate(Run& run) {
  const auto& cfg = run.cfg;
  const SimulationGrid grid = stokes_grid(cfg);
  const Calibration cal =
      calibrate_coupling(grid, cfg.stokes, cfg.calibrate.target, cfg.calibrate.tolerance, 40, run.jobs);
  log_info("g0 = {:.9g} gives N_tot = {:.6g} after {} bisection steps", cal.g0, cal.photons,
           cal.bisection_steps);
  PumpConfig found = cfg.stokes;
  found.g0 = cal.g0;

  json s;
  s["schema_version"] = kSchemaVersion;
  s["target"] = cfg.calibrate.target;
  s["g0"] = cal.g0;
  s["total_photons"] = cal.photons;
  s["relative_error"] = std::abs(cal.photons / cfg.calibrate.target - 1.0);
  s["bracket_steps"] = cal.bracket_steps;
  s["bisection_steps"] = cal.bisection_steps;
  s["stokes_pump"] = pump_json(found, cfg.grid.length);
  run.report("calibration.json", s);

  run.provenance["grid"] = grid_json(grid);
  run.provenance["stokes_pump"] = pump_json(cfg.stokes, cfg.grid.length);
}

}  // namespace

int run_subcommand(const std::string& name, const RunConfig& cfg, unsigned jobs) {
  try {
    require_keys(cfg, name);
    Run run{name, cfg, resolve_jobs(jobs), fs::path(cfg.output.directory), base_provenance(name, cfg)};
    log_debug("{} with {} worker(s), output to {}", name, run.jobs, run.dir.string());
    if (name == "stokes")
      cmd_stokes(run);
    else if (name == "readout")
      cmd_readout(run);
    else if (name == "chain")
      cmd_chain(run);
    else if (name == "stats")
      cmd_stats(run);
    else if (name == "sweep")
      cmd_sweep(run);
    else
      cmd_calibrate(run);
    write_file(run.dir / "provenance.json", json_text(run.provenance));
    return exit_ok;
  } catch (const ParseError& e) {
    log_error("{}", e.what());
    return exit_usage;
  } catch (const std::invalid_argument& e) {
    log_error("{}", e.what());
    return exit_usage;
  } catch (const NumericalFailure& e) {
    log_error("numerical failure: {}", e.what());
    return exit_numerical;
  } catch (const DecompositionInconsistency& e) {
    log_error("decomposition failed (worst residual {:.3e}): {}", e.worst_residual(), e.what());
    return exit_numerical;
  } catch (const std::exception& e) {
    log_error("{}", e.what());
    return exit_numerical;
  }
}

int run_from_file(const std::string& name, const fs::path& config_path, unsigned jobs,
                  const std::string& out_dir) {
  RunConfig cfg;
  try {
    cfg = load_config(config_path);
  } catch (const ParseError& e) {
    log_error("{}: {}", config_path.string(), e.what());
    return exit_usage;
  }
  if (!out_dir.empty()) cfg.output.directory = out_dir;
  return run_subcommand(name, cfg, jobs);
}

}  // namespace raman
