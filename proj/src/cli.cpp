#include "hamflow/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hamflow/config.hpp"
#include "hamflow/oracles.hpp"
#include "hamflow/report.hpp"

namespace hamflow {

namespace {

using ordered_json = nlohmann::ordered_json;

void write_manifest(const std::string& path, const CliOptions& opt,
                    const ScenarioConfig& cfg,
                    const ResolvedTolerances& tol) {
  ordered_json j;
  j["pipeline"] = opt.pipeline;
  j["config"] = opt.config_path;
  j["out"] = opt.out_dir;
  j["seed"] = cfg.seed;
  j["grid"] = {{"T", cfg.grid.T},   {"x_min", cfg.grid.x_min},
               {"x_max", cfg.grid.x_max}, {"nt", cfg.grid.nt},
               {"nx", cfg.grid.nx}};
  ordered_json sc;
  sc["kind"] = cfg.kind;
  if (cfg.kind == "constant_field") sc["c"] = cfg.c;
  if (cfg.kind == "hamiltonian_first") {
    sc["amplitude"] = cfg.amplitude;
    sc["wavenumber"] = cfg.wavenumber;
  }
  if (cfg.kind == "oscillatory_n") {
    sc["n"] = cfg.n;
    sc["n_max"] = cfg.n_max;
  }
  sc["datum"] = cfg.datum.describe();
  j["scenario"] = sc;
  j["tolerances"] = {
      {"continuity", tol.continuity}, {"slope", tol.slope},
      {"cone", tol.cone},             {"inversion", tol.inversion},
      {"ode", tol.ode},               {"pushforward", tol.pushforward},
      {"weak", tol.weak},             {"observable", tol.observable},
      {"mass", tol.mass},             {"lipschitz", tol.lipschitz},
      {"quotient", tol.quotient},     {"modulus", tol.modulus}};

  std::FILE* f = std::fopen(path.c_str(), "wb");
  require(f != nullptr, "cannot open '", path, "' for writing");
  const std::string text = j.dump(2);
  std::fwrite(text.data(), 1, text.size(), f);
  std::fputc('\n', f);
  std::fclose(f);
}

struct SuiteLog {
  std::vector<SummaryRow> rows;
  bool all_pass = true;

  void add(const std::string& suite, const std::string& name, double value,
           bool pass) {
    rows.push_back({suite, name, value, pass});
    if (!pass) {
      std::fprintf(stderr, "FAILED %s/%s = %s\n", suite.c_str(), name.c_str(),
                   g17(value).c_str());
      all_pass = false;
    }
  }

  void info(const std::string& suite, const std::string& name, double value) {
    rows.push_back({suite, name, value, true});
  }
};

double trapz_weight(int idx, int last) {
  return (idx == 0 || idx == last) ? 0.5 : 1.0;
}

double slice_mass(const TransportSolution& sol, int i) {
  const SpaceTimeGrid& pg = sol.u.grid();
  double m = 0.0;
  for (int jj = 0; jj <= pg.nx; ++jj)
    m += trapz_weight(jj, pg.nx) * sol.u.at(i, jj);
  return m * pg.dx();
}

void run_validation(SuiteLog& log, const NearIncompressiblePair& pair,
                    const ResolvedTolerances& tol) {
  const ValidationReport rep = validate_pair(pair, tol.continuity);
  log.info("validation", "rho_min", rep.rho_min);
  log.info("validation", "rho_max", rep.rho_max);
  log.info("validation", "b_sup", rep.b_sup);
  log.add("validation", "bounds_ok", rep.bounds_ok ? 1.0 : 0.0,
          rep.bounds_ok);
  log.add("validation", "continuity_residual", rep.continuity_residual,
          rep.continuity_residual <= tol.continuity);
}

void run_hamiltonian_rows(SuiteLog& log, const HamiltonianField& H,
                          const ResolvedTolerances& tol) {
  log.add("hamiltonian", "x_slope_min", H.diag.x_slope_min,
          H.diag.x_slope_min >= H.C1 - tol.slope);
  log.add("hamiltonian", "x_slope_max", H.diag.x_slope_max,
          H.diag.x_slope_max <= H.C2 + tol.slope);
  log.add("hamiltonian", "t_slope_abs_max", H.diag.t_slope_abs_max,
          H.diag.t_slope_abs_max <= H.C2 * H.b_max + tol.slope);
  log.info("hamiltonian", "path_defect", H.diag.path_defect);
}

void run_flow_rows(SuiteLog& log, const FlowMap& flow,
                   const ResolvedTolerances& tol) {
  log.add("flow", "relation_residual", flow.relation_residual,
          flow.relation_residual <= tol.inversion);
  log.add("flow", "identity_error", flow.identity_error,
          flow.identity_error <= tol.inversion);
  log.add("flow", "h_lipschitz", flow.h_lipschitz,
          flow.h_lipschitz <= 1.0 / flow.C1 + tol.lipschitz);
  log.add("flow", "t_lipschitz", flow.t_lipschitz,
          flow.t_lipschitz <= flow.b_max + tol.lipschitz);
  log.add("flow", "quotient_min", flow.q_min,
          flow.q_min >= flow.C1 / flow.C2 - tol.quotient);
  log.add("flow", "quotient_max", flow.q_max,
          flow.q_max <= flow.C2 / flow.C1 + tol.quotient);
  log.add("flow", "compression_L", flow.L,
          flow.L <= flow.C2 / flow.C1 + tol.quotient);
}

std::vector<TestFunction> default_test_suite(const SpaceTimeGrid& pg,
                                             double T) {
  const double W = pg.x_max - pg.x_min;
  std::vector<TestFunction> tests;
  const double fractions[5] = {0.2, 0.35, 0.5, 0.65, 0.8};
  for (int m = 0; m < 5; ++m) {
    TestFunction phi;
    phi.id = "bump_" + std::to_string(m + 1);
    phi.space = Bump{pg.x_min + fractions[m] * W, W / 6.0, 1.0};
    phi.time_factor = TestFunction::TimeFactor::smooth_cutoff;
    phi.T = T;
    tests.push_back(phi);
  }
  return tests;
}

// level band realized inside the central padded region at every time up to
// tau: monotonicity then pins the band between the two bracketing columns
// for the whole observation window
std::optional<Bump> default_level_profile(const HamiltonianField& H,
                                          const FlowMap& flow, double tau) {
  const SpaceTimeGrid& g = H.grid();
  const int j_lo = flow.pad_cells + static_cast<int>(0.3 * flow.X.grid().nx);
  const int j_hi = flow.pad_cells + static_cast<int>(0.7 * flow.X.grid().nx);
  const int i_tau = std::clamp(static_cast<int>(std::lround(tau / g.dt())), 0,
                               g.nt);
  double lo = -1e300, hi = 1e300;
  for (int i = 0; i <= i_tau; ++i) {
    lo = std::max(lo, H.H.at(i, j_lo));
    hi = std::min(hi, H.H.at(i, std::max(j_hi, j_lo + 1)));
  }
  if (!(hi > lo)) return std::nullopt;
  return Bump{0.5 * (lo + hi), 0.5 * (hi - lo), 1.0};
}

int pipeline_solve(const std::string& out, const ScenarioConfig& cfg,
                   const NearIncompressiblePair& pair,
                   const ResolvedTolerances& tol) {
  SuiteLog log;
  run_validation(log, pair, tol);
  if (log.all_pass) {
    const HamiltonianField H = build_hamiltonian(pair, tol.slope);
    run_hamiltonian_rows(log, H, tol);
    const FlowMap flow = build_flow(H);
    run_flow_rows(log, flow, tol);
    const TransportSolution sol = solve_cauchy(pair, flow, cfg.datum);

    double datum_err = 0.0;
    for (int jj = 0; jj <= sol.u.grid().nx; ++jj) {
      const double x = pair.grid().pos(sol.parent_col(jj));
      datum_err = std::max(datum_err,
                           std::abs(sol.u.at(0, jj) - cfg.datum(x)));
    }
    log.add("transport", "initial_datum_error", datum_err,
            datum_err <= tol.inversion);
    write_solution_csv(out + "/solution.csv", sol, pair.grid());
  }
  write_summary_csv(out + "/summary.csv", log.rows);
  return log.all_pass ? 0 : 1;
}

int pipeline_flow(const std::string& out, const ScenarioConfig& cfg,
                  const NearIncompressiblePair& pair,
                  const ResolvedTolerances& tol) {
  SuiteLog log;
  run_validation(log, pair, tol);
  if (log.all_pass) {
    const HamiltonianField H = build_hamiltonian(pair, tol.slope);
    run_hamiltonian_rows(log, H, tol);
    const ConeReport cone = cone_bound_check(H, tol.cone, 10000, cfg.seed);
    log.add("hamiltonian", "cone_worst_margin", cone.worst_margin, cone.pass);

    const FlowMap flow = build_flow(H);
    run_flow_rows(log, flow, tol);
    const OdeResidualReport ode = ode_residual(flow, pair);
    log.add("flow", "ode_residual_centered", ode.centered_max,
            ode.centered_max <= tol.ode);
    log.add("flow", "ode_residual_integral", ode.integral_max,
            ode.integral_max <= tol.ode * std::max(1.0, pair.grid().T));
    write_flow_csvs(out, flow);
  }
  write_summary_csv(out + "/summary.csv", log.rows);
  return log.all_pass ? 0 : 1;
}

int pipeline_verify(const std::string& out, const ScenarioConfig& cfg,
                    const NearIncompressiblePair& pair,
                    const ResolvedTolerances& tol) {
  SuiteLog log;
  run_validation(log, pair, tol);
  if (!log.all_pass) {
    write_summary_csv(out + "/summary.csv", log.rows);
    return 1;
  }

  const SpaceTimeGrid& g = pair.grid();
  const HamiltonianField H = build_hamiltonian(pair, tol.slope);
  run_hamiltonian_rows(log, H, tol);
  const ConeReport cone = cone_bound_check(H, tol.cone, 10000, cfg.seed);
  log.add("hamiltonian", "cone_worst_margin", cone.worst_margin, cone.pass);

  const FlowMap flow = build_flow(H);
  run_flow_rows(log, flow, tol);
  const OdeResidualReport ode = ode_residual(flow, pair);
  log.add("flow", "ode_residual_centered", ode.centered_max,
          ode.centered_max <= tol.ode);
  log.add("flow", "ode_residual_integral", ode.integral_max,
          ode.integral_max <= tol.ode * std::max(1.0, g.T));

  // the flow route integrates over start points, so the probe support must
  // keep a further |b|*T inside the padded window
  const SpaceTimeGrid& pg = flow.X.grid();
  const double W = pg.x_max - pg.x_min;
  const double inner_lo = pg.x_min + pair.b_max * g.T;
  const double inner_hi = pg.x_max - pair.b_max * g.T;
  if (inner_hi - inner_lo > 4.0 * g.dx()) {
    const std::vector<Probe> probes = {
        {Probe::Kind::gaussian, 0.5 * (inner_lo + inner_hi),
         0.09 * (inner_hi - inner_lo), 1.0, "gaussian"}};
    const std::vector<double> times = {0.0, 0.25 * g.T, 0.5 * g.T,
                                       0.75 * g.T, g.T};
    const PushforwardReport push =
        pushforward_check(flow, pair, probes, times);
    log.add("flow", "pushforward_level_defect", push.level_defect_max,
            push.level_defect_max <= tol.pushforward);
    log.add("flow", "pushforward_flow_defect", push.flow_defect_max,
            push.flow_defect_max <= tol.pushforward);
    write_pushforward_csv(out + "/pushforward.csv", push);
  } else {
    log.info("flow", "pushforward_skipped_window_too_small", 1.0);
  }

  const TransportSolution sol = solve_cauchy(pair, flow, cfg.datum);
  double datum_err = 0.0;
  for (int jj = 0; jj <= pg.nx; ++jj) {
    const double x = g.pos(sol.parent_col(jj));
    datum_err =
        std::max(datum_err, std::abs(sol.u.at(0, jj) - cfg.datum(x)));
  }
  log.add("transport", "initial_datum_error", datum_err,
          datum_err <= tol.inversion);

  const std::vector<TestFunction> tests = default_test_suite(pg, g.T);
  const std::vector<double> residuals = weak_residual(sol, pair, tests);
  std::vector<std::pair<std::string, double>> rrows;
  double weak_max = 0.0;
  for (std::size_t m = 0; m < tests.size(); ++m) {
    rrows.emplace_back(tests[m].id, residuals[m]);
    weak_max = std::max(weak_max, residuals[m]);
  }
  write_residual_csv(out + "/residuals.csv", rrows);
  log.add("transport", "weak_residual_max", weak_max, weak_max <= tol.weak);

  const std::optional<Bump> level =
      default_level_profile(H, flow, 0.7 * g.T);
  if (level) {
    const std::vector<double> obs_times = {0.25 * g.T, 0.5 * g.T, 0.75 * g.T,
                                           g.T};
    const ObservableReport obs =
        conserved_observable(sol, H, *level, obs_times);
    write_observable_csv(out + "/observable.csv", obs);
    log.add("transport", "observable_drift", obs.max_drift,
            obs.max_drift <= tol.observable);
  } else {
    log.info("transport", "observable_skipped_no_shared_band", 1.0);
  }

  double mass_drift = 0.0;
  const double mass0 = slice_mass(sol, 0);
  for (int i = 1; i <= g.nt; ++i)
    mass_drift = std::max(mass_drift, std::abs(slice_mass(sol, i) - mass0));
  log.add("transport", "mass_drift", mass_drift, mass_drift <= tol.mass);

  // smoothing-radius decay study when the grid resolves the kernels
  std::vector<double> eps_list;
  for (double eps : {g.T / 5.0, g.T / 10.0, g.T / 20.0}) {
    const bool resolved = eps >= 3.0 * std::max(g.dt(), g.dx());
    const bool fits = eps <= std::min(g.T / 4.0, (g.x_max - g.x_min) / 8.0);
    if (resolved && fits) eps_list.push_back(eps);
  }
  log.info("uniqueness", "eps_count", static_cast<double>(eps_list.size()));
  if (eps_list.size() >= 2 && level) {
    const std::vector<DecayRow> decay =
        uniqueness_probe(pair, H, flow, eps_list, *level, 0.7 * g.T, &sol);
    write_decay_csv(out + "/decay.csv", decay);
    bool monotone = true;
    for (std::size_t m = 0; m + 1 < decay.size(); ++m)
      monotone = monotone &&
                 decay[m + 1].D <= 1.1 * decay[m].D + 1e-12;
    log.add("uniqueness", "decay_monotone", monotone ? 1.0 : 0.0, monotone);
    log.info("uniqueness", "D_finest", decay.back().D);
  }

  const CrossValidationReport cross =
      cross_validate(pair, flow, cfg.datum, true, pair.generator.has_value());
  log.info("cross_validation", "fv_l1_max", cross.fv_l1_max);
  if (pair.generator.has_value()) {
    const double h2 = g.dx() * g.dx() + g.dt() * g.dt();
    log.add("cross_validation", "char_l1_max", cross.char_l1_max,
            cross.char_l1_max <= std::max(1e-6, 50.0 * h2 * W));
  }

  write_summary_csv(out + "/summary.csv", log.rows);
  return log.all_pass ? 0 : 1;
}

int pipeline_compactness(const std::string& out, const ScenarioConfig& cfg,
                         const ResolvedTolerances& tol) {
  SuiteLog log;
  std::vector<int> n_list;
  for (int n = 1; n <= cfg.n_max; n *= 2) n_list.push_back(n);

  const FlowFamily family = oscillatory_family(n_list, cfg.grid);
  const ModulusRecord modulus =
      equicontinuity_modulus(family, tol.modulus, 10000, cfg.seed);
  log.add("compactness", "modulus_ratio", modulus.worst_ratio, modulus.pass);

  const double guard = 1e-12;
  for (std::size_t m = 0; m < family.members.size(); ++m) {
    const FamilyMember& mem = family.members[m];
    const bool bounds = mem.C1_meas >= family.C1 - guard &&
                        mem.C2_meas <= family.C2 + guard &&
                        mem.bmax_meas <= family.b_max + guard;
    log.add("compactness", "bounds_n" + std::to_string(mem.n),
            bounds ? 1.0 : 0.0, bounds);
    if (mem.n >= 1)
      log.add("compactness", "n_sup_dist_n" + std::to_string(mem.n),
              mem.n * mem.sup_dist_to_id, mem.n * mem.sup_dist_to_id <= 2.1);
  }

  const ChainResult chain = extract_convergent(family, 0.1);
  log.info("compactness", "chain_length",
           static_cast<double>(chain.chain.size()));

  write_family_csv(out + "/family_report.csv", family, modulus);
  write_summary_csv(out + "/summary.csv", log.rows);
  return log.all_pass ? 0 : 1;
}

}  // namespace

int run_pipeline(const CliOptions& opt) {
  ScenarioConfig cfg;
  HamiltonianGenerator gen;
  ResolvedTolerances tol{};
  try {
    require(opt.pipeline == "solve" || opt.pipeline == "flow" ||
                opt.pipeline == "verify" || opt.pipeline == "compactness",
            "unknown pipeline '", opt.pipeline,
            "', expected solve | flow | verify | compactness");
    cfg = parse_scenario_config(opt.config_path);
    if (opt.nt) cfg.grid = SpaceTimeGrid(cfg.grid.T, cfg.grid.x_min,
                                         cfg.grid.x_max, *opt.nt, cfg.grid.nx);
    if (opt.nx) cfg.grid = SpaceTimeGrid(cfg.grid.T, cfg.grid.x_min,
                                         cfg.grid.x_max, cfg.grid.nt, *opt.nx);
    if (opt.seed) cfg.seed = *opt.seed;
    if (opt.pipeline == "compactness") {
      require(cfg.kind == "oscillatory_n" && cfg.n_max >= 1,
              "compactness pipeline needs kind = oscillatory_n and n_max >= "
              "1");
    }
    gen = scenario_generator(cfg);
    tol = resolve_tolerances(cfg.tol, cfg.grid, gen);
    std::filesystem::create_directories(opt.out_dir);
    write_manifest(opt.out_dir + "/manifest.json", opt, cfg, tol);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }

  try {
    if (opt.pipeline == "compactness")
      return pipeline_compactness(opt.out_dir, cfg, tol);
    const NearIncompressiblePair pair = from_hamiltonian(gen, cfg.grid);
    if (opt.pipeline == "solve") return pipeline_solve(opt.out_dir, cfg, pair, tol);
    if (opt.pipeline == "flow") return pipeline_flow(opt.out_dir, cfg, pair, tol);
    return pipeline_verify(opt.out_dir, cfg, pair, tol);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "pipeline failed: %s\n", e.what());
    return 1;
  }
}

int cli_main(int argc, const char* const* argv) {
  CLI::App app{
      "1D continuity-equation toolkit: Hamiltonian level-set flows, "
      "pushforward transport solver, and flow-compactness experiments"};
  CliOptions opt;
  app.add_option("--pipeline", opt.pipeline,
                 "pipeline: solve | flow | verify | compactness")
      ->required();
  app.add_option("--config", opt.config_path, "scenario config file")
      ->required();
  app.add_option("--out", opt.out_dir, "output directory")->required();
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "seed override");
  int nx = 0, nt = 0;
  auto* nx_opt = app.add_option("--nx", nx, "space cell-count override");
  auto* nt_opt = app.add_option("--nt", nt, "time cell-count override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }
  if (*seed_opt) opt.seed = seed;
  if (*nx_opt) opt.nx = nx;
  if (*nt_opt) opt.nt = nt;
  return run_pipeline(opt);
}

}  // namespace hamflow
