#include "hamflow/scenario.hpp"

#include <algorithm>
#include <cmath>

namespace hamflow {

double HamiltonianGenerator::value(double t, double x) const {
  double v = x - drift * t;
  if (amp != 0.0) v += amp / freq * std::sin(freq * (x - t));
  return v;
}

double HamiltonianGenerator::ddx(double t, double x) const {
  if (amp == 0.0) return 1.0;
  return 1.0 + amp * std::cos(freq * (x - t));
}

double HamiltonianGenerator::ddt(double t, double x) const {
  double v = -drift;
  if (amp != 0.0) v -= amp * std::cos(freq * (x - t));
  return v;
}

double HamiltonianGenerator::speed_sup() const {
  // velocity (drift + amp*c)/(1 + amp*c) is monotone in c = cos(phase),
  // so the extremes sit at c = -1 and c = 1
  const double v1 = (drift - amp) / (1.0 - amp);
  const double v2 = (drift + amp) / (1.0 + amp);
  return std::max(std::abs(v1), std::abs(v2));
}

void HamiltonianGenerator::check_admissible() const {
  require(std::isfinite(drift) && std::isfinite(amp) && std::isfinite(freq),
          "generator: parameters must be finite");
  require(amp >= 0.0 && amp < 1.0,
          "generator: amplitude must lie in [0,1) so the density stays "
          "positive, got ",
          amp);
  require(freq > 0.0, "generator: wavenumber must be positive, got ", freq);
}

NearIncompressiblePair from_hamiltonian(const HamiltonianGenerator& gen,
                                        const SpaceTimeGrid& grid) {
  gen.check_admissible();
  NearIncompressiblePair pair;
  pair.rho = SampledField::from_function(
      grid, [&](double t, double x) { return gen.density(t, x); });
  pair.b = SampledField::from_function(
      grid, [&](double t, double x) { return gen.velocity(t, x); });
  pair.C1 = gen.density_lo();
  pair.C2 = gen.density_hi();
  pair.b_max = gen.speed_sup();
  pair.generator = gen;
  pair.continuity_residual = continuity_residual_scan(pair.rho, pair.b);
  return pair;
}

HamiltonianGenerator scenario_generator(const ScenarioConfig& config) {
  HamiltonianGenerator gen;
  if (config.kind == "zero_field") {
    // identity Hamiltonian: rho = 1, b = 0
  } else if (config.kind == "constant_field") {
    gen.drift = config.c;
  } else if (config.kind == "hamiltonian_first") {
    gen.amp = config.amplitude;
    gen.freq = config.wavenumber;
  } else if (config.kind == "oscillatory_n") {
    require(config.n >= 0, "oscillatory_n: n must be >= 0, got ", config.n);
    if (config.n > 0) {
      gen.amp = 0.5;
      gen.freq = config.n;
      const double limit = M_PI / (8.0 * config.n);
      require(config.grid.dx() <= limit && config.grid.dt() <= limit,
              "oscillatory_n: oscillation under-resolved, need dx and dt <= ",
              limit, " for n = ", config.n);
    }
  } else {
    fail("unknown scenario kind '", config.kind, "'");
  }
  gen.check_admissible();
  return gen;
}

NearIncompressiblePair build_scenario(const ScenarioConfig& config) {
  return from_hamiltonian(scenario_generator(config), config.grid);
}

double continuity_residual_scan(const SampledField& rho,
                                const SampledField& b) {
  const SpaceTimeGrid& g = rho.grid();
  require(g.same_as(b.grid()), "pair fields must share one grid");
  const double inv2dt = 1.0 / (2.0 * g.dt());
  const double inv2dx = 1.0 / (2.0 * g.dx());
  double worst = 0.0;
  for (int i = 1; i < g.nt; ++i) {
    for (int j = 1; j < g.nx; ++j) {
      const double drho = (rho.at(i + 1, j) - rho.at(i - 1, j)) * inv2dt;
      const double dflux = (rho.at(i, j + 1) * b.at(i, j + 1) -
                            rho.at(i, j - 1) * b.at(i, j - 1)) *
                           inv2dx;
      worst = std::max(worst, std::abs(drho + dflux));
    }
  }
  return worst;
}

ValidationReport validate_pair(const NearIncompressiblePair& pair,
                               double tol) {
  require(pair.rho.grid().same_as(pair.b.grid()),
          "pair fields must share one grid");
  require(tol >= 0.0, "validate_pair: tolerance must be nonnegative");
  ValidationReport rep;
  rep.rho_min = pair.rho.values()[0];
  rep.rho_max = pair.rho.values()[0];
  for (double v : pair.rho.values()) {
    rep.rho_min = std::min(rep.rho_min, v);
    rep.rho_max = std::max(rep.rho_max, v);
  }
  rep.b_sup = pair.b.max_abs();
  rep.continuity_residual = continuity_residual_scan(pair.rho, pair.b);

  const double guard = 1e-12;  // rounding guard on the declared bounds
  rep.bounds_ok = pair.C1 > 0.0 && rep.rho_min >= pair.C1 - guard &&
                  rep.rho_max <= pair.C2 + guard &&
                  rep.b_sup <= pair.b_max + guard;
  rep.pass = rep.bounds_ok && rep.continuity_residual <= tol;
  return rep;
}

ResolvedTolerances resolve_tolerances(const Tolerances& t,
                                      const SpaceTimeGrid& grid,
                                      const HamiltonianGenerator& gen) {
  const double h2 = grid.dx() * grid.dx() + grid.dt() * grid.dt();
  const double curv = gen.osc_curvature();       // amp * freq^2
  const double d3 = gen.third_deriv_bound();     // amp * freq^3
  const double c1 = gen.density_lo();
  const double kx = gen.freq * grid.dx();
  const double kt = gen.freq * grid.dt();
  const double slope_scale = gen.amp * (kx * kx + kt * kt);

  ResolvedTolerances r{};
  r.continuity = t.continuity.value_or(1e-2);
  r.slope = t.slope.value_or(std::max(1e-9, curv * h2));
  r.cone = t.cone.value_or(std::max(1e-9, 4.0 * gen.amp * gen.freq * h2));
  r.inversion = t.inversion.value_or(1e-10);
  r.ode = t.ode.value_or(std::max(1e-9, 8.0 * d3 / (c1 * c1 * c1) * h2));
  r.pushforward = t.pushforward.value_or(std::max(1e-7, 8.0 * h2));
  r.weak = t.weak.value_or(std::max(1e-9, 12.0 * h2));
  r.observable = t.observable.value_or(std::max(1e-9, 12.0 * h2));
  r.mass = t.mass.value_or(std::max(1e-9, 12.0 * h2));
  r.lipschitz =
      t.lipschitz.value_or(std::max(1e-6, 2.0 * slope_scale / (c1 * c1)));
  r.quotient = t.quotient.value_or(
      std::max(1e-6, 4.0 * slope_scale * gen.density_hi() / (c1 * c1)));
  r.modulus = t.modulus.value_or(1e-3);
  return r;
}

}  // namespace hamflow
