#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "hamflow/grid.hpp"
#include "hamflow/profiles.hpp"

namespace hamflow {

// Closed-form generator H(t,x) = x - drift*t + (amp/freq) * sin(freq*(x-t)).
// Its x-derivative is the density 1 + amp*cos(freq*(x-t)), strictly positive
// for amp < 1, and -dt/dx is the matching velocity; sampling both at the
// nodes yields field pairs that satisfy the continuity equation exactly.
struct HamiltonianGenerator {
  double drift = 0.0;  // constant advection component
  double amp = 0.0;    // oscillation amplitude, in [0,1)
  double freq = 1.0;   // oscillation wavenumber, > 0

  double value(double t, double x) const;
  double ddx(double t, double x) const;
  double ddt(double t, double x) const;

  double density(double t, double x) const { return ddx(t, x); }
  double velocity(double t, double x) const { return -ddt(t, x) / ddx(t, x); }

  double density_lo() const { return 1.0 - amp; }  // inf of ddx
  double density_hi() const { return 1.0 + amp; }  // sup of ddx
  double speed_sup() const;                        // sup of |velocity|

  // curvature scales used by grid-aware default tolerances
  double osc_curvature() const { return amp * freq * freq; }
  double third_deriv_bound() const { return amp * freq * freq * freq; }

  void check_admissible() const;
};

// Sampled velocity/density pair with the uniform bounds it was built under.
struct NearIncompressiblePair {
  SampledField b;
  SampledField rho;
  double C1 = 1.0;
  double C2 = 1.0;
  double b_max = 0.0;
  double continuity_residual = 0.0;
  std::optional<HamiltonianGenerator> generator;

  const SpaceTimeGrid& grid() const { return rho.grid(); }
};

struct ValidationReport {
  double rho_min = 0.0;
  double rho_max = 0.0;
  double b_sup = 0.0;
  double continuity_residual = 0.0;
  bool bounds_ok = false;
  bool pass = false;
};

// Optional user overrides; unset entries resolve to grid- and
// scenario-aware defaults.
struct Tolerances {
  std::optional<double> continuity, slope, cone, inversion, ode, pushforward,
      weak, observable, mass, lipschitz, quotient, modulus;
};

struct ResolvedTolerances {
  double continuity, slope, cone, inversion, ode, pushforward, weak,
      observable, mass, lipschitz, quotient, modulus;
};

ResolvedTolerances resolve_tolerances(const Tolerances& t,
                                      const SpaceTimeGrid& grid,
                                      const HamiltonianGenerator& gen);

struct ScenarioConfig {
  SpaceTimeGrid grid;
  std::string kind;  // zero_field | constant_field | hamiltonian_first |
                     // oscillatory_n
  double c = 1.0;           // constant_field speed
  double amplitude = 0.5;   // hamiltonian_first
  double wavenumber = 1.0;  // hamiltonian_first
  int n = 1;                // oscillatory_n member index
  int n_max = 0;            // compactness pipeline: members 1,2,4,...,n_max
  std::uint64_t seed = 12345;
  InitialDatum datum = InitialDatum::gaussian(0.0, 0.4, 1.0);
  Tolerances tol;
};

HamiltonianGenerator scenario_generator(const ScenarioConfig& config);

// Sample density and velocity of a generator at the grid nodes.
NearIncompressiblePair from_hamiltonian(const HamiltonianGenerator& gen,
                                        const SpaceTimeGrid& grid);

NearIncompressiblePair build_scenario(const ScenarioConfig& config);

// max over interior nodes of |D_t rho + D_x (rho b)| (centered quotients)
double continuity_residual_scan(const SampledField& rho,
                                const SampledField& b);

ValidationReport validate_pair(const NearIncompressiblePair& pair, double tol);

}  // namespace hamflow
