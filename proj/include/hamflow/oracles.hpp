#pragma once

#include "hamflow/transport.hpp"

namespace hamflow {

struct FvSolution {
  TransportSolution sol;  // sampled on the full scenario grid
  long total_steps = 0;
  double mass_drift = 0.0;  // max |mass(t_i) - mass(0)| over slices
};

// First-order conservative upwind scheme on node-centered cells with
// outflow boundaries; internal sub-stepping keeps the CFL number <= cfl and
// lands exactly on the scenario time slices.
FvSolution fv_upwind_solve(const NearIncompressiblePair& pair,
                           const InitialDatum& datum, double cfl = 0.9);

struct Trajectory {
  std::vector<double> t;
  std::vector<double> x;
  double endpoint() const { return x.back(); }
};

// Classical fourth-order Runge-Kutta integration of dx/dt = b(t,x) with the
// generator's closed-form velocity, from (0, x0) to t_end.
Trajectory integrate_characteristics(const HamiltonianGenerator& gen,
                                     double x0, double t_end, int n_steps);

// backward integration from (t_from, x) to t = 0; returns the foot point
double rk4_backtrace(const HamiltonianGenerator& gen, double t_from, double x,
                     int n_steps);

}  // namespace hamflow
