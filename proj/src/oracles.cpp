#include "hamflow/oracles.hpp"

#include <algorithm>
#include <cmath>

namespace hamflow {

FvSolution fv_upwind_solve(const NearIncompressiblePair& pair,
                           const InitialDatum& datum, double cfl) {
  const SpaceTimeGrid& g = pair.grid();
  require(cfl > 0.0 && cfl <= 0.9, "fv_upwind_solve: CFL must be in (0, 0.9]");
  const double dt = g.dt();
  const double dx = g.dx();
  const int nc = g.n_pos();  // node-centered cells

  std::vector<double> u(nc);
  for (int j = 0; j < nc; ++j) u[j] = datum(g.pos(j));

  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(g.n_times()) * nc);
  values.insert(values.end(), u.begin(), u.end());

  auto mass = [&](const std::vector<double>& cells) {
    double m = 0.0;
    for (double v : cells) m += v;
    return m * dx;
  };
  const double mass0 = mass(u);

  FvSolution out;
  std::vector<double> flux(nc + 1);
  for (int i = 0; i < g.nt; ++i) {
    const int substeps =
        pair.b_max > 0.0
            ? std::max(1, static_cast<int>(
                              std::ceil(dt * pair.b_max / (cfl * dx))))
            : 1;
    const double dtf = dt / substeps;
    for (int s = 0; s < substeps; ++s) {
      const double t_mid = g.time(i) + (s + 0.5) * dtf;
      for (int k = 0; k <= nc; ++k) {
        // face left of cell k; ghost cells hold zero (outflow boundaries)
        const double xf = g.x_min + (k - 0.5) * dx;
        const double bf = pair.b(t_mid, xf);
        const double ul = k >= 1 ? u[k - 1] : 0.0;
        const double ur = k < nc ? u[k] : 0.0;
        flux[k] = std::max(bf, 0.0) * ul + std::min(bf, 0.0) * ur;
      }
      const double lam = dtf / dx;
      for (int j = 0; j < nc; ++j) u[j] -= lam * (flux[j + 1] - flux[j]);
      ++out.total_steps;
    }
    values.insert(values.end(), u.begin(), u.end());
    out.mass_drift = std::max(out.mass_drift, std::abs(mass(u) - mass0));
  }

  out.sol.u = SampledField(g, std::move(values));
  out.sol.datum_desc = datum.describe();
  out.sol.source = "fv_upwind";
  out.sol.pad_cells = 0;
  out.sol.mass_lo = g.x_min;
  out.sol.mass_hi = g.x_max;
  return out;
}

namespace {

double rk4_sweep(const HamiltonianGenerator& gen, double t0, double x0,
                 double h, int n_steps, Trajectory* traj) {
  double t = t0;
  double x = x0;
  if (traj) {
    traj->t.push_back(t);
    traj->x.push_back(x);
  }
  for (int s = 0; s < n_steps; ++s) {
    const double k1 = gen.velocity(t, x);
    const double k2 = gen.velocity(t + 0.5 * h, x + 0.5 * h * k1);
    const double k3 = gen.velocity(t + 0.5 * h, x + 0.5 * h * k2);
    const double k4 = gen.velocity(t + h, x + h * k3);
    x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t = t0 + (s + 1) * h;
    if (traj) {
      traj->t.push_back(t);
      traj->x.push_back(x);
    }
  }
  return x;
}

}  // namespace

Trajectory integrate_characteristics(const HamiltonianGenerator& gen,
                                     double x0, double t_end, int n_steps) {
  gen.check_admissible();
  require(n_steps >= 1, "integrate_characteristics: need n_steps >= 1");
  require(t_end > 0.0, "integrate_characteristics: need t_end > 0");
  Trajectory traj;
  traj.t.reserve(n_steps + 1);
  traj.x.reserve(n_steps + 1);
  rk4_sweep(gen, 0.0, x0, t_end / n_steps, n_steps, &traj);
  return traj;
}

double rk4_backtrace(const HamiltonianGenerator& gen, double t_from, double x,
                     int n_steps) {
  if (t_from == 0.0) return x;
  return rk4_sweep(gen, t_from, x, -t_from / n_steps, n_steps, nullptr);
}

}  // namespace hamflow
