#include "hamflow/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace hamflow {

HamiltonianField build_hamiltonian(const NearIncompressiblePair& pair,
                                   double slope_tol) {
  const SpaceTimeGrid& g = pair.grid();
  require(slope_tol >= 0.0, "build_hamiltonian: tolerance must be >= 0");
  const double dt = g.dt();
  const double dx = g.dx();

  std::vector<double> values(static_cast<std::size_t>(g.n_times()) *
                             g.n_pos());
  auto at = [&](int i, int j) -> double& {
    return values[static_cast<std::size_t>(i) * g.n_pos() + j];
  };

  // t = 0 slice: cumulative trapezoid of rho(0,.) from x_min
  at(0, 0) = 0.0;
  for (int j = 0; j < g.nx; ++j)
    at(0, j + 1) =
        at(0, j) + 0.5 * dx * (pair.rho.at(0, j) + pair.rho.at(0, j + 1));

  // columns: cumulative trapezoid of -(rho b) in time
  for (int j = 0; j <= g.nx; ++j) {
    double flux_prev = pair.rho.at(0, j) * pair.b.at(0, j);
    for (int i = 0; i < g.nt; ++i) {
      const double flux_next = pair.rho.at(i + 1, j) * pair.b.at(i + 1, j);
      at(i + 1, j) = at(i, j) - 0.5 * dt * (flux_prev + flux_next);
      flux_prev = flux_next;
    }
  }

  HamiltonianField out;
  out.C1 = pair.C1;
  out.C2 = pair.C2;
  out.b_max = pair.b_max;

  HamiltonianDiagnostics d;
  d.x_slope_min = std::numeric_limits<double>::infinity();
  d.x_slope_max = -std::numeric_limits<double>::infinity();
  int bad_i = -1, bad_j = -1;
  for (int i = 0; i <= g.nt; ++i) {
    for (int j = 0; j < g.nx; ++j) {
      const double s = (at(i, j + 1) - at(i, j)) / dx;
      if (s < d.x_slope_min) d.x_slope_min = s;
      if (s > d.x_slope_max) d.x_slope_max = s;
      if (s < pair.C1 - slope_tol || s > pair.C2 + slope_tol) {
        bad_i = i;
        bad_j = j;
      }
    }
  }
  if (bad_i >= 0)
    fail("build_hamiltonian: x-slope outside [C1, C2] at node (i=", bad_i,
         ", j=", bad_j, "); slope range [", d.x_slope_min, ", ", d.x_slope_max,
         "] vs [", pair.C1, ", ", pair.C2, "] with tolerance ", slope_tol,
         " -- the pair does not satisfy the continuity equation well enough");

  const double t_bound = pair.C2 * pair.b_max;
  for (int i = 0; i < g.nt; ++i) {
    for (int j = 0; j <= g.nx; ++j) {
      const double s = std::abs(at(i + 1, j) - at(i, j)) / dt;
      d.t_slope_abs_max = std::max(d.t_slope_abs_max, s);
      if (s > t_bound + slope_tol)
        fail("build_hamiltonian: t-slope ", s, " exceeds C2*b_max = ", t_bound,
             " at node (i=", i, ", j=", j, ") with tolerance ", slope_tol);
    }
  }

  // mixed-derivative consistency: the x-derivative of the time-integrated
  // part must match the density increment rho(t,.) - rho(0,.)
  for (int i = 1; i <= g.nt; ++i) {
    for (int j = 1; j < g.nx; ++j) {
      const double part_r = at(i, j + 1) - at(0, j + 1);
      const double part_l = at(i, j - 1) - at(0, j - 1);
      const double lhs = (part_r - part_l) / (2.0 * dx);
      const double rhs = pair.rho.at(i, j) - pair.rho.at(0, j);
      d.path_defect = std::max(d.path_defect, std::abs(lhs - rhs));
    }
  }

  out.H = SampledField(g, std::move(values));
  out.diag = d;
  return out;
}

MollifiedHamiltonian mollify(const HamiltonianField& Hf, double eps) {
  const SpaceTimeGrid& g = Hf.grid();
  const double dt = g.dt();
  const double dx = g.dx();
  require(eps > 0.0, "mollify: eps must be positive");
  require(eps <= std::min(g.T / 4.0, (g.x_max - g.x_min) / 8.0),
          "mollify: eps = ", eps, " too large for the window");
  require(eps >= 3.0 * std::max(dt, dx),
          "mollify: eps = ", eps, " under-resolves the kernel, need eps >= ",
          3.0 * std::max(dt, dx));

  // normalized symmetric taps of the bump kernel on the grid
  auto taps = [](double eps_, double h) {
    const int m = static_cast<int>(std::floor(eps_ / h));
    std::vector<double> w(m + 1);
    double mass = 0.0;
    for (int k = 0; k <= m; ++k) {
      w[k] = poly_bump(k * h / eps_);
      mass += (k == 0 ? w[k] : 2.0 * w[k]);
    }
    for (double& v : w) v /= mass;
    return w;
  };
  const std::vector<double> wt = taps(eps, dt);
  const std::vector<double> wx = taps(eps, dx);
  const int mt = static_cast<int>(wt.size()) - 1;
  const int mx = static_cast<int>(wx.size()) - 1;

  // rows and columns where the whole stencil fits inside [0,T] x window;
  // below t = eps the even-reflection extension would enter, and the
  // sub-window restriction keeps it out of every output value
  const int i_lo = mt, i_hi = g.nt - mt;
  const int j_lo = mx, j_hi = g.nx - mx;
  require(i_lo < i_hi && j_lo < j_hi, "mollify: window too small for eps");

  // pass 1: convolve in t
  const int np = g.n_pos();
  const int nto = i_hi - i_lo + 1;
  std::vector<double> tmp(static_cast<std::size_t>(nto) * np);
  for (int i = i_lo; i <= i_hi; ++i) {
    for (int j = 0; j < np; ++j) {
      double acc = wt[0] * Hf.H.at(i, j);
      for (int k = 1; k <= mt; ++k)
        acc += wt[k] * (Hf.H.at(i - k, j) + Hf.H.at(i + k, j));
      tmp[static_cast<std::size_t>(i - i_lo) * np + j] = acc;
    }
  }

  // pass 2: convolve in x on the shrunk column range
  const int npo = j_hi - j_lo + 1;
  SpaceTimeGrid sub((nto - 1) * dt, g.pos(j_lo), g.pos(j_hi), nto - 1,
                    npo - 1);
  std::vector<double> out(static_cast<std::size_t>(nto) * npo);
  for (int i = 0; i < nto; ++i) {
    const double* row = tmp.data() + static_cast<std::size_t>(i) * np;
    for (int j = j_lo; j <= j_hi; ++j) {
      double acc = wx[0] * row[j];
      for (int k = 1; k <= mx; ++k) acc += wx[k] * (row[j - k] + row[j + k]);
      out[static_cast<std::size_t>(i) * npo + (j - j_lo)] = acc;
    }
  }

  MollifiedHamiltonian m;
  m.eps = eps;
  m.i_offset = i_lo;
  m.j_offset = j_lo;
  m.field = SampledField(sub, std::move(out));

  m.sup_diff = 0.0;
  m.x_slope_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < nto; ++i) {
    for (int j = 0; j < npo; ++j) {
      m.sup_diff = std::max(m.sup_diff, std::abs(m.field.at(i, j) -
                                                 Hf.H.at(i + i_lo, j + j_lo)));
      if (j + 1 < npo)
        m.x_slope_min = std::min(
            m.x_slope_min, (m.field.at(i, j + 1) - m.field.at(i, j)) / dx);
    }
  }
  require(m.x_slope_min > 0.0,
          "mollify: smoothing destroyed strict monotonicity, min slope ",
          m.x_slope_min);
  return m;
}

ConeReport cone_bound_check(const HamiltonianField& Hf, double tol,
                            int n_random_pairs, std::uint64_t seed) {
  const SpaceTimeGrid& g = Hf.grid();
  ConeReport rep;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  rep.n_pairs = 0;

  auto consider = [&](int i1, int j1, int i2, int j2) {
    const double dxp = std::abs(g.pos(j2) - g.pos(j1));
    const double dtp = std::abs(g.time(i2) - g.time(i1));
    if (dxp <= Hf.b_max * dtp) return;  // inside the cone, bound says nothing
    const double lhs = std::abs(Hf.H.at(i2, j2) - Hf.H.at(i1, j1));
    const double margin = lhs - Hf.C1 * (dxp - Hf.b_max * dtp);
    ++rep.n_pairs;
    if (margin < rep.worst_margin) {
      rep.worst_margin = margin;
      rep.i1 = i1;
      rep.j1 = j1;
      rep.i2 = i2;
      rep.j2 = j2;
    }
  };

  // deterministic strided sweep: same-slice pairs and diagonal strides
  const int si = std::max(1, g.nt / 16);
  const int sj = std::max(1, g.nx / 16);
  for (int i = 0; i <= g.nt; i += si)
    for (int j = 0; j <= g.nx; j += sj)
      for (int j2 = j + 1; j2 <= g.nx; j2 += sj) {
        consider(i, j, i, j2);
        const int i2 = std::min(g.nt, i + si);
        consider(i, j, i2, j2);
      }

  // seeded random pairs on top of the sweep
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_i(0, g.nt), pick_j(0, g.nx);
  for (int k = 0; k < n_random_pairs; ++k) {
    const int i1 = pick_i(rng), i2 = pick_i(rng);
    const int j1 = pick_j(rng), j2 = pick_j(rng);
    consider(i1, j1, i2, j2);
  }

  if (rep.n_pairs == 0) rep.worst_margin = 0.0;
  rep.pass = rep.worst_margin >= -tol;
  return rep;
}

}  // namespace hamflow
