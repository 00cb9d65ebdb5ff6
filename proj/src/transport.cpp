#include "hamflow/transport.hpp"

#include <algorithm>
#include <cmath>

#include "hamflow/oracles.hpp"

namespace hamflow {

namespace {

double trapz_weight(int idx, int last) {
  return (idx == 0 || idx == last) ? 0.5 : 1.0;
}

int snap_time_index(const SpaceTimeGrid& g, double t) {
  return std::clamp(static_cast<int>(std::lround(t / g.dt())), 0, g.nt);
}

}  // namespace

TransportSolution solve_cauchy_fn(const NearIncompressiblePair& pair,
                                  const FlowMap& flow,
                                  const std::function<double(double)>& u0,
                                  const std::string& desc) {
  const SpaceTimeGrid& g = pair.grid();
  require(g.same_as(flow.H.grid()), "solve_cauchy: flow and pair grids differ");
  const SpaceTimeGrid& pg = flow.X.grid();

  std::vector<double> uv(static_cast<std::size_t>(pg.n_times()) * pg.n_pos());
  std::size_t k = 0;
  for (int i = 0; i <= g.nt; ++i) {
    for (int jj = 0; jj <= pg.nx; ++jj) {
      const int j = flow.parent_col(jj);
      const double xinv = flow.Xinv.at(i, jj);
      const double rho_here = pair.rho.at(i, j);
      const double rho_start = pair.rho(0.0, xinv);
      // ratio first: at t = 0 the densities cancel exactly, so the initial
      // slice reproduces the datum bit for bit
      uv[k++] = u0(xinv) * (rho_here / rho_start);
    }
  }

  TransportSolution sol;
  sol.u = SampledField(pg, std::move(uv));
  sol.datum_desc = desc;
  sol.source = "pushforward";
  sol.pad_cells = flow.pad_cells;
  sol.mass_lo = pg.x_min;
  sol.mass_hi = pg.x_max;
  return sol;
}

TransportSolution solve_cauchy(const NearIncompressiblePair& pair,
                               const FlowMap& flow,
                               const InitialDatum& datum) {
  const SpaceTimeGrid& pg = flow.X.grid();
  if (datum.compact_support()) {
    require(datum.support_lo() >= pg.x_min && datum.support_hi() <= pg.x_max,
            "solve_cauchy: datum support [", datum.support_lo(), ", ",
            datum.support_hi(), "] escapes the padded region [", pg.x_min,
            ", ", pg.x_max, "]");
  }
  return solve_cauchy_fn(
      pair, flow, [&](double x) { return datum(x); }, datum.describe());
}

std::vector<double> weak_residual(const TransportSolution& sol,
                                  const NearIncompressiblePair& pair,
                                  const std::vector<TestFunction>& tests) {
  const SpaceTimeGrid& g = pair.grid();
  const SpaceTimeGrid& pg = sol.u.grid();
  const double dt = g.dt();
  const double dx = g.dx();

  std::vector<double> residuals;
  residuals.reserve(tests.size());
  for (const TestFunction& phi : tests) {
    require(phi.T == g.T, "weak_residual: test function '", phi.id,
            "' was built for T = ", phi.T, ", scenario has T = ", g.T);
    require(phi.space.lo() > pg.x_min && phi.space.hi() < pg.x_max,
            "weak_residual: test function '", phi.id,
            "' must vanish near the spatial boundary of the padded region");

    double interior = 0.0;
    for (int i = 0; i <= g.nt; ++i) {
      const double t = g.time(i);
      double row = 0.0;
      for (int jj = 0; jj <= pg.nx; ++jj) {
        const int j = sol.parent_col(jj);
        const double x = g.pos(j);
        const double adv = phi.dt(t, x) + pair.b.at(i, j) * phi.dx(t, x);
        row += trapz_weight(jj, pg.nx) * sol.u.at(i, jj) * adv;
      }
      interior += trapz_weight(i, g.nt) * row;
    }
    interior *= dt * dx;

    double initial = 0.0;
    for (int jj = 0; jj <= pg.nx; ++jj) {
      const double x = g.pos(sol.parent_col(jj));
      initial += trapz_weight(jj, pg.nx) * sol.u.at(0, jj) * phi.value(0.0, x);
    }
    initial *= dx;

    residuals.push_back(std::abs(interior + initial));
  }
  return residuals;
}

ObservableReport conserved_observable(const TransportSolution& sol,
                                      const HamiltonianField& H,
                                      const Bump& f,
                                      const std::vector<double>& times) {
  const SpaceTimeGrid& g = H.grid();
  const SpaceTimeGrid& pg = sol.u.grid();
  const double dx = g.dx();

  auto integrate_at = [&](int i) {
    const int j_first = sol.parent_col(0);
    const int j_last = sol.parent_col(pg.nx);
    require(f.lo() >= H.H.at(i, j_first) && f.hi() <= H.H.at(i, j_last),
            "conserved_observable: profile support [", f.lo(), ", ", f.hi(),
            "] outside the realized level range at t = ", g.time(i));
    double acc = 0.0;
    for (int jj = 0; jj <= pg.nx; ++jj) {
      const int j = sol.parent_col(jj);
      acc += trapz_weight(jj, pg.nx) * sol.u.at(i, jj) * f(H.H.at(i, j));
    }
    return acc * dx;
  };

  ObservableReport rep;
  rep.target = integrate_at(0);
  for (double t : times) {
    const int i = snap_time_index(g, t);
    const double I = integrate_at(i);
    rep.values.emplace_back(g.time(i), I);
    rep.max_drift = std::max(rep.max_drift, std::abs(I - rep.target));
  }
  return rep;
}

std::vector<DecayRow> uniqueness_probe(const NearIncompressiblePair& pair,
                                       const HamiltonianField& H,
                                       const FlowMap& flow,
                                       const std::vector<double>& eps_list,
                                       const Bump& f, double tau,
                                       const TransportSolution* solution) {
  const SpaceTimeGrid& g = pair.grid();
  require(!eps_list.empty(), "uniqueness_probe: eps list is empty");
  double eps_max = 0.0;
  for (double e : eps_list) eps_max = std::max(eps_max, e);
  require(tau > g.T / 2.0 && tau < g.T - eps_max,
          "uniqueness_probe: need tau in (T/2, T - max eps), got tau = ", tau);

  TransportSolution fallback;
  if (solution == nullptr) {
    const SpaceTimeGrid& pg = flow.X.grid();
    const double mid = 0.5 * (pg.x_min + pg.x_max);
    const double w = (pg.x_max - pg.x_min) / 8.0;
    fallback =
        solve_cauchy(pair, flow, InitialDatum::gaussian(mid, w / 4.0, 1.0));
    solution = &fallback;
  }
  const TransportSolution& sol = *solution;
  const SpaceTimeGrid& pg = sol.u.grid();
  const double dt = g.dt();
  const double dx = g.dx();
  const int i_tau = snap_time_index(g, tau);

  std::vector<DecayRow> rows;
  rows.reserve(eps_list.size());
  for (double eps : eps_list) {
    const MollifiedHamiltonian m = mollify(H, eps);
    const SpaceTimeGrid& sg = m.field.grid();
    // parent rows available: [i_offset, i_offset + sg.nt]; the advective
    // integral runs over the smoothed rows up to tau
    const int r_tau = i_tau - m.i_offset;
    require(r_tau >= 1 && r_tau + 1 <= sg.nt,
            "uniqueness_probe: tau outside the smoothed window for eps = ",
            eps);

    // integration columns: padded solution columns inside the smoothed
    // sub-window, one column of slack for the centered x-difference
    const int j_first = std::max(sol.parent_col(0), m.j_offset + 1);
    const int j_last =
        std::min(sol.parent_col(pg.nx), m.j_offset + sg.nx - 1);
    require(j_first < j_last, "uniqueness_probe: empty integration domain");

    auto heps = [&](int r, int j) {  // local row, parent column
      return m.field.at(r, j - m.j_offset);
    };

    // the level band of f must stay inside the integration columns
    for (int r = 0; r <= r_tau; ++r)
      require(f(heps(r, j_first)) == 0.0 && f(heps(r, j_last)) == 0.0,
              "uniqueness_probe: level profile leaks through the boundary at "
              "t = ",
              g.time(r + m.i_offset), " for eps = ", eps);

    const int last = j_last - j_first;
    double interior = 0.0;
    for (int r = 0; r <= r_tau; ++r) {
      const int i = r + m.i_offset;  // parent row
      double row = 0.0;
      for (int j = j_first; j <= j_last; ++j) {
        const double fp = f.deriv(heps(r, j));
        if (fp == 0.0) continue;
        // centered time difference, one-sided on the first smoothed row
        const double dthe =
            r == 0 ? (heps(1, j) - heps(0, j)) / dt
                   : (heps(r + 1, j) - heps(r - 1, j)) / (2.0 * dt);
        const double dxhe = (heps(r, j + 1) - heps(r, j - 1)) / (2.0 * dx);
        const double adv = fp * (dthe + pair.b.at(i, j) * dxhe);
        row += trapz_weight(j - j_first, last) *
               sol.u.at(i, j - sol.pad_cells) * adv;
      }
      interior += trapz_weight(r, r_tau) * row;
    }
    interior *= dt * dx;

    auto boundary_term = [&](int r) {
      double acc = 0.0;
      for (int j = j_first; j <= j_last; ++j)
        acc += trapz_weight(j - j_first, last) *
               sol.u.at(r + m.i_offset, j - sol.pad_cells) * f(heps(r, j));
      return acc * dx;
    };

    DecayRow row;
    row.eps = eps;
    row.D = std::abs(interior);
    row.boundary_gap = std::abs(boundary_term(r_tau) - boundary_term(0));
    rows.push_back(row);
  }
  return rows;
}

CrossValidationReport cross_validate(const NearIncompressiblePair& pair,
                                     const FlowMap& flow,
                                     const InitialDatum& datum, bool use_fv,
                                     bool use_characteristics,
                                     int char_steps) {
  const SpaceTimeGrid& g = pair.grid();
  const TransportSolution push = solve_cauchy(pair, flow, datum);
  const SpaceTimeGrid& pg = push.u.grid();
  const double dx = g.dx();

  const std::vector<double> times = {0.25 * g.T, 0.5 * g.T, 0.75 * g.T, g.T};

  CrossValidationReport rep;
  if (use_fv) {
    const FvSolution fv = fv_upwind_solve(pair, datum);
    for (double t : times) {
      const int i = snap_time_index(g, t);
      double l1 = 0.0;
      for (int jj = 0; jj <= pg.nx; ++jj) {
        const int j = push.parent_col(jj);
        l1 += trapz_weight(jj, pg.nx) *
              std::abs(push.u.at(i, jj) - fv.sol.u.at(i, j));
      }
      l1 *= dx;
      rep.fv_l1.emplace_back(g.time(i), l1);
      rep.fv_l1_max = std::max(rep.fv_l1_max, l1);
    }
  }

  if (use_characteristics) {
    require(pair.generator.has_value(),
            "cross_validate: characteristics oracle needs a smooth generator "
            "scenario");
    const HamiltonianGenerator& gen = *pair.generator;
    for (double t : times) {
      const int i = snap_time_index(g, t);
      const double ti = g.time(i);
      const int steps = std::max(8, static_cast<int>(char_steps * ti / g.T));
      double l1 = 0.0;
      for (int jj = 0; jj <= pg.nx; ++jj) {
        const double x = g.pos(push.parent_col(jj));
        const double x0 = rk4_backtrace(gen, ti, x, steps);
        const double u_char =
            datum(x0) * gen.density(ti, x) / gen.density(0.0, x0);
        l1 += trapz_weight(jj, pg.nx) * std::abs(push.u.at(i, jj) - u_char);
      }
      l1 *= dx;
      rep.char_l1.emplace_back(ti, l1);
      rep.char_l1_max = std::max(rep.char_l1_max, l1);
    }
  }
  return rep;
}

}  // namespace hamflow
