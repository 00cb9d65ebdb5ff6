#include "hamflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hamflow {

namespace {

// time-blended slice of H, strictly increasing in j
struct SliceView {
  const SampledField* H;
  int i;
  double wt;

  double operator[](int j) const {
    const double v0 = H->at(i, j);
    if (wt == 0.0) return v0;
    return (1.0 - wt) * v0 + wt * H->at(i + 1, j);
  }
};

// Monotone cubic (Hermite with harmonic-mean slopes) on one cell. Keeps
// strict monotonicity of the data and third-order accuracy on smooth
// slices, so flow tables differentiate cleanly in time.
struct CellCubic {
  double x0, h, v0, v1, m0, m1;

  double eval(double theta) const {
    const double t2 = theta * theta;
    const double t3 = t2 * theta;
    return v0 * (2.0 * t3 - 3.0 * t2 + 1.0) + h * m0 * (t3 - 2.0 * t2 + theta) +
           v1 * (-2.0 * t3 + 3.0 * t2) + h * m1 * (t3 - t2);
  }

  double deriv(double theta) const {  // d/dtheta
    const double t2 = theta * theta;
    return v0 * (6.0 * t2 - 6.0 * theta) +
           h * m0 * (3.0 * t2 - 4.0 * theta + 1.0) +
           v1 * (-6.0 * t2 + 6.0 * theta) + h * m1 * (3.0 * t2 - 2.0 * theta);
  }
};

// node slope: harmonic mean of the adjacent secants (uniform spacing), the
// standard shape-preserving choice; three-point one-sided rule at the ends
double pchip_slope(const SliceView& v, int j, int nx, double dx) {
  auto secant = [&](int cell) { return (v[cell + 1] - v[cell]) / dx; };
  if (j == 0) {
    const double d0 = secant(0), d1 = secant(1);
    double m = 1.5 * d0 - 0.5 * d1;
    if (m * d0 <= 0.0) return 0.0;
    if (std::abs(m) > 3.0 * std::abs(d0)) m = 3.0 * d0;
    return m;
  }
  if (j == nx) {
    const double d0 = secant(nx - 1), d1 = secant(nx - 2);
    double m = 1.5 * d0 - 0.5 * d1;
    if (m * d0 <= 0.0) return 0.0;
    if (std::abs(m) > 3.0 * std::abs(d0)) m = 3.0 * d0;
    return m;
  }
  const double dl = secant(j - 1), dr = secant(j);
  if (dl * dr <= 0.0) return 0.0;
  return 2.0 * dl * dr / (dl + dr);
}

CellCubic make_cell(const SliceView& v, const SpaceTimeGrid& g, int cell) {
  return CellCubic{g.pos(cell), g.dx(), v[cell], v[cell + 1],
                   pchip_slope(v, cell, g.nx, g.dx()),
                   pchip_slope(v, cell + 1, g.nx, g.dx())};
}

// locate the bracketing cell: smallest j with v[j] >= h, or -1/-2 for the
// clamped boundary cases, after range validation
int bracket_level(const SliceView& v, const SpaceTimeGrid& g, double h,
                  double atol, double t_label) {
  const int nx = g.nx;
  const double v_lo = v[0];
  const double v_hi = v[nx];
  const double slack = std::max(atol, 1e-12 * (std::abs(h) + 1.0));
  if (h < v_lo) {
    if (v_lo - h <= slack) return -1;  // clamp to x_min
    fail("invert_in_x: level h = ", h, " below realized range [", v_lo, ", ",
         v_hi, "] at t = ", t_label,
         "; the query escapes the window, enlarge the padding");
  }
  if (h > v_hi) {
    if (h - v_hi <= slack) return -2;  // clamp to x_max
    fail("invert_in_x: level h = ", h, " above realized range [", v_lo, ", ",
         v_hi, "] at t = ", t_label,
         "; the query escapes the window, enlarge the padding");
  }
  int lo = 0, hi = nx;
  while (lo < hi) {
    const int mid = (lo + hi) / 2;
    if (v[mid] >= h)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

// exact inversion of the piecewise-linear slice
double invert_slice_linear(const SliceView& v, const SpaceTimeGrid& g,
                           double h, double atol, double t_label) {
  const int lo = bracket_level(v, g, h, atol, t_label);
  if (lo == -1) return g.pos(0);
  if (lo == -2) return g.pos(g.nx);
  const double vj = v[lo];
  if (vj == h || lo == 0) return g.pos(lo);
  const double vl = v[lo - 1];
  // slopes are >= C1 > 0, flat cells cannot occur
  require(vj > vl, "invert_in_x: flat cell at j = ", lo - 1);
  return g.pos(lo - 1) + g.dx() * (h - vl) / (vj - vl);
}

// inversion of the shape-preserving cubic slice model (trajectory tables):
// bracketing by node values stays valid because the model is monotone and
// interpolatory, then safeguarded Newton
double invert_slice_smooth(const SliceView& v, const SpaceTimeGrid& g,
                           double h, double atol, double t_label) {
  const int lo = bracket_level(v, g, h, atol, t_label);
  if (lo == -1) return g.pos(0);
  if (lo == -2) return g.pos(g.nx);
  const double vj = v[lo];
  if (vj == h || lo == 0) return g.pos(lo);
  const double vl = v[lo - 1];
  require(vj > vl, "invert_in_x: flat cell at j = ", lo - 1);

  const CellCubic c = make_cell(v, g, lo - 1);
  const double ftol = 16.0 * std::numeric_limits<double>::epsilon() *
                      (std::abs(h) + std::abs(vl) + std::abs(vj));
  double tlo = 0.0, thi = 1.0;
  double theta = (h - vl) / (vj - vl);  // linear seed
  for (int it = 0; it < 80; ++it) {
    const double f = c.eval(theta) - h;
    if (std::abs(f) <= ftol) break;
    if (f > 0.0)
      thi = theta;
    else
      tlo = theta;
    if (thi - tlo <= 4.0 * std::numeric_limits<double>::epsilon()) break;
    const double fp = c.deriv(theta);
    double next = fp > 0.0 ? theta - f / fp : -1.0;
    if (!(next > tlo && next < thi)) next = 0.5 * (tlo + thi);
    theta = next;
  }
  return c.x0 + theta * c.h;
}

}  // namespace

double invert_in_x(const HamiltonianField& Hf, double t, double h,
                   double atol) {
  const SpaceTimeGrid& g = Hf.grid();
  require(t >= 0.0 && t <= g.T, "invert_in_x: t = ", t, " outside [0, ", g.T,
          "]");
  int i = static_cast<int>(std::floor(t / g.dt()));
  i = std::clamp(i, 0, g.nt - 1);
  double wt;
  if (t == g.time(i))
    wt = 0.0;
  else if (t == g.time(i + 1))
    wt = 1.0;
  else
    wt = (t - g.time(i)) / g.dt();
  return invert_slice_linear(SliceView{&Hf.H, i, wt}, g, h, atol, t);
}

FlowMap build_flow(const HamiltonianField& Hf) {
  const SpaceTimeGrid& g = Hf.grid();
  const double dx = g.dx();
  const double dt = g.dt();

  FlowMap fm;
  fm.H = Hf;
  fm.C1 = Hf.C1;
  fm.C2 = Hf.C2;
  fm.b_max = Hf.b_max;

  // padded columns: levels started there stay inside the window up to t = T
  int jp = 0;
  if (Hf.b_max > 0.0) {
    jp = static_cast<int>(std::ceil(Hf.b_max * g.T / dx - 1e-9)) + 1;
  }
  require(2 * jp <= g.nx - 2,
          "build_flow: window too small, domain-of-dependence padding of ",
          jp, " cells per side leaves no interior (nx = ", g.nx, ")");
  fm.pad_cells = jp;

  // levels realized at every time slice
  double h_lo = -std::numeric_limits<double>::infinity();
  double h_hi = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= g.nt; ++i) {
    h_lo = std::max(h_lo, Hf.H.at(i, 0));
    h_hi = std::min(h_hi, Hf.H.at(i, g.nx));
  }
  require(h_hi > h_lo, "build_flow: no level is realized at every slice");
  fm.h_lo = h_lo;
  fm.h_hi = h_hi;

  const int nh = g.nx;
  SpaceTimeGrid hgrid(g.T, h_lo, h_hi, g.nt, nh);
  SpaceTimeGrid pgrid(g.T, g.pos(jp), g.pos(g.nx - jp), g.nt, g.nx - 2 * jp);
  const int npad = pgrid.n_pos();

  std::vector<double> yv(static_cast<std::size_t>(g.n_times()) * (nh + 1));
  std::vector<double> xv(static_cast<std::size_t>(g.n_times()) * npad);
  std::vector<double> xiv(xv.size());

  const double atol = 1e-10;
  for (int i = 0; i <= g.nt; ++i) {
    const SliceView slice{&Hf.H, std::min(i, g.nt - 1),
                          i == g.nt ? 1.0 : 0.0};

    for (int k = 0; k <= nh; ++k)
      yv[static_cast<std::size_t>(i) * (nh + 1) + k] =
          invert_slice_smooth(slice, g, hgrid.pos(k), atol, g.time(i));

    const SliceView slice0{&Hf.H, 0, 0.0};
    for (int jj = 0; jj < npad; ++jj) {
      const int j = jp + jj;
      xv[static_cast<std::size_t>(i) * npad + jj] =
          invert_slice_linear(slice, g, Hf.H.at(0, j), atol, g.time(i));
      xiv[static_cast<std::size_t>(i) * npad + jj] =
          invert_slice_linear(slice0, g, Hf.H.at(i, j), atol, 0.0);
    }
  }

  fm.Y = SampledField(hgrid, std::move(yv));
  fm.X = SampledField(pgrid, std::move(xv));
  fm.Xinv = SampledField(pgrid, std::move(xiv));

  // defining relation and start-point identity
  for (int i = 0; i <= g.nt; ++i) {
    for (int jj = 0; jj < npad; ++jj) {
      const int j = jp + jj;
      const double x = fm.X.at(i, jj);
      const double r = std::abs(Hf.H(g.time(i), x) - Hf.H.at(0, j));
      fm.relation_residual = std::max(fm.relation_residual, r);
      if (i == 0)
        fm.identity_error =
            std::max(fm.identity_error, std::abs(x - g.pos(j)));
    }
  }

  // compression estimate from difference quotients of X
  fm.q_min = std::numeric_limits<double>::infinity();
  fm.q_max = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= g.nt; ++i) {
    for (int jj = 0; jj + 1 < npad; ++jj) {
      const double q = (fm.X.at(i, jj + 1) - fm.X.at(i, jj)) / dx;
      require(q > 0.0, "build_flow: X(t,.) not strictly increasing at (i=", i,
              ", jj=", jj, ")");
      fm.q_min = std::min(fm.q_min, q);
      fm.q_max = std::max(fm.q_max, q);
    }
  }
  fm.L = 1.0 / fm.q_min;

  // measured Lipschitz quotients of the level trajectories
  const double dh = hgrid.dx();
  for (int i = 0; i <= g.nt; ++i)
    for (int k = 0; k < nh; ++k)
      fm.h_lipschitz =
          std::max(fm.h_lipschitz,
                   std::abs(fm.Y.at(i, k + 1) - fm.Y.at(i, k)) / dh);
  for (int i = 0; i < g.nt; ++i)
    for (int k = 0; k <= nh; ++k)
      fm.t_lipschitz =
          std::max(fm.t_lipschitz,
                   std::abs(fm.Y.at(i + 1, k) - fm.Y.at(i, k)) / dt);

  return fm;
}

OdeResidualReport ode_residual(const FlowMap& fm,
                               const NearIncompressiblePair& pair) {
  const SpaceTimeGrid& g = fm.H.grid();
  require(g.same_as(pair.grid()), "ode_residual: flow and pair grids differ");
  const int nh = fm.Y.grid().nx;
  const double dt = g.dt();

  OdeResidualReport rep;
  for (int k = 0; k <= nh; ++k) {
    for (int i = 1; i < g.nt; ++i) {
      const double dy = (fm.Y.at(i + 1, k) - fm.Y.at(i - 1, k)) / (2.0 * dt);
      const double bv = pair.b(g.time(i), fm.Y.at(i, k));
      rep.centered_max = std::max(rep.centered_max, std::abs(dy - bv));
    }
    // integral form, cumulative trapezoid of b along the trajectory
    double integral = 0.0;
    double b_prev = pair.b(0.0, fm.Y.at(0, k));
    for (int i = 1; i <= g.nt; ++i) {
      const double b_here = pair.b(g.time(i), fm.Y.at(i, k));
      integral += 0.5 * dt * (b_prev + b_here);
      b_prev = b_here;
      const double defect =
          std::abs(fm.Y.at(i, k) - fm.Y.at(0, k) - integral);
      rep.integral_max = std::max(rep.integral_max, defect);
    }
  }
  return rep;
}

namespace {

double trapz_weight(int idx, int last) {
  return (idx == 0 || idx == last) ? 0.5 : 1.0;
}

}  // namespace

PushforwardReport pushforward_check(const FlowMap& fm,
                                    const NearIncompressiblePair& pair,
                                    const std::vector<Probe>& probes,
                                    const std::vector<double>& times) {
  const SpaceTimeGrid& g = fm.H.grid();
  require(g.same_as(pair.grid()),
          "pushforward_check: flow and pair grids differ");
  const SpaceTimeGrid& pg = fm.X.grid();
  const SpaceTimeGrid& hg = fm.Y.grid();
  const double dx = g.dx();
  const double dh = hg.dx();

  PushforwardReport rep;
  for (const Probe& probe : probes) {
    require(probe.lo() >= pg.x_min && probe.hi() <= pg.x_max,
            "pushforward_check: probe '", probe.name,
            "' not supported inside the padded region [", pg.x_min, ", ",
            pg.x_max, "]");
    for (double t : times) {
      const int i = std::clamp(
          static_cast<int>(std::lround(t / g.dt())), 0, g.nt);

      // target: int f(y) rho(t,y) dy over the window
      double target = 0.0;
      for (int j = 0; j <= g.nx; ++j)
        target += trapz_weight(j, g.nx) * probe(g.pos(j)) * pair.rho.at(i, j);
      target *= dx;

      // level route: int f(Y(t,h)) dh
      require(probe(fm.Y.at(i, 0)) == 0.0 && probe(fm.Y.at(i, hg.nx)) == 0.0,
              "pushforward_check: probe '", probe.name,
              "' support not captured by the realized level range");
      double level = 0.0;
      for (int k = 0; k <= hg.nx; ++k)
        level += trapz_weight(k, hg.nx) * probe(fm.Y.at(i, k));
      level *= dh;

      // flow route: int f(X(t,x)) rho(0,x) dx
      require(probe(fm.X.at(i, 0)) == 0.0 && probe(fm.X.at(i, pg.nx)) == 0.0,
              "pushforward_check: probe '", probe.name,
              "' support not captured by the padded start columns");
      double flow = 0.0;
      for (int jj = 0; jj <= pg.nx; ++jj)
        flow += trapz_weight(jj, pg.nx) * probe(fm.X.at(i, jj)) *
                pair.rho.at(0, fm.parent_col(jj));
      flow *= dx;

      PushforwardReport::Row row;
      row.probe = probe.name;
      row.t = g.time(i);
      row.level_defect = std::abs(level - target);
      row.flow_defect = std::abs(flow - target);
      rep.level_defect_max = std::max(rep.level_defect_max, row.level_defect);
      rep.flow_defect_max = std::max(rep.flow_defect_max, row.flow_defect);
      rep.rows.push_back(row);
    }
  }
  return rep;
}

}  // namespace hamflow
