#include <doctest.h>

#include <cmath>
#include <random>

#include "hamflow/flow.hpp"

using namespace hamflow;

namespace {

struct Scenario {
  NearIncompressiblePair pair;
  HamiltonianField H;
};

Scenario make(const HamiltonianGenerator& gen, double T, double x_min,
              double x_max, int nt, int nx, double slope_tol = 1e-6) {
  Scenario s{from_hamiltonian(gen, SpaceTimeGrid(T, x_min, x_max, nt, nx)),
             {}};
  s.H = build_hamiltonian(s.pair, slope_tol);
  return s;
}

}  // namespace

TEST_CASE("invert_in_x: affine slices invert in closed form") {
  auto zero = make(HamiltonianGenerator{}, 1.0, -1.0, 1.0, 16, 16);
  CHECK(invert_in_x(zero.H, 0.7, 1.0) ==
        doctest::Approx(0.0).epsilon(1e-13));  // x_min + 1.0

  auto constant = make(HamiltonianGenerator{1.0, 0.0, 1.0}, 1.0, -2.0, 2.0, 16,
                       16);
  // H = x + 2 - t, so level 1.0 at t = 0.5 sits at x = -0.5
  CHECK(invert_in_x(constant.H, 0.5, 1.0) ==
        doctest::Approx(-0.5).epsilon(1e-13));
}

TEST_CASE("invert_in_x: inverts a just-evaluated interior point") {
  auto wave =
      make(HamiltonianGenerator{0.0, 0.5, 1.0}, 1.0, -4.0, 4.0, 128, 128);
  const double h = wave.H.H(0.0, 1.3);
  CHECK(invert_in_x(wave.H, 0.0, h) == doctest::Approx(1.3).epsilon(1e-13));
}

TEST_CASE("invert_in_x: out-of-range levels are rejected") {
  auto zero = make(HamiltonianGenerator{}, 1.0, -1.0, 1.0, 16, 16);
  CHECK_THROWS_WITH_AS(invert_in_x(zero.H, 0.5, 5.0),
                       doctest::Contains("enlarge the padding"), error);
  CHECK_THROWS_AS(invert_in_x(zero.H, 0.5, -1.0), error);
  CHECK_THROWS_AS(invert_in_x(zero.H, 2.0, 0.5), error);  // t outside [0,T]
}

TEST_CASE("build_flow: identity flow for the zero field") {
  auto zero = make(HamiltonianGenerator{}, 1.0, -1.0, 1.0, 16, 16);
  FlowMap fm = build_flow(zero.H);
  CHECK(fm.pad_cells == 0);
  const SpaceTimeGrid& pg = fm.X.grid();
  for (int i = 0; i <= pg.nt; ++i)
    for (int jj = 0; jj <= pg.nx; ++jj) {
      const double x = zero.pair.grid().pos(fm.parent_col(jj));
      CHECK(fm.X.at(i, jj) == doctest::Approx(x).epsilon(1e-14));
      CHECK(fm.Xinv.at(i, jj) == doctest::Approx(x).epsilon(1e-14));
    }
  CHECK(fm.L == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("build_flow: translation flow for the constant field") {
  auto constant =
      make(HamiltonianGenerator{1.0, 0.0, 1.0}, 1.0, -2.0, 2.0, 32, 32);
  FlowMap fm = build_flow(constant.H);
  const SpaceTimeGrid& g = constant.pair.grid();
  const SpaceTimeGrid& pg = fm.X.grid();
  for (int i = 0; i <= pg.nt; ++i)
    for (int jj = 0; jj <= pg.nx; ++jj) {
      const double x = g.pos(fm.parent_col(jj));
      const double t = g.time(i);
      CHECK(fm.X.at(i, jj) == doctest::Approx(x + t).epsilon(1e-13));
      CHECK(fm.Xinv.at(i, jj) == doctest::Approx(x - t).epsilon(1e-13));
    }
  CHECK(fm.L == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("build_flow: oscillatory scenario satisfies the flow contracts") {
  auto wave =
      make(HamiltonianGenerator{0.0, 0.5, 1.0}, 1.0, -4.0, 4.0, 256, 256);
  FlowMap fm = build_flow(wave.H);

  CHECK(fm.relation_residual <= 1e-10);
  CHECK(fm.identity_error <= 1e-12);
  CHECK(fm.h_lipschitz <= 1.0 / wave.pair.C1 + 1e-3);
  CHECK(fm.t_lipschitz <= wave.pair.b_max + 1e-3);
  CHECK(fm.L <= wave.pair.C2 / wave.pair.C1 + 1e-3);
  CHECK(fm.q_min >= wave.pair.C1 / wave.pair.C2 - 1e-3);
  CHECK(fm.q_max <= wave.pair.C2 / wave.pair.C1 + 1e-3);

  // round trip through the inverse flow, exact on piecewise-linear slices
  const SpaceTimeGrid& g = wave.pair.grid();
  const SpaceTimeGrid& pg = fm.X.grid();
  for (int i = 0; i <= g.nt; i += 16)
    for (int jj = 0; jj <= pg.nx; jj += 16) {
      const double x = g.pos(fm.parent_col(jj));
      const double forward = fm.X.at(i, jj);
      const double back =
          invert_in_x(wave.H, 0.0, wave.H.H(g.time(i), forward));
      CHECK(back == doctest::Approx(x).epsilon(2e-10));
    }

  // the two routes to X agree: direct inversion vs level-table composition
  double route_gap = 0.0;
  for (int i = 0; i <= g.nt; i += 8)
    for (int jj = 0; jj <= pg.nx; jj += 8) {
      const double via_table =
          fm.Y(g.time(i), wave.H.H.at(0, fm.parent_col(jj)));
      route_gap = std::max(route_gap, std::abs(via_table - fm.X.at(i, jj)));
    }
  CHECK(route_gap <= 5e-4);  // level-table interpolation is second order

  // flow modulus over random node pairs
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> pi(0, g.nt), pj(0, pg.nx);
  const double slope = wave.pair.C2 / wave.pair.C1;
  for (int k = 0; k < 20000; ++k) {
    const int i1 = pi(rng), i2 = pi(rng), j1 = pj(rng), j2 = pj(rng);
    const double lhs = std::abs(fm.X.at(i1, j1) - fm.X.at(i2, j2));
    const double rhs = slope * std::abs(j1 - j2) * g.dx() +
                       wave.pair.b_max * std::abs(i1 - i2) * g.dt() + 1e-9;
    CHECK(lhs <= rhs);
  }
}

TEST_CASE("flow contracts hold across random admissible generators") {
  std::mt19937_64 rng(909);
  std::uniform_real_distribution<double> amp(0.05, 0.6), freq(0.5, 2.0),
      drift(-0.5, 0.5);
  for (int trial = 0; trial < 8; ++trial) {
    HamiltonianGenerator gen{drift(rng), amp(rng), freq(rng)};
    SpaceTimeGrid g(0.5, -3.0, 3.0, 64, 64);
    auto pair = from_hamiltonian(gen, g);
    const ResolvedTolerances tol = resolve_tolerances({}, g, gen);
    HamiltonianField H = build_hamiltonian(pair, tol.slope);
    CHECK(H.diag.x_slope_min >= pair.C1 - tol.slope);
    CHECK(H.diag.x_slope_max <= pair.C2 + tol.slope);
    CHECK(H.diag.t_slope_abs_max <= pair.C2 * pair.b_max + tol.slope);

    FlowMap fm = build_flow(H);
    CHECK(fm.relation_residual <= 1e-10);
    CHECK(fm.identity_error <= 1e-12);
    CHECK(fm.h_lipschitz <= 1.0 / pair.C1 + tol.lipschitz);
    CHECK(fm.t_lipschitz <= pair.b_max + tol.lipschitz);
    CHECK(fm.q_min >= pair.C1 / pair.C2 - tol.quotient);
    CHECK(fm.q_max <= pair.C2 / pair.C1 + tol.quotient);
  }
}

TEST_CASE("build_flow rejects windows without room for the padding") {
  auto fast = make(HamiltonianGenerator{4.0, 0.0, 1.0}, 1.0, -1.0, 1.0, 16, 16,
                   1e-6);
  CHECK_THROWS_WITH_AS(build_flow(fast.H), doctest::Contains("window too"),
                       error);
}

TEST_CASE("ode_residual: exact for affine scenarios, second order otherwise") {
  auto zero = make(HamiltonianGenerator{}, 1.0, -1.0, 1.0, 16, 16);
  OdeResidualReport rz = ode_residual(build_flow(zero.H), zero.pair);
  CHECK(rz.centered_max == 0.0);
  CHECK(rz.integral_max <= 1e-13);

  auto constant =
      make(HamiltonianGenerator{1.0, 0.0, 1.0}, 1.0, -2.0, 2.0, 32, 32);
  OdeResidualReport rc = ode_residual(build_flow(constant.H), constant.pair);
  CHECK(rc.centered_max <= 1e-12);
  CHECK(rc.integral_max <= 1e-12);

  auto w128 =
      make(HamiltonianGenerator{0.0, 0.5, 1.0}, 1.0, -4.0, 4.0, 128, 128);
  auto w256 =
      make(HamiltonianGenerator{0.0, 0.5, 1.0}, 1.0, -4.0, 4.0, 256, 256);
  const double r128 = ode_residual(build_flow(w128.H), w128.pair).centered_max;
  const double r256 = ode_residual(build_flow(w256.H), w256.pair).centered_max;
  CHECK(r128 / r256 >= 3.0);
}

TEST_CASE("pushforward identities hold under independent quadratures") {
  const std::vector<double> times = {0.0, 0.25, 0.5, 0.75, 1.0};

  auto zero = make(HamiltonianGenerator{}, 1.0, -1.0, 1.0, 64, 64);
  FlowMap fz = build_flow(zero.H);
  PushforwardReport rz = pushforward_check(
      fz, zero.pair,
      {{Probe::Kind::triangle, 0.0, 0.5, 1.0, "triangle"}}, times);
  CHECK(rz.level_defect_max <= 1e-12);
  CHECK(rz.flow_defect_max <= 1e-12);

  // the flow route needs starts that land in the probe support, so the
  // probe sits a further |b|*T inside the padded window
  auto constant =
      make(HamiltonianGenerator{1.0, 0.0, 1.0}, 0.5, -2.0, 2.0, 256, 256);
  FlowMap fc = build_flow(constant.H);
  PushforwardReport rc = pushforward_check(
      fc, constant.pair,
      {{Probe::Kind::poly_bump, 0.0, 0.8, 1.0, "bump"}},
      {0.0, 0.125, 0.25, 0.375, 0.5});
  CHECK(rc.level_defect_max <= 1e-7);
  CHECK(rc.flow_defect_max <= 1e-7);

  auto wave =
      make(HamiltonianGenerator{0.0, 0.5, 1.0}, 1.0, -4.0, 4.0, 256, 256);
  FlowMap fw = build_flow(wave.H);
  PushforwardReport rw = pushforward_check(
      fw, wave.pair,
      {{Probe::Kind::gaussian, 0.0, 0.25, 1.0, "gaussian"}}, times);
  CHECK(rw.level_defect_max <= 4e-3);
  CHECK(rw.flow_defect_max <= 4e-3);

  CHECK_THROWS_WITH_AS(
      pushforward_check(fw, wave.pair,
                        {{Probe::Kind::gaussian, 0.0, 1.0, 1.0, "wide"}},
                        times),
      doctest::Contains("padded"), error);
}
