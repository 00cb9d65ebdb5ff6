#include <doctest.h>

#include <cmath>
#include <random>

#include "hamflow/config.hpp"
#include "hamflow/scenario.hpp"

using namespace hamflow;

namespace {

ScenarioConfig make_config(const std::string& kind, double T, double x_min,
                           double x_max, int nt, int nx) {
  ScenarioConfig cfg;
  cfg.kind = kind;
  cfg.grid = SpaceTimeGrid(T, x_min, x_max, nt, nx);
  return cfg;
}

}  // namespace

TEST_CASE("grid node coordinates come from multiplication") {
  SpaceTimeGrid g(1.0, -1.0, 1.0, 8, 8);
  CHECK(g.time(0) == 0.0);
  CHECK(g.time(8) == 1.0);
  CHECK(g.pos(0) == -1.0);
  CHECK(g.pos(8) == 1.0);
  CHECK(g.pos(4) == 0.0);
  CHECK(g.dt() == doctest::Approx(0.125));
  for (int i = 0; i <= g.nt; ++i) CHECK(g.time(i) == i * g.dt());
}

TEST_CASE("grid rejects invalid parameters") {
  CHECK_THROWS_AS(SpaceTimeGrid(0.0, -1.0, 1.0, 8, 8), error);
  CHECK_THROWS_AS(SpaceTimeGrid(1.0, 1.0, -1.0, 8, 8), error);
  CHECK_THROWS_AS(SpaceTimeGrid(1.0, -1.0, 1.0, 1, 8), error);
  CHECK_THROWS_AS(SpaceTimeGrid(1.0, -1.0, 1.0, 8, 1), error);
}

TEST_CASE("sampled field: node evaluation is exact, extension constant") {
  SpaceTimeGrid g(1.0, -2.0, 2.0, 10, 16);
  auto f = [](double t, double x) { return std::sin(x) + 0.25 * t * x; };
  SampledField field = SampledField::from_function(g, f);

  for (int i = 0; i <= g.nt; ++i)
    for (int j = 0; j <= g.nx; ++j)
      CHECK(field(g.time(i), g.pos(j)) == field.at(i, j));

  // constant-in-x extension picks the nearest boundary node
  CHECK(field(0.5, -10.0) == field(0.5, g.x_min));
  CHECK(field(0.5, 10.0) == field(0.5, g.x_max));

  // interpolation stays within the surrounding node values
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ut(0.0, 1.0), ux(-2.0, 2.0);
  for (int k = 0; k < 500; ++k) {
    const double t = ut(rng), x = ux(rng);
    const double v = field(t, x);
    const int i = std::min(static_cast<int>(t / g.dt()), g.nt - 1);
    const int j = std::min(static_cast<int>((x - g.x_min) / g.dx()), g.nx - 1);
    double lo = field.at(i, j), hi = lo;
    for (int di = 0; di <= 1; ++di)
      for (int dj = 0; dj <= 1; ++dj) {
        lo = std::min(lo, field.at(i + di, j + dj));
        hi = std::max(hi, field.at(i + di, j + dj));
      }
    CHECK(v >= lo - 1e-15);
    CHECK(v <= hi + 1e-15);
  }
}

TEST_CASE("sampled field rejects non-finite values") {
  SpaceTimeGrid g(1.0, 0.0, 1.0, 2, 2);
  std::vector<double> values(9, 1.0);
  values[4] = std::nan("");
  CHECK_THROWS_AS(SampledField(g, std::move(values)), error);
}

TEST_CASE("build_scenario: zero field") {
  auto cfg = make_config("zero_field", 1.0, -1.0, 1.0, 8, 8);
  NearIncompressiblePair pair = build_scenario(cfg);
  CHECK(pair.C1 == 1.0);
  CHECK(pair.C2 == 1.0);
  CHECK(pair.b_max == 0.0);
  for (double v : pair.b.values()) CHECK(v == 0.0);
  for (double v : pair.rho.values()) CHECK(v == 1.0);
  CHECK(pair.continuity_residual == 0.0);
}

TEST_CASE("build_scenario: constant field") {
  auto cfg = make_config("constant_field", 1.0, -2.0, 2.0, 8, 8);
  cfg.c = 1.0;
  NearIncompressiblePair pair = build_scenario(cfg);
  CHECK(pair.b_max == 1.0);
  for (double v : pair.b.values()) CHECK(v == 1.0);
  for (double v : pair.rho.values()) CHECK(v == 1.0);
}

TEST_CASE("build_scenario: oscillatory generator node values") {
  auto cfg = make_config("hamiltonian_first", 1.0, -4.0, 4.0, 64, 64);
  NearIncompressiblePair pair = build_scenario(cfg);
  CHECK(pair.C1 == doctest::Approx(0.5));
  CHECK(pair.C2 == doctest::Approx(1.5));
  CHECK(pair.b_max == doctest::Approx(1.0));
  const SpaceTimeGrid& g = cfg.grid;
  for (int i = 0; i <= g.nt; i += 16) {
    for (int j = 0; j <= g.nx; j += 16) {
      const double t = g.time(i), x = g.pos(j);
      const double rho = 1.0 + 0.5 * std::cos(x - t);
      CHECK(pair.rho.at(i, j) == doctest::Approx(rho).epsilon(1e-15));
      CHECK(pair.b.at(i, j) ==
            doctest::Approx(0.5 * std::cos(x - t) / rho).epsilon(1e-15));
    }
  }
}

TEST_CASE("build_scenario rejects bad input") {
  auto cfg = make_config("no_such_kind", 1.0, -1.0, 1.0, 8, 8);
  CHECK_THROWS_WITH_AS(build_scenario(cfg),
                       doctest::Contains("unknown scenario kind"), error);

  auto bad = make_config("hamiltonian_first", 1.0, -1.0, 1.0, 8, 8);
  bad.amplitude = 1.0;  // density lower bound would hit zero
  CHECK_THROWS_AS(build_scenario(bad), error);

  auto coarse = make_config("oscillatory_n", 1.0, -2.0, 2.0, 8, 8);
  coarse.n = 64;  // dx far above pi/(8n)
  CHECK_THROWS_WITH_AS(build_scenario(coarse),
                       doctest::Contains("under-resolved"), error);
}

TEST_CASE("from_hamiltonian: closed-form samples") {
  SpaceTimeGrid g(1.0, -1.0, 1.0, 8, 8);

  HamiltonianGenerator identity{};  // H = x
  NearIncompressiblePair p0 = from_hamiltonian(identity, g);
  for (double v : p0.rho.values()) CHECK(v == 1.0);
  for (double v : p0.b.values()) CHECK(v == 0.0);

  HamiltonianGenerator linear{1.0, 0.0, 1.0};  // H = x - t
  NearIncompressiblePair p1 = from_hamiltonian(linear, g);
  for (double v : p1.rho.values()) CHECK(v == 1.0);
  for (double v : p1.b.values()) CHECK(v == 1.0);

  // H = x + sin(x-t)/2 at the origin: density 3/2, velocity 1/3
  HamiltonianGenerator wave{0.0, 0.5, 1.0};
  CHECK(wave.density(0.0, 0.0) == doctest::Approx(1.5).epsilon(1e-16));
  CHECK(wave.velocity(0.0, 0.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  HamiltonianGenerator degenerate{0.0, 1.0, 1.0};
  CHECK_THROWS_AS(from_hamiltonian(degenerate, g), error);
}

TEST_CASE("validate_pair: exact scenarios have zero residual") {
  auto zero = build_scenario(make_config("zero_field", 1.0, -1.0, 1.0, 8, 8));
  ValidationReport r0 = validate_pair(zero, 1e-12);
  CHECK(r0.continuity_residual == 0.0);
  CHECK(r0.pass);

  auto cfg = make_config("constant_field", 1.0, -2.0, 2.0, 8, 8);
  auto constant = build_scenario(cfg);
  ValidationReport r1 = validate_pair(constant, 1e-12);
  CHECK(r1.continuity_residual == 0.0);
  CHECK(r1.pass);
  CHECK(r1.b_sup == 1.0);
}

TEST_CASE("validate_pair: smooth scenario residual is second order") {
  auto c128 = make_config("hamiltonian_first", 1.0, -4.0, 4.0, 128, 128);
  auto c256 = make_config("hamiltonian_first", 1.0, -4.0, 4.0, 256, 256);
  const double r128 =
      validate_pair(build_scenario(c128), 1.0).continuity_residual;
  const double r256 =
      validate_pair(build_scenario(c256), 1.0).continuity_residual;

  // centered differences of an exact smooth solution: bounded by the
  // third-derivative scale and shrinking ~4x per refinement
  const SpaceTimeGrid& g = c256.grid;
  const double h2 = g.dx() * g.dx() + g.dt() * g.dt();
  CHECK(r256 <= 0.5 / 3.0 * h2);
  CHECK(r256 <= 1e-2);  // the default acceptance gate
  CHECK(r128 / r256 >= 3.0);
  CHECK(validate_pair(build_scenario(c256), 1e-2).pass);
}

TEST_CASE("validate_pair flags bounds violations") {
  auto pair = build_scenario(make_config("zero_field", 1.0, -1.0, 1.0, 8, 8));
  pair.C1 = 1.5;  // claim a bound the table does not satisfy
  ValidationReport r = validate_pair(pair, 1e-12);
  CHECK_FALSE(r.bounds_ok);
  CHECK_FALSE(r.pass);
}

TEST_CASE("generated pairs satisfy their declared bounds") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> amp(0.05, 0.8), freq(0.5, 3.0),
      drift(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    HamiltonianGenerator gen{drift(rng), amp(rng), freq(rng)};
    SpaceTimeGrid g(1.0, -3.0, 3.0, 48, 48);
    NearIncompressiblePair pair = from_hamiltonian(gen, g);
    ValidationReport r = validate_pair(pair, 1.0);
    CHECK(r.bounds_ok);
    CHECK(r.rho_min >= pair.C1 - 1e-12);
    CHECK(r.rho_max <= pair.C2 + 1e-12);
    CHECK(r.b_sup <= pair.b_max + 1e-12);
  }
}

TEST_CASE("initial datum profiles and integrals") {
  InitialDatum gauss = InitialDatum::gaussian(0.0, 0.5, 2.0);
  CHECK(gauss(0.0) == 2.0);
  CHECK(gauss(10.0) == 0.0);
  CHECK(gauss.compact_support());
  // closed-form mass against the full-line gaussian integral
  CHECK(gauss.integral(-10.0, 10.0) ==
        doctest::Approx(2.0 * 0.5 * std::sqrt(M_PI)).epsilon(1e-10));

  InitialDatum st = InitialDatum::step(0.0, 1.0);
  CHECK(st(-0.5) == 0.0);
  CHECK(st(0.0) == 0.0);
  CHECK(st(0.5) == 1.0);
  CHECK(st.integral(-1.0, 1.0) == doctest::Approx(1.0));
  CHECK_FALSE(st.compact_support());

  InitialDatum sing = InitialDatum::inv_sqrt(0.0, 10.0, 0.5);
  CHECK(sing(0.0) == 10.0);             // clipped at the singular point
  CHECK(sing(0.25) == doctest::Approx(2.0));
  CHECK(sing(0.7) == 0.0);              // outside the support window
  // exact integral: clip plateau of radius clip^-2 plus the 2*sqrt tails
  const double rc = 0.01;
  const double expected = 2.0 * (10.0 * rc + 2.0 * (std::sqrt(0.5) - 0.1));
  CHECK(sing.integral(-1.0, 1.0) == doctest::Approx(expected).epsilon(1e-12));
  // the unclipped profile carries more mass, 1/clip per side
  const double unclipped = 2.0 * 2.0 * std::sqrt(0.5);
  CHECK(sing.unclipped_integral(-1.0, 1.0) ==
        doctest::Approx(unclipped).epsilon(1e-12));
  CHECK(sing.unclipped_integral(-1.0, 1.0) > sing.integral(-1.0, 1.0));

  InitialDatum combo = InitialDatum::composite(
      {{2.0, InitialDatum::gaussian(-1.0, 0.3, 1.0)},
       {1.0, InitialDatum::gaussian(1.0, 0.3, 1.0)}});
  CHECK(combo(-1.0) == doctest::Approx(2.0));
  CHECK(combo(1.0) == doctest::Approx(1.0));
  CHECK(combo.integral(-5.0, 5.0) ==
        doctest::Approx(3.0 * 0.3 * std::sqrt(M_PI)).epsilon(1e-10));
}

TEST_CASE("config parsing: happy path and error cases") {
  const std::string good = R"(
# comment
[grid]
T = 1.0
x_min = -4.0
x_max = 4.0
nt = 64
nx = 64

[scenario]
kind = hamiltonian_first
amplitude = 0.5
wavenumber = 1.0
seed = 99
datum_kind = gaussian_bump
datum_center = 0.0
datum_width = 0.4
datum_height = 1.0

[tolerances]
continuity_tol = 1e-2
)";
  ScenarioConfig cfg = parse_scenario_config_text(good, "test");
  CHECK(cfg.kind == "hamiltonian_first");
  CHECK(cfg.grid.nt == 64);
  CHECK(cfg.seed == 99);
  CHECK(cfg.amplitude == 0.5);
  CHECK(cfg.tol.continuity.value() == 1e-2);
  CHECK_FALSE(cfg.tol.slope.has_value());

  CHECK_THROWS_WITH_AS(
      parse_scenario_config_text("[grid]\nT = 1\nx_min = 0\nx_max = 1\n"
                                 "nt = 4\nnx = 4\nbogus = 3\n"
                                 "[scenario]\nkind = zero_field\n",
                                 "test"),
      doctest::Contains("unknown key"), error);

  CHECK_THROWS_WITH_AS(
      parse_scenario_config_text("[grid]\nT = 1\nx_min = 0\nx_max = 1\n"
                                 "nt = 4\nnx = 4\n[scenario]\nkind = "
                                 "zero_field\n[mystery]\nk = 1\n",
                                 "test"),
      doctest::Contains("unknown section"), error);

  CHECK_THROWS_WITH_AS(
      parse_scenario_config_text("[scenario]\nkind = zero_field\n", "test"),
      doctest::Contains("missing [grid]"), error);

  CHECK_THROWS_WITH_AS(
      parse_scenario_config_text("[grid]\nT = 1\nx_min = 0\nx_max = 1\n"
                                 "nt = 4\nnx = 4\nnx = 5\n"
                                 "[scenario]\nkind = zero_field\n",
                                 "test"),
      doctest::Contains("duplicate key"), error);

  // keys that do not belong to the declared scenario kind are rejected
  CHECK_THROWS_WITH_AS(
      parse_scenario_config_text("[grid]\nT = 1\nx_min = 0\nx_max = 1\n"
                                 "nt = 4\nnx = 4\n"
                                 "[scenario]\nkind = zero_field\nc = 2\n",
                                 "test"),
      doctest::Contains("unknown key"), error);
}
