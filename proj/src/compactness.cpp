#include "hamflow/compactness.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace hamflow {

FlowFamily oscillatory_family(const std::vector<int>& n_list,
                              const SpaceTimeGrid& grid) {
  require(!n_list.empty(), "oscillatory_family: n list is empty");
  int n_max = 0;
  for (int n : n_list) {
    require(n >= 0, "oscillatory_family: member index must be >= 0");
    n_max = std::max(n_max, n);
  }
  if (n_max > 0) {
    const double limit = M_PI / (8.0 * n_max);
    require(grid.dx() <= limit && grid.dt() <= limit,
            "oscillatory_family: oscillation under-resolved, need dx and dt "
            "<= ",
            limit, " for n = ", n_max);
  }

  FlowFamily fam;
  fam.grid = grid;
  fam.C1 = 0.5;
  fam.C2 = 1.5;
  fam.b_max = 1.0;

  const double t_a = 0.1 * grid.T;
  const double t_b = 0.9 * grid.T;
  const double x_a = grid.x_min + fam.b_max * grid.T + 0.1;
  const double x_b = grid.x_max - fam.b_max * grid.T - 0.1;
  require(x_a < x_b,
          "oscillatory_family: window too small for the compact set K");
  fam.i_a = static_cast<int>(std::ceil(t_a / grid.dt() - 1e-12));
  fam.i_b = static_cast<int>(std::floor(t_b / grid.dt() + 1e-12));
  fam.j_a =
      static_cast<int>(std::ceil((x_a - grid.x_min) / grid.dx() - 1e-12));
  fam.j_b =
      static_cast<int>(std::floor((x_b - grid.x_min) / grid.dx() + 1e-12));

  for (int n : n_list) {
    HamiltonianGenerator gen;
    if (n > 0) {
      gen.amp = 0.5;
      gen.freq = n;
    }
    NearIncompressiblePair pair = from_hamiltonian(gen, grid);
    const ResolvedTolerances tol = resolve_tolerances({}, grid, gen);
    HamiltonianField H = build_hamiltonian(pair, tol.slope);
    FlowMap flow = build_flow(H);
    require(fam.j_a >= flow.pad_cells && fam.j_b <= grid.nx - flow.pad_cells,
            "oscillatory_family: K leaves the padded region of member n = ",
            n);

    FamilyMember m;
    m.n = n;
    const ValidationReport rep = validate_pair(pair, 1.0);
    m.C1_meas = rep.rho_min;
    m.C2_meas = rep.rho_max;
    m.bmax_meas = rep.b_sup;

    // time-integrated x-variation of the velocity over the window
    for (int i = 0; i <= grid.nt; ++i) {
      double tv = 0.0;
      for (int j = 0; j < grid.nx; ++j)
        tv += std::abs(pair.b.at(i, j + 1) - pair.b.at(i, j));
      m.tv_b += (i == 0 || i == grid.nt ? 0.5 : 1.0) * tv;
    }
    m.tv_b *= grid.dt();

    m.XK.resize(static_cast<std::size_t>(fam.i_b - fam.i_a + 1) *
                (fam.j_b - fam.j_a + 1));
    std::size_t k = 0;
    for (int i = fam.i_a; i <= fam.i_b; ++i) {
      for (int j = fam.j_a; j <= fam.j_b; ++j) {
        const double x = flow.X.at(i, j - flow.pad_cells);
        m.XK[k++] = x;
        m.sup_dist_to_id =
            std::max(m.sup_dist_to_id, std::abs(x - grid.pos(j)));
      }
    }
    fam.members.push_back(std::move(m));
  }
  return fam;
}

ModulusRecord equicontinuity_modulus(const FlowFamily& fam, double tol,
                                     int n_random_pairs, std::uint64_t seed) {
  const SpaceTimeGrid& g = fam.grid;
  const double slope = fam.C2 / fam.C1;
  const int rows = fam.k_rows();
  const int cols = fam.k_cols();
  const double dx = g.dx();
  const double dt = g.dt();

  ModulusRecord rec;
  rec.worst_ratio = 0.0;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_r(0, rows - 1), pick_c(0, cols - 1);

  for (const FamilyMember& m : fam.members) {
    double worst = 0.0;

    // all same-time pairs
    for (int r = 0; r < rows; ++r) {
      const double* row = m.XK.data() + static_cast<std::size_t>(r) * cols;
      for (int c1 = 0; c1 < cols; ++c1) {
        const double x1 = row[c1];
        for (int c2 = c1 + 1; c2 < cols; ++c2) {
          const double ratio =
              std::abs(row[c2] - x1) / (slope * (c2 - c1) * dx);
          if (ratio > worst) worst = ratio;
        }
      }
      rec.pairs_checked += static_cast<long>(cols) * (cols - 1) / 2;
    }

    // all same-position pairs
    for (int c = 0; c < cols; ++c) {
      for (int r1 = 0; r1 < rows; ++r1) {
        const double x1 = m.XK[static_cast<std::size_t>(r1) * cols + c];
        for (int r2 = r1 + 1; r2 < rows; ++r2) {
          const double x2 = m.XK[static_cast<std::size_t>(r2) * cols + c];
          const double ratio =
              std::abs(x2 - x1) / (fam.b_max * (r2 - r1) * dt);
          if (ratio > worst) worst = ratio;
        }
      }
      rec.pairs_checked += static_cast<long>(rows) * (rows - 1) / 2;
    }

    // seeded diagonal pairs
    for (int k = 0; k < n_random_pairs; ++k) {
      const int r1 = pick_r(rng), r2 = pick_r(rng);
      const int c1 = pick_c(rng), c2 = pick_c(rng);
      if (r1 == r2 && c1 == c2) continue;
      const double x1 = m.XK[static_cast<std::size_t>(r1) * cols + c1];
      const double x2 = m.XK[static_cast<std::size_t>(r2) * cols + c2];
      const double denom = slope * std::abs(c2 - c1) * dx +
                           fam.b_max * std::abs(r2 - r1) * dt;
      const double ratio = std::abs(x2 - x1) / denom;
      if (ratio > worst) worst = ratio;
      ++rec.pairs_checked;
    }

    rec.per_member.push_back(worst);
    if (worst > rec.worst_ratio) {
      rec.worst_ratio = worst;
      rec.worst_member = m.n;
    }
  }
  rec.pass = rec.worst_ratio <= 1.0 + tol;
  return rec;
}

ChainResult extract_convergent(const FlowFamily& fam, double delta) {
  require(fam.members.size() >= 2,
          "extract_convergent: family needs at least 2 members");
  require(delta > 0.0, "extract_convergent: delta must be positive");

  const int n = static_cast<int>(fam.members.size());
  ChainResult res;
  res.pairwise_d.resize(n - 1);
  for (int m = 0; m + 1 < n; ++m) {
    double d = 0.0;
    const std::vector<double>& a = fam.members[m].XK;
    const std::vector<double>& b = fam.members[m + 1].XK;
    for (std::size_t k = 0; k < a.size(); ++k)
      d = std::max(d, std::abs(a[k] - b[k]));
    res.pairwise_d[m] = d;
  }

  int start = n - 1;
  while (start > 0 && res.pairwise_d[start - 1] <= delta) --start;
  if (start < n - 1) {
    for (int m = start; m < n; ++m) res.chain.push_back(m);
    res.limit_index = n - 1;
    res.found = true;
  }
  return res;
}

}  // namespace hamflow
