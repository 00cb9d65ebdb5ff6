#pragma once

#include <cstdint>

#include "hamflow/scenario.hpp"

namespace hamflow {

struct HamiltonianDiagnostics {
  double x_slope_min = 0.0;      // over all adjacent x-pairs, all slices
  double x_slope_max = 0.0;
  double t_slope_abs_max = 0.0;  // over all adjacent t-pairs, all columns
  double path_defect = 0.0;      // column integration vs density increment
};

// Potential of the pair: x-slopes reproduce the density, t-slopes the
// (negated) flux. Normalized to H(0, x_min) = 0.
struct HamiltonianField {
  SampledField H;
  double C1 = 1.0;
  double C2 = 1.0;
  double b_max = 0.0;
  HamiltonianDiagnostics diag;

  const SpaceTimeGrid& grid() const { return H.grid(); }
};

// Cumulative trapezoidal construction: the t=0 slice integrates rho(0,.)
// from x_min, each column then integrates -(rho b) in time. Throws if the
// resulting slopes leave [C1, C2] (x) or +-C2*b_max (t) by more than
// slope_tol, which signals that the input pair does not satisfy the
// continuity equation well enough.
HamiltonianField build_hamiltonian(const NearIncompressiblePair& pair,
                                   double slope_tol);

// Smoothed field on the sub-window where the kernel fits. Nodes align with
// the parent grid: local node (i, j) is parent node
// (i + i_offset, j + j_offset).
struct MollifiedHamiltonian {
  double eps = 0.0;
  SampledField field;
  int i_offset = 0;
  int j_offset = 0;
  double sup_diff = 0.0;     // sup |smoothed - original| over shared nodes
  double x_slope_min = 0.0;  // strict positivity is verified at build
};

// Convolution with the normalized product bump kernel of radius eps,
// restricted to the eps-shrunk sub-window [eps, T-eps] x
// [x_min+eps, x_max-eps] where the kernel support fits. On that window the
// even-reflection extension of the field to negative times never enters,
// so affine fields reproduce exactly.
MollifiedHamiltonian mollify(const HamiltonianField& H, double eps);

struct ConeReport {
  double worst_margin = 0.0;
  int i1 = 0, j1 = 0, i2 = 0, j2 = 0;  // pair attaining the worst margin
  long n_pairs = 0;
  bool pass = false;
};

// Checks |H(t',x') - H(t,x)| >= C1*(|x'-x| - b_max*|t'-t|) on a
// deterministic sample of node pairs outside the propagation cone.
ConeReport cone_bound_check(const HamiltonianField& H, double tol,
                            int n_random_pairs, std::uint64_t seed);

}  // namespace hamflow
