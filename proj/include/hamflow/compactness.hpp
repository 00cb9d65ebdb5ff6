#pragma once

#include <cstdint>
#include <vector>

#include "hamflow/flow.hpp"

namespace hamflow {

// One member of an oscillatory flow family: measured field statistics plus
// the flow table restricted to the shared compact evaluation set K.
struct FamilyMember {
  int n = 0;
  double C1_meas = 0.0, C2_meas = 0.0, bmax_meas = 0.0;
  double tv_b = 0.0;            // time-integrated x-variation of b
  double sup_dist_to_id = 0.0;  // sup over K of |X_n - id|
  std::vector<double> XK;       // row-major over the K nodes
};

// Flow family with uniform density and velocity bounds, evaluated on
// K = [0.1 T, 0.9 T] x [x_min + b_max T + 0.1, x_max - b_max T - 0.1].
struct FlowFamily {
  std::vector<FamilyMember> members;
  SpaceTimeGrid grid;
  double C1 = 0.5, C2 = 1.5, b_max = 1.0;
  int i_a = 0, i_b = 0;  // K time-node range (parent indices)
  int j_a = 0, j_b = 0;  // K space-node range (parent indices)

  int k_rows() const { return i_b - i_a + 1; }
  int k_cols() const { return j_b - j_a + 1; }
  double k_value(const FamilyMember& m, int r, int c) const {
    return m.XK[static_cast<std::size_t>(r) * k_cols() + c];
  }
};

// Members generated from the wavenumber-n oscillatory Hamiltonian; n = 0 is
// the identity member. Grid must resolve the finest oscillation:
// dx, dt <= pi / (8 max n).
FlowFamily oscillatory_family(const std::vector<int>& n_list,
                              const SpaceTimeGrid& grid);

struct ModulusRecord {
  double worst_ratio = 0.0;
  int worst_member = 0;  // n of the member attaining the worst ratio
  long pairs_checked = 0;
  bool pass = false;
  std::vector<double> per_member;  // worst ratio per member, family order
};

// Worst |dX| / ((C2/C1)|dx| + b_max|dt|) over all axis-aligned K node pairs
// plus seeded random diagonal pairs.
ModulusRecord equicontinuity_modulus(const FlowFamily& family, double tol,
                                     int n_random_pairs = 10000,
                                     std::uint64_t seed = 12345);

struct ChainResult {
  std::vector<int> chain;        // member indices, increasing
  int limit_index = -1;          // final member of the chain
  bool found = false;
  std::vector<double> pairwise_d;  // sup distance between consecutive members
};

// Longest suffix run of members whose consecutive sup-norm distances on K
// stay within delta; the last member is the limit candidate.
ChainResult extract_convergent(const FlowFamily& family, double delta);

}  // namespace hamflow
