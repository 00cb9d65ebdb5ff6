#pragma once

#include <string>
#include <vector>

#include "hamflow/hamiltonian.hpp"

namespace hamflow {

// Level-set trajectories Y, the flow X and its inverse. X and Xinv are
// tabulated by exact inversion of the piecewise-linear slices of H, which
// keeps the compression and modulus bounds sharp; the Y table inverts a
// shape-preserving cubic slice model instead, so its time differences
// converge at second order. X and Xinv live on the padded sub-window whose
// levels stay inside the window for every t; Y spans the levels realized
// at every time slice.
struct FlowMap {
  HamiltonianField H;

  SampledField Y;     // node (i,k): trajectory of level h_k at time t_i
  SampledField X;     // node (i,jj): flow started at padded column jj
  SampledField Xinv;  // node (i,jj): inverse flow

  double h_lo = 0.0, h_hi = 0.0;
  int pad_cells = 0;  // parent columns clipped from each side of X/Xinv

  double L = 1.0;             // compression estimate, max density of X#Le
  double q_min = 1.0;         // X difference-quotient range
  double q_max = 1.0;
  double relation_residual = 0.0;  // max |H(t, X(t,x)) - H(0,x)|
  double identity_error = 0.0;     // max |X(0,x) - x|
  double h_lipschitz = 0.0;        // measured adjacent-level quotient of Y
  double t_lipschitz = 0.0;        // measured adjacent-time quotient of Y

  double C1 = 1.0, C2 = 1.0, b_max = 0.0;

  int parent_col(int jj) const { return jj + pad_cells; }
};

// Unique x with H(t,x) = h on the piecewise-linear slice; binary search for
// the bracketing cell, then exact linear inversion. Deterministic, and a
// node whose stored value equals h is returned exactly.
double invert_in_x(const HamiltonianField& H, double t, double h,
                   double atol = 1e-10);

FlowMap build_flow(const HamiltonianField& H);

struct OdeResidualReport {
  double centered_max = 0.0;  // |(Y(i+1)-Y(i-1))/(2dt) - b(t_i, Y(i))|
  double integral_max = 0.0;  // |Y(t) - Y(0) - trapz b(s, Y(s))|
};

OdeResidualReport ode_residual(const FlowMap& flow,
                               const NearIncompressiblePair& pair);

struct PushforwardReport {
  struct Row {
    std::string probe;
    double t = 0.0;
    double level_defect = 0.0;  // | int f(Y(t,h)) dh - int f(y) rho(t,y) dy |
    double flow_defect = 0.0;   // | int f(X(t,x)) rho(0,x) dx - same target |
  };
  std::vector<Row> rows;
  double level_defect_max = 0.0;
  double flow_defect_max = 0.0;
};

// Both sides of each identity are computed by independent trapezoidal
// quadratures; probes must be supported inside the padded sub-window.
PushforwardReport pushforward_check(const FlowMap& flow,
                                    const NearIncompressiblePair& pair,
                                    const std::vector<Probe>& probes,
                                    const std::vector<double>& times);

}  // namespace hamflow
