#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hamflow/flow.hpp"

namespace hamflow {

// Weak solution sampled on the padded sub-window of the scenario grid.
struct TransportSolution {
  SampledField u;
  std::string datum_desc;
  std::string source;  // "pushforward" | "fv_upwind"
  int pad_cells = 0;   // parent column of local column 0
  double mass_lo = 0.0, mass_hi = 0.0;  // conservation reporting window

  int parent_col(int jj) const { return jj + pad_cells; }
};

// u(t,x) = u0(Xinv(t,x)) * rho(t,x) / rho(0, Xinv(t,x)), evaluated at the
// padded nodes. u0 is any pointwise-evaluable initial profile.
TransportSolution solve_cauchy_fn(const NearIncompressiblePair& pair,
                                  const FlowMap& flow,
                                  const std::function<double(double)>& u0,
                                  const std::string& desc);

TransportSolution solve_cauchy(const NearIncompressiblePair& pair,
                               const FlowMap& flow, const InitialDatum& datum);

// residual of the space-time weak form against each test function
std::vector<double> weak_residual(const TransportSolution& sol,
                                  const NearIncompressiblePair& pair,
                                  const std::vector<TestFunction>& tests);

struct ObservableReport {
  std::vector<std::pair<double, double>> values;  // (tau, I(tau))
  double target = 0.0;                            // quadrature at t = 0
  double max_drift = 0.0;
};

// I(tau) = int u(tau,x) f(H(tau,x)) dx; time-invariant for weak solutions.
ObservableReport conserved_observable(const TransportSolution& sol,
                                      const HamiltonianField& H,
                                      const Bump& level_profile,
                                      const std::vector<double>& times);

struct DecayRow {
  double eps = 0.0;
  double D = 0.0;             // |int_0^tau int u (dt phi + b dx phi)|
  double boundary_gap = 0.0;  // |int u(tau) phi(tau) - int u(0) phi(0)|
};

// Tests the transport derivative of phi_eps = f(H_eps) for a shrinking
// family of smoothing radii; D must decay as eps -> 0.
std::vector<DecayRow> uniqueness_probe(const NearIncompressiblePair& pair,
                                       const HamiltonianField& H,
                                       const FlowMap& flow,
                                       const std::vector<double>& eps_list,
                                       const Bump& level_profile, double tau,
                                       const TransportSolution* solution =
                                           nullptr);

struct CrossValidationReport {
  std::vector<std::pair<double, double>> fv_l1;    // (t, L1 distance)
  std::vector<std::pair<double, double>> char_l1;  // (t, L1 distance)
  double fv_l1_max = 0.0;
  double char_l1_max = 0.0;
};

// L1 distances over the padded region between the pushforward solution and
// the selected independent solvers at a fixed set of times.
CrossValidationReport cross_validate(const NearIncompressiblePair& pair,
                                     const FlowMap& flow,
                                     const InitialDatum& datum, bool use_fv,
                                     bool use_characteristics,
                                     int char_steps = 256);

}  // namespace hamflow
