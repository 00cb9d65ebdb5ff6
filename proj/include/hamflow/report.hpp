#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hamflow/compactness.hpp"
#include "hamflow/transport.hpp"

namespace hamflow {

// 17-significant-digit decimal rendering; round-trip exact and stable
// across runs, which makes output bytes reproducible.
std::string g17(double v);

struct SummaryRow {
  std::string suite;
  std::string name;
  double value = 0.0;
  bool pass = true;
};

void write_solution_csv(const std::string& path, const TransportSolution& sol,
                        const SpaceTimeGrid& parent);
void write_flow_csvs(const std::string& dir, const FlowMap& flow);
void write_decay_csv(const std::string& path,
                     const std::vector<DecayRow>& rows);
void write_residual_csv(
    const std::string& path,
    const std::vector<std::pair<std::string, double>>& rows);
void write_observable_csv(const std::string& path,
                          const ObservableReport& rep);
void write_pushforward_csv(const std::string& path,
                           const PushforwardReport& rep);
void write_family_csv(const std::string& path, const FlowFamily& family,
                      const ModulusRecord& modulus);
void write_summary_csv(const std::string& path,
                       const std::vector<SummaryRow>& rows);

}  // namespace hamflow
