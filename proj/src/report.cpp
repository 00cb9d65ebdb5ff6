#include "hamflow/report.hpp"

#include <cstdio>
#include <memory>

namespace hamflow {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

struct File {
  std::FILE* f;
  explicit File(const std::string& path) : f(std::fopen(path.c_str(), "wb")) {
    require(f != nullptr, "cannot open '", path, "' for writing");
  }
  ~File() {
    if (f) std::fclose(f);
  }
  File(const File&) = delete;
  File& operator=(const File&) = delete;

  void line(const std::string& s) {
    std::fputs(s.c_str(), f);
    std::fputc('\n', f);
  }
};

}  // namespace

void write_solution_csv(const std::string& path, const TransportSolution& sol,
                        const SpaceTimeGrid& parent) {
  File out(path);
  out.line("t,x,u");
  const SpaceTimeGrid& pg = sol.u.grid();
  for (int i = 0; i <= pg.nt; ++i) {
    const std::string t = g17(pg.time(i));
    for (int jj = 0; jj <= pg.nx; ++jj) {
      out.line(t + "," + g17(parent.pos(sol.parent_col(jj))) + "," +
               g17(sol.u.at(i, jj)));
    }
  }
}

void write_flow_csvs(const std::string& dir, const FlowMap& flow) {
  const SpaceTimeGrid& g = flow.H.grid();
  {
    File out(dir + "/flow_x.csv");
    out.line("t,x,X,Xinv");
    const SpaceTimeGrid& pg = flow.X.grid();
    for (int i = 0; i <= pg.nt; ++i) {
      const std::string t = g17(g.time(i));
      for (int jj = 0; jj <= pg.nx; ++jj)
        out.line(t + "," + g17(g.pos(flow.parent_col(jj))) + "," +
                 g17(flow.X.at(i, jj)) + "," + g17(flow.Xinv.at(i, jj)));
    }
  }
  {
    File out(dir + "/flow_y.csv");
    out.line("t,h,Y");
    const SpaceTimeGrid& hg = flow.Y.grid();
    for (int i = 0; i <= hg.nt; ++i) {
      const std::string t = g17(g.time(i));
      for (int k = 0; k <= hg.nx; ++k)
        out.line(t + "," + g17(hg.pos(k)) + "," + g17(flow.Y.at(i, k)));
    }
  }
}

void write_decay_csv(const std::string& path,
                     const std::vector<DecayRow>& rows) {
  File out(path);
  out.line("eps,D,boundary_gap");
  for (const DecayRow& r : rows)
    out.line(g17(r.eps) + "," + g17(r.D) + "," + g17(r.boundary_gap));
}

void write_residual_csv(
    const std::string& path,
    const std::vector<std::pair<std::string, double>>& rows) {
  File out(path);
  out.line("test_id,residual");
  for (const auto& [id, r] : rows) out.line(id + "," + g17(r));
}

void write_observable_csv(const std::string& path,
                          const ObservableReport& rep) {
  File out(path);
  out.line("tau,I,target");
  for (const auto& [tau, I] : rep.values)
    out.line(g17(tau) + "," + g17(I) + "," + g17(rep.target));
}

void write_pushforward_csv(const std::string& path,
                           const PushforwardReport& rep) {
  File out(path);
  out.line("probe,t,level_defect,flow_defect");
  for (const auto& r : rep.rows)
    out.line(r.probe + "," + g17(r.t) + "," + g17(r.level_defect) + "," +
             g17(r.flow_defect));
}

void write_family_csv(const std::string& path, const FlowFamily& family,
                      const ModulusRecord& modulus) {
  require(modulus.per_member.size() == family.members.size(),
          "family report: modulus record does not match the family");
  File out(path);
  out.line("n,C1_meas,C2_meas,bmax_meas,TV_b,modulus_ratio,sup_dist_to_id");
  for (std::size_t m = 0; m < family.members.size(); ++m) {
    const FamilyMember& mem = family.members[m];
    out.line(std::to_string(mem.n) + "," + g17(mem.C1_meas) + "," +
             g17(mem.C2_meas) + "," + g17(mem.bmax_meas) + "," +
             g17(mem.tv_b) + "," + g17(modulus.per_member[m]) + "," +
             g17(mem.sup_dist_to_id));
  }
}

void write_summary_csv(const std::string& path,
                       const std::vector<SummaryRow>& rows) {
  File out(path);
  out.line("suite,name,value,pass");
  for (const SummaryRow& r : rows)
    out.line(r.suite + "," + r.name + "," + g17(r.value) + "," +
             (r.pass ? "1" : "0"));
}

}  // namespace hamflow
