#pragma once

#include <functional>
#include <vector>

#include "hamflow/common.hpp"

namespace hamflow {

// Uniform node-centered discretization of [0,T] x [x_min,x_max].
// Node (i,j) sits at (i*dt, x_min + j*dx); coordinates are computed by
// multiplication so they carry no accumulated rounding.
struct SpaceTimeGrid {
  double T = 1.0;
  double x_min = 0.0;
  double x_max = 1.0;
  int nt = 2;
  int nx = 2;

  SpaceTimeGrid() = default;
  SpaceTimeGrid(double T_, double x_min_, double x_max_, int nt_, int nx_);

  double dt() const { return T / nt; }
  double dx() const { return (x_max - x_min) / nx; }
  double time(int i) const { return i * dt(); }
  double pos(int j) const { return x_min + j * dx(); }
  int n_times() const { return nt + 1; }
  int n_pos() const { return nx + 1; }
  bool same_as(const SpaceTimeGrid& o) const;
};

// Node table over a SpaceTimeGrid. Evaluation uses bilinear interpolation
// inside the window and constant-in-x extension outside; t is clamped to
// [0,T]. Evaluation at a node returns the stored value exactly.
class SampledField {
 public:
  SampledField() = default;
  SampledField(SpaceTimeGrid grid, std::vector<double> values);

  static SampledField from_function(
      const SpaceTimeGrid& grid,
      const std::function<double(double, double)>& f);

  const SpaceTimeGrid& grid() const { return grid_; }

  double at(int i, int j) const { return values_[idx(i, j)]; }
  double& at(int i, int j) { return values_[idx(i, j)]; }

  double operator()(double t, double x) const;

  const double* row(int i) const { return values_.data() + idx(i, 0); }
  const std::vector<double>& values() const { return values_; }

  double max_abs() const;

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * (grid_.nx + 1) + j;
  }

  SpaceTimeGrid grid_;
  std::vector<double> values_;
};

}  // namespace hamflow
