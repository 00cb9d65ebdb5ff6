#include "hamflow/grid.hpp"

#include <algorithm>
#include <cmath>

namespace hamflow {

SpaceTimeGrid::SpaceTimeGrid(double T_, double x_min_, double x_max_, int nt_,
                             int nx_)
    : T(T_), x_min(x_min_), x_max(x_max_), nt(nt_), nx(nx_) {
  require(std::isfinite(T) && T > 0, "grid: T must be positive, got ", T);
  require(std::isfinite(x_min) && std::isfinite(x_max) && x_max > x_min,
          "grid: need x_max > x_min, got [", x_min, ", ", x_max, "]");
  require(nt >= 2, "grid: nt must be >= 2, got ", nt);
  require(nx >= 2, "grid: nx must be >= 2, got ", nx);
}

bool SpaceTimeGrid::same_as(const SpaceTimeGrid& o) const {
  return T == o.T && x_min == o.x_min && x_max == o.x_max && nt == o.nt &&
         nx == o.nx;
}

SampledField::SampledField(SpaceTimeGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  require(values_.size() ==
              static_cast<std::size_t>(grid_.n_times()) * grid_.n_pos(),
          "field: value table has ", values_.size(), " entries, expected ",
          grid_.n_times() * grid_.n_pos());
  for (double v : values_)
    require(std::isfinite(v), "field: non-finite node value ", v);
}

SampledField SampledField::from_function(
    const SpaceTimeGrid& grid, const std::function<double(double, double)>& f) {
  std::vector<double> v(static_cast<std::size_t>(grid.n_times()) *
                        grid.n_pos());
  std::size_t k = 0;
  for (int i = 0; i <= grid.nt; ++i)
    for (int j = 0; j <= grid.nx; ++j) v[k++] = f(grid.time(i), grid.pos(j));
  return SampledField(grid, std::move(v));
}

double SampledField::operator()(double t, double x) const {
  const SpaceTimeGrid& g = grid_;
  const double tc = std::clamp(t, 0.0, g.T);

  int i = static_cast<int>(std::floor(tc / g.dt()));
  i = std::clamp(i, 0, g.nt - 1);
  double wt;
  if (tc == g.time(i))
    wt = 0.0;
  else if (tc == g.time(i + 1))
    wt = 1.0;
  else
    wt = (tc - g.time(i)) / g.dt();

  // constant-in-x extension: clamp to the nearest boundary column
  if (x <= g.x_min) return (1.0 - wt) * at(i, 0) + wt * at(i + 1, 0);
  if (x >= g.x_max) return (1.0 - wt) * at(i, g.nx) + wt * at(i + 1, g.nx);

  int j = static_cast<int>(std::floor((x - g.x_min) / g.dx()));
  j = std::clamp(j, 0, g.nx - 1);
  double wx;
  if (x == g.pos(j))
    wx = 0.0;
  else if (x == g.pos(j + 1))
    wx = 1.0;
  else
    wx = (x - g.pos(j)) / g.dx();

  const double v0 = (1.0 - wx) * at(i, j) + wx * at(i, j + 1);
  const double v1 = (1.0 - wx) * at(i + 1, j) + wx * at(i + 1, j + 1);
  return (1.0 - wt) * v0 + wt * v1;
}

double SampledField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace hamflow
