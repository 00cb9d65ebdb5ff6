#pragma once

#include <string>
#include <vector>

#include "hamflow/common.hpp"

namespace hamflow {

// C^2 polynomial bump (1-s^2)^3 on |s|<1, zero outside. Closed-form
// derivative, so test functions built from it need no numerical
// differentiation.
double poly_bump(double s);
double poly_bump_deriv(double s);

// mass of poly_bump over [-1,1]
inline constexpr double kPolyBumpMass = 32.0 / 35.0;

// height * poly_bump((x - center)/width); support [center-width, center+width]
struct Bump {
  double center = 0.0;
  double width = 1.0;
  double height = 1.0;

  double operator()(double x) const;
  double deriv(double x) const;
  double lo() const { return center - width; }
  double hi() const { return center + width; }
};

// Value-only profiles used by measure-transport quadrature checks.
struct Probe {
  enum class Kind { triangle, poly_bump, gaussian };

  Kind kind = Kind::poly_bump;
  double center = 0.0;
  double width = 1.0;
  double height = 1.0;
  std::string name;

  double operator()(double x) const;
  // gaussians are truncated at 5 widths so every probe has compact support
  double lo() const;
  double hi() const;
};

// Space-time test function phi(t,x) = height * poly_bump((x-c)/w) * g(t/T).
// The time factor g is either the affine ramp 1-s (whose time integral the
// trapezoidal rule reproduces exactly) or the smooth one-sided cutoff
// (1-s^2)^3; both vanish at t = T, so phi is admissible in the weak form.
struct TestFunction {
  enum class TimeFactor { affine_ramp, smooth_cutoff };

  std::string id;
  Bump space;
  TimeFactor time_factor = TimeFactor::smooth_cutoff;
  double T = 1.0;

  double value(double t, double x) const;
  double dt(double t, double x) const;
  double dx(double t, double x) const;
};

// Initial condition descriptors. Pointwise evaluable everywhere; the
// inverse-square-root kind stores a clipped profile together with the
// unclipped one it stands for.
class InitialDatum {
 public:
  enum class Kind { constant, gaussian_bump, step, inv_sqrt_singularity,
                    composite };

  InitialDatum() : kind_(Kind::constant), height_(0.0) {}

  static InitialDatum constant(double height);
  static InitialDatum gaussian(double center, double width, double height);
  static InitialDatum step(double center, double height);
  static InitialDatum inv_sqrt(double center, double clip, double halfwidth);
  static InitialDatum composite(std::vector<std::pair<double, InitialDatum>> parts);

  double operator()(double x) const;

  // exact integral of the (clipped) profile over [a,b]
  double integral(double a, double b) const;
  // integral of the modeled unclipped profile; differs from integral() only
  // for the inverse-square-root kind
  double unclipped_integral(double a, double b) const;

  bool compact_support() const;
  double support_lo() const { return support_lo_; }
  double support_hi() const { return support_hi_; }

  Kind kind() const { return kind_; }
  double clip() const { return clip_; }
  InitialDatum with_clip(double clip) const;

  std::string describe() const;

 private:
  Kind kind_;
  double center_ = 0.0;
  double width_ = 1.0;
  double height_ = 1.0;
  double clip_ = 0.0;
  double support_lo_ = 0.0;
  double support_hi_ = 0.0;
  bool compact_ = false;
  std::vector<std::pair<double, InitialDatum>> parts_;
};

}  // namespace hamflow
