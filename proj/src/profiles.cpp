#include "hamflow/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hamflow {

double poly_bump(double s) {
  if (std::abs(s) >= 1.0) return 0.0;
  const double q = 1.0 - s * s;
  return q * q * q;
}

double poly_bump_deriv(double s) {
  if (std::abs(s) >= 1.0) return 0.0;
  const double q = 1.0 - s * s;
  return -6.0 * s * q * q;
}

double Bump::operator()(double x) const {
  return height * poly_bump((x - center) / width);
}

double Bump::deriv(double x) const {
  return height * poly_bump_deriv((x - center) / width) / width;
}

double Probe::operator()(double x) const {
  const double u = (x - center) / width;
  switch (kind) {
    case Kind::triangle:
      return height * std::max(0.0, 1.0 - std::abs(u));
    case Kind::poly_bump:
      return height * poly_bump(u);
    case Kind::gaussian:
      if (std::abs(u) > 5.0) return 0.0;
      return height * std::exp(-u * u);
  }
  return 0.0;
}

double Probe::lo() const {
  return center - (kind == Kind::gaussian ? 5.0 : 1.0) * width;
}

double Probe::hi() const {
  return center + (kind == Kind::gaussian ? 5.0 : 1.0) * width;
}

double TestFunction::value(double t, double x) const {
  const double s = t / T;
  if (s > 1.0) return 0.0;
  const double g = time_factor == TimeFactor::affine_ramp ? 1.0 - s
                                                          : poly_bump(s);
  return space(x) * g;
}

double TestFunction::dt(double t, double x) const {
  const double s = t / T;
  if (s > 1.0) return 0.0;
  // one-sided derivative at t = T; only the value must vanish there
  const double gp = time_factor == TimeFactor::affine_ramp
                        ? -1.0
                        : poly_bump_deriv(std::min(s, 1.0));
  return space(x) * gp / T;
}

double TestFunction::dx(double t, double x) const {
  const double s = t / T;
  if (s > 1.0) return 0.0;
  const double g = time_factor == TimeFactor::affine_ramp ? 1.0 - s
                                                          : poly_bump(s);
  return space.deriv(x) * g;
}

InitialDatum InitialDatum::constant(double height) {
  InitialDatum d;
  d.kind_ = Kind::constant;
  d.height_ = height;
  d.compact_ = false;
  d.support_lo_ = -std::numeric_limits<double>::infinity();
  d.support_hi_ = std::numeric_limits<double>::infinity();
  return d;
}

InitialDatum InitialDatum::gaussian(double center, double width,
                                    double height) {
  require(width > 0, "gaussian datum: width must be positive");
  InitialDatum d;
  d.kind_ = Kind::gaussian_bump;
  d.center_ = center;
  d.width_ = width;
  d.height_ = height;
  d.compact_ = true;
  d.support_lo_ = center - 5.0 * width;
  d.support_hi_ = center + 5.0 * width;
  return d;
}

InitialDatum InitialDatum::step(double center, double height) {
  InitialDatum d;
  d.kind_ = Kind::step;
  d.center_ = center;
  d.height_ = height;
  d.compact_ = false;
  d.support_lo_ = center;
  d.support_hi_ = std::numeric_limits<double>::infinity();
  return d;
}

InitialDatum InitialDatum::inv_sqrt(double center, double clip,
                                    double halfwidth) {
  require(clip > 0, "inv_sqrt datum: clip level must be positive");
  require(halfwidth > 0, "inv_sqrt datum: halfwidth must be positive");
  InitialDatum d;
  d.kind_ = Kind::inv_sqrt_singularity;
  d.center_ = center;
  d.clip_ = clip;
  d.width_ = halfwidth;
  d.compact_ = true;
  d.support_lo_ = center - halfwidth;
  d.support_hi_ = center + halfwidth;
  return d;
}

InitialDatum InitialDatum::composite(
    std::vector<std::pair<double, InitialDatum>> parts) {
  require(!parts.empty(), "composite datum: needs at least one part");
  InitialDatum d;
  d.kind_ = Kind::composite;
  d.compact_ = true;
  d.support_lo_ = std::numeric_limits<double>::infinity();
  d.support_hi_ = -std::numeric_limits<double>::infinity();
  for (const auto& [w, p] : parts) {
    d.compact_ = d.compact_ && p.compact_support();
    d.support_lo_ = std::min(d.support_lo_, p.support_lo());
    d.support_hi_ = std::max(d.support_hi_, p.support_hi());
  }
  d.parts_ = std::move(parts);
  return d;
}

double InitialDatum::operator()(double x) const {
  switch (kind_) {
    case Kind::constant:
      return height_;
    case Kind::gaussian_bump: {
      const double u = (x - center_) / width_;
      if (std::abs(u) > 5.0) return 0.0;
      return height_ * std::exp(-u * u);
    }
    case Kind::step:
      return x > center_ ? height_ : 0.0;
    case Kind::inv_sqrt_singularity: {
      if (x < support_lo_ || x > support_hi_) return 0.0;
      const double r = std::abs(x - center_);
      if (r == 0.0) return clip_;
      return std::min(clip_, 1.0 / std::sqrt(r));
    }
    case Kind::composite: {
      double v = 0.0;
      for (const auto& [w, p] : parts_) v += w * p(x);
      return v;
    }
  }
  return 0.0;
}

namespace {

// integral of min(clip, s^{-1/2}) over [0, d], d >= 0
double inv_sqrt_half_integral(double d, double clip) {
  if (d <= 0.0) return 0.0;
  const double rc = 1.0 / (clip * clip);
  if (d <= rc) return clip * d;
  return 2.0 * std::sqrt(d) - 1.0 / clip;
}

double erf_integral(double a, double b, double center, double width,
                    double height) {
  const double u1 = std::clamp((a - center) / width, -5.0, 5.0);
  const double u2 = std::clamp((b - center) / width, -5.0, 5.0);
  const double sqrt_pi = 1.7724538509055160273;
  return height * width * 0.5 * sqrt_pi * (std::erf(u2) - std::erf(u1));
}

}  // namespace

double InitialDatum::integral(double a, double b) const {
  if (b < a) return -integral(b, a);
  switch (kind_) {
    case Kind::constant:
      return height_ * (b - a);
    case Kind::gaussian_bump:
      return erf_integral(a, b, center_, width_, height_);
    case Kind::step: {
      const double lo = std::max(a, center_);
      return lo < b ? height_ * (b - lo) : 0.0;
    }
    case Kind::inv_sqrt_singularity: {
      const double lo = std::max(a, support_lo_);
      const double hi = std::min(b, support_hi_);
      if (hi <= lo) return 0.0;
      auto G = [&](double x) {
        const double d = x - center_;
        const double s = d < 0 ? -1.0 : 1.0;
        return s * inv_sqrt_half_integral(std::abs(d), clip_);
      };
      return G(hi) - G(lo);
    }
    case Kind::composite: {
      double v = 0.0;
      for (const auto& [w, p] : parts_) v += w * p.integral(a, b);
      return v;
    }
  }
  return 0.0;
}

double InitialDatum::unclipped_integral(double a, double b) const {
  if (kind_ != Kind::inv_sqrt_singularity) return integral(a, b);
  if (b < a) return -unclipped_integral(b, a);
  const double lo = std::max(a, support_lo_);
  const double hi = std::min(b, support_hi_);
  if (hi <= lo) return 0.0;
  auto G = [&](double x) {
    const double d = x - center_;
    const double s = d < 0 ? -1.0 : 1.0;
    return s * 2.0 * std::sqrt(std::abs(d));
  };
  return G(hi) - G(lo);
}

bool InitialDatum::compact_support() const { return compact_; }

InitialDatum InitialDatum::with_clip(double clip) const {
  if (kind_ != Kind::inv_sqrt_singularity) return *this;
  return inv_sqrt(center_, clip, width_);
}

std::string InitialDatum::describe() const {
  switch (kind_) {
    case Kind::constant:
      return detail::concat("constant(height=", height_, ")");
    case Kind::gaussian_bump:
      return detail::concat("gaussian_bump(center=", center_,
                            ",width=", width_, ",height=", height_, ")");
    case Kind::step:
      return detail::concat("step(center=", center_, ",height=", height_, ")");
    case Kind::inv_sqrt_singularity:
      return detail::concat("inv_sqrt(center=", center_, ",clip=", clip_,
                            ",halfwidth=", width_, ")");
    case Kind::composite: {
      std::string s = "composite(";
      for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (i) s += " + ";
        s += detail::concat(parts_[i].first, "*", parts_[i].second.describe());
      }
      return s + ")";
    }
  }
  return "";
}

}  // namespace hamflow
