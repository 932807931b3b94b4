#pragma once

// Closed forms for a constant field plateau: the flow over a duration dt and
// its running time integral, for both geometries. These are the exact
// building blocks behind integrate_cell, the piecewise fast paths, the affine
// force terms and the exact time averages. Trig combinations that degenerate
// as beta -> 0 are routed through series kernels, so the free limit is
// seamless.

#include <cmath>

#include "magloop/evolution.hpp"

namespace magloop::detail {

inline constexpr double kSmallAngle = 1e-4;

// sin(x)/x
inline double sinc(double x) {
  if (std::abs(x) < kSmallAngle) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
  }
  return std::sin(x) / x;
}

// (1 - cos x)/x
inline double omc_over(double x) {
  if (std::abs(x) < kSmallAngle) {
    const double x2 = x * x;
    return x / 2.0 * (1.0 - x2 / 12.0 * (1.0 - x2 / 30.0));
  }
  return (1.0 - std::cos(x)) / x;
}

// (1 - cos x)/x^2
inline double omc_over_sq(double x) {
  if (std::abs(x) < kSmallAngle) {
    const double x2 = x * x;
    return 0.5 * (1.0 - x2 / 12.0 * (1.0 - x2 / 30.0));
  }
  return (1.0 - std::cos(x)) / (x * x);
}

// (x - sin x)/x^2
inline double xms_over_sq(double x) {
  if (std::abs(x) < kSmallAngle) {
    const double x2 = x * x;
    return x / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0));
  }
  return (x - std::sin(x)) / (x * x);
}

// Exact plateau flow of the 2x2 cell; same branches as the public cell_step.
inline Cell2 cell_flow(double beta, double dt) {
  Cell2 b;
  if (std::abs(beta) < 1e-12) {
    const double bh = beta * dt;
    b << 1.0, dt * (1.0 - bh * bh / 6.0), 0.0, 1.0;
    return b;
  }
  const double c = std::cos(beta * dt);
  const double s = std::sin(beta * dt);
  b << c, s / beta, -beta * s, c;
  return b;
}

// Assembles blocks of the form p I + q W, W = [[0, 1], [-1, 0]], into the
// (x, y, px, py) ordering. Both the pair rotation and twin cells have this
// block structure, hence so do their products and integrals.
inline Evolution4 from_pair_blocks(double p00, double q00, double p01,
                                   double q01, double p10, double q10,
                                   double p11, double q11) {
  Evolution4 u;
  u << p00, q00, p01, q01,
      -q00, p00, -q01, p01,
       p10, q10, p11, q11,
      -q10, p10, -q11, p11;
  return u;
}

// Cylindrical plateau flow: pair_rotation(beta dt) * twin(cell_flow).
inline Evolution4 cyl_flow(double beta, double dt) {
  const double theta = beta * dt;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const Cell2 b = cell_flow(beta, dt);
  return from_pair_blocks(b(0, 0) * c, b(0, 0) * s, b(0, 1) * c, b(0, 1) * s,
                          b(1, 0) * c, b(1, 0) * s, b(1, 1) * c, b(1, 1) * s);
}

// Integral over [0, dt] of cyl_flow(beta, s) ds.
inline Evolution4 cyl_flow_integral(double beta, double dt) {
  const double two_theta = 2.0 * beta * dt;
  const double half = 0.5 * dt;
  const double p00 = half * (1.0 + sinc(two_theta));
  const double q00 = half * omc_over(two_theta);
  const double p01 = dt * dt * omc_over_sq(two_theta);
  const double q01 = dt * dt * xms_over_sq(two_theta);
  const double p10 = -0.25 * (1.0 - std::cos(two_theta));
  const double q10 = -0.5 * beta * dt + 0.25 * std::sin(two_theta);
  return from_pair_blocks(p00, q00, p01, q01, p10, q10, p00, q00);
}

// Shear-gauge plateau flow: the kinetic pair (px + 2 beta y, py) rotates at
// frequency 2 beta while px is conserved and x accumulates the velocity.
inline Evolution4 landau_flow(double beta, double dt) {
  const double two_theta = 2.0 * beta * dt;
  const double c = std::cos(two_theta);
  const double s = std::sin(two_theta);
  const double s_over = dt * sinc(two_theta);      // sin(2 beta dt) / (2 beta)
  const double omc_over2b = dt * omc_over(two_theta);  // (1 - cos) / (2 beta)
  Evolution4 u;
  u << 1.0, s, s_over, omc_over2b,
       0.0, c, -omc_over2b, s_over,
       0.0, 0.0, 1.0, 0.0,
       0.0, -2.0 * beta * s, -s, c;
  return u;
}

// Integral over [0, dt] of landau_flow(beta, s) ds.
inline Evolution4 landau_flow_integral(double beta, double dt) {
  const double two_theta = 2.0 * beta * dt;
  const double int_s = dt * omc_over(two_theta);       // int sin(2 beta s)
  const double int_c = dt * sinc(two_theta);           // int cos(2 beta s)
  const double int_s_over = dt * dt * omc_over_sq(two_theta);
  const double int_omc_over = dt * dt * xms_over_sq(two_theta);
  Evolution4 u;
  u << dt, int_s, int_s_over, int_omc_over,
       0.0, int_c, -int_omc_over, int_s_over,
       0.0, 0.0, dt, 0.0,
       0.0, -(1.0 - std::cos(two_theta)), -int_s, int_c;
  return u;
}

inline Evolution4 geometry_flow(Geometry g, double beta, double dt) {
  return g == Geometry::cylindrical ? cyl_flow(beta, dt) : landau_flow(beta, dt);
}

inline Evolution4 geometry_flow_integral(Geometry g, double beta, double dt) {
  return g == Geometry::cylindrical ? cyl_flow_integral(beta, dt)
                                    : landau_flow_integral(beta, dt);
}

}  // namespace magloop::detail
