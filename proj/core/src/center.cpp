#include "magloop/center.hpp"

#include <cmath>
#include <stdexcept>

#include "segment_forms.hpp"
#include "time_grid.hpp"

namespace magloop {

namespace {

// Exact average of u(t, 0) over [t0, t1] for plateau programs: the integral
// over each plateau piece is [int_0^w flow(s) ds] * u(piece start, 0).
Evolution4 plateau_average(const FieldProfile& profile, Geometry g, double t0,
                           double t1) {
  Evolution4 prefix = Evolution4::Identity();
  detail::for_each_plateau(profile, 0.0, t0,
                           [&](double beta, double lo, double hi) {
    prefix = detail::geometry_flow(g, beta, hi - lo) * prefix;
  });
  Evolution4 acc = Evolution4::Zero();
  detail::for_each_plateau(profile, t0, t1,
                           [&](double beta, double lo, double hi) {
    const double w = hi - lo;
    acc += detail::geometry_flow_integral(g, beta, w) * prefix;
    prefix = detail::geometry_flow(g, beta, w) * prefix;
  });
  return acc / (t1 - t0);
}

// Trapezoid average on the integration grid, sampling u(t) exactly as the
// integrators build it. Over whole periods of a closed process the trapezoid
// rule on a periodic integrand converges spectrally, so the step error of the
// samples dominates.
Evolution4 stepped_average(const FieldProfile& profile, Geometry g, double t0,
                           double t1, int spu) {
  Cell2 cell = Cell2::Identity();
  Evolution4 u = Evolution4::Identity();
  const bool cyl = g == Geometry::cylindrical;
  auto advance = [&](double a, double b) {
    const double beta = beta_at(profile, 0.5 * (a + b));
    if (cyl) {
      cell = detail::cell_flow(beta, b - a) * cell;
    } else {
      u = detail::landau_flow(beta, b - a) * u;
    }
  };
  auto sample = [&](double t) {
    return cyl ? pair_rotation(gamma_integral(profile, t)) * twin_cells(cell)
               : u;
  };
  detail::for_each_grid_cell(0.0, t0, spu, advance);
  Evolution4 acc = Evolution4::Zero();
  Evolution4 prev = sample(t0);
  detail::for_each_grid_cell(t0, t1, spu, [&](double a, double b) {
    advance(a, b);
    const Evolution4 next = sample(b);
    acc += (0.5 * (b - a)) * (prev + next);
    prev = next;
  });
  return acc / (t1 - t0);
}

}  // namespace

double commutator(const LinearObservable& a, const LinearObservable& b) {
  return a * symplectic_form() * b.transpose();
}

Evolution4 time_average_matrix(const FieldProfile& profile, Geometry geometry,
                               double window_start, double window_len,
                               int steps_per_unit) {
  if (!(window_len > 0.0)) {
    throw std::invalid_argument("averaging window must have positive length");
  }
  if (steps_per_unit < 1) {
    throw std::invalid_argument("steps_per_unit must be positive");
  }
  if (!(window_start >= 0.0)) {
    throw std::invalid_argument("averaging window must start at t >= 0");
  }
  if (detail::has_plateaus(profile)) {
    return plateau_average(profile, geometry, window_start,
                           window_start + window_len);
  }
  return stepped_average(profile, geometry, window_start,
                         window_start + window_len, steps_per_unit);
}

std::pair<LinearObservable, LinearObservable> floquet_point(
    const FieldProfile& profile, Geometry geometry, double window_start,
    int steps_per_unit) {
  const Evolution4 avg =
      time_average_matrix(profile, geometry, window_start,
                          profile_period(profile), steps_per_unit);
  return {avg.row(0), avg.row(1)};
}

CenterReport loop_center(const FieldProfile& profile, Geometry geometry,
                         int n_periods, int steps_per_unit, double closure_tol,
                         double vanish_tol) {
  if (n_periods < 1) {
    throw std::invalid_argument("n_periods must be positive");
  }
  const double span = profile_period(profile) * n_periods;
  const Evolution4 u =
      evolution_matrix(profile, geometry, span, steps_per_unit);
  const double residual = (u - Evolution4::Identity()).norm();
  if (!(residual < closure_tol)) {
    throw std::invalid_argument(
        "process does not close after n_periods; use floquet_point for open "
        "windows");
  }
  const Evolution4 avg =
      time_average_matrix(profile, geometry, 0.0, span, steps_per_unit);
  CenterReport report;
  report.cX = avg.row(0);
  report.cY = avg.row(1);
  report.kappa = commutator(report.cX, report.cY);
  report.vanishing =
      report.cX.norm() < vanish_tol && report.cY.norm() < vanish_tol;
  return report;
}

Force2 drift_velocity(const CenterReport& report, const Force2& force) {
  return {-report.kappa * force(1), report.kappa * force(0)};
}

}  // namespace magloop
