#pragma once

#include <utility>

#include "magloop/evolution.hpp"
#include "magloop/floquet.hpp"

namespace magloop {

// Coefficient row of a linear observable c . q on q = (x, y, px, py).
using LinearObservable = Eigen::RowVector4d;

// [a . q, b . q] = i kappa with kappa = a J b^T.
double commutator(const LinearObservable& a, const LinearObservable& b);

inline constexpr double kDefaultVanishTol = 1e-6;

// Time-averaged observables of a closed evolution. cX and cY are the averaged
// x and y rows; kappa their commutator coefficient. vanishing is true when
// both row norms fall below the vanish tolerance, in which case the process
// has no distinguished center at all.
struct CenterReport {
  LinearObservable cX = LinearObservable::Zero();
  LinearObservable cY = LinearObservable::Zero();
  double kappa = 0.0;
  bool vanishing = false;
};

// (1/L) integral of u(t) over [window_start, window_start + window_len].
// Plateau programs are averaged in closed form; smooth programs use the
// trapezoid rule on the integration grid, which is spectrally accurate over
// full periods of a closed process.
Evolution4 time_average_matrix(const FieldProfile& profile, Geometry geometry,
                               double window_start, double window_len,
                               int steps_per_unit = kDefaultStepsPerUnit);

// Averaged x and y rows over one profile period starting at window_start.
// For a loop the result does not depend on window_start; otherwise it names
// the Floquet point of the window.
std::pair<LinearObservable, LinearObservable> floquet_point(
    const FieldProfile& profile, Geometry geometry, double window_start,
    int steps_per_unit = kDefaultStepsPerUnit);

// Center observables of a loop closing after n_periods profile periods.
// Requires || u(n_periods * period) - I ||_F < closure_tol; a non-loop input
// is rejected with a hint to use floquet_point instead.
CenterReport loop_center(const FieldProfile& profile, Geometry geometry,
                         int n_periods,
                         int steps_per_unit = kDefaultStepsPerUnit,
                         double closure_tol = kDefaultClosureTol,
                         double vanish_tol = kDefaultVanishTol);

// Drift velocity of the center under a constant force F, from the commutator
// matrix of the center pair: v_l = sum_k kappa_kl F_k, i.e.
// v = (-kappa Fy, kappa Fx) for the scalar kappa of an (X, Y) pair.
Force2 drift_velocity(const CenterReport& report, const Force2& force);

}  // namespace magloop
