#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <variant>

#include "magloop/field_profile.hpp"

// Internal time-domain walkers shared by the integrators and the averagers.
// Programs act as periodic drives: piecewise windows beyond one duration wrap
// onto period images, and rotation angles reduce by whole periods.

namespace magloop::detail {

inline bool has_plateaus(const FieldProfile& p) {
  return std::holds_alternative<ConstantField>(p) ||
         std::holds_alternative<PiecewiseField>(p);
}

// Walks [t0, t1] along the global grid k / steps_per_unit. Anchoring every
// integration to the same grid makes split integrations reuse the midpoints
// of unsplit ones, so composition mismatches stay at the single-cell level.
template <class CellFn>
void for_each_grid_cell(double t0, double t1, int steps_per_unit, CellFn&& fn) {
  const double h = 1.0 / steps_per_unit;
  const double width_floor = 1e-12 * h;
  if (t1 - t0 <= width_floor) {
    if (t1 > t0) fn(t0, t1);
    return;
  }
  double a = t0;
  long long k = static_cast<long long>(std::floor(t0 * steps_per_unit)) + 1;
  for (;;) {
    double b = static_cast<double>(k) * h;
    if (b >= t1 - width_floor) b = t1;
    if (b - a > width_floor) fn(a, b);
    if (b >= t1) break;
    a = b;
    ++k;
  }
}

// Visits the constant plateaus overlapping [a, b] in time order. Windows may
// span any number of piecewise periods; negative times are rejected.
template <class SegFn>
void for_each_plateau(const FieldProfile& profile, double a, double b,
                      SegFn&& fn) {
  if (!(b > a)) return;
  if (const auto* c = std::get_if<ConstantField>(&profile)) {
    fn(c->beta, a, b);
    return;
  }
  const auto& pw = std::get<PiecewiseField>(profile);
  for (const FieldSegment& s : pw.segments) {
    if (!(s.dt > 0.0)) {
      throw std::invalid_argument("piecewise segment duration must be positive");
    }
  }
  const double total = pw.total_duration();
  const double slack = 64.0 * std::numeric_limits<double>::epsilon() *
                       std::max({1.0, total, std::abs(b)});
  if (a < -slack) {
    throw std::domain_error("plateau windows start at t >= 0");
  }
  double lo_w = std::max(a, 0.0);
  long long image = static_cast<long long>(std::floor(lo_w / total));
  while (lo_w < b) {
    const double base = static_cast<double>(image) * total;
    const double hi_w = std::min(b, base + total);
    double start = base;
    for (const FieldSegment& s : pw.segments) {
      const double lo = std::max(lo_w, start);
      const double hi = std::min(hi_w, start + s.dt);
      if (hi > lo) fn(s.beta, lo, hi);
      start += s.dt;
    }
    // Rounding overhang at a period edge belongs to the last segment.
    if (hi_w > start && hi_w - start <= slack && hi_w > lo_w) {
      fn(pw.segments.back().beta, std::max(lo_w, start), hi_w);
    }
    ++image;
    lo_w = hi_w;
  }
}

// gamma over [0, t] with piecewise programs extended periodically.
inline double periodic_gamma(const FieldProfile& profile, double t) {
  if (const auto* pw = std::get_if<PiecewiseField>(&profile)) {
    const double total = pw->total_duration();
    if (t > total) {
      const double k = std::floor(t / total);
      const double rem = std::clamp(t - k * total, 0.0, total);
      return k * gamma_integral(profile, total) + gamma_integral(profile, rem);
    }
  }
  return gamma_integral(profile, t);
}

}  // namespace magloop::detail
