#include "magloop/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace magloop {

namespace {

StabilityClass classify(double tr, double threshold_tol) {
  if (std::abs(tr - 2.0) < threshold_tol) return StabilityClass::threshold_plus;
  if (std::abs(tr + 2.0) < threshold_tol) return StabilityClass::threshold_minus;
  if (tr > 2.0) return StabilityClass::resonant_plus;
  if (tr < -2.0) return StabilityClass::resonant_minus;
  return StabilityClass::stable;
}

double family_trace(MapFamily family, double p1, double p2, int spu) {
  const FieldProfile p = family_profile(family, p1, p2);
  return integrate_cell(p, 0.0, profile_period(p), spu).trace();
}

// Bisects fn over a bracketing interval until |fn| < tol or the interval
// collapses to rounding; returns the final midpoint.
template <class Fn>
double bisect_root(Fn&& fn, double lo, double hi, double flo, double fhi,
                   double tol) {
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double fm = fn(mid);
    if (std::abs(fm) < tol) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  return mid;
}

SeparatrixPoint classify_threshold(MapFamily family, double p1, double p2,
                                   int branch_sign, int spu, double zero_tol) {
  SeparatrixPoint pt;
  pt.p1 = p1;
  pt.p2 = p2;
  pt.branch_sign = branch_sign;
  const FieldProfile p = family_profile(family, p1, p2);
  pt.b1 = integrate_cell(p, 0.0, profile_period(p), spu);
  const double ab12 = std::abs(pt.b1(0, 1));
  const double ab21 = std::abs(pt.b1(1, 0));
  if (ab12 <= ab21 && ab12 < zero_tol) {
    pt.kind = ThresholdKind::kick;
    pt.value = -branch_sign * pt.b1(1, 0);
  } else if (ab21 < ab12 && ab21 < zero_tol) {
    pt.kind = ThresholdKind::free_evolution;
    pt.value = branch_sign * pt.b1(0, 1);
  } else {
    pt.kind = ThresholdKind::mixed;
    pt.value = 0.0;
  }
  pt.window = family == MapFamily::harmonic ? SymmetryWindow::centered
                                            : SymmetryWindow::symmetric;
  return pt;
}

void require_branch_sign(int branch_sign) {
  if (branch_sign != 1 && branch_sign != -1) {
    throw std::invalid_argument("branch_sign must be +1 or -1");
  }
}

}  // namespace

std::string_view stability_name(StabilityClass c) {
  switch (c) {
    case StabilityClass::stable:
      return "stable";
    case StabilityClass::threshold_plus:
      return "threshold_plus";
    case StabilityClass::threshold_minus:
      return "threshold_minus";
    case StabilityClass::resonant_plus:
      return "resonant_plus";
    case StabilityClass::resonant_minus:
      return "resonant_minus";
  }
  return "stable";
}

std::string_view threshold_kind_name(ThresholdKind k) {
  switch (k) {
    case ThresholdKind::kick:
      return "kick";
    case ThresholdKind::free_evolution:
      return "free_evolution";
    case ThresholdKind::mixed:
      return "mixed";
  }
  return "mixed";
}

FloquetReport floquet_report(const FieldProfile& profile, int steps_per_unit,
                             double threshold_tol) {
  const double period = profile_period(profile);
  FloquetReport r;
  r.b1 = integrate_cell(profile, 0.0, period, steps_per_unit);
  r.tr = r.b1.trace();
  r.gamma1 = gamma_integral(profile, period);
  const double half = 0.5 * r.tr;
  if (std::abs(half) <= 1.0) {
    const double s = std::sqrt(std::max(0.0, 1.0 - half * half));
    r.lambda_plus = {half, s};
    r.lambda_minus = {half, -s};
  } else {
    const double big =
        half + std::copysign(std::sqrt(half * half - 1.0), half);
    r.lambda_plus = {big, 0.0};
    r.lambda_minus = {1.0 / big, 0.0};
  }
  r.stability = classify(r.tr, threshold_tol);
  return r;
}

FieldProfile family_profile(MapFamily family, double p1, double p2) {
  if (family == MapFamily::harmonic) return HarmonicField{p1, p2};
  return BiharmonicField{p1, p2};
}

double StabilityMap::p1_at(int i1) const {
  return range1.lo + (range1.hi - range1.lo) * i1 / (res1 - 1);
}

double StabilityMap::p2_at(int i2) const {
  return range2.lo + (range2.hi - range2.lo) * i2 / (res2 - 1);
}

StabilityMap scan_map(MapFamily family, AxisRange range1, AxisRange range2,
                      int res1, int res2, int steps_per_unit,
                      double threshold_tol, int workers) {
  if (res1 < 2 || res2 < 2) {
    throw std::invalid_argument("scan resolution must be at least 2 per axis");
  }
  if (steps_per_unit < 1) {
    throw std::invalid_argument("steps_per_unit must be positive");
  }
  StabilityMap map;
  map.family = family;
  map.range1 = range1;
  map.range2 = range2;
  map.res1 = res1;
  map.res2 = res2;
  const int cells = res1 * res2;
  map.tr.resize(cells);
  map.cls.resize(cells);
  map.gamma1.resize(cells);

  auto run_range = [&](int begin, int end) {
    for (int idx = begin; idx < end; ++idx) {
      const int i1 = idx % res1;
      const int i2 = idx / res1;
      const FieldProfile p =
          family_profile(family, map.p1_at(i1), map.p2_at(i2));
      const double period = profile_period(p);
      const double tr = integrate_cell(p, 0.0, period, steps_per_unit).trace();
      map.tr[idx] = tr;
      map.cls[idx] = classify(tr, threshold_tol);
      map.gamma1[idx] = gamma_integral(p, period);
    }
  };

  int n_workers = workers > 0
                      ? workers
                      : static_cast<int>(std::thread::hardware_concurrency());
  n_workers = std::clamp(n_workers, 1, cells);
  if (n_workers == 1) {
    run_range(0, cells);
    return map;
  }
  std::vector<std::thread> pool;
  pool.reserve(n_workers);
  const int chunk = (cells + n_workers - 1) / n_workers;
  for (int w = 0; w < n_workers; ++w) {
    const int begin = w * chunk;
    const int end = std::min(cells, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back(run_range, begin, end);
  }
  for (std::thread& th : pool) th.join();
  return map;
}

std::vector<SeparatrixPoint> trace_separatrix(MapFamily family,
                                              int branch_sign, AxisRange box1,
                                              AxisRange box2, int grid_res,
                                              double refinement_tol,
                                              int steps_per_unit,
                                              double zero_tol) {
  require_branch_sign(branch_sign);
  if (grid_res < 2) {
    throw std::invalid_argument("presample resolution must be at least 2");
  }
  auto node1 = [&](int i) {
    return box1.lo + (box1.hi - box1.lo) * i / (grid_res - 1);
  };
  auto node2 = [&](int j) {
    return box2.lo + (box2.hi - box2.lo) * j / (grid_res - 1);
  };
  auto gap = [&](double p1, double p2) {
    return family_trace(family, p1, p2, steps_per_unit) - 2.0 * branch_sign;
  };

  std::vector<double> sampled(static_cast<size_t>(grid_res) * grid_res);
  for (int j = 0; j < grid_res; ++j) {
    for (int i = 0; i < grid_res; ++i) {
      sampled[static_cast<size_t>(j) * grid_res + i] = gap(node1(i), node2(j));
    }
  }

  std::vector<SeparatrixPoint> points;
  auto refine_edge = [&](double a1, double a2, double b1, double b2, double fa,
                         double fb) {
    if (fa * fb > 0.0) return;
    auto f = [&](double s) {
      return gap(a1 + (b1 - a1) * s, a2 + (b2 - a2) * s);
    };
    const double s = bisect_root(f, 0.0, 1.0, fa, fb, refinement_tol);
    points.push_back(classify_threshold(family, a1 + (b1 - a1) * s,
                                        a2 + (b2 - a2) * s, branch_sign,
                                        steps_per_unit, zero_tol));
  };
  for (int j = 0; j < grid_res; ++j) {
    for (int i = 0; i < grid_res; ++i) {
      const double f0 = sampled[static_cast<size_t>(j) * grid_res + i];
      if (i + 1 < grid_res) {
        const double f1 = sampled[static_cast<size_t>(j) * grid_res + i + 1];
        refine_edge(node1(i), node2(j), node1(i + 1), node2(j), f0, f1);
      }
      if (j + 1 < grid_res) {
        const double f1 =
            sampled[static_cast<size_t>(j + 1) * grid_res + i];
        refine_edge(node1(i), node2(j), node1(i), node2(j + 1), f0, f1);
      }
    }
  }

  const double c1 = 0.5 * (box1.lo + box1.hi);
  const double c2 = 0.5 * (box2.lo + box2.hi);
  std::sort(points.begin(), points.end(),
            [&](const SeparatrixPoint& a, const SeparatrixPoint& b) {
              return std::atan2(a.p2 - c2, a.p1 - c1) <
                     std::atan2(b.p2 - c2, b.p1 - c1);
            });
  return points;
}

SeparatrixPoint refine_to_threshold(MapFamily family, double p1, double p2,
                                    int branch_sign, double window,
                                    double refinement_tol, int steps_per_unit,
                                    double zero_tol) {
  require_branch_sign(branch_sign);
  if (!(window > 0.0)) {
    throw std::invalid_argument("refinement window must be positive");
  }
  auto f = [&](double q) {
    return family_trace(family, p1, q, steps_per_unit) - 2.0 * branch_sign;
  };
  const double lo = p2 - window;
  const double hi = p2 + window;
  const double flo = f(lo);
  const double fhi = f(hi);
  if (flo * fhi > 0.0) {
    throw std::invalid_argument(
        "no threshold crossing of the second amplitude within the window");
  }
  const double root = bisect_root(f, lo, hi, flo, fhi, refinement_tol);
  return classify_threshold(family, p1, root, branch_sign, steps_per_unit,
                            zero_tol);
}

std::vector<LoopCurvePoint> find_loop_curve(MapFamily family, int l, int n,
                                            std::array<double, 2> seg_start,
                                            std::array<double, 2> seg_end,
                                            double tol, int probes,
                                            int steps_per_unit) {
  if (!(0 < l && l < n)) {
    throw std::invalid_argument("loop indices require 0 < l < n");
  }
  if (probes < 2) {
    throw std::invalid_argument("need at least 2 probes along the segment");
  }
  const double target = 2.0 * std::cos(2.0 * std::numbers::pi * l / n);
  auto at = [&](double s) -> std::array<double, 2> {
    return {seg_start[0] + (seg_end[0] - seg_start[0]) * s,
            seg_start[1] + (seg_end[1] - seg_start[1]) * s};
  };
  auto f = [&](double s) {
    const auto p = at(s);
    return family_trace(family, p[0], p[1], steps_per_unit) - target;
  };

  std::vector<LoopCurvePoint> roots;
  auto push_root = [&](double s) {
    const auto p = at(s);
    roots.push_back({p[0], p[1], family_trace(family, p[0], p[1],
                                              steps_per_unit)});
  };
  double prev_s = 0.0;
  double prev_f = f(0.0);
  if (prev_f == 0.0) push_root(0.0);
  for (int i = 1; i < probes; ++i) {
    const double s = static_cast<double>(i) / (probes - 1);
    const double fs = f(s);
    if (fs == 0.0) {
      push_root(s);
    } else if (prev_f != 0.0 && (fs > 0.0) != (prev_f > 0.0)) {
      push_root(bisect_root(f, prev_s, s, prev_f, fs, tol));
    }
    prev_s = s;
    prev_f = fs;
  }
  return roots;
}

std::optional<LoopDetection> detect_loop(const FieldProfile& profile,
                                         Geometry geometry, int n_max,
                                         double tol, int steps_per_unit) {
  if (n_max < 1) {
    throw std::invalid_argument("n_max must be positive");
  }
  const double period = profile_period(profile);
  const Evolution4 one =
      evolution_matrix(profile, geometry, period, steps_per_unit);
  Evolution4 acc = Evolution4::Identity();
  for (int n = 1; n <= n_max; ++n) {
    acc = one * acc;
    const double residual = (acc - Evolution4::Identity()).norm();
    if (residual < tol) return LoopDetection{n, residual};
  }
  return std::nullopt;
}

RefinedLoop refine_loop(MapFamily family, double p1, double p2, int n_max,
                        double window, int steps_per_unit, double coarse_tol) {
  const FieldProfile base = family_profile(family, p1, p2);
  const double period = profile_period(base);
  const double gamma1 = gamma_integral(base, period);
  const double tr0 =
      integrate_cell(base, 0.0, period, steps_per_unit).trace();

  // Closure of n periods needs the pair rotation to land on a half turn,
  // rot(n gamma1) = (-1)^k, and the cell phase to match its parity,
  // Tr b1 = 2 cos(pi l / n) with l = k (mod 2). The candidate search runs
  // in trace space: at few-decimal amplitude precision the matrix residual of
  // an n-period power is inflated by eigenvector skew, but the trace gap
  // stays small.
  constexpr double rotation_slack = 1e-9;
  int n = 0;
  int l = 0;
  for (int cand_n = 1; cand_n <= n_max && n == 0; ++cand_n) {
    const double turns = cand_n * gamma1 / std::numbers::pi;
    const auto k = std::llround(turns);
    if (std::abs(turns - static_cast<double>(k)) > rotation_slack * cand_n) continue;
    const int parity = static_cast<int>(((k % 2) + 2) % 2);
    double best_gap = coarse_tol;
    int best_l = 0;
    for (int cand_l = (parity == 0 ? 2 : 1); cand_l < cand_n; cand_l += 2) {
      const double gap =
          std::abs(tr0 - 2.0 * std::cos(std::numbers::pi * cand_l / cand_n));
      if (gap < best_gap) {
        best_gap = gap;
        best_l = cand_l;
      }
    }
    if (best_l != 0) {
      n = cand_n;
      l = best_l;
    }
  }
  if (n == 0) {
    throw std::invalid_argument(
        "no loop within n_max periods near the given amplitudes");
  }
  const double target = 2.0 * std::cos(std::numbers::pi * l / n);

  auto f = [&](double q) {
    return family_trace(family, p1, q, steps_per_unit) - target;
  };
  const double lo = p2 - window;
  const double hi = p2 + window;
  const double flo = f(lo);
  const double fhi = f(hi);
  if (flo * fhi > 0.0) {
    throw std::invalid_argument(
        "no trace root of the second amplitude within the window");
  }
  const double refined = bisect_root(f, lo, hi, flo, fhi, 0.0);

  const FieldProfile prof = family_profile(family, p1, refined);
  const Evolution4 u = evolution_matrix(prof, Geometry::cylindrical,
                                        n * profile_period(prof),
                                        steps_per_unit);
  return RefinedLoop{p1, refined, n,
                     (u - Evolution4::Identity()).norm()};
}

SqueezeAxes squeezing_axes(const Cell2& b1) {
  const double tr = b1.trace();
  if (!(std::abs(tr) > 2.0)) {
    throw std::domain_error("squeezing axes require |Tr b1| > 2");
  }
  const double half = 0.5 * tr;
  const double big = half + std::copysign(std::sqrt(half * half - 1.0), half);
  SqueezeAxes sq;
  sq.lambda_plus = big;
  sq.lambda_minus = 1.0 / big;
  sq.with_parity = tr < 0.0;
  auto row_axis = [&](double lambda) {
    Eigen::RowVector2d va(b1(1, 0), lambda - b1(0, 0));
    Eigen::RowVector2d vb(lambda - b1(1, 1), b1(0, 1));
    Eigen::RowVector2d v = va.norm() >= vb.norm() ? va : vb;
    if (v(0) < 0.0 || (v(0) == 0.0 && v(1) < 0.0)) v = -v;
    return Eigen::RowVector2d(v / v.norm());
  };
  sq.axis_plus = row_axis(sq.lambda_plus);
  sq.axis_minus = row_axis(sq.lambda_minus);
  return sq;
}

}  // namespace magloop
