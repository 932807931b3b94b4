#include "magloop/evolution.hpp"

#include <cmath>
#include <stdexcept>

#include "segment_forms.hpp"
#include "time_grid.hpp"

namespace magloop {

namespace {

void require_window(double t0, double t1) {
  if (!(t1 >= t0)) {
    throw std::invalid_argument("integration window must have t1 >= t0");
  }
}

void require_steps(int steps_per_unit) {
  if (steps_per_unit < 1) {
    throw std::invalid_argument("steps_per_unit must be positive");
  }
}

Cell2 plateau_cell(const FieldProfile& profile, double a, double b) {
  Cell2 acc = Cell2::Identity();
  detail::for_each_plateau(profile, a, b, [&](double beta, double lo, double hi) {
    acc = detail::cell_flow(beta, hi - lo) * acc;
  });
  return acc;
}

Evolution4 plateau_flow(const FieldProfile& profile, Geometry g, double a,
                        double b) {
  Evolution4 acc = Evolution4::Identity();
  detail::for_each_plateau(profile, a, b, [&](double beta, double lo, double hi) {
    acc = detail::geometry_flow(g, beta, hi - lo) * acc;
  });
  return acc;
}

}  // namespace

Evolution4 symplectic_form() {
  Evolution4 j = Evolution4::Zero();
  j(0, 2) = 1.0;
  j(1, 3) = 1.0;
  j(2, 0) = -1.0;
  j(3, 1) = -1.0;
  return j;
}

double symplectic_defect(const Evolution4& u) {
  const Evolution4 j = symplectic_form();
  return (u * j * u.transpose() - j).norm();
}

Cell2 cell_step(double beta_mid, double h) {
  return detail::cell_flow(beta_mid, h);
}

Cell2 integrate_cell(const FieldProfile& profile, double t0, double t1,
                     int steps_per_unit) {
  require_window(t0, t1);
  require_steps(steps_per_unit);
  if (detail::has_plateaus(profile)) return plateau_cell(profile, t0, t1);
  Cell2 b = Cell2::Identity();
  detail::for_each_grid_cell(t0, t1, steps_per_unit, [&](double a, double c) {
    b = detail::cell_flow(beta_at(profile, 0.5 * (a + c)), c - a) * b;
  });
  return b;
}

Evolution4 twin_cells(const Cell2& b) {
  return detail::from_pair_blocks(b(0, 0), 0.0, b(0, 1), 0.0, b(1, 0), 0.0,
                                  b(1, 1), 0.0);
}

Evolution4 pair_rotation(double gamma) {
  const double c = std::cos(gamma);
  const double s = std::sin(gamma);
  return detail::from_pair_blocks(c, s, 0.0, 0.0, 0.0, 0.0, c, s);
}

Evolution4 assemble_u(const FieldProfile& profile, double t,
                      int steps_per_unit) {
  const Cell2 b = integrate_cell(profile, 0.0, t, steps_per_unit);
  return pair_rotation(detail::periodic_gamma(profile, t)) * twin_cells(b);
}

Evolution4 landau_integrate(const FieldProfile& profile, double t,
                            int steps_per_unit) {
  require_window(0.0, t);
  require_steps(steps_per_unit);
  if (detail::has_plateaus(profile)) {
    return plateau_flow(profile, Geometry::landau, 0.0, t);
  }
  Evolution4 u = Evolution4::Identity();
  detail::for_each_grid_cell(0.0, t, steps_per_unit, [&](double a, double c) {
    u = detail::landau_flow(beta_at(profile, 0.5 * (a + c)), c - a) * u;
  });
  return u;
}

Evolution4 evolution_matrix(const FieldProfile& profile, Geometry geometry,
                            double t, int steps_per_unit) {
  return geometry == Geometry::cylindrical
             ? assemble_u(profile, t, steps_per_unit)
             : landau_integrate(profile, t, steps_per_unit);
}

std::vector<TrajectorySample> evolve_affine(const FieldProfile& profile,
                                            Geometry geometry,
                                            const Force2& force,
                                            const Vec4& q0, double t_final,
                                            int steps_per_unit,
                                            int sample_stride) {
  require_window(0.0, t_final);
  require_steps(steps_per_unit);
  if (sample_stride < 1) {
    throw std::invalid_argument("sample_stride must be positive");
  }
  Vec4 f = Vec4::Zero();
  f(2) = force(0);
  f(3) = force(1);

  std::vector<TrajectorySample> out;
  out.push_back({0.0, q0});
  Vec4 q = q0;
  long long node = 0;
  const bool plateaus = detail::has_plateaus(profile);
  detail::for_each_grid_cell(0.0, t_final, steps_per_unit, [&](double a, double b) {
    if (plateaus) {
      detail::for_each_plateau(profile, a, b,
                               [&](double beta, double lo, double hi) {
        const double dt = hi - lo;
        q = detail::geometry_flow(geometry, beta, dt) * q +
            detail::geometry_flow_integral(geometry, beta, dt) * f;
      });
    } else if (geometry == Geometry::cylindrical) {
      // Pair rotations commute with twin cells, so exact rotation increments
      // telescope: the force-free trajectory reproduces u(t) q0 at the nodes.
      const double beta = beta_at(profile, 0.5 * (a + b));
      const double dt = b - a;
      const double dgamma =
          gamma_integral(profile, b) - gamma_integral(profile, a);
      q = pair_rotation(dgamma) * twin_cells(detail::cell_flow(beta, dt)) * q +
          detail::geometry_flow_integral(geometry, beta, dt) * f;
    } else {
      const double beta = beta_at(profile, 0.5 * (a + b));
      const double dt = b - a;
      q = detail::geometry_flow(geometry, beta, dt) * q +
          detail::geometry_flow_integral(geometry, beta, dt) * f;
    }
    ++node;
    if (node % sample_stride == 0 || b == t_final) out.push_back({b, q});
  });
  return out;
}

double cell_refinement_error(const FieldProfile& profile, double t0, double t1,
                             int steps_per_unit) {
  const Cell2 coarse = integrate_cell(profile, t0, t1, steps_per_unit);
  const Cell2 fine = integrate_cell(profile, t0, t1, 2 * steps_per_unit);
  return (coarse - fine).norm();
}

}  // namespace magloop
