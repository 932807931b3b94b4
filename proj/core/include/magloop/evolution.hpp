#pragma once

#include <Eigen/Dense>
#include <vector>

#include "magloop/field_profile.hpp"

namespace magloop {

// Canonical ordering is q = (x, y, px, py) throughout.
using Cell2 = Eigen::Matrix2d;       // one oscillatory cell acting on (x, px), det = 1
using Evolution4 = Eigen::Matrix4d;  // full symplectic evolution matrix
using Vec4 = Eigen::Vector4d;
using Force2 = Eigen::Vector2d;

inline constexpr int kDefaultStepsPerUnit = 2048;

enum class Geometry { cylindrical, landau };

// Symplectic form J with [x, px] = [y, py] = i, so J has +1 at (x, px) and
// (y, py) and -1 transposed.
Evolution4 symplectic_form();

// || u J u^T - J ||_F, zero for an exactly symplectic matrix.
double symplectic_defect(const Evolution4& u);

// Exact flow of db/dt = [[0, 1], [-beta^2, 0]] b over a step h with beta
// frozen: a trig cell for beta != 0, the free shear for |beta| < 1e-12. Both
// branches have det = 1 identically, so composed steps stay symplectic.
Cell2 cell_step(double beta_mid, double h);

// Cell matrix b(t1, t0) of the twin oscillator. Piecewise and constant
// programs compose exact plateau flows; smooth programs take midpoint-frozen
// steps on a global grid of spacing 1/steps_per_unit anchored at t = 0
// (second order accurate, symplectic to rounding). Requires t1 >= t0.
Cell2 integrate_cell(const FieldProfile& profile, double t0, double t1,
                     int steps_per_unit = kDefaultStepsPerUnit);

// diag(b, b) arranged for the (x, y, px, py) ordering.
Evolution4 twin_cells(const Cell2& b);

// Rotation by gamma applied simultaneously to the (x, y) and (px, py)
// pairs, with the sense fixed by the constant-field closure
// u(pi/beta) = pair_rotation(pi) * twin(-I) = I.
Evolution4 pair_rotation(double gamma);

// Cylindrical-gauge evolution u(t) = pair_rotation(gamma(t)) * twin(b(t)).
Evolution4 assemble_u(const FieldProfile& profile, double t,
                      int steps_per_unit = kDefaultStepsPerUnit);

// Evolution matrix of the shear-gauge Hamiltonian
//   H = ((px + 2 beta(t) y)^2 + py^2) / 2,
// which does not factor into a rotation times twin cells. Constant plateaus
// integrate exactly; smooth programs use the same frozen-step grid.
Evolution4 landau_integrate(const FieldProfile& profile, double t,
                            int steps_per_unit = kDefaultStepsPerUnit);

// Dispatch on geometry: assemble_u or landau_integrate.
Evolution4 evolution_matrix(const FieldProfile& profile, Geometry geometry,
                            double t, int steps_per_unit = kDefaultStepsPerUnit);

struct TrajectorySample {
  double t;
  Vec4 q;
};

// Classical trajectory of dq/dt = A(t) q + (0, 0, Fx, Fy) from q0 over
// [0, t_final], sampled at the integration nodes (thinned by sample_stride;
// the first and last nodes are always kept). Each step applies the exact
// frozen-field propagator and its exact force integral.
std::vector<TrajectorySample> evolve_affine(
    const FieldProfile& profile, Geometry geometry, const Force2& force,
    const Vec4& q0, double t_final, int steps_per_unit = kDefaultStepsPerUnit,
    int sample_stride = 1);

// Frobenius distance between the cell integrated at steps_per_unit and at
// twice that resolution; an a posteriori step-size error indicator.
double cell_refinement_error(const FieldProfile& profile, double t0, double t1,
                             int steps_per_unit = kDefaultStepsPerUnit);

}  // namespace magloop
