#include "magloop/packet.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace magloop {

namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kDefiniteTol = 1e-12;

// Trapezoid average of the (x, y) samples over [a, b], clipping the end
// cells to the exact window by linear interpolation.
Force2 windowed_position_average(const std::vector<TrajectorySample>& samples,
                                 double a, double b) {
  Force2 acc = Force2::Zero();
  auto position = [](const TrajectorySample& s) {
    return Force2(s.q(0), s.q(1));
  };
  for (size_t i = 0; i + 1 < samples.size(); ++i) {
    const double t0 = samples[i].t;
    const double t1 = samples[i + 1].t;
    if (t1 <= a || t0 >= b) continue;
    const double lo = std::max(t0, a);
    const double hi = std::min(t1, b);
    if (!(hi > lo)) continue;
    const double w = t1 - t0;
    const Force2 p0 = position(samples[i]);
    const Force2 p1 = position(samples[i + 1]);
    const Force2 at_lo = p0 + (p1 - p0) * ((lo - t0) / w);
    const Force2 at_hi = p0 + (p1 - p0) * ((hi - t0) / w);
    acc += 0.5 * (hi - lo) * (at_lo + at_hi);
  }
  return acc / (b - a);
}

}  // namespace

void validate_packet(const GaussianPacket& packet) {
  if ((packet.cov - packet.cov.transpose()).norm() > kSymmetryTol) {
    throw std::invalid_argument("packet covariance must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eigen(packet.cov);
  if (eigen.eigenvalues().minCoeff() < -kDefiniteTol) {
    throw std::invalid_argument(
        "packet covariance must be positive semidefinite");
  }
}

GaussianPacket evolve_packet(const FieldProfile& profile, Geometry geometry,
                             const Force2& force, const GaussianPacket& packet,
                             double t, int steps_per_unit) {
  validate_packet(packet);
  const auto trajectory = evolve_affine(profile, geometry, force, packet.mean,
                                        t, steps_per_unit,
                                        std::max(1, steps_per_unit));
  const Evolution4 u = evolution_matrix(profile, geometry, t, steps_per_unit);
  GaussianPacket out;
  out.mean = trajectory.back().q;
  out.cov = u * packet.cov * u.transpose();
  return out;
}

Eigen::Matrix4d free_evolution_cov(const Eigen::Matrix4d& cov, double tau) {
  Eigen::Matrix4d shear = Eigen::Matrix4d::Identity();
  shear(0, 2) = tau;
  shear(1, 3) = tau;
  return shear * cov * shear.transpose();
}

double min_uncertainty_margin(const Eigen::Matrix4d& cov) {
  using Complex4 = Eigen::Matrix4cd;
  const std::complex<double> half_i(0.0, 0.5);
  const Complex4 heisenberg =
      cov.cast<std::complex<double>>() +
      half_i * symplectic_form().cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Complex4> eigen(heisenberg);
  return eigen.eigenvalues().minCoeff();
}

DriftResult drift_experiment(const FieldProfile& profile, Geometry geometry,
                             const Force2& force, int n_blocks,
                             int block_periods, int steps_per_unit,
                             double closure_tol, int sample_stride) {
  if (n_blocks < 2) {
    throw std::invalid_argument("drift fitting needs at least 2 blocks");
  }
  const CenterReport report =
      loop_center(profile, geometry, block_periods, steps_per_unit,
                  closure_tol);
  const double block = profile_period(profile) * block_periods;
  const double total = block * n_blocks;
  const auto samples = evolve_affine(profile, geometry, force, Vec4::Zero(),
                                     total, steps_per_unit, sample_stride);

  DriftResult result;
  result.predicted_velocity = drift_velocity(report, force);
  result.block_centers.reserve(n_blocks);
  for (int k = 0; k < n_blocks; ++k) {
    result.block_centers.push_back(
        windowed_position_average(samples, k * block, (k + 1) * block));
  }

  double t_mean = 0.0;
  Force2 c_mean = Force2::Zero();
  for (int k = 0; k < n_blocks; ++k) {
    t_mean += (k + 0.5) * block;
    c_mean += result.block_centers[k];
  }
  t_mean /= n_blocks;
  c_mean /= n_blocks;
  double denom = 0.0;
  Force2 numer = Force2::Zero();
  for (int k = 0; k < n_blocks; ++k) {
    const double dt = (k + 0.5) * block - t_mean;
    denom += dt * dt;
    numer += dt * (result.block_centers[k] - c_mean);
  }
  result.fitted_velocity = numer / denom;
  result.relative_error =
      (result.fitted_velocity - result.predicted_velocity).norm() /
      std::max(result.predicted_velocity.norm(), 1e-15);
  return result;
}

InversionResult inversion_demo(double beta1, double beta2,
                               int n_double_periods,
                               const GaussianPacket& packet,
                               int steps_per_unit, double threshold_tol,
                               double refine_window) {
  if (n_double_periods < 1) {
    throw std::invalid_argument("n_double_periods must be positive");
  }
  validate_packet(packet);
  const SeparatrixPoint point =
      refine_to_threshold(MapFamily::biharmonic, beta1, beta2, -1,
                          refine_window, 1e-12, steps_per_unit);
  if (std::abs(point.b1.trace() + 2.0) > threshold_tol) {
    throw std::invalid_argument(
        "the refined point is not on the tr = -2 separatrix");
  }
  if (point.kind != ThresholdKind::free_evolution) {
    throw std::invalid_argument(
        "the threshold point is not of the free-evolution kind");
  }

  InversionResult result;
  result.point = point;
  const FieldProfile profile = BiharmonicField{point.p1, point.p2};
  const Evolution4 one =
      evolution_matrix(profile, Geometry::cylindrical, 1.0, steps_per_unit);
  Evolution4 acc = Evolution4::Identity();
  for (int k = 1; k <= n_double_periods; ++k) {
    acc = one * (one * acc);
    GaussianPacket snap;
    snap.mean = acc * packet.mean;
    snap.cov = acc * packet.cov * acc.transpose();
    result.snapshots.push_back(snap);
    result.effective_times.push_back(2.0 * k * point.value);
  }
  return result;
}

}  // namespace magloop
