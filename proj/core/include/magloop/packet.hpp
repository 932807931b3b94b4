#pragma once

#include <vector>

#include "magloop/center.hpp"
#include "magloop/evolution.hpp"
#include "magloop/floquet.hpp"

namespace magloop {

// Gaussian state of the four canonical variables. The covariance must be
// symmetric to 1e-12 and positive semidefinite to rounding; singular
// covariances (zero spread in some direction) are legitimate classical
// inputs.
struct GaussianPacket {
  Vec4 mean = Vec4::Zero();
  Eigen::Matrix4d cov = Eigen::Matrix4d::Identity();
};

// Throws std::invalid_argument on an asymmetric or indefinite covariance.
void validate_packet(const GaussianPacket& packet);

// Mean follows the affine trajectory, covariance transports by congruence
// with the same evolution matrix: cov(t) = u(t) cov u(t)^T.
GaussianPacket evolve_packet(const FieldProfile& profile, Geometry geometry,
                             const Force2& force, const GaussianPacket& packet,
                             double t,
                             int steps_per_unit = kDefaultStepsPerUnit);

// Covariance after free evolution for time tau (negative tau rewinds): the
// congruence by the twin shear x -> x + tau px, y -> y + tau py.
Eigen::Matrix4d free_evolution_cov(const Eigen::Matrix4d& cov, double tau);

// Smallest eigenvalue of cov + i J / 2: nonnegative exactly when the packet
// satisfies the uncertainty principle. Reported, never enforced.
double min_uncertainty_margin(const Eigen::Matrix4d& cov);

struct DriftResult {
  std::vector<Force2> block_centers;  // windowed (x, y) average per block
  Force2 fitted_velocity = Force2::Zero();
  Force2 predicted_velocity = Force2::Zero();
  double relative_error = 0.0;
};

// Simulates the forced trajectory over n_blocks loop periods, averages the
// position over each block window, fits a straight line through the block
// centers and compares its slope with the commutator prediction
// drift_velocity(loop_center(...), force). The unforced process must close
// after block_periods profile periods.
DriftResult drift_experiment(const FieldProfile& profile, Geometry geometry,
                             const Force2& force, int n_blocks,
                             int block_periods,
                             int steps_per_unit = kDefaultStepsPerUnit,
                             double closure_tol = kDefaultClosureTol,
                             int sample_stride = 4);

struct InversionResult {
  SeparatrixPoint point;  // refined threshold data; point.value is tau
  std::vector<GaussianPacket> snapshots;  // at t = 2, 4, ..., 2 n
  std::vector<double> effective_times;    // matching free-evolution times 2 k tau
};

// Inverted-free-evolution demonstration at a type (-) free-evolution
// threshold of the biharmonic family. The second amplitude is refined onto
// the branch; the packet is then propagated over double periods, where the
// covariance reproduces free spreading at the cumulative negative times
// 2 k tau. Throws std::invalid_argument when no threshold crossing lies
// within the refinement window, when |tr + 2| stays above threshold_tol, or
// when the threshold is not of the free-evolution kind.
InversionResult inversion_demo(double beta1, double beta2,
                               int n_double_periods,
                               const GaussianPacket& packet,
                               int steps_per_unit = kDefaultStepsPerUnit,
                               double threshold_tol = 1e-3,
                               double refine_window = 0.02);

}  // namespace magloop
