#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string_view>
#include <vector>

#include "magloop/evolution.hpp"

namespace magloop {

inline constexpr double kDefaultThresholdTol = 1e-6;
inline constexpr double kDefaultJordanZeroTol = 1e-4;
inline constexpr double kDefaultLoopResidualTol = 1e-6;

// Loop-closure residual accepted for amplitudes quoted to a few decimals;
// refined amplitudes close to kDefaultLoopResidualTol.
inline constexpr double kDefaultClosureTol = 0.05;

// Classification of the one-period cell by tr = Tr b(period):
// |tr| < 2 bounded oscillation, tr = +-2 threshold band, |tr| > 2 resonant
// growth of the squeezing type.
enum class StabilityClass {
  stable,
  threshold_plus,
  threshold_minus,
  resonant_plus,
  resonant_minus,
};

// Stable lowercase token used in CSV output and CLI reports.
std::string_view stability_name(StabilityClass c);

struct FloquetReport {
  double tr = 0.0;
  std::complex<double> lambda_plus;
  std::complex<double> lambda_minus;
  StabilityClass stability = StabilityClass::stable;
  double gamma1 = 0.0;
  Cell2 b1 = Cell2::Identity();
};

// One-period cell report. The eigenvalues solve lambda^2 - tr lambda + 1 = 0
// directly; the threshold band is |tr -+ 2| < threshold_tol.
FloquetReport floquet_report(const FieldProfile& profile,
                             int steps_per_unit = kDefaultStepsPerUnit,
                             double threshold_tol = kDefaultThresholdTol);

// Two-parameter families scanned over the amplitude plane.
enum class MapFamily { harmonic, biharmonic };

// harmonic -> Harmonic{p1, p2}; biharmonic -> Biharmonic{p1, p2}.
FieldProfile family_profile(MapFamily family, double p1, double p2);

struct AxisRange {
  double lo = 0.0;
  double hi = 0.0;
};

// Rectangular stability chart. Values are stored row-major with p1 fastest:
// index = i2 * res1 + i1. Axis nodes include both range endpoints.
struct StabilityMap {
  MapFamily family = MapFamily::biharmonic;
  AxisRange range1, range2;
  int res1 = 0;
  int res2 = 0;
  std::vector<double> tr;
  std::vector<StabilityClass> cls;
  std::vector<double> gamma1;

  double p1_at(int i1) const;
  double p2_at(int i2) const;
  int index(int i1, int i2) const { return i2 * res1 + i1; }
};

// Scans the chart cell by cell. Cells are computed independently and merged
// by grid index, so the result is bit-identical for any worker count.
// workers = 0 picks the hardware concurrency.
StabilityMap scan_map(MapFamily family, AxisRange range1, AxisRange range2,
                      int res1, int res2,
                      int steps_per_unit = kDefaultStepsPerUnit,
                      double threshold_tol = kDefaultThresholdTol,
                      int workers = 0);

// Jordan type of a threshold cell: kick when b12 vanishes, free evolution
// when b21 vanishes, mixed when neither falls below the zero tolerance.
enum class ThresholdKind { kick, free_evolution, mixed };

std::string_view threshold_kind_name(ThresholdKind k);

// Whether the Jordan dichotomy window is exactly symmetric for the family
// (biharmonic over [0,1]) or merely centered (harmonic, where the symmetric
// window [n-1/2, n+1/2] carries a nonvanishing vector potential).
enum class SymmetryWindow { symmetric, centered };

struct SeparatrixPoint {
  double p1 = 0.0;
  double p2 = 0.0;
  int branch_sign = 1;  // tr = +2 or tr = -2 branch
  ThresholdKind kind = ThresholdKind::mixed;
  double value = 0.0;  // kick amplitude a, or distorted time tau
  Cell2 b1 = Cell2::Identity();
  SymmetryWindow window = SymmetryWindow::symmetric;
};

// Locates threshold points of tr = 2 * branch_sign inside the box by
// bisecting the sign changes of a presample grid, refines each to
// |tr - 2 branch_sign| < refinement_tol, classifies the Jordan kind and
// extracts the parity-stripped value: a = -branch_sign * b21 for kicks,
// tau = branch_sign * b12 for free evolutions. Points are returned ordered
// by angle around the box center. An empty result means no crossing.
std::vector<SeparatrixPoint> trace_separatrix(
    MapFamily family, int branch_sign, AxisRange box1, AxisRange box2,
    int grid_res = 96, double refinement_tol = 1e-10,
    int steps_per_unit = kDefaultStepsPerUnit,
    double zero_tol = kDefaultJordanZeroTol);

// 1D refinement of the second amplitude onto the threshold branch nearest
// (p1, p2): bisects tr - 2 branch_sign over [p2 - window, p2 + window].
// Throws std::invalid_argument when the window brackets no crossing.
SeparatrixPoint refine_to_threshold(MapFamily family, double p1, double p2,
                                    int branch_sign, double window = 0.02,
                                    double refinement_tol = 1e-12,
                                    int steps_per_unit = kDefaultStepsPerUnit,
                                    double zero_tol = kDefaultJordanZeroTol);

struct LoopCurvePoint {
  double p1 = 0.0;
  double p2 = 0.0;
  double tr = 0.0;
};

// Roots of tr = 2 cos(2 pi l / n) along the straight parameter segment from
// seg_start to seg_end, located by probing then bisection to |tr - target| <
// tol. Cells whose n-th power is -I (odd half-turn counts) correspond to
// doubled n in this parameterization.
std::vector<LoopCurvePoint> find_loop_curve(
    MapFamily family, int l, int n, std::array<double, 2> seg_start,
    std::array<double, 2> seg_end, double tol = 1e-10, int probes = 256,
    int steps_per_unit = kDefaultStepsPerUnit);

struct LoopDetection {
  int n = 0;
  double residual = 0.0;
};

// Smallest n <= n_max with || u(n period) - I ||_F < tol, testing the cell
// and the pair rotation simultaneously through powers of the one-period u.
std::optional<LoopDetection> detect_loop(
    const FieldProfile& profile, Geometry geometry, int n_max, double tol,
    int steps_per_unit = kDefaultStepsPerUnit);

struct RefinedLoop {
  double p1 = 0.0;
  double p2 = 0.0;
  int n = 0;
  double residual = 0.0;
};

// Polishes a loop known only to a few decimals near (p1, p2): detects the
// period count at coarse tolerance, infers the closing half-turn count from
// tr, then bisects the second amplitude within +-window to the exact cell
// trace. Throws std::invalid_argument when no loop is detected or the window
// brackets no root.
RefinedLoop refine_loop(MapFamily family, double p1, double p2, int n_max = 64,
                        double window = 0.02,
                        int steps_per_unit = kDefaultStepsPerUnit,
                        double coarse_tol = kDefaultClosureTol);

struct SqueezeAxes {
  double lambda_plus = 0.0;   // |lambda_plus| >= 1
  double lambda_minus = 0.0;  // 1 / lambda_plus
  Eigen::RowVector2d axis_plus;
  Eigen::RowVector2d axis_minus;
  bool with_parity = false;  // tr < -2: squeezing composed with parity
};

// Real eigenstructure of a resonant cell: row eigenvectors give the
// amplified (lambda_plus) and squeezed (lambda_minus) linear observables.
// Throws std::domain_error unless |Tr b1| > 2.
SqueezeAxes squeezing_axes(const Cell2& b1);

}  // namespace magloop
