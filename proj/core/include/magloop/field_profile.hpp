#pragma once

#include <array>
#include <variant>
#include <vector>

namespace magloop {

// Dimensionless magnetic field programs beta(t) driving the twin oscillator
// cells. The core works in units with hbar = 1, m = 1 and the drive period as
// the unit of time; harmonic and biharmonic programs therefore have period 1,
// while piecewise programs carry their own total duration.

struct ConstantField {
  double beta = 0.0;
};

// beta(t) = beta0 + beta1 * sin(2 pi t)
struct HarmonicField {
  double beta0 = 0.0;
  double beta1 = 0.0;
};

// beta(t) = beta1 * sin(2 pi t) + beta2 * sin(4 pi t); antisymmetric about the
// half period, so beta(n) = 0 and the rotation angle vanishes at integer times.
struct BiharmonicField {
  double beta1 = 0.0;
  double beta2 = 0.0;
};

struct FieldSegment {
  double beta = 0.0;
  double dt = 0.0;  // must be positive
};

// Step program: constant plateaus of given durations, domain [0, T].
struct PiecewiseField {
  std::vector<FieldSegment> segments;

  double total_duration() const;
};

using FieldProfile =
    std::variant<ConstantField, HarmonicField, BiharmonicField, PiecewiseField>;

// Field value at time t. Piecewise segments are left-closed, right-open;
// t == T evaluates the last segment. Throws std::domain_error outside [0, T]
// (the smooth profiles are defined for all t).
double beta_at(const FieldProfile& profile, double t);

// gamma(t) = integral of beta over [0, t], in closed form per variant.
double gamma_integral(const FieldProfile& profile, double t);

// Natural repetition period of the program: 1 for harmonic and biharmonic,
// the total duration for piecewise, pi/|beta| (one cyclotron closure) for a
// constant field. The free case beta = 0 has no intrinsic scale and uses the
// unit window.
double profile_period(const FieldProfile& profile);

// Physical description of a field program. Units live only at this boundary:
// amplitudes in tesla, omega in rad/s, charge in coulomb, mass in kg.
struct PhysicalFieldSpec {
  double b0_tesla = 0.0;
  double b1_tesla = 0.0;
  double b2_tesla = 0.0;
  double omega = 0.0;
  double charge = 0.0;
  double mass = 0.0;
};

// Dimensionless amplitude per tesla: beta_i = pi * charge / (mass * omega * c) * B_i.
double rescale_factor(double omega, double charge, double mass);

// Maps a physical spec onto the matching dimensionless profile. Pure b0 gives
// a constant field, b0/b1 a harmonic one, b1/b2 a biharmonic one. A spec with
// both b0 and b2 nonzero has no counterpart among the profile families and is
// rejected. Throws std::invalid_argument on non-positive mass or omega.
FieldProfile rescale(const PhysicalFieldSpec& spec);

// Inverse boundary map: tesla amplitudes {B0, B1, B2} of a dimensionless
// profile under the same drive. Piecewise profiles are rejected.
std::array<double, 3> physical_amplitudes(const FieldProfile& profile,
                                          double omega, double charge,
                                          double mass);

// Radial profile of a standing cylindrical wave, as the even power series
// r^(2n) with Phi_0 normalized to 1 and k = omega / (2c):
//   Phi_{2n} = -k^2 * Phi_{2(n-1)} / (n (n + 1))
double cylindrical_wave_coefficient(double k, int n);

// Partial sum Phi_0 + Phi_2 r^2 + ... with n_terms terms (n_terms >= 1).
double cylindrical_wave_profile(double k, double r, int n_terms);

}  // namespace magloop
