#include "magloop/field_profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace magloop {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSpeedOfLight = 299792458.0;  // m/s

const PiecewiseField& checked(const PiecewiseField& p) {
  if (p.segments.empty()) {
    throw std::invalid_argument("piecewise profile has no segments");
  }
  for (const FieldSegment& s : p.segments) {
    if (!(s.dt > 0.0)) {
      throw std::invalid_argument("piecewise segment duration must be positive");
    }
  }
  return p;
}

double piecewise_domain_slack(double total) {
  return 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, total);
}

}  // namespace

double PiecewiseField::total_duration() const {
  double total = 0.0;
  for (const FieldSegment& s : segments) total += s.dt;
  return total;
}

double beta_at(const FieldProfile& profile, double t) {
  return std::visit(
      [t](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ConstantField>) {
          return p.beta;
        } else if constexpr (std::is_same_v<T, HarmonicField>) {
          return p.beta0 + p.beta1 * std::sin(kTwoPi * t);
        } else if constexpr (std::is_same_v<T, BiharmonicField>) {
          return p.beta1 * std::sin(kTwoPi * t) + p.beta2 * std::sin(2.0 * kTwoPi * t);
        } else {
          const PiecewiseField& pw = checked(p);
          const double total = pw.total_duration();
          const double slack = piecewise_domain_slack(total);
          if (t < -slack || t > total + slack) {
            throw std::domain_error("time outside the piecewise program domain");
          }
          double acc = 0.0;
          for (const FieldSegment& s : pw.segments) {
            acc += s.dt;
            if (t < acc) return s.beta;
          }
          return pw.segments.back().beta;  // t == total duration
        }
      },
      profile);
}

double gamma_integral(const FieldProfile& profile, double t) {
  return std::visit(
      [t](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ConstantField>) {
          return p.beta * t;
        } else if constexpr (std::is_same_v<T, HarmonicField>) {
          return p.beta0 * t + p.beta1 * (1.0 - std::cos(kTwoPi * t)) / kTwoPi;
        } else if constexpr (std::is_same_v<T, BiharmonicField>) {
          return p.beta1 * (1.0 - std::cos(kTwoPi * t)) / kTwoPi +
                 p.beta2 * (1.0 - std::cos(2.0 * kTwoPi * t)) / (2.0 * kTwoPi);
        } else {
          const PiecewiseField& pw = checked(p);
          const double total = pw.total_duration();
          const double slack = piecewise_domain_slack(total);
          if (t < -slack || t > total + slack) {
            throw std::domain_error("time outside the piecewise program domain");
          }
          double acc = 0.0;
          double gamma = 0.0;
          for (const FieldSegment& s : pw.segments) {
            const double overlap = std::clamp(t - acc, 0.0, s.dt);
            gamma += s.beta * overlap;
            acc += s.dt;
          }
          return gamma;
        }
      },
      profile);
}

double profile_period(const FieldProfile& profile) {
  return std::visit(
      [](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ConstantField>) {
          if (p.beta == 0.0) return 1.0;
          return std::numbers::pi / std::abs(p.beta);
        } else if constexpr (std::is_same_v<T, PiecewiseField>) {
          return checked(p).total_duration();
        } else {
          return 1.0;
        }
      },
      profile);
}

double rescale_factor(double omega, double charge, double mass) {
  if (!(mass > 0.0) || !(omega > 0.0)) {
    throw std::invalid_argument("rescaling needs positive mass and omega");
  }
  return std::numbers::pi * charge / (mass * omega * kSpeedOfLight);
}

FieldProfile rescale(const PhysicalFieldSpec& spec) {
  const double f = rescale_factor(spec.omega, spec.charge, spec.mass);
  const double beta0 = f * spec.b0_tesla;
  const double beta1 = f * spec.b1_tesla;
  const double beta2 = f * spec.b2_tesla;
  if (spec.b2_tesla == 0.0) {
    if (spec.b1_tesla == 0.0) return ConstantField{beta0};
    if (spec.b0_tesla == 0.0) return BiharmonicField{beta1, 0.0};
    return HarmonicField{beta0, beta1};
  }
  if (spec.b0_tesla == 0.0) return BiharmonicField{beta1, beta2};
  throw std::invalid_argument(
      "a program with both constant and second-harmonic parts has no profile family");
}

std::array<double, 3> physical_amplitudes(const FieldProfile& profile,
                                          double omega, double charge,
                                          double mass) {
  const double f = rescale_factor(omega, charge, mass);
  return std::visit(
      [f](const auto& p) -> std::array<double, 3> {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ConstantField>) {
          return {p.beta / f, 0.0, 0.0};
        } else if constexpr (std::is_same_v<T, HarmonicField>) {
          return {p.beta0 / f, p.beta1 / f, 0.0};
        } else if constexpr (std::is_same_v<T, BiharmonicField>) {
          return {0.0, p.beta1 / f, p.beta2 / f};
        } else {
          throw std::invalid_argument(
              "piecewise programs have no single amplitude triple");
        }
      },
      profile);
}

double cylindrical_wave_coefficient(double k, int n) {
  if (n < 0) throw std::invalid_argument("coefficient index must be >= 0");
  double phi = 1.0;
  for (int j = 1; j <= n; ++j) {
    phi *= -(k * k) / (static_cast<double>(j) * (j + 1));
  }
  return phi;
}

double cylindrical_wave_profile(double k, double r, int n_terms) {
  if (n_terms < 1) throw std::invalid_argument("need at least one series term");
  const double r2 = r * r;
  double term = 1.0;  // Phi_0 r^0
  double sum = 1.0;
  for (int n = 1; n < n_terms; ++n) {
    term *= -(k * k) * r2 / (static_cast<double>(n) * (n + 1));
    sum += term;
  }
  return sum;
}

}  // namespace magloop
