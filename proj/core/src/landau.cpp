#include "magloop/landau.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace magloop {

namespace {

void require_even_nonzero(const std::vector<double>& betas) {
  if (betas.empty() || betas.size() % 2 != 0) {
    throw std::invalid_argument("pulse sequences need an even, nonzero count");
  }
  for (double b : betas) {
    if (b == 0.0) {
      throw std::invalid_argument("pulse amplitudes must be nonzero");
    }
  }
}

}  // namespace

PulseSequence::PulseSequence(std::vector<double> betas)
    : betas_(std::move(betas)) {
  require_even_nonzero(betas_);
  dts_.reserve(betas_.size());
  for (double b : betas_) {
    dts_.push_back(std::numbers::pi / (2.0 * std::abs(b)));
  }
}

PulseSequence::PulseSequence(std::vector<double> betas,
                             const std::vector<double>& dts)
    : betas_(std::move(betas)), dts_(dts) {
  require_even_nonzero(betas_);
  if (dts_.size() != betas_.size()) {
    throw std::invalid_argument("one duration per pulse amplitude required");
  }
  for (size_t i = 0; i < betas_.size(); ++i) {
    if (!(dts_[i] > 0.0)) {
      throw std::invalid_argument("pulse durations must be positive");
    }
    const double angle = std::abs(betas_[i] * dts_[i]);
    if (std::abs(angle - std::numbers::pi / 2.0) > 1e-12) {
      throw std::invalid_argument(
          "pulse durations must satisfy |beta dt| = pi/2");
    }
  }
}

double PulseSequence::total_duration() const {
  double total = 0.0;
  for (double dt : dts_) total += dt;
  return total;
}

PiecewiseField PulseSequence::to_field_profile() const {
  PiecewiseField pw;
  pw.segments.reserve(betas_.size());
  for (size_t i = 0; i < betas_.size(); ++i) {
    pw.segments.push_back({betas_[i], dts_[i]});
  }
  return pw;
}

Evolution4 landau_pulse_matrix(double beta) {
  if (beta == 0.0) {
    throw std::invalid_argument("pulse amplitude must be nonzero");
  }
  Evolution4 u = Evolution4::Zero();
  u(0, 0) = 1.0;
  u(0, 3) = 1.0 / beta;
  u(1, 1) = -1.0;
  u(1, 2) = -1.0 / beta;
  u(2, 2) = 1.0;
  u(3, 3) = -1.0;
  return u;
}

SequenceResult landau_sequence(const PulseSequence& seq, double loop_tol) {
  SequenceResult r;
  for (double b : seq.betas()) {
    r.u_total = landau_pulse_matrix(b) * r.u_total;
  }
  r.gamma_factor = r.u_total(0, 3);
  r.is_loop = std::abs(r.gamma_factor) < loop_tol;
  return r;
}

double landau_kappa_closed_form(const PulseSequence& seq) {
  double sum = 0.0;
  for (double b : seq.betas()) {
    sum += 1.0 / (b * std::abs(b));
  }
  return -std::numbers::pi / (4.0 * seq.total_duration()) * sum;
}

CenterReport landau_center_commutator(const PulseSequence& seq,
                                      double loop_tol, double vanish_tol) {
  const SequenceResult r = landau_sequence(seq, loop_tol);
  if (!r.is_loop) {
    throw std::invalid_argument(
        "pulse sequence does not close into a loop (Gamma != 0)");
  }
  const FieldProfile profile = seq.to_field_profile();
  const double total = seq.total_duration();
  const Evolution4 avg =
      time_average_matrix(profile, Geometry::landau, 0.0, total);
  CenterReport report;
  report.cX = avg.row(0);
  report.cY = avg.row(1);
  report.kappa = commutator(report.cX, report.cY);
  report.vanishing =
      report.cX.norm() < vanish_tol && report.cY.norm() < vanish_tol;
  return report;
}

Cell2 kick_matrix(double a) {
  Cell2 m;
  m << 1.0, 0.0, -a, 1.0;
  return m;
}

Cell2 free_matrix(double tau) {
  Cell2 m;
  m << 1.0, tau, 0.0, 1.0;
  return m;
}

Cell2 parity_matrix() { return -Cell2::Identity(); }

Cell2 primitive_matrix(const WordPrimitive& p) {
  if (const auto* k = std::get_if<Kick>(&p)) return kick_matrix(k->a);
  if (const auto* f = std::get_if<Free>(&p)) return free_matrix(f->tau);
  return parity_matrix();
}

Cell2 word_product(const KickFreeWord& word) {
  if (word.empty()) {
    throw std::invalid_argument("words must contain at least one primitive");
  }
  Cell2 acc = Cell2::Identity();
  for (const WordPrimitive& p : word) {
    acc = acc * primitive_matrix(p);
  }
  return acc;
}

Cell2 word_product_sequential(const KickFreeWord& word) {
  if (word.empty()) {
    throw std::invalid_argument("words must contain at least one primitive");
  }
  Cell2 acc = Cell2::Identity();
  for (const WordPrimitive& p : word) {
    acc = primitive_matrix(p) * acc;
  }
  return acc;
}

WordLoopReport verify_word_loop(const KickFreeWord& word, int order_max,
                                double tol) {
  if (order_max < 1) {
    throw std::invalid_argument("order_max must be positive");
  }
  WordLoopReport report;
  report.product = word_product(word);
  report.tr = report.product.trace();
  Cell2 acc = Cell2::Identity();
  for (int k = 1; k <= order_max; ++k) {
    acc = report.product * acc;
    if ((acc - Cell2::Identity()).norm() < tol) {
      report.is_loop = true;
      report.order = k;
      break;
    }
  }
  const Cell2 signed_identity =
      report.tr > 0.0 ? Cell2(Cell2::Identity()) : Cell2(-Cell2::Identity());
  report.threshold_nondiagonalizable =
      std::abs(std::abs(report.tr) - 2.0) < 1e-12 &&
      (report.product - signed_identity).norm() > 1e-9;
  return report;
}

}  // namespace magloop
