#pragma once

#include <variant>
#include <vector>

#include "magloop/center.hpp"
#include "magloop/evolution.hpp"

namespace magloop {

inline constexpr double kDefaultGammaLoopTol = 1e-12;

// Ordered pi-pulse amplitudes in the shear gauge. Step i lasts
// dt_i = pi / (2 |beta_i|), so beta_i dt_i = +-pi/2 with the sign of beta_i.
// The count must be even and every amplitude nonzero; an explicit-duration
// constructor validates |beta_i dt_i| = pi/2 instead of deriving it.
class PulseSequence {
 public:
  explicit PulseSequence(std::vector<double> betas);
  PulseSequence(std::vector<double> betas, const std::vector<double>& dts);

  const std::vector<double>& betas() const { return betas_; }
  const std::vector<double>& dts() const { return dts_; }
  double total_duration() const;
  PiecewiseField to_field_profile() const;

 private:
  std::vector<double> betas_;
  std::vector<double> dts_;
};

// Closed form of one pi-pulse, valid for either pulse sign through the signed
// amplitude: rows [1,0,0,1/b], [0,-1,-1/b,0], [0,0,1,0], [0,0,0,-1].
Evolution4 landau_pulse_matrix(double beta);

struct SequenceResult {
  Evolution4 u_total = Evolution4::Identity();
  double gamma_factor = 0.0;  // u_total = I + gamma_factor * E
  bool is_loop = false;
};

// Exact product of the pulse matrices, first pulse acting first. The result
// is I + Gamma E with E carrying ones at (x, py) and (y, px); the sequence
// loops when |Gamma| < loop_tol.
SequenceResult landau_sequence(const PulseSequence& seq,
                               double loop_tol = kDefaultGammaLoopTol);

// kappa = -(pi / 4T) sum_i 1 / (beta_i |beta_i|).
double landau_kappa_closed_form(const PulseSequence& seq);

// Center observables of a looping sequence, from the exact time average of
// the piecewise shear-gauge evolution. Throws std::invalid_argument when the
// sequence does not loop.
CenterReport landau_center_commutator(const PulseSequence& seq,
                                      double loop_tol = kDefaultGammaLoopTol,
                                      double vanish_tol = kDefaultVanishTol);

// Idealized one-period primitives on the (x, px) cell.
Cell2 kick_matrix(double a);     // [[1, 0], [-a, 1]]
Cell2 free_matrix(double tau);   // [[1, tau], [0, 1]]
Cell2 parity_matrix();           // -I

struct Kick {
  double a = 0.0;
};
struct Free {
  double tau = 0.0;
};
struct Parity {};

using WordPrimitive = std::variant<Kick, Free, Parity>;

// A word lists primitives in operator order: the rightmost acts first, as in
// Free{tau} * Kick{a} meaning "kick, then drift".
using KickFreeWord = std::vector<WordPrimitive>;

Cell2 primitive_matrix(const WordPrimitive& p);

// Product in operator order (rightmost primitive applied first).
Cell2 word_product(const KickFreeWord& word);

// Product with the first listed primitive applied first.
Cell2 word_product_sequential(const KickFreeWord& word);

struct WordLoopReport {
  Cell2 product = Cell2::Identity();
  double tr = 0.0;
  bool is_loop = false;
  int order = 0;  // smallest k <= order_max with product^k = I, 0 when none
  bool threshold_nondiagonalizable = false;
};

// Powers the word product up to order_max looking for closure, and flags the
// weakly resonant case tr = +-2 with a product different from +-I.
WordLoopReport verify_word_loop(const KickFreeWord& word, int order_max = 64,
                                double tol = 1e-12);

}  // namespace magloop
