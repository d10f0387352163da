#pragma once

#include <array>
#include <string>
#include <string_view>

#include "eprsteer/complex_matrix.hpp"
#include "eprsteer/quantum_state.hpp"

namespace eprsteer {

/// Unit vector on the Bloch sphere.
class SpinDirection {
 public:
  /// Throws ArgumentError unless the norm is 1 within 1e-12.
  SpinDirection(double x, double y, double z);
  /// Rescales a nonzero vector to unit length.
  static SpinDirection normalized(double x, double y, double z);

  static SpinDirection X() { return {1.0, 0.0, 0.0}; }
  static SpinDirection Y() { return {0.0, 1.0, 0.0}; }
  static SpinDirection Z() { return {0.0, 0.0, 1.0}; }
  /// "X", "Y", "Z" (either case, optional leading '-') or "x,y,z".
  static SpinDirection parse(std::string_view text);

  double x() const noexcept { return v_[0]; }
  double y() const noexcept { return v_[1]; }
  double z() const noexcept { return v_[2]; }
  const std::array<double, 3>& vec() const noexcept { return v_; }

  double dot(const SpinDirection& o) const noexcept {
    return v_[0] * o.v_[0] + v_[1] * o.v_[1] + v_[2] * o.v_[2];
  }
  SpinDirection operator-() const { return {-v_[0], -v_[1], -v_[2]}; }

  /// "X"/"Y"/"Z" for the axes, otherwise the formatted triple.
  std::string label() const;

 private:
  std::array<double, 3> v_;
};

/// x sigma_X + y sigma_Y + z sigma_Z
ComplexMatrix pauli(const SpinDirection& d);
/// Eigenprojector of pauli(d) for eigenvalue `sign` (+1 or -1).
ComplexMatrix pauli_projector(const SpinDirection& d, int sign);

/// Two-mode Schwinger spin along d, modes (m+, m-) each truncated at
/// `cutoff` levels. The truncated operators reproduce the exact spin algebra
/// on every sector with total photon number below `cutoff`.
ComplexMatrix schwinger(const SpinDirection& d, std::size_t cutoff = 2);
/// n = m+^dagger m+ + m-^dagger m- on the same truncated space.
ComplexMatrix number_operator(std::size_t cutoff = 2);
/// Annihilation operator on one mode with `cutoff` levels.
ComplexMatrix annihilation(std::size_t cutoff);

struct OutcomeEffect {
  int outcome;  // -1, 0 or +1
  ComplexMatrix effect;
};

/// Complete three-outcome measurement (-1, 0 = no detection, +1).
class LossyObservable {
 public:
  /// Effects in outcome order -1, 0, +1; checks completeness (1e-12) and
  /// positivity.
  LossyObservable(SpinDirection direction, double efficiency, ComplexMatrix minus,
                  ComplexMatrix none, ComplexMatrix plus);

  const SpinDirection& direction() const noexcept { return direction_; }
  double efficiency() const noexcept { return efficiency_; }
  std::size_t dimension() const noexcept { return effects_[0].effect.rows(); }
  const std::array<OutcomeEffect, 3>& effects() const noexcept { return effects_; }
  const ComplexMatrix& effect(int outcome) const { return effects_.at(outcome + 1).effect; }

 private:
  SpinDirection direction_;
  double efficiency_;
  std::array<OutcomeEffect, 3> effects_;
};

/// Single-photon detection with efficiency eta on the qubit:
/// E+- = eta P+-(d), E0 = (1 - eta) I.
LossyObservable lossy_spin_measurement(const SpinDirection& d, double eta);
/// eta = 1: projective, outcome 0 never occurs.
LossyObservable trusted_spin_measurement(const SpinDirection& d);

/// Projective Schwinger-spin measurement on one dual-rail mode pair
/// (cutoff 2). The +-1 effects are the one-photon eigenprojectors; outcome 0
/// collects the vacuum and the doubly occupied state.
LossyObservable schwinger_measurement(const SpinDirection& d);

/// Beam-splitter loss on a two-level Fock mode with transmission eta.
QuantumState loss_channel(const QuantumState& s, std::size_t mode_index, double eta);

}  // namespace eprsteer
