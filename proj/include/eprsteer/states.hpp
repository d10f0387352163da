#pragma once

#include <array>
#include <complex>
#include <string_view>
#include <vector>

#include "eprsteer/quantum_state.hpp"

namespace eprsteer {

// Qubit basis convention: index 0 is |up> (sigma_Z = +1), index 1 is |down>.
// Fock modes are truncated at one photon; index = occupation number.

enum class BellKind { PsiMinus, PsiPlus, PhiMinus, PhiPlus };

inline constexpr std::array<BellKind, 4> kAllBellKinds = {BellKind::PsiMinus, BellKind::PsiPlus,
                                                          BellKind::PhiMinus, BellKind::PhiPlus};

std::string_view to_string(BellKind kind);
BellKind parse_bell_kind(std::string_view name);

/// Amplitudes over |up up>, |up down>, |down up>, |down down>.
std::array<cplx, 4> bell_vector(BellKind kind);
QuantumState bell_state(BellKind kind);

/// (1 - p_s) I/4 + p_s |Psi-><Psi-|
QuantumState werner_state(double p_s);

QuantumState spin_up();
QuantumState spin_down();
/// (I + r.sigma)/2 for |r| <= 1.
QuantumState qubit_from_bloch(double x, double y, double z);

/// Maps each qubit to a mode pair (m+, m-): |up> -> |1,0>, |down> -> |0,1>.
/// An n-qubit input becomes 2n two-level modes in qubit-major order.
QuantumState dual_rail_encode(const QuantumState& qubits);
/// The encoding isometry for `qubits` qubits, 4^n x 2^n.
ComplexMatrix dual_rail_isometry(std::size_t qubits);

/// Amplitudes of the vacuum and one-pair terms of the parametric source.
class ParametricAmplitudes {
 public:
  ParametricAmplitudes(cplx c0, cplx c1);
  /// Real c0 with c1 = sqrt(1 - c0^2).
  static ParametricAmplitudes from_vacuum_amplitude(double c0);

  cplx c0() const noexcept { return c0_; }
  cplx c1() const noexcept { return c1_; }

 private:
  cplx c0_;
  cplx c1_;
};

/// c0 |0000> + (c1/sqrt2)(|1010> + |0101>) on modes (a+, a-, b+, b-).
QuantumState parametric_state(const ParametricAmplitudes& amps);

/// Qubit map between the same-polarisation pairing of the parametric source
/// and the singlet: (I (x) relabel) |Phi+> = |Psi->. Equals X*Z.
ComplexMatrix singlet_relabel_qubit();
/// The same map on one dual-rail mode pair; identity on |0,0> and |1,1>.
ComplexMatrix singlet_relabel_mode_pair();

}  // namespace eprsteer
