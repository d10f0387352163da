#pragma once

#include <optional>
#include <vector>

#include "eprsteer/quantum_state.hpp"
#include "eprsteer/states.hpp"
#include "eprsteer/steering.hpp"

namespace eprsteer {

inline constexpr double kClassicalFidelityBenchmark = 2.0 / 3.0;
inline constexpr double kCloningFidelityBenchmark = 5.0 / 6.0;

struct SwapOutcome {
  BellKind bell_outcome;
  double probability;
  std::optional<QuantumState> conditional_state;  // (C, B); empty at zero probability
};

enum class SwapCorrection {
  None,   // only the Psi- branch is the identity-corrected teleport
  Pauli,  // each branch gets the Pauli on B that maps its Bell state to Psi-
};

/// Pauli on B taking (I (x) U) |kind> to |Psi-> up to phase.
ComplexMatrix bell_correction(BellKind kind);

/// Ideal Bell measurement on (V, A) of source_VC (x) source_AB. Returns the
/// four outcomes in kAllBellKinds order with (C, B) conditional states.
std::vector<SwapOutcome> entanglement_swap(const QuantumState& source_VC,
                                           const QuantumState& source_AB,
                                           SwapCorrection correction = SwapCorrection::None);

/// <psi| rho |psi>. Throws ArgumentError if the target is not pure (1e-10)
/// or the dimensions differ.
double fidelity(const QuantumState& state, const QuantumState& target_pure);

struct TeleportResult {
  SwapOutcome swap;        // the Psi- branch
  SteeringReport report;   // S3 (lossy C and B) and S2 (trusted C) on (C, B)
  bool certified = false;  // S3 < 1
  double figure_of_merit = 0.0;  // max(0, 1 - S3)
  double singlet_fidelity = 0.0;
  bool beats_classical = false;  // fidelity > 2/3
  bool beats_cloning = false;    // fidelity > 5/6
};

/// Swaps, keeps the Psi- branch and evaluates the witnesses on it with
/// Charlie (steered) and Bob (steering) efficiencies.
TeleportResult teleport_signature(const QuantumState& source_VC, const QuantumState& source_AB,
                                  double eta_C, double eta_B,
                                  const SteererStrategy& strategy = {});

struct ParametricSwap {
  SwapOutcome swap;            // coincidence branch; state on qubits (C, B)
  QuantumState modes;          // same state on modes (C+, C-, B+, B-)
  double b_photon_number = 0;  // <n_B+ + n_B->
};

/// Dual-rail (V, C) source next to the parametric (A, B) source, conditioned
/// on Alice registering Psi- as a coincidence of one photon in the V pair and
/// one in the A pair. With `relabel` the B pair is mapped onto the singlet
/// convention afterwards. Throws ZeroProbabilityError when c1 = 0.
ParametricSwap swap_with_parametric(const ParametricAmplitudes& amps,
                                    const QuantumState& source_VC, bool relabel = true);

}  // namespace eprsteer
