#include "eprsteer/teleport.hpp"

#include <cmath>

#include "eprsteer/errors.hpp"
#include "eprsteer/observables.hpp"

namespace eprsteer {

namespace {

void require_two_qubits(const QuantumState& s, const char* what) {
  if (s.dims() != std::vector<std::size_t>{2, 2}) {
    throw ArgumentError(std::string(what) + " must be a two-qubit state");
  }
}

ComplexMatrix bell_projector(BellKind kind) {
  const auto v = bell_vector(kind);
  return ComplexMatrix::outer(v);
}

QuantumState conjugate(const QuantumState& s, const ComplexMatrix& u) {
  ComplexMatrix rho = u * s.rho() * u.adjoint();
  rho = (rho + rho.adjoint()) * cplx(0.5);
  return QuantumState::trusted(s.dims(), std::move(rho));
}

}  // namespace

ComplexMatrix bell_correction(BellKind kind) {
  switch (kind) {
    case BellKind::PsiMinus:
      return ComplexMatrix::identity(2);
    case BellKind::PsiPlus:
      return pauli(SpinDirection::Z());
    case BellKind::PhiMinus:
      return pauli(SpinDirection::X());
    case BellKind::PhiPlus:
      return pauli(SpinDirection::X()) * pauli(SpinDirection::Z());
  }
  throw ArgumentError("bell_correction: unknown Bell state");
}

std::vector<SwapOutcome> entanglement_swap(const QuantumState& source_VC,
                                           const QuantumState& source_AB,
                                           SwapCorrection correction) {
  require_two_qubits(source_VC, "source_VC");
  require_two_qubits(source_AB, "source_AB");
  // (V, C, A, B) -> (V, A, C, B)
  const QuantumState joint = reorder(tensor(source_VC, source_AB), {0, 2, 1, 3});
  std::vector<SwapOutcome> out;
  for (BellKind kind : kAllBellKinds) {
    const ComplexMatrix effect = embed_block(bell_projector(kind), 0, 2, joint.dims());
    const double p = probability(joint, effect);
    if (p < 1e-14) {
      out.push_back({kind, std::max(p, 0.0), std::nullopt});
      continue;
    }
    QuantumState cb = partial_trace(project(joint, effect).post_state, {2, 3});
    if (correction == SwapCorrection::Pauli) cb = apply_unitary(cb, bell_correction(kind), 1);
    out.push_back({kind, p, std::move(cb)});
  }
  return out;
}

double fidelity(const QuantumState& state, const QuantumState& target_pure) {
  if (state.dims() != target_pure.dims()) throw ArgumentError("fidelity: dimension mismatch");
  if (std::abs(target_pure.purity() - 1.0) > 1e-10) {
    throw ArgumentError("fidelity: target state is not pure");
  }
  return trace_product(state.rho(), target_pure.rho()).real();
}

TeleportResult teleport_signature(const QuantumState& source_VC, const QuantumState& source_AB,
                                  double eta_C, double eta_B, const SteererStrategy& strategy) {
  auto outcomes = entanglement_swap(source_VC, source_AB);
  SwapOutcome& psi = outcomes.front();
  if (!psi.conditional_state) {
    throw ZeroProbabilityError("teleport_signature: Psi- outcome has zero probability");
  }
  static const SpinDirection xyz[] = {SpinDirection::X(), SpinDirection::Y(), SpinDirection::Z()};
  const QuantumState& cb = *psi.conditional_state;

  TeleportResult r{psi, steering_param_3(cb, xyz, eta_C, eta_B, strategy)};
  const SteeringReport two = steering_param_2(cb, std::span(xyz, 2), eta_B, strategy);
  r.report.S2 = two.S2;
  r.report.verdicts.steering_2 = two.verdicts.steering_2;
  r.certified = *r.report.verdicts.steering_3;
  r.figure_of_merit = std::max(0.0, 1.0 - *r.report.S3);
  r.singlet_fidelity = fidelity(cb, bell_state(BellKind::PsiMinus));
  r.beats_classical = r.singlet_fidelity > kClassicalFidelityBenchmark;
  r.beats_cloning = r.singlet_fidelity > kCloningFidelityBenchmark;
  return r;
}

ParametricSwap swap_with_parametric(const ParametricAmplitudes& amps,
                                    const QuantumState& source_VC, bool relabel) {
  require_two_qubits(source_VC, "source_VC");
  if (std::abs(amps.c1()) == 0.0) {
    throw ZeroProbabilityError("swap_with_parametric: c1 = 0 leaves nothing to teleport");
  }
  // Modes (V+, V-, C+, C-, A+, A-, B+, B-) -> (V+, V-, A+, A-, C+, C-, B+, B-)
  const QuantumState joint =
      reorder(tensor(dual_rail_encode(source_VC), parametric_state(amps)), {0, 1, 4, 5, 2, 3, 6, 7});

  // Psi- on the (V, A) dual-rail pairs: only one-photon-per-pair occupations
  // appear in it, so the projector also enforces the coincidence.
  const ComplexMatrix enc = dual_rail_isometry(2);
  const auto psi = bell_vector(BellKind::PsiMinus);
  std::vector<cplx> psi_modes(enc.rows(), cplx{});
  for (std::size_t i = 0; i < enc.rows(); ++i) {
    for (std::size_t j = 0; j < 4; ++j) psi_modes[i] += enc(i, j) * psi[j];
  }
  const ComplexMatrix effect = embed_block(ComplexMatrix::outer(psi_modes), 0, 4, joint.dims());
  const Projection proj = project(joint, effect);
  QuantumState modes = partial_trace(proj.post_state, {4, 5, 6, 7});
  if (relabel) modes = conjugate(modes, embed_block(singlet_relabel_mode_pair(), 2, 2, modes.dims()));

  const ComplexMatrix n = number_operator(2);
  const double nb = expectation(modes, embed_block(n, 2, 2, modes.dims()));

  // Back to qubits: every pair holds exactly one photon here.
  ComplexMatrix rho = enc.adjoint() * modes.rho() * enc;
  rho = (rho + rho.adjoint()) * cplx(0.5);
  QuantumState qubits = QuantumState::trusted({2, 2}, std::move(rho));
  return {{BellKind::PsiMinus, proj.probability, std::move(qubits)}, std::move(modes), nb};
}

}  // namespace eprsteer
