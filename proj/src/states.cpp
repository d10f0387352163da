#include "eprsteer/states.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "eprsteer/errors.hpp"

namespace eprsteer {

namespace {
constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;
}  // namespace

std::string_view to_string(BellKind kind) {
  switch (kind) {
    case BellKind::PsiMinus:
      return "PsiMinus";
    case BellKind::PsiPlus:
      return "PsiPlus";
    case BellKind::PhiMinus:
      return "PhiMinus";
    case BellKind::PhiPlus:
      return "PhiPlus";
  }
  return "?";
}

BellKind parse_bell_kind(std::string_view name) {
  for (BellKind k : kAllBellKinds) {
    if (to_string(k) == name) return k;
  }
  throw ArgumentError("unknown Bell state '" + std::string(name) +
                      "' (expected PsiMinus, PsiPlus, PhiMinus or PhiPlus)");
}

std::array<cplx, 4> bell_vector(BellKind kind) {
  const double h = kInvSqrt2;
  switch (kind) {
    case BellKind::PsiMinus:
      return {0.0, h, -h, 0.0};
    case BellKind::PsiPlus:
      return {0.0, h, h, 0.0};
    case BellKind::PhiMinus:
      return {h, 0.0, 0.0, -h};
    case BellKind::PhiPlus:
      return {h, 0.0, 0.0, h};
  }
  throw ArgumentError("bell_vector: bad kind");
}

QuantumState bell_state(BellKind kind) {
  const auto v = bell_vector(kind);
  return QuantumState::pure({2, 2}, v);
}

QuantumState werner_state(double p_s) {
  if (!(p_s >= 0.0 && p_s <= 1.0)) {
    throw ArgumentError("werner_state: p_s = " + std::to_string(p_s) + " outside [0,1]");
  }
  ComplexMatrix rho = ComplexMatrix::identity(4) * cplx((1.0 - p_s) / 4.0);
  rho += bell_state(BellKind::PsiMinus).rho() * cplx(p_s);
  return QuantumState::trusted({2, 2}, std::move(rho));
}

QuantumState spin_up() {
  const cplx v[] = {1.0, 0.0};
  return QuantumState::pure({2}, v);
}

QuantumState spin_down() {
  const cplx v[] = {0.0, 1.0};
  return QuantumState::pure({2}, v);
}

QuantumState qubit_from_bloch(double x, double y, double z) {
  if (x * x + y * y + z * z > 1.0 + 1e-12) throw ArgumentError("qubit_from_bloch: |r| > 1");
  ComplexMatrix rho{{0.5 * (1.0 + z), 0.5 * cplx(x, -y)}, {0.5 * cplx(x, y), 0.5 * (1.0 - z)}};
  return QuantumState::trusted({2}, std::move(rho));
}

ComplexMatrix dual_rail_isometry(std::size_t qubits) {
  const std::size_t in = std::size_t{1} << qubits;
  const std::size_t out = std::size_t{1} << (2 * qubits);
  ComplexMatrix w(out, in);
  for (std::size_t q = 0; q < in; ++q) {
    std::size_t fock = 0;
    for (std::size_t k = 0; k < qubits; ++k) {
      const bool down = (q >> (qubits - 1 - k)) & 1U;
      // |up> -> (m+, m-) = (1, 0) -> pair index 2; |down> -> (0, 1) -> 1
      fock = (fock << 2) | (down ? 1U : 2U);
    }
    w(fock, q) = 1.0;
  }
  return w;
}

QuantumState dual_rail_encode(const QuantumState& qubits) {
  for (std::size_t d : qubits.dims()) {
    if (d != 2) throw ArgumentError("dual_rail_encode: input must consist of qubits");
  }
  const std::size_t n = qubits.subsystem_count();
  const ComplexMatrix w = dual_rail_isometry(n);
  return QuantumState::trusted(std::vector<std::size_t>(2 * n, 2), w * qubits.rho() * w.adjoint());
}

ParametricAmplitudes::ParametricAmplitudes(cplx c0, cplx c1) : c0_(c0), c1_(c1) {
  const double norm = std::norm(c0) + std::norm(c1);
  if (std::abs(norm - 1.0) > 1e-12) {
    throw ArgumentError("ParametricAmplitudes: |c0|^2 + |c1|^2 = " + std::to_string(norm));
  }
}

ParametricAmplitudes ParametricAmplitudes::from_vacuum_amplitude(double c0) {
  if (!(std::abs(c0) <= 1.0)) throw ArgumentError("from_vacuum_amplitude: |c0| > 1");
  return ParametricAmplitudes(c0, std::sqrt(1.0 - c0 * c0));
}

QuantumState parametric_state(const ParametricAmplitudes& amps) {
  std::vector<cplx> psi(16);
  psi[0b0000] = amps.c0();
  psi[0b1010] = amps.c1() * kInvSqrt2;
  psi[0b0101] = amps.c1() * kInvSqrt2;
  return QuantumState::pure({2, 2, 2, 2}, psi);
}

ComplexMatrix singlet_relabel_qubit() { return ComplexMatrix{{0.0, -1.0}, {1.0, 0.0}}; }

ComplexMatrix singlet_relabel_mode_pair() {
  ComplexMatrix u(4, 4);
  u(0, 0) = 1.0;
  u(3, 3) = 1.0;
  // pair index 2 = |1,0> = up, index 1 = |0,1> = down; up -> down, down -> -up
  u(1, 2) = 1.0;
  u(2, 1) = -1.0;
  return u;
}

}  // namespace eprsteer
