#include "eprsteer/observables.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include "eprsteer/errors.hpp"

namespace eprsteer {

namespace {

void require_efficiency(double eta, const char* where) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw ArgumentError(std::string(where) + ": efficiency " + std::to_string(eta) +
                        " outside [0,1]");
  }
}

// Columns: |up> -> |1,0> (index 2), |down> -> |0,1> (index 1).
ComplexMatrix one_photon_embedding() {
  ComplexMatrix v(4, 2);
  v(2, 0) = 1.0;
  v(1, 1) = 1.0;
  return v;
}

}  // namespace

SpinDirection::SpinDirection(double x, double y, double z) : v_{x, y, z} {
  const double norm = std::sqrt(x * x + y * y + z * z);
  if (std::abs(norm - 1.0) > 1e-12) {
    throw ArgumentError("SpinDirection: norm " + std::to_string(norm) + " is not 1");
  }
}

SpinDirection SpinDirection::normalized(double x, double y, double z) {
  const double norm = std::sqrt(x * x + y * y + z * z);
  if (!(norm > 0.0)) throw ArgumentError("SpinDirection: zero vector");
  return {x / norm, y / norm, z / norm};
}

SpinDirection SpinDirection::parse(std::string_view text) {
  std::string s(text);
  bool negate = false;
  if (!s.empty() && s.front() == '-' && s.size() == 2) {
    negate = true;
    s.erase(0, 1);
  }
  if (s.size() == 1) {
    const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    const double sign = negate ? -1.0 : 1.0;
    if (c == 'X') return {sign, 0.0, 0.0};
    if (c == 'Y') return {0.0, sign, 0.0};
    if (c == 'Z') return {0.0, 0.0, sign};
  }
  std::istringstream in{std::string(text)};
  double v[3];
  char sep1 = 0, sep2 = 0;
  if (in >> v[0] >> sep1 >> v[1] >> sep2 >> v[2] && sep1 == ',' && sep2 == ',') {
    in >> std::ws;
    if (in.eof()) return normalized(v[0], v[1], v[2]);
  }
  throw ArgumentError("cannot parse direction '" + std::string(text) +
                      "' (expected X, Y, Z or x,y,z)");
}

std::string SpinDirection::label() const {
  const char* names = "XYZ";
  for (int k = 0; k < 3; ++k) {
    if (std::abs(v_[k]) == 1.0) return (v_[k] < 0 ? "-" : "") + std::string(1, names[k]);
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.6g,%.6g,%.6g", v_[0], v_[1], v_[2]);
  return buf;
}

ComplexMatrix pauli(const SpinDirection& d) {
  return ComplexMatrix{{d.z(), cplx(d.x(), -d.y())}, {cplx(d.x(), d.y()), -d.z()}};
}

ComplexMatrix pauli_projector(const SpinDirection& d, int sign) {
  if (sign != 1 && sign != -1) throw ArgumentError("pauli_projector: sign must be +1 or -1");
  ComplexMatrix p = ComplexMatrix::identity(2) + pauli(d) * cplx(static_cast<double>(sign));
  return p * cplx(0.5);
}

ComplexMatrix annihilation(std::size_t cutoff) {
  ComplexMatrix a(cutoff, cutoff);
  for (std::size_t n = 1; n < cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

ComplexMatrix number_operator(std::size_t cutoff) {
  ComplexMatrix n(cutoff * cutoff, cutoff * cutoff);
  for (std::size_t p = 0; p < cutoff; ++p) {
    for (std::size_t m = 0; m < cutoff; ++m) n(p * cutoff + m, p * cutoff + m) = double(p + m);
  }
  return n;
}

ComplexMatrix schwinger(const SpinDirection& d, std::size_t cutoff) {
  if (cutoff < 2) throw ArgumentError("schwinger: cutoff must be at least 2");
  const ComplexMatrix a = annihilation(cutoff);
  const ComplexMatrix id = ComplexMatrix::identity(cutoff);
  const ComplexMatrix ap = kron(a, id);
  const ComplexMatrix am = kron(id, a);
  const ComplexMatrix apd = ap.adjoint();
  const ComplexMatrix amd = am.adjoint();
  const ComplexMatrix raise = apd * am;  // a+^dagger a-
  const ComplexMatrix lower = ap * amd;  // a+ a-^dagger
  const ComplexMatrix sz = apd * ap - amd * am;
  const ComplexMatrix sx = raise + lower;
  const ComplexMatrix sy = (raise - lower) * cplx(0.0, -1.0);
  return sx * cplx(d.x()) + sy * cplx(d.y()) + sz * cplx(d.z());
}

LossyObservable::LossyObservable(SpinDirection direction, double efficiency, ComplexMatrix minus,
                                 ComplexMatrix none, ComplexMatrix plus)
    : direction_(direction),
      efficiency_(efficiency),
      effects_{OutcomeEffect{-1, std::move(minus)}, OutcomeEffect{0, std::move(none)},
               OutcomeEffect{+1, std::move(plus)}} {
  require_efficiency(efficiency, "LossyObservable");
  const std::size_t n = effects_[0].effect.rows();
  ComplexMatrix sum(n, n);
  for (const auto& e : effects_) {
    if (!e.effect.square() || e.effect.rows() != n) {
      throw ArgumentError("LossyObservable: effects differ in dimension");
    }
    if (e.effect.hermiticity_defect() > 1e-12) {
      throw ArgumentError("LossyObservable: effect not Hermitian");
    }
    if (min_eigenvalue(e.effect) < kPositivityFloor) {
      throw ArgumentError("LossyObservable: effect not positive semidefinite");
    }
    sum += e.effect;
  }
  if (sum.max_abs_diff(ComplexMatrix::identity(n)) > 1e-12) {
    throw ArgumentError("LossyObservable: effects do not sum to identity");
  }
}

LossyObservable lossy_spin_measurement(const SpinDirection& d, double eta) {
  require_efficiency(eta, "lossy_spin_measurement");
  return LossyObservable(d, eta, pauli_projector(d, -1) * cplx(eta),
                         ComplexMatrix::identity(2) * cplx(1.0 - eta),
                         pauli_projector(d, +1) * cplx(eta));
}

LossyObservable trusted_spin_measurement(const SpinDirection& d) {
  return lossy_spin_measurement(d, 1.0);
}

LossyObservable schwinger_measurement(const SpinDirection& d) {
  const ComplexMatrix v = one_photon_embedding();
  const ComplexMatrix vd = v.adjoint();
  ComplexMatrix plus = v * pauli_projector(d, +1) * vd;
  ComplexMatrix minus = v * pauli_projector(d, -1) * vd;
  ComplexMatrix none = ComplexMatrix::identity(4) - plus - minus;
  return LossyObservable(d, 1.0, std::move(minus), std::move(none), std::move(plus));
}

QuantumState loss_channel(const QuantumState& s, std::size_t mode_index, double eta) {
  require_efficiency(eta, "loss_channel");
  if (mode_index >= s.subsystem_count()) {
    throw ArgumentError("loss_channel: mode index " + std::to_string(mode_index) +
                        " out of range");
  }
  if (s.dims()[mode_index] != 2) throw ArgumentError("loss_channel: mode is not two-level");
  const ComplexMatrix kraus[] = {
      ComplexMatrix{{1.0, 0.0}, {0.0, std::sqrt(eta)}},
      ComplexMatrix{{0.0, std::sqrt(1.0 - eta)}, {0.0, 0.0}},
  };
  return apply_kraus(s, kraus, mode_index);
}

}  // namespace eprsteer
