#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "eprsteer/complex_matrix.hpp"

namespace eprsteer {

inline constexpr std::size_t kDefaultMaxDimension = 4096;

inline constexpr double kTraceTolerance = 1e-12;
inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kPositivityFloor = -1e-10;

/// Density matrix over an ordered list of subsystems. Subsystem 0 is the most
/// significant factor in the Kronecker ordering. Invariants (unit trace,
/// Hermitian, positive semidefinite) are checked on construction.
class QuantumState {
 public:
  QuantumState(std::vector<std::size_t> dims, ComplexMatrix rho);

  /// |psi><psi|; psi must have unit norm within 1e-10.
  static QuantumState pure(std::vector<std::size_t> dims, std::span<const cplx> psi);
  static QuantumState maximally_mixed(std::vector<std::size_t> dims);
  /// Skips the eigenvalue check; for results of operations that preserve it.
  static QuantumState trusted(std::vector<std::size_t> dims, ComplexMatrix rho);

  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  const ComplexMatrix& rho() const noexcept { return rho_; }
  std::size_t dimension() const noexcept { return rho_.rows(); }
  std::size_t subsystem_count() const noexcept { return dims_.size(); }

  double purity() const;

  struct InvariantReport {
    double trace_error;
    double hermiticity_defect;
    double min_eigenvalue;
    bool ok() const {
      return trace_error <= kTraceTolerance && hermiticity_defect <= kHermitianTolerance &&
             min_eigenvalue >= kPositivityFloor;
    }
  };
  InvariantReport invariants() const;

 private:
  QuantumState(std::vector<std::size_t> dims, ComplexMatrix rho, bool check_positivity);

  std::vector<std::size_t> dims_;
  ComplexMatrix rho_;
};

QuantumState tensor(const QuantumState& a, const QuantumState& b,
                    std::size_t max_dimension = kDefaultMaxDimension);

/// Reduced state on `keep` (any order given; result keeps original order).
QuantumState partial_trace(const QuantumState& s, std::span<const std::size_t> keep);
QuantumState partial_trace(const QuantumState& s, std::initializer_list<std::size_t> keep);

/// Subsystem permutation: new subsystem k is old subsystem order[k].
QuantumState reorder(const QuantumState& s, std::span<const std::size_t> order);
QuantumState reorder(const QuantumState& s, std::initializer_list<std::size_t> order);

/// Tr(rho * obs) for Hermitian obs.
double expectation(const QuantumState& s, const ComplexMatrix& obs);

struct Projection {
  double probability;
  QuantumState post_state;
};

/// Conditions on a positive effect E with Kraus operator sqrt(E).
/// Throws ZeroProbabilityError below 1e-14.
Projection project(const QuantumState& s, const ComplexMatrix& effect);

/// Born probability Tr(E rho) only.
double probability(const QuantumState& s, const ComplexMatrix& effect);

/// I (x) op (x) I with op acting on `subsystem`.
ComplexMatrix embed(const ComplexMatrix& op, std::size_t subsystem,
                    std::span<const std::size_t> dims);
/// op acting on a contiguous run of subsystems starting at `first`.
ComplexMatrix embed_block(const ComplexMatrix& op, std::size_t first, std::size_t count,
                          std::span<const std::size_t> dims);

/// sum_k K_k rho K_k^dagger with every K_k acting on `subsystem`.
QuantumState apply_kraus(const QuantumState& s, std::span<const ComplexMatrix> kraus,
                         std::size_t subsystem);
QuantumState apply_unitary(const QuantumState& s, const ComplexMatrix& u, std::size_t subsystem);

/// (1/2) ||a - b||_1
double trace_distance(const QuantumState& a, const QuantumState& b);

}  // namespace eprsteer
