#pragma once

#include <cstddef>
#include <vector>

#include "eprsteer/quantum_state.hpp"
#include "eprsteer/rng.hpp"

namespace eprsteer {

/// Haar-uniform unit vector of length n.
std::vector<cplx> haar_vector(std::size_t n, Rng& rng);

QuantumState haar_pure(std::vector<std::size_t> dims, Rng& rng);

/// Rank-`rank` mixed state: reduction of a Haar pure state on dims (x) C^rank.
QuantumState haar_mixed(std::vector<std::size_t> dims, std::size_t rank, Rng& rng);

/// (1 - level) * s + level * I/d
QuantumState depolarize(const QuantumState& s, double level);

/// Mixture of `terms` product states rho_A (x) rho_B on dims [dim_a, dim_b],
/// each factor a depolarized Haar pure state, weights Dirichlet(1,...,1).
QuantumState random_separable(std::size_t dim_a, std::size_t dim_b, std::size_t terms, Rng& rng);

}  // namespace eprsteer
