#include "eprsteer/random_states.hpp"

#include <cmath>
#include <numeric>

#include "eprsteer/errors.hpp"

namespace eprsteer {

std::vector<cplx> haar_vector(std::size_t n, Rng& rng) {
  std::vector<cplx> v(n);
  double norm2 = 0.0;
  for (auto& z : v) {
    const double re = rng.normal();
    const double im = rng.normal();
    z = {re, im};
    norm2 += re * re + im * im;
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& z : v) z *= inv;
  return v;
}

QuantumState haar_pure(std::vector<std::size_t> dims, Rng& rng) {
  std::size_t n = std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
  const auto v = haar_vector(n, rng);
  return QuantumState::pure(std::move(dims), v);
}

QuantumState haar_mixed(std::vector<std::size_t> dims, std::size_t rank, Rng& rng) {
  if (rank == 0) throw ArgumentError("haar_mixed: rank must be positive");
  std::vector<std::size_t> big = dims;
  big.push_back(rank);
  const QuantumState purified = haar_pure(big, rng);
  std::vector<std::size_t> keep(dims.size());
  std::iota(keep.begin(), keep.end(), std::size_t{0});
  return partial_trace(purified, keep);
}

QuantumState depolarize(const QuantumState& s, double level) {
  if (level < 0.0 || level > 1.0) throw ArgumentError("depolarize: level outside [0,1]");
  const double d = static_cast<double>(s.dimension());
  ComplexMatrix rho = s.rho() * cplx(1.0 - level) +
                      ComplexMatrix::identity(s.dimension()) * cplx(level / d);
  return QuantumState::trusted(s.dims(), std::move(rho));
}

QuantumState random_separable(std::size_t dim_a, std::size_t dim_b, std::size_t terms, Rng& rng) {
  if (terms == 0) throw ArgumentError("random_separable: need at least one term");
  std::vector<double> w(terms);
  double total = 0.0;
  for (auto& x : w) {
    double u;
    do {
      u = rng.uniform();
    } while (u <= 0.0);
    x = -std::log(u);
    total += x;
  }
  ComplexMatrix rho(dim_a * dim_b, dim_a * dim_b);
  for (std::size_t k = 0; k < terms; ++k) {
    const QuantumState a = depolarize(haar_pure({dim_a}, rng), rng.uniform());
    const QuantumState b = depolarize(haar_pure({dim_b}, rng), rng.uniform());
    rho += kron(a.rho(), b.rho()) * cplx(w[k] / total);
  }
  return QuantumState::trusted({dim_a, dim_b}, std::move(rho));
}

}  // namespace eprsteer
