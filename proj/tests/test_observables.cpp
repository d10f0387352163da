#include <doctest.h>

#include <cmath>

#include "eprsteer/errors.hpp"
#include "eprsteer/observables.hpp"
#include "eprsteer/random_states.hpp"
#include "eprsteer/states.hpp"
#include "eprsteer/steering.hpp"
#include "oracles.hpp"

using namespace eprsteer;

namespace {

const SpinDirection kAxes[] = {SpinDirection::X(), SpinDirection::Y(), SpinDirection::Z()};

double variance(const QuantumState& s, const ComplexMatrix& op) {
  const double m = expectation(s, op);
  return expectation(s, op * op) - m * m;
}

// Random states mixed with depolarizing noise at the three test levels.
QuantumState noisy(std::vector<std::size_t> dims, int i, Rng& rng) {
  static const double levels[] = {0.0, 0.3, 0.7};
  return depolarize(haar_pure(std::move(dims), rng), levels[i % 3]);
}

}  // namespace

TEST_CASE("spin directions") {
  CHECK_THROWS_AS(SpinDirection(1.0, 1.0, 0.0), ArgumentError);
  CHECK_THROWS_AS(SpinDirection::normalized(0, 0, 0), ArgumentError);
  CHECK(SpinDirection::parse("x").x() == 1.0);
  CHECK(SpinDirection::parse("-Y").y() == -1.0);
  CHECK(SpinDirection::parse("0,3,4").z() == doctest::Approx(0.8));
  CHECK_THROWS_AS(SpinDirection::parse("W"), ArgumentError);
  CHECK_THROWS_AS(SpinDirection::parse("1,2"), ArgumentError);
  CHECK(SpinDirection::Z().label() == "Z");
}

TEST_CASE("Pauli operators") {
  const ComplexMatrix z = pauli(SpinDirection::Z());
  CHECK(z.max_abs_diff(ComplexMatrix{{1, 0}, {0, -1}}) == 0.0);
  Rng rng(9);
  for (int i = 0; i < 20; ++i) {
    const auto d = SpinDirection::normalized(rng.normal(), rng.normal(), rng.normal());
    const ComplexMatrix p = pauli(d);
    CHECK((p * p).max_abs_diff(ComplexMatrix::identity(2)) < 1e-15);
    CHECK(p.is_hermitian());
    CHECK(std::abs(p.trace()) < 1e-15);
    CHECK((pauli_projector(d, 1) + pauli_projector(d, -1)).max_abs_diff(ComplexMatrix::identity(2)) < 1e-15);
    CHECK((pauli_projector(d, 1) - pauli_projector(d, -1)).max_abs_diff(p) < 1e-15);
  }
  const HermitianEigen e = eigh(pauli(SpinDirection::X()));
  CHECK(e.values[0] == doctest::Approx(-1.0));
  CHECK(std::abs(std::abs(e.vectors(0, 1)) - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(e.vectors(0, 1) - e.vectors(1, 1)) < 1e-15);
}

TEST_CASE("Schwinger spins on the one-photon truncation") {
  const ComplexMatrix sz = schwinger(SpinDirection::Z());
  // |1,0> = 2, |0,1> = 1, |0,0> = 0
  CHECK(std::abs(sz(2, 2) - 1.0) < 1e-15);
  CHECK(std::abs(sz(1, 1) + 1.0) < 1e-15);
  CHECK(std::abs(sz(0, 0)) < 1e-15);

  const ComplexMatrix v = dual_rail_isometry(1);
  for (const auto& d : {SpinDirection::X(), SpinDirection::Y(), SpinDirection::normalized(1, 2, -2)}) {
    CHECK((v.adjoint() * schwinger(d) * v).max_abs_diff(pauli(d)) < 1e-15);
  }

  ComplexMatrix s2 = ComplexMatrix::zeros(4, 4);
  for (const auto& d : kAxes) s2 += schwinger(d) * schwinger(d);
  const ComplexMatrix n = number_operator(2);
  const ComplexMatrix n_n2 = n * (n + ComplexMatrix::identity(4) * cplx(2.0));
  // S^2 = n(n+2) on every sector the truncation keeps exact (n < 2).
  for (std::size_t i : {0, 1, 2}) CHECK(std::abs(s2(i, i) - n_n2(i, i)) < 1e-15);
  CHECK(std::abs(s2(2, 2) - 3.0) < 1e-15);
}

TEST_CASE("lossy measurement model") {
  CHECK_THROWS_AS(lossy_spin_measurement(SpinDirection::X(), 1.1), ArgumentError);
  CHECK_THROWS_AS(lossy_spin_measurement(SpinDirection::X(), -0.1), ArgumentError);
  const auto ideal = lossy_spin_measurement(SpinDirection::Y(), 1.0);
  CHECK(ideal.effect(0).max_abs_diff(ComplexMatrix::zeros(2, 2)) == 0.0);
  const auto blind = lossy_spin_measurement(SpinDirection::Y(), 0.0);
  CHECK(probability(spin_up(), blind.effect(0)) == doctest::Approx(1.0));

  const QuantumState mm = QuantumState::maximally_mixed({2});
  for (double eta : {0.0, 0.25, 0.6, 1.0}) {
    const auto obs = lossy_spin_measurement(SpinDirection::normalized(1, 1, 1), eta);
    CHECK(probability(mm, obs.effect(1)) == doctest::Approx(eta / 2));
    CHECK(probability(mm, obs.effect(-1)) == doctest::Approx(eta / 2));
    CHECK(probability(mm, obs.effect(0)) == doctest::Approx(1 - eta));
    ComplexMatrix sum = ComplexMatrix::zeros(2, 2);
    for (const auto& e : obs.effects()) {
      sum += e.effect;
      CHECK(min_eigenvalue(e.effect) >= -1e-15);
    }
    CHECK(sum.max_abs_diff(ComplexMatrix::identity(2)) < 1e-12);
    CHECK(obs.effects()[0].outcome == -1);
    CHECK(obs.effects()[1].outcome == 0);
    CHECK(obs.effects()[2].outcome == 1);
  }
  CHECK_THROWS_AS(LossyObservable(SpinDirection::Z(), 1.0, ComplexMatrix::zeros(2, 2),
                                  ComplexMatrix::zeros(2, 2), ComplexMatrix::identity(2) * cplx(0.5)),
                  ArgumentError);
}

TEST_CASE("loss channel") {
  const QuantumState one = QuantumState::pure({2}, std::vector<cplx>{0.0, 1.0});
  CHECK(loss_channel(one, 0, 1.0).rho().max_abs_diff(one.rho()) < 1e-15);
  const QuantumState out = loss_channel(one, 0, 0.3);
  CHECK(std::abs(out.rho()(1, 1) - 0.3) < 1e-15);
  CHECK(std::abs(out.rho()(0, 0) - 0.7) < 1e-15);
  CHECK_THROWS_AS(loss_channel(one, 1, 0.3), ArgumentError);
}

TEST_CASE("beam-splitter loss reproduces the lossy POVM statistics") {
  Rng rng(17);
  const auto& grid = hemisphere_grid(24);
  for (int i = 0; i < 6; ++i) {
    const QuantumState q = haar_mixed({2}, 1 + i % 2, rng);
    const double eta = 0.15 * (i + 1);
    const QuantumState modes = loss_channel(loss_channel(dual_rail_encode(q), 0, eta), 1, eta);
    for (const auto& d : grid) {
      const auto fock = schwinger_measurement(d);
      const auto povm = lossy_spin_measurement(d, eta);
      for (int o : {-1, 0, 1}) {
        CHECK(probability(modes, fock.effect(o)) == doctest::Approx(probability(q, povm.effect(o))).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("qubit uncertainty relation and circle condition on random states") {
  Rng rng(2024);
  for (int i = 0; i < 200; ++i) {
    const QuantumState s = noisy({2}, i, rng);
    double sum_var = 0.0, radius2 = 0.0;
    for (const auto& d : kAxes) {
      sum_var += variance(s, pauli(d));
      radius2 += std::pow(expectation(s, pauli(d)), 2);
    }
    CHECK(sum_var >= 2.0 - 1e-10);
    CHECK(radius2 <= 1.0 + 1e-10);
  }
}

TEST_CASE("Schwinger uncertainty relation on truncated two-mode states") {
  // States supported on the sectors the truncation keeps exact: n < cutoff.
  for (std::size_t cutoff : {2, 4}) {
    Rng rng(100 + cutoff);
    const ComplexMatrix n = number_operator(cutoff);
    std::vector<std::size_t> sector;
    for (std::size_t i = 0; i < cutoff * cutoff; ++i) {
      if (i / cutoff + i % cutoff < cutoff) sector.push_back(i);
    }
    for (int i = 0; i < 200; ++i) {
      const std::size_t dim = sector.size();
      const QuantumState small = noisy({dim}, i, rng);
      ComplexMatrix rho = ComplexMatrix::zeros(cutoff * cutoff, cutoff * cutoff);
      for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) rho(sector[r], sector[c]) = small.rho()(r, c);
      }
      const QuantumState s({cutoff, cutoff}, rho);
      double sum_var = 0.0;
      for (const auto& d : kAxes) sum_var += variance(s, schwinger(d, cutoff));
      const double mn = expectation(s, n), mn2 = expectation(s, n * n);
      CHECK(sum_var >= mn2 - mn * mn + 2 * mn - 1e-10);
    }
  }
}
