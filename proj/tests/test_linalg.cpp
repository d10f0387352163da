#include <doctest.h>

#include <cmath>

#include "eprsteer/errors.hpp"
#include "eprsteer/observables.hpp"
#include "eprsteer/quantum_state.hpp"
#include "eprsteer/random_states.hpp"
#include "eprsteer/states.hpp"
#include "oracles.hpp"

using namespace eprsteer;

TEST_CASE("kron matches the index definition") {
  Rng rng(11);
  const QuantumState a = haar_mixed({2}, 2, rng);
  const QuantumState b = haar_mixed({3}, 2, rng);
  const ComplexMatrix k = kron(a.rho(), b.rho());
  REQUIRE(k.rows() == 6);
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < 6; ++j) {
      CHECK(std::abs(k(i, j) - a.rho()(i / 3, j / 3) * b.rho()(i % 3, j % 3)) < 1e-15);
    }
  }
}

TEST_CASE("tensor of maximally mixed qubits and pure products") {
  const QuantumState mm = tensor(QuantumState::maximally_mixed({2}), QuantumState::maximally_mixed({2}));
  CHECK(mm.dims() == std::vector<std::size_t>{2, 2});
  CHECK(mm.rho().max_abs_diff(ComplexMatrix::identity(4) * cplx(0.25)) < 1e-15);

  const QuantumState ud = tensor(spin_up(), spin_down());
  CHECK(std::abs(ud.rho()(1, 1) - 1.0) < 1e-15);
  CHECK(std::abs(ud.rho().trace() - 1.0) < 1e-15);

  const QuantumState three = tensor(bell_state(BellKind::PsiMinus), spin_up());
  CHECK(three.dims() == std::vector<std::size_t>{2, 2, 2});
  CHECK(std::abs(three.rho().trace() - 1.0) < 1e-12);
}

TEST_CASE("tensor refuses to exceed the dimension cap") {
  const QuantumState q = QuantumState::maximally_mixed({64});
  CHECK_THROWS_AS(tensor(q, q, 1024), SizeError);
  CHECK_NOTHROW(tensor(q, q));
  CHECK_THROWS_AS(tensor(tensor(q, q), QuantumState::maximally_mixed({2})), SizeError);
}

TEST_CASE("state validation rejects broken density matrices") {
  ComplexMatrix bad_trace = ComplexMatrix::identity(2);
  CHECK_THROWS_AS(QuantumState({2}, bad_trace), ArgumentError);

  ComplexMatrix non_herm = ComplexMatrix::identity(2) * cplx(0.5);
  non_herm(0, 1) = 0.1;
  CHECK_THROWS_AS(QuantumState({2}, non_herm), ArgumentError);

  ComplexMatrix negative = ComplexMatrix::zeros(2, 2);
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  CHECK_THROWS_AS(QuantumState({2}, negative), ArgumentError);

  CHECK_THROWS_AS(QuantumState({2, 2}, ComplexMatrix::identity(2) * cplx(0.5)), ArgumentError);
}

TEST_CASE("partial trace examples") {
  const QuantumState singlet = bell_state(BellKind::PsiMinus);
  CHECK(partial_trace(singlet, {0}).rho().max_abs_diff(ComplexMatrix::identity(2) * cplx(0.5)) < 1e-15);
  CHECK(partial_trace(tensor(spin_up(), spin_down()), {1}).rho().max_abs_diff(spin_down().rho()) < 1e-15);
  for (double p : {0.0, 0.3, 1.0}) {
    CHECK(partial_trace(werner_state(p), {0}).rho().max_abs_diff(ComplexMatrix::identity(2) * cplx(0.5)) < 1e-15);
  }
  CHECK_THROWS_AS(partial_trace(singlet, std::span<const std::size_t>{}), ArgumentError);
  CHECK_THROWS_AS(partial_trace(singlet, {2}), ArgumentError);
}

TEST_CASE("partial trace agrees with the index-loop oracle") {
  Rng rng(5);
  const std::vector<std::size_t> dims = {2, 3, 2};
  const QuantumState s = haar_mixed(dims, 3, rng);
  const oracle::Mat rho = oracle::to_eigen(s.rho());
  for (const auto& keep : std::vector<std::vector<std::size_t>>{{0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}}) {
    const QuantumState r = partial_trace(s, keep);
    CHECK(oracle::max_diff(oracle::partial_trace(rho, dims, keep), r.rho()) < 1e-14);
  }
  // Keep order does not matter; the result keeps original subsystem order.
  CHECK(partial_trace(s, {2, 0}).rho().max_abs_diff(partial_trace(s, {0, 2}).rho()) == 0.0);
}

TEST_CASE("tensor then trace recovers the factor") {
  Rng rng(8);
  for (int i = 0; i < 20; ++i) {
    const QuantumState a = haar_mixed({2, 2}, 2, rng);
    const QuantumState b = haar_mixed({3}, 2, rng);
    CHECK(partial_trace(tensor(a, b), {0, 1}).rho().max_abs_diff(a.rho()) < 1e-12);
    CHECK(partial_trace(tensor(a, b), {2}).rho().max_abs_diff(b.rho()) < 1e-12);
  }
}

TEST_CASE("reorder permutes subsystems") {
  const QuantumState ud = tensor(spin_up(), spin_down());
  CHECK(reorder(ud, {1, 0}).rho().max_abs_diff(tensor(spin_down(), spin_up()).rho()) < 1e-15);

  Rng rng(3);
  const QuantumState a = haar_mixed({2}, 2, rng), b = haar_mixed({3}, 2, rng),
                     c = haar_mixed({2}, 1, rng);
  const QuantumState abc = tensor(tensor(a, b), c);
  const QuantumState cab = reorder(abc, {2, 0, 1});
  CHECK(cab.dims() == std::vector<std::size_t>{2, 2, 3});
  CHECK(cab.rho().max_abs_diff(tensor(tensor(c, a), b).rho()) < 1e-14);
  CHECK(reorder(cab, {1, 2, 0}).rho().max_abs_diff(abc.rho()) < 1e-14);
  CHECK_THROWS_AS(reorder(abc, {0, 0, 1}), ArgumentError);
}

TEST_CASE("expectation values") {
  CHECK(expectation(spin_up(), pauli(SpinDirection::Z())) == doctest::Approx(1.0));
  for (const auto& d : {SpinDirection::X(), SpinDirection::normalized(1, 2, 3)}) {
    CHECK(std::abs(expectation(QuantumState::maximally_mixed({2}), pauli(d))) < 1e-15);
  }
  const ComplexMatrix zz = kron(pauli(SpinDirection::Z()), pauli(SpinDirection::Z()));
  CHECK(expectation(bell_state(BellKind::PsiMinus), zz) == doctest::Approx(-1.0));
  ComplexMatrix skew = ComplexMatrix::zeros(2, 2);
  skew(0, 1) = 1.0;
  skew(1, 0) = -1.0;
  ComplexMatrix rho = ComplexMatrix::identity(2) * cplx(0.5);
  rho(0, 1) = cplx(0, -0.5);
  rho(1, 0) = cplx(0, 0.5);
  CHECK_THROWS_AS(expectation(QuantumState({2}, rho), skew), ArgumentError);
  CHECK_THROWS_AS(expectation(spin_up(), zz), ArgumentError);
}

TEST_CASE("projection examples") {
  const ComplexMatrix up = spin_up().rho();
  const Projection p1 = project(spin_up(), up);
  CHECK(p1.probability == doctest::Approx(1.0));
  CHECK(p1.post_state.rho().max_abs_diff(up) < 1e-15);

  const Projection p2 = project(QuantumState::maximally_mixed({2}), up);
  CHECK(p2.probability == doctest::Approx(0.5));
  CHECK(p2.post_state.rho().max_abs_diff(up) < 1e-15);

  CHECK_THROWS_AS(project(spin_down(), up), ZeroProbabilityError);

  const QuantumState ss = tensor(bell_state(BellKind::PsiMinus), bell_state(BellKind::PsiMinus));
  const QuantumState vaCb = reorder(ss, {0, 2, 1, 3});
  const ComplexMatrix effect =
      embed_block(bell_state(BellKind::PsiMinus).rho(), 0, 2, vaCb.dims());
  CHECK(project(vaCb, effect).probability == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("lossy effects condition through their square root and sum to one") {
  Rng rng(21);
  for (int i = 0; i < 10; ++i) {
    const QuantumState s = haar_mixed({2, 2}, 2, rng);
    const auto obs = lossy_spin_measurement(SpinDirection::normalized(1, -1, 0.5), 0.37);
    double total = 0.0;
    for (const auto& e : obs.effects()) {
      const ComplexMatrix big = embed(e.effect, 1, s.dims());
      total += project(s, big).probability;
      CHECK(project(s, big).post_state.invariants().ok());
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("Hermitian eigendecomposition reconstructs the matrix") {
  Rng rng(2);
  const QuantumState s = haar_mixed({4}, 3, rng);
  const HermitianEigen e = eigh(s.rho());
  ComplexMatrix rec = ComplexMatrix::zeros(4, 4);
  for (std::size_t k = 0; k < 4; ++k) {
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        rec(i, j) += e.values[k] * e.vectors(i, k) * std::conj(e.vectors(j, k));
      }
    }
  }
  CHECK(rec.max_abs_diff(s.rho()) < 1e-13);
  CHECK(e.values.front() <= e.values.back());
}

TEST_CASE("trace distance") {
  CHECK(trace_distance(spin_up(), spin_down()) == doctest::Approx(1.0));
  CHECK(trace_distance(spin_up(), spin_up()) < 1e-15);
  CHECK(trace_distance(spin_up(), QuantumState::maximally_mixed({2})) == doctest::Approx(0.5));
}

TEST_CASE("invariants survive every operation on random states") {
  Rng rng(99);
  for (int i = 0; i < 25; ++i) {
    const QuantumState s = haar_mixed({2, 2, 2}, 1 + i % 4, rng);
    CHECK(s.invariants().ok());
    CHECK(partial_trace(s, {0, 2}).invariants().ok());
    CHECK(reorder(s, {2, 1, 0}).invariants().ok());
    CHECK(tensor(s, QuantumState::maximally_mixed({2})).invariants().ok());
    CHECK(apply_unitary(s, pauli(SpinDirection::Y()), 1).invariants().ok());
  }
}
