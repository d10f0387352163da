#include <doctest.h>

#include <cmath>
#include <sstream>

#include "eprsteer/errors.hpp"
#include "eprsteer/monogamy.hpp"
#include "eprsteer/random_states.hpp"
#include "eprsteer/states.hpp"

using namespace eprsteer;

namespace {

const SpinDirection kXYZ[] = {SpinDirection::X(), SpinDirection::Y(), SpinDirection::Z()};
const std::span<const SpinDirection> kXY(kXYZ, 2);

QuantumState mixed_qubit() { return QuantumState::maximally_mixed({2}); }

QuantumState ghz(std::size_t n) {
  std::vector<cplx> v(std::size_t{1} << n, 0.0);
  v.front() = v.back() = 1 / std::sqrt(2.0);
  return QuantumState::pure(std::vector<std::size_t>(n, 2), v);
}

QuantumState w_state(std::size_t n) {
  std::vector<cplx> v(std::size_t{1} << n, 0.0);
  // One qubit down, the rest up (index 0 = up).
  for (std::size_t k = 0; k < n; ++k) v[std::size_t{1} << k] = 1 / std::sqrt(static_cast<double>(n));
  return QuantumState::pure(std::vector<std::size_t>(n, 2), v);
}

void check_report(const MonogamyReport& r) {
  CHECK(r.slack >= -kMonogamyTolerance);
  CHECK(r.holds());
  CHECK(r.slack == doctest::Approx(r.sum - r.bound));
  for (double c : r.cross_slacks) CHECK(c >= -kMonogamyTolerance);
}

}  // namespace

TEST_CASE("three-setting equality cases") {
  const QuantumState s = tensor(tensor(bell_state(BellKind::PsiMinus), mixed_qubit()), mixed_qubit());
  const MonogamyReport r = monogamy_3(s, {0, 1, 2, 3}, kXYZ);
  REQUIRE(r.terms.size() == 3);
  CHECK(std::abs(r.terms[0].value) < 1e-10);
  CHECK(r.terms[1].value == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(r.terms[2].value == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(std::abs(r.slack) < 1e-10);
  CHECK(r.terms[0].label == "A|B");
  check_report(r);

  Rng rng(4);
  for (int i = 0; i < 5; ++i) {
    const QuantumState rest = haar_mixed({2, 2, 2}, 1 + i, rng);
    const MonogamyReport e = monogamy_3(tensor(spin_up(), rest), {0, 1, 2, 3}, kXYZ);
    for (const auto& t : e.terms) CHECK(t.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(e.slack) < 1e-10);
  }
}

TEST_CASE("three-setting relation on constructed adversarial states") {
  check_report(monogamy_3(ghz(4), {0, 1, 2, 3}, kXYZ));
  check_report(monogamy_3(w_state(4), {0, 1, 2, 3}, kXYZ));
  check_report(monogamy_3(w_state(4), {2, 0, 3, 1}, kXYZ));
  // Biseparable mixture: A shares a singlet with B or with C.
  const QuantumState ab = tensor(tensor(bell_state(BellKind::PsiMinus), mixed_qubit()), mixed_qubit());
  const QuantumState ac = reorder(ab, {0, 2, 1, 3});
  ComplexMatrix rho = ab.rho() * cplx(0.5) + ac.rho() * cplx(0.5);
  check_report(monogamy_3(QuantumState({2, 2, 2, 2}, rho), {0, 1, 2, 3}, kXYZ));
  // Party order is respected: A is the second subsystem here.
  const MonogamyReport moved = monogamy_3(reorder(ab, {1, 0, 2, 3}), {1, 0, 2, 3}, kXYZ);
  CHECK(std::abs(moved.terms[0].value) < 1e-10);
}

TEST_CASE("three-setting relation with losses") {
  Rng rng(6);
  for (int i = 0; i < 20; ++i) {
    MonogamyOptions opts;
    opts.eta_steered = 0.2 + 0.8 * rng.uniform();
    opts.eta_steerers = rng.uniform();
    check_report(monogamy_3(haar_pure({2, 2, 2, 2}, rng), {0, 1, 2, 3}, kXYZ, opts));
  }
  MonogamyOptions blind;
  blind.eta_steered = 0.0;
  CHECK_THROWS_AS(monogamy_3(ghz(4), {0, 1, 2, 3}, kXYZ, blind), UndefinedWitnessError);
}

TEST_CASE("two-setting relation") {
  const QuantumState s = tensor(bell_state(BellKind::PsiMinus), mixed_qubit());
  const MonogamyReport r = monogamy_2(s, {0, 1, 2}, kXY);
  CHECK(std::abs(r.terms[0].value) < 1e-10);
  CHECK(r.terms[1].value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(r.slack) < 1e-10);
  CHECK(r.terms[1].label == "C|E");
  check_report(r);

  // GHZ: both reduced pairs are classically correlated along Z only, so each
  // steerer leaves C's X and Y variances at 1.
  const MonogamyReport g = monogamy_2(ghz(3), {0, 1, 2}, kXY);
  CHECK(g.terms[0].value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(g.terms[1].value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(g.slack == doctest::Approx(2.0).epsilon(1e-12));
  check_report(monogamy_2(w_state(3), {0, 1, 2}, kXY));
}

TEST_CASE("steering of C by B excludes steering by E") {
  Rng rng(10);
  int steered = 0;
  for (int i = 0; i < 300; ++i) {
    // Bias toward strongly entangled (C, B) pairs with a weakly coupled E.
    const QuantumState cb = depolarize(haar_pure({2, 2}, rng), 0.2 * rng.uniform());
    const QuantumState e = haar_mixed({2}, 2, rng);
    const QuantumState s = i % 2 ? tensor(cb, e) : haar_pure({2, 2, 2}, rng);
    const MonogamyReport r = monogamy_2(s, {0, 1, 2}, kXY);
    check_report(r);
    if (r.terms[0].value < 1.0) {
      ++steered;
      CHECK(r.terms[1].value > 1.0);
    }
  }
  CHECK(steered > 10);
}

TEST_CASE("party validation") {
  const QuantumState s = ghz(4);
  CHECK_THROWS_AS(monogamy_3(s, {0, 1, 1, 3}, kXYZ), ArgumentError);
  CHECK_THROWS_AS(monogamy_3(s, {0, 1, 2, 4}, kXYZ), ArgumentError);
  CHECK_THROWS_AS(monogamy_3(s, {0, 1, 2, 3}, kXY), ArgumentError);
  CHECK_THROWS_AS(monogamy_2(ghz(3), {0, 1, 2}, kXYZ), ArgumentError);
}

TEST_CASE("clone count bound") {
  CHECK(clone_count_bound(2) == 0);
  CHECK(clone_count_bound(3) == 1);
  CHECK(clone_count_bound(5) == 3);
  CHECK_THROWS_AS(clone_count_bound(1), ArgumentError);
}

TEST_CASE("random sweeps hold and do not depend on the worker count") {
  SweepConfig c;
  c.count = 300;
  c.seed = 7;
  for (auto family : {RandomFamily::Pure, RandomFamily::Mixed}) {
    for (std::size_t rank : {2, 4}) {
      c.family = family;
      c.rank = rank;
      for (const auto& row : sweep_monogamy_3(c)) check_report(row.report);
      for (const auto& row : sweep_monogamy_2(c)) check_report(row.report);
    }
  }
  c.family = RandomFamily::Pure;
  c.count = 40;
  c.workers = 1;
  std::ostringstream one, three;
  write_sweep_csv(one, c.seed, sweep_monogamy_3(c));
  c.workers = 3;
  write_sweep_csv(three, c.seed, sweep_monogamy_3(c));
  CHECK(one.str() == three.str());
  CHECK(one.str().rfind("seed,index,slack,S_A|B,S_A|C,S_A|D\n", 0) == 0);
  c.count = 0;
  CHECK_THROWS_AS(sweep_monogamy_2(c), ArgumentError);
}
