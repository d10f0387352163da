#include <doctest.h>

#include <cmath>

#include "eprsteer/errors.hpp"
#include "eprsteer/random_states.hpp"
#include "eprsteer/states.hpp"
#include "eprsteer/teleport.hpp"
#include "oracles.hpp"

using namespace eprsteer;

namespace {

const QuantumState kSinglet = bell_state(BellKind::PsiMinus);

// Brute-force swap: 16x16 product, (V, A) = qubits 0 and 2 projected by
// explicit index sums, then traced with the index-loop oracle.
oracle::Mat brute_force_swap(const oracle::Mat& vc, const oracle::Mat& ab) {
  oracle::Mat joint(16, 16);
  for (int i = 0; i < 16; ++i) {
    for (int j = 0; j < 16; ++j) {
      // index bits: v c a b, with v most significant
      const int vi = i >> 3 & 1, ci = i >> 2 & 1, ai = i >> 1 & 1, bi = i & 1;
      const int vj = j >> 3 & 1, cj = j >> 2 & 1, aj = j >> 1 & 1, bj = j & 1;
      joint(i, j) = vc(vi * 2 + ci, vj * 2 + cj) * ab(ai * 2 + bi, aj * 2 + bj);
    }
  }
  const Eigen::VectorXcd s = oracle::singlet();
  oracle::Mat proj = oracle::Mat::Zero(16, 16);
  for (int i = 0; i < 16; ++i) {
    for (int j = 0; j < 16; ++j) {
      const int vi = i >> 3 & 1, ci = i >> 2 & 1, ai = i >> 1 & 1, bi = i & 1;
      const int vj = j >> 3 & 1, cj = j >> 2 & 1, aj = j >> 1 & 1, bj = j & 1;
      if (ci == cj && bi == bj) proj(i, j) = s(vi * 2 + ai) * std::conj(s(vj * 2 + aj));
    }
  }
  const oracle::Mat post = proj * joint * proj;
  const oracle::Mat cb = oracle::partial_trace(post, {2, 2, 2, 2}, {1, 3});
  return cb / cb.trace().real();
}

}  // namespace

TEST_CASE("singlet swap") {
  const auto out = entanglement_swap(kSinglet, kSinglet);
  REQUIRE(out.size() == 4);
  double total = 0.0;
  for (const auto& o : out) {
    CHECK(std::abs(o.probability - 0.25) < 1e-12);
    total += o.probability;
    REQUIRE(o.conditional_state);
    // Without corrections each outcome leaves (C, B) in the same Bell state.
    CHECK(fidelity(*o.conditional_state, bell_state(o.bell_outcome)) == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(out[0].bell_outcome == BellKind::PsiMinus);
  CHECK(fidelity(*out[0].conditional_state, kSinglet) > 1 - 1e-12);

  for (const auto& o : entanglement_swap(kSinglet, kSinglet, SwapCorrection::Pauli)) {
    CHECK(fidelity(*o.conditional_state, kSinglet) > 1 - 1e-12);
  }
}

TEST_CASE("Werner sources compose to a Werner state") {
  for (double p : {0.0, 0.35, 0.8, 1.0}) {
    for (double q : {0.2, 0.9, 1.0}) {
      const auto out = entanglement_swap(werner_state(p), werner_state(q));
      const QuantumState& cb = *out[0].conditional_state;
      CHECK(oracle::max_diff(brute_force_swap(oracle::werner(p), oracle::werner(q)), cb.rho()) < 1e-12);
      CHECK(trace_distance(cb, werner_state(p * q)) < 1e-10);
      CHECK(out[0].probability == doctest::Approx(0.25).epsilon(1e-12));
    }
  }
}

TEST_CASE("random sources: probabilities are complete and match the oracle") {
  Rng rng(13);
  for (int i = 0; i < 20; ++i) {
    const QuantumState vc = haar_mixed({2, 2}, 1 + i % 4, rng);
    const QuantumState ab = haar_mixed({2, 2}, 1 + i % 3, rng);
    double total = 0.0;
    const auto out = entanglement_swap(vc, ab);
    for (const auto& o : out) total += o.probability;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(oracle::max_diff(brute_force_swap(oracle::to_eigen(vc.rho()), oracle::to_eigen(ab.rho())),
                           out[0].conditional_state->rho()) < 1e-10);
  }
}

TEST_CASE("nothing to swap from an uncorrelated source") {
  for (const auto& o : entanglement_swap(QuantumState::maximally_mixed({2, 2}), kSinglet)) {
    const QuantumState& cb = *o.conditional_state;
    const QuantumState product = tensor(partial_trace(cb, {0}), partial_trace(cb, {1}));
    CHECK(cb.rho().max_abs_diff(product.rho()) < 1e-12);
  }
}

TEST_CASE("zero-probability outcomes come back without a state") {
  // |up up> on (V, C) and (A, B): (V, A) = |up up> never gives Psi-.
  const QuantumState uu = tensor(spin_up(), spin_up());
  const auto out = entanglement_swap(uu, uu);
  CHECK(out[0].probability == 0.0);
  CHECK_FALSE(out[0].conditional_state);
  CHECK(out[3].probability == doctest::Approx(0.5));
  CHECK_THROWS_AS(teleport_signature(uu, uu, 1.0, 1.0), ZeroProbabilityError);
  CHECK_THROWS_AS(entanglement_swap(spin_up(), kSinglet), ArgumentError);
}

TEST_CASE("measurement order does not change joint statistics") {
  Rng rng(19);
  const QuantumState vc = haar_mixed({2, 2}, 2, rng), ab = haar_mixed({2, 2}, 2, rng);
  const SpinDirection dc = SpinDirection::normalized(1, 2, 3), db = SpinDirection::normalized(-1, 0, 2);
  const auto swapped = entanglement_swap(vc, ab);
  const QuantumState joint = reorder(tensor(vc, ab), {0, 2, 1, 3});  // V A C B
  for (const auto& o : swapped) {
    for (int c : {-1, 1}) {
      for (int b : {-1, 1}) {
        const ComplexMatrix cb = kron(pauli_projector(dc, c), pauli_projector(db, b));
        const double swap_first = o.probability * probability(*o.conditional_state, cb);
        // Charlie and Bob measure first, Alice's Bell measurement afterwards.
        const Projection m = project(joint, embed_block(cb, 2, 2, joint.dims()));
        const double bell_later =
            m.probability *
            probability(m.post_state, embed_block(bell_state(o.bell_outcome).rho(), 0, 2, joint.dims()));
        CHECK(swap_first == doctest::Approx(bell_later).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("fidelity") {
  CHECK(fidelity(kSinglet, kSinglet) == doctest::Approx(1.0));
  CHECK(fidelity(QuantumState::maximally_mixed({2, 2}), kSinglet) == doctest::Approx(0.25));
  for (double p : {0.1, 0.5, 0.9}) CHECK(fidelity(werner_state(p), kSinglet) == doctest::Approx((1 + 3 * p) / 4));
  CHECK_THROWS_AS(fidelity(kSinglet, werner_state(0.5)), ArgumentError);
  CHECK_THROWS_AS(fidelity(spin_up(), kSinglet), ArgumentError);
}

TEST_CASE("teleportation signature") {
  for (int i = 1; i < 20; ++i) {
    const double eb = i / 20.0;
    const TeleportResult r = teleport_signature(kSinglet, kSinglet, 1.0, eb);
    CHECK(r.certified == (eb > 1.0 / 3));
    CHECK(*r.report.S3 == doctest::Approx(1.5 * (1 - eb)).epsilon(1e-12));
    CHECK(r.figure_of_merit == doctest::Approx(std::max(0.0, 1 - 1.5 * (1 - eb))).epsilon(1e-12));
    CHECK(*r.report.S2 == doctest::Approx(2 * (1 - eb)).epsilon(1e-12));
  }
  CHECK_FALSE(teleport_signature(kSinglet, kSinglet, 1.0, 1.0 / 3).certified);
  const TeleportResult lossy_c = teleport_signature(kSinglet, kSinglet, 0.1, 0.4);
  CHECK(lossy_c.certified);
  CHECK(lossy_c.report.inference_variances[0].value == doctest::Approx(0.1 * (1 - 0.4 * 0.1)));

  const TeleportResult ideal = teleport_signature(kSinglet, kSinglet, 1.0, 1.0);
  CHECK(std::abs(*ideal.report.S3) < 1e-12);
  CHECK(ideal.singlet_fidelity == doctest::Approx(1.0));
  CHECK(ideal.beats_classical);
  CHECK(ideal.beats_cloning);

  const TeleportResult noisy = teleport_signature(werner_state(0.7), werner_state(0.7), 1.0, 1.0);
  CHECK(noisy.singlet_fidelity == doctest::Approx((1 + 3 * 0.49) / 4));
  CHECK(noisy.beats_classical == ((1 + 3 * 0.49) / 4 > 2.0 / 3));
  CHECK_FALSE(noisy.beats_cloning);
}

TEST_CASE("signature equals the witness on the composed Werner state") {
  const SpinDirection xyz[] = {SpinDirection::X(), SpinDirection::Y(), SpinDirection::Z()};
  for (double p : {0.6, 0.95}) {
    for (double q : {0.7, 1.0}) {
      for (auto [ec, eb] : {std::pair{1.0, 0.5}, {0.3, 0.9}}) {
        const TeleportResult r = teleport_signature(werner_state(p), werner_state(q), ec, eb);
        const SteeringReport direct = steering_param_3(werner_state(p * q), xyz, ec, eb);
        CHECK(std::abs(*r.report.S3 - *direct.S3) < 1e-10);
      }
    }
  }
}

TEST_CASE("parametric source: the vacuum term does not matter") {
  const ParametricSwap ref = swap_with_parametric(ParametricAmplitudes::from_vacuum_amplitude(0.0), kSinglet);
  CHECK(ref.swap.probability == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(fidelity(*ref.swap.conditional_state, kSinglet) > 1 - 1e-12);
  for (double c0 : {0.0, 0.5, 0.9, 0.99}) {
    const auto amps = ParametricAmplitudes::from_vacuum_amplitude(c0);
    const ParametricSwap s = swap_with_parametric(amps, kSinglet);
    CHECK(trace_distance(s.modes, ref.modes) < 1e-12);
    CHECK(std::abs(s.b_photon_number - 1.0) < 1e-12);
    CHECK(s.swap.probability == doctest::Approx(std::norm(amps.c1()) / 4).epsilon(1e-12));
  }
  CHECK_THROWS_AS(swap_with_parametric(ParametricAmplitudes(1.0, 0.0), kSinglet), ZeroProbabilityError);
}

TEST_CASE("parametric source without the relabel keeps the same-polarisation pairing") {
  const ParametricSwap raw = swap_with_parametric(ParametricAmplitudes::from_vacuum_amplitude(0.9), kSinglet, false);
  const auto ideal = entanglement_swap(kSinglet, bell_state(BellKind::PhiPlus));
  CHECK(trace_distance(*raw.swap.conditional_state, *ideal[0].conditional_state) < 1e-12);
  CHECK(fidelity(*raw.swap.conditional_state, bell_state(BellKind::PhiPlus)) > 1 - 1e-12);
}
