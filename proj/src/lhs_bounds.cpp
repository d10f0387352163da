#include "eprsteer/lhs_bounds.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "eprsteer/errors.hpp"
#include "eprsteer/states.hpp"

namespace eprsteer {

SettingEnsemble make_ensemble(std::string name, std::vector<SpinDirection> directions) {
  if (directions.size() < 2) throw ArgumentError("setting ensemble needs m >= 2 directions");
  return {std::move(name), std::move(directions)};
}

std::vector<std::string> ensemble_names() {
  return {"orthogonal2", "orthogonal3", "tetrahedron", "octahedron", "icosahedron"};
}

SettingEnsemble named_ensemble(std::string_view name) {
  using D = SpinDirection;
  if (name == "orthogonal2") return make_ensemble("orthogonal2", {D::X(), D::Y()});
  if (name == "orthogonal3") return make_ensemble("orthogonal3", {D::X(), D::Y(), D::Z()});
  if (name == "tetrahedron") {
    return make_ensemble("tetrahedron",
                         {D::normalized(1, 1, 1), D::normalized(1, -1, -1),
                          D::normalized(-1, 1, -1), D::normalized(-1, -1, 1)});
  }
  if (name == "octahedron") {
    return make_ensemble("octahedron", {D::X(), -D::X(), D::Y(), -D::Y(), D::Z(), -D::Z()});
  }
  if (name == "icosahedron") {
    const double g = std::numbers::phi;
    return make_ensemble("icosahedron",
                         {D::normalized(0, 1, g), D::normalized(0, -1, g), D::normalized(1, g, 0),
                          D::normalized(-1, g, 0), D::normalized(g, 0, 1),
                          D::normalized(g, 0, -1)});
  }
  throw ArgumentError("unknown direction set '" + std::string(name) + "'");
}

LhsBound lhs_bound(const SettingEnsemble& ensemble) {
  const std::size_t m = ensemble.m();
  if (m < 2) throw ArgumentError("lhs_bound: m must be at least 2");
  if (m > kMaxEnsembleSettings) {
    throw SizeError("lhs_bound: m = " + std::to_string(m) + " exceeds " +
                    std::to_string(kMaxEnsembleSettings));
  }
  LhsBound best{-1.0, {}};
  for (std::uint32_t mask = 0; mask < (1U << m); ++mask) {
    double v[3] = {0.0, 0.0, 0.0};
    for (std::size_t k = 0; k < m; ++k) {
      const double a = (mask >> k) & 1U ? -1.0 : 1.0;
      for (int c = 0; c < 3; ++c) v[c] += a * ensemble.directions[k].vec()[c];
    }
    const double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    if (norm > best.value) {
      best.value = norm;
      best.signs.assign(m, 1);
      for (std::size_t k = 0; k < m; ++k) best.signs[k] = (mask >> k) & 1U ? -1 : 1;
    }
  }
  best.value /= static_cast<double>(m);
  return best;
}

DeclarationPolicy parse_declaration_policy(std::string_view name) {
  if (name == "drop") return DeclarationPolicy::Drop;
  if (name == "random") return DeclarationPolicy::RandomSign;
  throw ArgumentError("unknown declaration policy '" + std::string(name) +
                      "' (expected drop or random)");
}

FunctionalValue linear_functional(const QuantumState& state, const SettingEnsemble& ensemble,
                                  double eta_steerer, DeclarationPolicy policy) {
  if (state.dims() != std::vector<std::size_t>{2, 2}) {
    throw ArgumentError("linear_functional: state must be a (steered, steerer) qubit pair");
  }
  const double bound = lhs_bound(ensemble).value;
  double total = 0.0;
  for (const auto& u : ensemble.directions) {
    const LossyObservable steered = trusted_spin_measurement(u);
    const LossyObservable steerer = lossy_spin_measurement(u, eta_steerer);
    double corr = 0.0;
    for (const auto& ea : steered.effects()) {
      if (ea.outcome == 0) continue;
      for (const auto& eb : steerer.effects()) {
        // A uniformly random +-1 declaration averages to zero, as does a drop.
        const double declared = eb.outcome == 0
                                    ? (policy == DeclarationPolicy::Drop ? 0.0 : 0.0)
                                    : static_cast<double>(eb.outcome);
        if (declared == 0.0) continue;
        corr += ea.outcome * declared * probability(state, kron(ea.effect, eb.effect));
      }
    }
    total += std::abs(corr);
  }
  const double value = total / static_cast<double>(ensemble.m());
  return {value, bound, value > bound + kVerdictRoundoff};
}

WitnessKind parse_witness_kind(std::string_view name) {
  if (name == "s3" || name == "three") return WitnessKind::ThreeSetting;
  if (name == "s2" || name == "two") return WitnessKind::TwoSetting;
  if (name == "wittmann") return WitnessKind::Wittmann;
  if (name == "linear") return WitnessKind::LinearFunctional;
  throw ArgumentError("unknown witness '" + std::string(name) +
                      "' (expected s3, s2, wittmann or linear)");
}

std::string_view to_string(WitnessKind kind) {
  switch (kind) {
    case WitnessKind::ThreeSetting:
      return "s3";
    case WitnessKind::TwoSetting:
      return "s2";
    case WitnessKind::Wittmann:
      return "wittmann";
    case WitnessKind::LinearFunctional:
      return "linear";
  }
  return "?";
}

bool witness_violated(const WitnessSelector& selector, const QuantumState& state,
                      double eta_steerer) {
  static const SpinDirection xyz[] = {SpinDirection::X(), SpinDirection::Y(), SpinDirection::Z()};
  switch (selector.kind) {
    case WitnessKind::ThreeSetting:
      return *steering_param_3(state, xyz, selector.eta_steered, eta_steerer, selector.steerer)
                  .verdicts.steering_3;
    case WitnessKind::TwoSetting:
      return *steering_param_2(state, std::span(xyz, 2), eta_steerer, selector.steerer)
                  .verdicts.steering_2;
    case WitnessKind::Wittmann:
      return *wittmann_witness(state, xyz, selector.eta_steered, eta_steerer, selector.steerer)
                  .verdicts.wittmann;
    case WitnessKind::LinearFunctional: {
      if (!selector.ensemble) throw ArgumentError("linear witness needs a setting ensemble");
      return linear_functional(state, *selector.ensemble, eta_steerer, selector.policy).steering;
    }
  }
  return false;
}

ThresholdResult bisect_violation_boundary(const std::function<bool(double)>& violated, double lo,
                                          double hi, double tol) {
  if (!(lo < hi)) throw ArgumentError("bisect_violation_boundary: empty interval");
  if (!violated(hi)) return {};
  if (violated(lo)) return {lo};
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (violated(mid) ? hi : lo) = mid;
  }
  return {0.5 * (lo + hi)};
}

ThresholdResult critical_efficiency_scan(const WitnessSelector& selector, double p_s,
                                         double tol) {
  const QuantumState state = werner_state(p_s);
  return bisect_violation_boundary(
      [&](double eta_b) { return witness_violated(selector, state, eta_b); }, 0.0, 1.0, tol);
}

}  // namespace eprsteer
