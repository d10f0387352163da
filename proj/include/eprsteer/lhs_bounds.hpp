#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eprsteer/observables.hpp"
#include "eprsteer/quantum_state.hpp"
#include "eprsteer/steering.hpp"

namespace eprsteer {

inline constexpr std::size_t kMaxEnsembleSettings = 16;

struct SettingEnsemble {
  std::string name;
  std::vector<SpinDirection> directions;

  std::size_t m() const noexcept { return directions.size(); }
};

/// Builds an ensemble, requiring at least two settings.
SettingEnsemble make_ensemble(std::string name, std::vector<SpinDirection> directions);

/// "orthogonal2", "orthogonal3", "tetrahedron" (4 vertices), "octahedron"
/// (6 vertices), "icosahedron" (6 vertex axes).
SettingEnsemble named_ensemble(std::string_view name);
std::vector<std::string> ensemble_names();

struct LhsBound {
  double value;            // C_m
  std::vector<int> signs;  // maximising declaration, entries +-1
};

/// C_m = (1/m) max_{a in {+-1}^m} || sum_k a_k u_k ||, the largest value of
/// the m-setting correlator reachable by a local-hidden-state model.
/// Throws SizeError for m > 16.
LhsBound lhs_bound(const SettingEnsemble& ensemble);

/// What the steering party declares when nothing is detected.
enum class DeclarationPolicy { Drop, RandomSign };
DeclarationPolicy parse_declaration_policy(std::string_view name);

struct FunctionalValue {
  double value;
  double bound;   // C_m
  bool steering;  // value > bound
};

/// (1/m) sum_k |<D_k sigma_k>| on a (steered, steerer) qubit pair: trusted
/// projective spin along u_k on the steered side, lossy declaration D_k
/// along u_k on the steering side. Each term's sign is folded, which the
/// bound C_m already covers since it maximises over all sign declarations.
FunctionalValue linear_functional(const QuantumState& state, const SettingEnsemble& ensemble,
                                  double eta_steerer,
                                  DeclarationPolicy policy = DeclarationPolicy::Drop);

enum class WitnessKind { ThreeSetting, TwoSetting, Wittmann, LinearFunctional };
WitnessKind parse_witness_kind(std::string_view name);
std::string_view to_string(WitnessKind kind);

struct WitnessSelector {
  WitnessKind kind = WitnessKind::ThreeSetting;
  double eta_steered = 1.0;  // ignored by the trusted-side witnesses
  std::optional<SettingEnsemble> ensemble;  // LinearFunctional only
  DeclarationPolicy policy = DeclarationPolicy::Drop;
  SteererStrategy steerer{};
};

/// Whether the selected witness flags steering on `state` with steerer
/// efficiency eta_steerer.
bool witness_violated(const WitnessSelector& selector, const QuantumState& state,
                      double eta_steerer);

struct ThresholdResult {
  std::optional<double> threshold;  // empty when unattainable
  bool attainable() const { return threshold.has_value(); }
};

/// Boundary of a monotone predicate on [lo, hi] (false below, true above),
/// by bisection to `tol`. Unattainable when the predicate is false at hi.
ThresholdResult bisect_violation_boundary(const std::function<bool(double)>& violated, double lo,
                                          double hi, double tol = 1e-10);

/// Critical steerer efficiency for werner(p_s) under the selected witness.
ThresholdResult critical_efficiency_scan(const WitnessSelector& selector, double p_s,
                                         double tol = 1e-10);

}  // namespace eprsteer
