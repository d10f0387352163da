#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eprsteer/observables.hpp"
#include "eprsteer/quantum_state.hpp"

namespace eprsteer {

// Throughout, a bipartite state has the steered party at subsystem 0 and the
// steering (inferring) party at subsystem 1.

/// Statistics of the steered outcome conditioned on one steerer outcome.
struct ConditionalBranch {
  int outcome = 0;           // steerer outcome b
  double probability = 0.0;  // P(b)
  double mean = 0.0;         // <S_A | b>
  double second_moment = 0.0;
  double variance = 0.0;     // zero when probability is zero
};

/// One steered setting and its inferring setting.
struct ConditionalBlock {
  std::string label;
  std::array<ConditionalBranch, 3> branches;  // b = -1, 0, +1

  /// sum_b P(b) Var(S_A | b)
  double inference_variance() const;
  /// sum_b P(b) <S_A | b>^2
  double explained() const;
  /// <S_A^2>, which is the detection probability for outcomes in {-1,0,1}.
  double second_moment() const;
  double total_probability() const;
};

struct ConditionalStats {
  std::vector<ConditionalBlock> blocks;
  /// Throws NumericError if a block's probabilities do not sum to 1 (1e-10)
  /// or a variance is below -1e-12.
  void validate() const;
};

/// Joint Born statistics of the two measurements on a bipartite state.
ConditionalBlock conditional_block(const QuantumState& state, const LossyObservable& steered,
                                   const LossyObservable& steerer, std::string label = {});

double inference_variance(const QuantumState& state, const LossyObservable& steered,
                          const LossyObservable& steerer);

/// <n^2> - <n>^2 + 2<n>
double uncertainty_bound_from_moments(double mean_n, double mean_n2);
/// Single-photon site with detection efficiency eta: eta (3 - eta).
double uncertainty_bound_J(double eta);
/// From the measured statistics of `steered` on subsystem 0 (n = |outcome|).
double uncertainty_bound_J(const QuantumState& state, const LossyObservable& steered);
/// From number-operator moments of a dual-rail mode pair (two-level modes).
double uncertainty_bound_J(const QuantumState& state, std::size_t mode_plus,
                           std::size_t mode_minus);

/// Local Bloch vectors and correlation tensor of a two-qubit state.
struct BlochData {
  std::array<double, 3> steered{};
  std::array<double, 3> steerer{};
  std::array<std::array<double, 3>, 3> correlation{};  // T_ij = <s_i (x) s_j>
};
BlochData bloch_data(const QuantumState& two_qubits);

/// Closed-form inference variance for lossy single-photon spins on both
/// sides, from Bloch data. Agrees with the effect-based route.
double inference_variance_bloch(const BlochData& bloch, const SpinDirection& steered_dir,
                                const SpinDirection& steerer_dir, double eta_steered,
                                double eta_steerer);

/// How the steering party picks its measurement for each steered setting.
struct SteererStrategy {
  enum class Kind { SameDirection, GridSearch };
  Kind kind = Kind::SameDirection;
  std::size_t grid_points = 256;  // hemisphere points for GridSearch
  bool refine = true;             // local polish of the best grid point

  static SteererStrategy same_direction() { return {}; }
  static SteererStrategy grid(std::size_t points = 256, bool refine = true) {
    return {Kind::GridSearch, points, refine};
  }
};

/// Near-uniform directions on the upper hemisphere (steerer sign is
/// irrelevant to the inference variance). Cached per size.
const std::vector<SpinDirection>& hemisphere_grid(std::size_t points);

struct SteererChoice {
  SpinDirection direction;
  double inference_variance;
};
/// Steerer direction minimising the inference variance (two-qubit states).
SteererChoice best_steerer(const BlochData& bloch, const SpinDirection& steered_dir,
                           double eta_steered, double eta_steerer,
                           const SteererStrategy& strategy);

/// Verdicts are strict and must not flip on roundoff at an exact boundary
/// (eta_B = 1/3 gives S3 = 1 - 2e-16, for instance), so a witness only
/// counts as violated once it clears its bound by this margin.
inline constexpr double kVerdictRoundoff = 1e-12;

struct NamedValue {
  std::string label;
  double value;
};

struct SteeringReport {
  std::vector<NamedValue> inference_variances;
  std::vector<std::string> steerer_directions;
  double J = 0.0;
  std::optional<double> S3;
  std::optional<double> S2;
  std::optional<double> wittmann_S;
  std::optional<double> wittmann_bound;
  struct Verdicts {
    std::optional<bool> steering_3;  // S3 < 1
    std::optional<bool> steering_2;  // S2 < 1
    std::optional<bool> wittmann;    // wittmann_S > wittmann_bound
    // each up to kVerdictRoundoff, toward "no violation"
  } verdicts;
};

/// Throws ArgumentError unless the directions are pairwise orthogonal (1e-10).
void require_orthogonal(std::span<const SpinDirection> dirs);

/// Three-setting parameter S3 = sum of inference variances / J with lossy
/// detection on both sides. Throws UndefinedWitnessError when J = 0.
SteeringReport steering_param_3(const QuantumState& state, std::span<const SpinDirection> dirs,
                                double eta_steered, double eta_steerer,
                                const SteererStrategy& strategy = {});

/// Two-setting parameter with trusted (projective) detection on the steered
/// side; the steerer is lossy with efficiency eta_steerer.
SteeringReport steering_param_2(const QuantumState& state, std::span<const SpinDirection> dirs,
                                double eta_steerer, const SteererStrategy& strategy = {});

/// Loss-extended Wittmann form: S = T_X + T_Y + T_Z against eta_A^2.
SteeringReport wittmann_witness(const QuantumState& state, std::span<const SpinDirection> dirs,
                                double eta_steered, double eta_steerer,
                                const SteererStrategy& strategy = {});

/// Exact conditional statistics for a list of settings (all lossy).
ConditionalStats stats_from_state(const QuantumState& state, std::span<const SpinDirection> dirs,
                                  double eta_steered, double eta_steerer,
                                  const SteererStrategy& strategy = {});

/// Evaluates the witnesses on (possibly empirical) conditional statistics:
/// three blocks give S3 and the Wittmann form, two blocks give S2.
SteeringReport report_from_stats(const ConditionalStats& stats, double J);

}  // namespace eprsteer
