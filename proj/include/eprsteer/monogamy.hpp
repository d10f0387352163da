#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "eprsteer/quantum_state.hpp"
#include "eprsteer/steering.hpp"

namespace eprsteer {

inline constexpr double kMonogamyTolerance = 1e-9;

struct MonogamyTerm {
  std::string label;  // e.g. "A|B"
  double value;
};

struct MonogamyReport {
  std::vector<MonogamyTerm> terms;
  double sum = 0.0;
  double bound = 0.0;
  double slack = 0.0;  // sum - bound
  /// Cyclic cross sums of inference variances, each less its own bound; one
  /// entry per cyclic shift of the settings across the inferring parties.
  std::vector<double> cross_slacks;

  bool holds() const { return slack >= -kMonogamyTolerance; }
};

struct MonogamyOptions {
  double eta_steered = 1.0;
  double eta_steerers = 1.0;
  SteererStrategy strategy = SteererStrategy::grid();
};

/// Qubits (steered, steerer) reduced from `state`, steered party first.
QuantumState reduced_pair(const QuantumState& state, std::size_t steered, std::size_t steerer);

/// Three-setting terms S_{A|B} + S_{A|C} + S_{A|D} against 3. `parties` holds
/// the subsystem indices of A, B, C, D; every other subsystem is traced out.
MonogamyReport monogamy_3(const QuantumState& state, std::array<std::size_t, 4> parties,
                          std::span<const SpinDirection> dirs, const MonogamyOptions& opts = {});

/// Two-setting terms S_{C|B} + S_{C|E} against 2 with C trusted. `parties`
/// holds C, B, E.
MonogamyReport monogamy_2(const QuantumState& state, std::array<std::size_t, 3> parties,
                          std::span<const SpinDirection> dirs, const MonogamyOptions& opts = {});

/// Largest number of parties besides the steered one's partner that can also
/// violate the m-setting witness: m - 2.
int clone_count_bound(int m);

enum class RandomFamily { Pure, Mixed };

struct SweepConfig {
  std::size_t count = 1000;
  std::uint64_t seed = 1;
  RandomFamily family = RandomFamily::Pure;
  std::size_t rank = 2;  // Mixed only
  unsigned workers = 1;
  MonogamyOptions options{};
};

struct SweepRow {
  std::uint64_t index;  // sub-stream of the sweep seed
  MonogamyReport report;
};

/// Random four-qubit states through monogamy_3 (parties 0..3). Each state
/// draws from sub-stream `index` of the seed, so output does not depend on
/// the worker count.
std::vector<SweepRow> sweep_monogamy_3(const SweepConfig& config);
/// Random three-qubit states through monogamy_2 (parties 0..2).
std::vector<SweepRow> sweep_monogamy_2(const SweepConfig& config);

/// seed,index,slack,<term labels...>
void write_sweep_csv(std::ostream& out, std::uint64_t seed, const std::vector<SweepRow>& rows);

}  // namespace eprsteer
