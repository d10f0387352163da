#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "eprsteer/observables.hpp"
#include "eprsteer/quantum_state.hpp"
#include "eprsteer/steering.hpp"

namespace eprsteer {

/// Trials per sub-stream. Part of the record format: changing it changes
/// every record file for a given seed.
inline constexpr std::uint64_t kShardSize = 65536;

struct SettingPair {
  std::string label_a;
  std::string label_b;
  LossyObservable a;  // steered site (subsystem 0)
  LossyObservable b;  // steering site (subsystem 1)
};

enum class ScheduleKind {
  Uniform,  // independent uniform choice per trial
  Blocked,  // contiguous equal blocks in schedule order
};

struct Schedule {
  std::vector<SettingPair> pairs;
  ScheduleKind kind = ScheduleKind::Uniform;
};

/// Same-direction lossy spin settings on both sites.
Schedule spin_schedule(const std::vector<SpinDirection>& dirs, double eta_a, double eta_b,
                       ScheduleKind kind = ScheduleKind::Uniform);

/// One trial. Every trial is kept, including those with no detection.
struct TrialRecord {
  std::uint64_t trial;
  std::uint32_t setting;  // index into RecordSet::settings
  int outcome_a;          // -1, 0, +1
  int outcome_b;
};

struct RecordSet {
  std::vector<std::pair<std::string, std::string>> settings;  // (a, b) labels
  std::vector<TrialRecord> trials;
};

/// Draws n trials from the exact joint Born probabilities. Trials are cut
/// into shards of kShardSize; shard s uses sub-stream s of `seed`, so the
/// result does not depend on `workers`.
RecordSet sample_trials(const QuantumState& state, const Schedule& schedule, std::uint64_t n,
                        std::uint64_t seed, unsigned workers = 1);

inline constexpr const char* kRecordHeader = "trial,setting_a,setting_b,outcome_a,outcome_b";

void write_records_csv(std::ostream& out, const RecordSet& records);
/// Throws ArgumentError with the offending line number on malformed input.
/// Setting pairs are indexed in order of first appearance.
RecordSet read_records_csv(std::istream& in);

/// Sidecar describing how a record file was produced.
nlohmann::ordered_json record_metadata(const Schedule& schedule, std::uint64_t n,
                                       std::uint64_t seed, const nlohmann::ordered_json& state);

struct EstimateWithError {
  double value;
  double standard_error;
  std::uint64_t n_trials;
};

struct EstimateOptions {
  std::size_t bootstrap = 200;
  std::uint64_t bootstrap_seed = 1;
  std::uint64_t min_trials = 1000;  // no verdicts below this
};

struct EstimatedReport {
  SteeringReport point;  // plug-in estimates; verdicts cleared below min_trials
  std::vector<std::pair<std::string, EstimateWithError>> inference_variances;
  EstimateWithError J{};
  std::optional<EstimateWithError> S3;
  std::optional<EstimateWithError> S2;
  std::optional<EstimateWithError> wittmann_S;
  std::vector<std::string> warnings;
  std::uint64_t records_consumed = 0;
};

/// Plug-in witnesses from trial records with bootstrap standard errors.
/// Three setting pairs give S3 and the Wittmann form, two give S2. A
/// conditional cell with no trials enters with zero weight and a warning.
EstimatedReport estimate_report(const RecordSet& records, const EstimateOptions& options = {});

}  // namespace eprsteer
