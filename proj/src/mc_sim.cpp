#include "eprsteer/mc_sim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "eprsteer/errors.hpp"
#include "eprsteer/rng.hpp"

namespace eprsteer {

Schedule spin_schedule(const std::vector<SpinDirection>& dirs, double eta_a, double eta_b,
                       ScheduleKind kind) {
  Schedule s;
  s.kind = kind;
  for (const auto& d : dirs) {
    s.pairs.push_back({d.label(), d.label(), lossy_spin_measurement(d, eta_a),
                       lossy_spin_measurement(d, eta_b)});
  }
  return s;
}

namespace {

// Cell index (a + 1) * 3 + (b + 1).
using CellTable = std::array<double, 9>;

CellTable cumulative_cells(const QuantumState& state, const SettingPair& pair) {
  if (state.subsystem_count() != 2 || state.dims()[0] != pair.a.dimension() ||
      state.dims()[1] != pair.b.dimension()) {
    throw ArgumentError("sample_trials: setting '" + pair.label_a + "," + pair.label_b +
                        "' does not match the state dimensions");
  }
  CellTable cdf{};
  double acc = 0.0;
  for (const auto& ea : pair.a.effects()) {
    for (const auto& eb : pair.b.effects()) {
      const double p = std::max(0.0, probability(state, kron(ea.effect, eb.effect)));
      acc += p;
      cdf[(ea.outcome + 1) * 3 + (eb.outcome + 1)] = acc;
    }
  }
  for (double& c : cdf) c /= acc;
  cdf[8] = 1.0;
  return cdf;
}

}  // namespace

RecordSet sample_trials(const QuantumState& state, const Schedule& schedule, std::uint64_t n,
                        std::uint64_t seed, unsigned workers) {
  if (n == 0) throw ArgumentError("sample_trials: n must be at least 1");
  if (schedule.pairs.empty()) throw ArgumentError("sample_trials: empty schedule");
  const std::uint64_t np = schedule.pairs.size();
  std::vector<CellTable> cdfs;
  RecordSet out;
  for (const auto& pair : schedule.pairs) {
    cdfs.push_back(cumulative_cells(state, pair));
    out.settings.emplace_back(pair.label_a, pair.label_b);
  }
  out.trials.resize(n);

  const std::uint64_t shards = (n + kShardSize - 1) / kShardSize;
  auto run_shard = [&](std::uint64_t shard) {
    Rng rng = Rng::substream(seed, shard);
    const std::uint64_t end = std::min(n, (shard + 1) * kShardSize);
    for (std::uint64_t t = shard * kShardSize; t < end; ++t) {
      const std::uint64_t k =
          schedule.kind == ScheduleKind::Uniform ? rng.below(np) : (t * np) / n;
      const CellTable& cdf = cdfs[k];
      const double u = rng.uniform();
      const std::size_t cell = static_cast<std::size_t>(
          std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
      const std::size_t c = std::min<std::size_t>(cell, 8);
      out.trials[t] = {t, static_cast<std::uint32_t>(k), static_cast<int>(c / 3) - 1,
                       static_cast<int>(c % 3) - 1};
    }
  };
  const std::uint64_t pool_size = std::clamp<std::uint64_t>(workers, 1, shards);
  if (pool_size == 1) {
    for (std::uint64_t s = 0; s < shards; ++s) run_shard(s);
  } else {
    std::vector<std::thread> pool;
    for (std::uint64_t w = 0; w < pool_size; ++w) {
      pool.emplace_back([&, w] {
        for (std::uint64_t s = w; s < shards; s += pool_size) run_shard(s);
      });
    }
    for (auto& th : pool) th.join();
  }
  return out;
}

void write_records_csv(std::ostream& out, const RecordSet& records) {
  out << kRecordHeader << '\n';
  for (const auto& r : records.trials) {
    const auto& [la, lb] = records.settings.at(r.setting);
    out << r.trial << ',' << la << ',' << lb << ',' << r.outcome_a << ',' << r.outcome_b << '\n';
  }
}

namespace {

int parse_outcome(const std::string& field, std::size_t line) {
  if (field == "-1") return -1;
  if (field == "0") return 0;
  if (field == "1") return 1;
  throw ArgumentError("records line " + std::to_string(line) + ": outcome '" + field +
                      "' is not -1, 0 or 1");
}

}  // namespace

RecordSet read_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ArgumentError("records: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kRecordHeader) {
    throw ArgumentError("records: header must be '" + std::string(kRecordHeader) + "'");
  }
  RecordSet out;
  std::map<std::pair<std::string, std::string>, std::uint32_t> index;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string field; std::getline(ss, field, ',');) f.push_back(field);
    if (f.size() != 5) {
      throw ArgumentError("records line " + std::to_string(lineno) + ": expected 5 fields");
    }
    TrialRecord r{};
    try {
      std::size_t used = 0;
      r.trial = std::stoull(f[0], &used);
      if (used != f[0].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ArgumentError("records line " + std::to_string(lineno) + ": bad trial index");
    }
    auto key = std::make_pair(f[1], f[2]);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, static_cast<std::uint32_t>(out.settings.size())).first;
      out.settings.push_back(key);
    }
    r.setting = it->second;
    r.outcome_a = parse_outcome(f[3], lineno);
    r.outcome_b = parse_outcome(f[4], lineno);
    out.trials.push_back(r);
  }
  return out;
}

nlohmann::ordered_json record_metadata(const Schedule& schedule, std::uint64_t n,
                                       std::uint64_t seed, const nlohmann::ordered_json& state) {
  nlohmann::ordered_json settings = nlohmann::ordered_json::array();
  for (const auto& p : schedule.pairs) {
    settings.push_back({{"setting_a", p.label_a},
                        {"setting_b", p.label_b},
                        {"eta_a", p.a.efficiency()},
                        {"eta_b", p.b.efficiency()}});
  }
  return {{"generator", std::string(Rng::kAlgorithm)},
          {"shard_size", kShardSize},
          {"seed", seed},
          {"trials", n},
          {"schedule", schedule.kind == ScheduleKind::Uniform ? "uniform" : "blocked"},
          {"state", state},
          {"settings", settings}};
}

namespace {

// Counts per (setting, a, b) cell; everything the estimators need.
struct CellCounts {
  std::size_t blocks;
  std::vector<std::uint64_t> n;  // blocks * 9

  std::uint64_t& at(std::size_t k, int a, int b) { return n[k * 9 + (a + 1) * 3 + (b + 1)]; }
  std::uint64_t at(std::size_t k, int a, int b) const {
    return n[k * 9 + (a + 1) * 3 + (b + 1)];
  }
};

struct Evaluated {
  SteeringReport report;
  bool ok = true;  // false if a setting has no trials at all
};

Evaluated evaluate(const CellCounts& c, const std::vector<std::string>& labels,
                   std::vector<std::string>* warnings) {
  ConditionalStats stats;
  std::uint64_t total = 0, detected = 0;
  for (std::size_t k = 0; k < c.blocks; ++k) {
    ConditionalBlock block;
    block.label = labels[k];
    std::uint64_t nk = 0;
    for (int a = -1; a <= 1; ++a) {
      for (int b = -1; b <= 1; ++b) nk += c.at(k, a, b);
    }
    if (nk == 0) return {{}, false};
    for (int b = -1; b <= 1; ++b) {
      ConditionalBranch& br = block.branches[b + 1];
      br.outcome = b;
      std::uint64_t nb = 0;
      double m1 = 0.0, m2 = 0.0;
      for (int a = -1; a <= 1; ++a) {
        const std::uint64_t x = c.at(k, a, b);
        nb += x;
        m1 += a * static_cast<double>(x);
        m2 += a * a * static_cast<double>(x);
        if (a != 0) detected += x;
      }
      br.probability = static_cast<double>(nb) / static_cast<double>(nk);
      if (nb == 0) {
        if (warnings) {
          warnings->push_back("setting " + labels[k] + ": no trials with steerer outcome " +
                              std::to_string(b) + "; cell given zero weight");
        }
        continue;
      }
      br.mean = m1 / static_cast<double>(nb);
      br.second_moment = m2 / static_cast<double>(nb);
      br.variance = std::max(0.0, br.second_moment - br.mean * br.mean);
    }
    total += nk;
    stats.blocks.push_back(std::move(block));
  }
  // n = |outcome_a| is 0 or 1, so <n^2> = <n>.
  const double pn = static_cast<double>(detected) / static_cast<double>(total);
  return {report_from_stats(stats, uncertainty_bound_from_moments(pn, pn)), true};
}

double std_error(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

}  // namespace

EstimatedReport estimate_report(const RecordSet& records, const EstimateOptions& options) {
  const std::uint64_t n = records.trials.size();
  if (n == 0) throw ArgumentError("estimate_report: no records");
  const std::size_t blocks = records.settings.size();
  if (blocks != 2 && blocks != 3) {
    throw ArgumentError("estimate_report: records hold " + std::to_string(blocks) +
                        " setting pairs; need 2 or 3");
  }
  std::vector<std::string> labels;
  for (const auto& [a, b] : records.settings) labels.push_back(a == b ? a : a + "/" + b);

  std::vector<std::uint16_t> cell_of(n);
  CellCounts counts{blocks, std::vector<std::uint64_t>(blocks * 9, 0)};
  EstimatedReport out;
  for (std::uint64_t i = 0; i < n; ++i) {
    const TrialRecord& r = records.trials[i];
    if (r.setting >= blocks) throw ArgumentError("estimate_report: setting index out of range");
    cell_of[i] = static_cast<std::uint16_t>(r.setting * 9 + (r.outcome_a + 1) * 3 + (r.outcome_b + 1));
    ++counts.n[cell_of[i]];
    ++out.records_consumed;
  }

  Evaluated point = evaluate(counts, labels, &out.warnings);
  if (!point.ok) throw ArgumentError("estimate_report: a setting pair has no trials");
  out.point = std::move(point.report);

  // Bootstrap over trials; each replicate redraws n record indices.
  std::vector<std::vector<double>> ivs(blocks);
  std::vector<double> js, s3, s2, ws;
  Rng rng(options.bootstrap_seed);
  std::size_t skipped = 0;
  for (std::size_t rep = 0; rep < options.bootstrap; ++rep) {
    CellCounts rc{blocks, std::vector<std::uint64_t>(blocks * 9, 0)};
    for (std::uint64_t i = 0; i < n; ++i) ++rc.n[cell_of[rng.below(n)]];
    Evaluated e;
    try {
      e = evaluate(rc, labels, nullptr);
    } catch (const UndefinedWitnessError&) {
      e.ok = false;
    }
    if (!e.ok) {
      ++skipped;
      continue;
    }
    for (std::size_t k = 0; k < blocks; ++k) ivs[k].push_back(e.report.inference_variances[k].value);
    js.push_back(e.report.J);
    if (e.report.S3) s3.push_back(*e.report.S3);
    if (e.report.S2) s2.push_back(*e.report.S2);
    if (e.report.wittmann_S) ws.push_back(*e.report.wittmann_S);
  }
  if (skipped > 0) {
    out.warnings.push_back(std::to_string(skipped) +
                           " bootstrap replicates skipped (a setting or J was empty)");
  }

  for (std::size_t k = 0; k < blocks; ++k) {
    out.inference_variances.emplace_back(
        labels[k], EstimateWithError{out.point.inference_variances[k].value, std_error(ivs[k]), n});
  }
  out.J = {out.point.J, std_error(js), n};
  if (out.point.S3) out.S3 = EstimateWithError{*out.point.S3, std_error(s3), n};
  if (out.point.S2) out.S2 = EstimateWithError{*out.point.S2, std_error(s2), n};
  if (out.point.wittmann_S) out.wittmann_S = EstimateWithError{*out.point.wittmann_S, std_error(ws), n};

  if (n < options.min_trials) {
    out.point.verdicts = {};
    out.warnings.push_back("only " + std::to_string(n) + " trials (minimum " +
                           std::to_string(options.min_trials) + "); no verdict emitted");
  }
  return out;
}

}  // namespace eprsteer
