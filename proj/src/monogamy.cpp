#include "eprsteer/monogamy.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <thread>

#include "eprsteer/errors.hpp"
#include "eprsteer/random_states.hpp"

namespace eprsteer {

namespace {

const char* party_name(std::size_t i) {
  static const char* names[] = {"A", "B", "C", "D", "E"};
  return names[i];
}

void check_parties(const QuantumState& state, std::span<const std::size_t> parties) {
  for (std::size_t i = 0; i < parties.size(); ++i) {
    if (parties[i] >= state.subsystem_count()) {
      throw ArgumentError("monogamy: party index " + std::to_string(parties[i]) +
                          " out of range");
    }
    if (state.dims()[parties[i]] != 2) throw ArgumentError("monogamy: parties must be qubits");
    for (std::size_t j = 0; j < i; ++j) {
      if (parties[i] == parties[j]) throw ArgumentError("monogamy: parties must be distinct");
    }
  }
}

// ivs[p][k]: inference variance of setting k inferred by steering party p.
std::vector<double> cyclic_cross_slacks(const std::vector<std::vector<double>>& ivs,
                                        double bound) {
  const std::size_t n = ivs.size();
  const std::size_t m = ivs.front().size();
  std::vector<double> out;
  for (std::size_t shift = 0; shift < m; ++shift) {
    double s = 0.0;
    for (std::size_t p = 0; p < n; ++p) s += ivs[p][(p + shift) % m];
    out.push_back(s - bound);
  }
  return out;
}

}  // namespace

QuantumState reduced_pair(const QuantumState& state, std::size_t steered, std::size_t steerer) {
  const std::size_t keep[] = {steered, steerer};
  QuantumState pair = partial_trace(state, keep);
  return steered < steerer ? pair : reorder(pair, {1, 0});
}

MonogamyReport monogamy_3(const QuantumState& state, std::array<std::size_t, 4> parties,
                          std::span<const SpinDirection> dirs, const MonogamyOptions& opts) {
  check_parties(state, parties);
  if (dirs.size() != 3) throw ArgumentError("monogamy_3: need three directions");
  require_orthogonal(dirs);
  MonogamyReport r;
  r.bound = 3.0;
  std::vector<std::vector<double>> ivs;
  double J = 0.0;
  for (std::size_t p = 1; p < 4; ++p) {
    const SteeringReport s = steering_param_3(reduced_pair(state, parties[0], parties[p]), dirs,
                                              opts.eta_steered, opts.eta_steerers, opts.strategy);
    r.terms.push_back({std::string("A|") + party_name(p), *s.S3});
    r.sum += *s.S3;
    J = s.J;
    std::vector<double> row;
    for (const auto& iv : s.inference_variances) row.push_back(iv.value);
    ivs.push_back(std::move(row));
  }
  r.slack = r.sum - r.bound;
  // Each cyclic assignment of the three settings to B, C, D is bounded by J.
  r.cross_slacks = cyclic_cross_slacks(ivs, J);
  return r;
}

MonogamyReport monogamy_2(const QuantumState& state, std::array<std::size_t, 3> parties,
                          std::span<const SpinDirection> dirs, const MonogamyOptions& opts) {
  check_parties(state, parties);
  if (dirs.size() != 2) throw ArgumentError("monogamy_2: need two directions");
  require_orthogonal(dirs);
  static const char* names[] = {"C", "B", "E"};
  MonogamyReport r;
  r.bound = 2.0;
  std::vector<std::vector<double>> ivs;
  for (std::size_t p = 1; p < 3; ++p) {
    const SteeringReport s = steering_param_2(reduced_pair(state, parties[0], parties[p]), dirs,
                                              opts.eta_steerers, opts.strategy);
    r.terms.push_back({std::string("C|") + names[p], *s.S2});
    r.sum += *s.S2;
    std::vector<double> row;
    for (const auto& iv : s.inference_variances) row.push_back(iv.value);
    ivs.push_back(std::move(row));
  }
  r.slack = r.sum - r.bound;
  // Two orthogonal spins of a trusted qubit: Var X + Var Y >= 1.
  r.cross_slacks = cyclic_cross_slacks(ivs, 1.0);
  return r;
}

int clone_count_bound(int m) {
  if (m < 2) throw ArgumentError("clone_count_bound: m must be at least 2");
  return m - 2;
}

namespace {

template <typename Eval>
std::vector<SweepRow> run_sweep(const SweepConfig& c, std::size_t qubits, Eval eval) {
  if (c.count == 0) throw ArgumentError("monogamy sweep: count must be positive");
  if (c.family == RandomFamily::Mixed && c.rank == 0) {
    throw ArgumentError("monogamy sweep: rank must be positive");
  }
  const std::vector<std::size_t> dims(qubits, 2);
  std::vector<SweepRow> rows(c.count);
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < c.count; i += stride) {
      Rng rng = Rng::substream(c.seed, i);
      const QuantumState s = c.family == RandomFamily::Pure ? haar_pure(dims, rng)
                                                            : haar_mixed(dims, c.rank, rng);
      rows[i] = {i, eval(s)};
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(c.workers, 1, c.count);
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
    for (auto& t : pool) t.join();
  }
  return rows;
}

}  // namespace

std::vector<SweepRow> sweep_monogamy_3(const SweepConfig& config) {
  static const SpinDirection xyz[] = {SpinDirection::X(), SpinDirection::Y(), SpinDirection::Z()};
  return run_sweep(config, 4, [&](const QuantumState& s) {
    return monogamy_3(s, {0, 1, 2, 3}, xyz, config.options);
  });
}

std::vector<SweepRow> sweep_monogamy_2(const SweepConfig& config) {
  static const SpinDirection xy[] = {SpinDirection::X(), SpinDirection::Y()};
  return run_sweep(config, 3, [&](const QuantumState& s) {
    return monogamy_2(s, {0, 1, 2}, xy, config.options);
  });
}

void write_sweep_csv(std::ostream& out, std::uint64_t seed, const std::vector<SweepRow>& rows) {
  out << "seed,index,slack";
  if (!rows.empty()) {
    for (const auto& t : rows.front().report.terms) out << ",S_" << t.label;
  }
  out << '\n';
  char buf[64];
  for (const auto& row : rows) {
    out << seed << ',' << row.index;
    std::snprintf(buf, sizeof buf, ",%.17g", row.report.slack);
    out << buf;
    for (const auto& t : row.report.terms) {
      std::snprintf(buf, sizeof buf, ",%.17g", t.value);
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace eprsteer
