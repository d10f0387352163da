#include "eprsteer/steering.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "eprsteer/errors.hpp"
#include "eprsteer/kernels.hpp"

namespace eprsteer {

namespace {

// Branches lighter than this carry no weight; their conditional moments are
// left at zero.
constexpr double kBranchFloor = 1e-14;

struct GridSoA {
  std::vector<SpinDirection> dirs;
  std::vector<double> x, y, z;
};

const GridSoA& grid_soa(std::size_t points) {
  static std::mutex mu;
  static std::map<std::size_t, GridSoA> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(points);
  if (it != cache.end()) return it->second;
  GridSoA g;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (std::size_t i = 0; i < points; ++i) {
    const double z = (static_cast<double>(i) + 0.5) / static_cast<double>(points);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * static_cast<double>(i);
    const auto d = SpinDirection::normalized(r * std::cos(phi), r * std::sin(phi), z);
    g.dirs.push_back(d);
    g.x.push_back(d.x());
    g.y.push_back(d.y());
    g.z.push_back(d.z());
  }
  return cache.emplace(points, std::move(g)).first->second;
}

kernels::DirectionScanInput scan_input(const BlochData& bloch, const SpinDirection& steered_dir,
                                       double eta_steered, double eta_steerer) {
  kernels::DirectionScanInput in;
  const auto& u = steered_dir.vec();
  in.alpha = u[0] * bloch.steered[0] + u[1] * bloch.steered[1] + u[2] * bloch.steered[2];
  for (int j = 0; j < 3; ++j) {
    in.t[j] = u[0] * bloch.correlation[0][j] + u[1] * bloch.correlation[1][j] +
              u[2] * bloch.correlation[2][j];
    in.b[j] = bloch.steerer[j];
  }
  in.eta_steered = eta_steered;
  in.eta_steerer = eta_steerer;
  return in;
}

double scan_one(const kernels::DirectionScanInput& in, const SpinDirection& d) {
  const double x[] = {d.x()}, y[] = {d.y()}, z[] = {d.z()};
  double out[1];
  kernels::active().direction_scan(in, std::span<const double>(x), std::span<const double>(y),
                                   std::span<const double>(z), std::span<double>(out));
  return out[0];
}

// Orthonormal tangent pair at v.
void tangent_basis(const std::array<double, 3>& v, std::array<double, 3>& e1,
                   std::array<double, 3>& e2) {
  const std::array<double, 3> helper =
      std::abs(v[0]) < 0.9 ? std::array<double, 3>{1, 0, 0} : std::array<double, 3>{0, 1, 0};
  e1 = {v[1] * helper[2] - v[2] * helper[1], v[2] * helper[0] - v[0] * helper[2],
        v[0] * helper[1] - v[1] * helper[0]};
  const double n = std::sqrt(e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]);
  for (auto& c : e1) c /= n;
  e2 = {v[1] * e1[2] - v[2] * e1[1], v[2] * e1[0] - v[0] * e1[2], v[0] * e1[1] - v[1] * e1[0]};
}

SteeringReport witness_subset(SteeringReport full, bool keep_s3, bool keep_s2, bool keep_w) {
  if (!keep_s3) {
    full.S3.reset();
    full.verdicts.steering_3.reset();
  }
  if (!keep_s2) {
    full.S2.reset();
    full.verdicts.steering_2.reset();
  }
  if (!keep_w) {
    full.wittmann_S.reset();
    full.wittmann_bound.reset();
    full.verdicts.wittmann.reset();
  }
  return full;
}

std::vector<std::string> steerer_labels(const QuantumState& state,
                                        std::span<const SpinDirection> dirs, double eta_steered,
                                        double eta_steerer, const SteererStrategy& strategy,
                                        std::vector<SpinDirection>& chosen) {
  chosen.clear();
  std::vector<std::string> labels;
  std::optional<BlochData> bloch;
  if (strategy.kind == SteererStrategy::Kind::GridSearch) bloch = bloch_data(state);
  for (const auto& d : dirs) {
    if (bloch) {
      chosen.push_back(best_steerer(*bloch, d, eta_steered, eta_steerer, strategy).direction);
    } else {
      chosen.push_back(d);
    }
    labels.push_back(chosen.back().label());
  }
  return labels;
}

}  // namespace

double ConditionalBlock::inference_variance() const {
  double v = 0.0;
  for (const auto& b : branches) v += b.probability * b.variance;
  return v;
}

double ConditionalBlock::explained() const {
  double t = 0.0;
  for (const auto& b : branches) t += b.probability * b.mean * b.mean;
  return t;
}

double ConditionalBlock::second_moment() const {
  double m = 0.0;
  for (const auto& b : branches) m += b.probability * b.second_moment;
  return m;
}

double ConditionalBlock::total_probability() const {
  double p = 0.0;
  for (const auto& b : branches) p += b.probability;
  return p;
}

void ConditionalStats::validate() const {
  for (const auto& block : blocks) {
    if (std::abs(block.total_probability() - 1.0) > 1e-10) {
      throw NumericError("ConditionalStats: block '" + block.label +
                         "' probabilities sum to " + std::to_string(block.total_probability()));
    }
    for (const auto& b : block.branches) {
      if (b.variance < -1e-12) {
        throw NumericError("ConditionalStats: negative conditional variance in '" + block.label +
                           "'");
      }
    }
  }
}

ConditionalBlock conditional_block(const QuantumState& state, const LossyObservable& steered,
                                   const LossyObservable& steerer, std::string label) {
  if (state.subsystem_count() != 2) {
    throw ArgumentError("conditional_block: state must be bipartite (reduce it first)");
  }
  if (state.dims()[0] != steered.dimension() || state.dims()[1] != steerer.dimension()) {
    throw ArgumentError("conditional_block: observable dimensions do not match the state");
  }
  ConditionalBlock block;
  block.label = std::move(label);
  double joint[3][3];  // [a+1][b+1]
  for (const auto& ea : steered.effects()) {
    for (const auto& eb : steerer.effects()) {
      joint[ea.outcome + 1][eb.outcome + 1] = probability(state, kron(ea.effect, eb.effect));
    }
  }
  for (int b = -1; b <= 1; ++b) {
    ConditionalBranch& br = block.branches[b + 1];
    br.outcome = b;
    double p = 0.0, m1 = 0.0, m2 = 0.0;
    for (int a = -1; a <= 1; ++a) {
      const double pab = joint[a + 1][b + 1];
      p += pab;
      m1 += a * pab;
      m2 += a * a * pab;
    }
    br.probability = p;
    if (p > kBranchFloor) {
      br.mean = m1 / p;
      br.second_moment = m2 / p;
      br.variance = br.second_moment - br.mean * br.mean;
    }
  }
  return block;
}

double inference_variance(const QuantumState& state, const LossyObservable& steered,
                          const LossyObservable& steerer) {
  return conditional_block(state, steered, steerer).inference_variance();
}

double uncertainty_bound_from_moments(double mean_n, double mean_n2) {
  return mean_n2 - mean_n * mean_n + 2.0 * mean_n;
}

double uncertainty_bound_J(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw ArgumentError("uncertainty_bound_J: eta outside [0,1]");
  return uncertainty_bound_from_moments(eta, eta);
}

double uncertainty_bound_J(const QuantumState& state, const LossyObservable& steered) {
  if (state.dims()[0] != steered.dimension()) {
    throw ArgumentError("uncertainty_bound_J: observable dimension mismatch");
  }
  const ComplexMatrix detected = steered.effect(-1) + steered.effect(+1);
  const QuantumState reduced = state.subsystem_count() == 1 ? state : partial_trace(state, {0});
  // n = |outcome| takes values 0 and 1, so <n^2> = <n>.
  const double p = probability(reduced, detected);
  return uncertainty_bound_from_moments(p, p);
}

double uncertainty_bound_J(const QuantumState& state, std::size_t mode_plus,
                           std::size_t mode_minus) {
  if (mode_plus >= state.subsystem_count() || mode_minus >= state.subsystem_count() ||
      mode_plus == mode_minus) {
    throw ArgumentError("uncertainty_bound_J: bad mode indices");
  }
  const std::size_t cutoff = state.dims()[mode_plus];
  if (state.dims()[mode_minus] != cutoff) {
    throw ArgumentError("uncertainty_bound_J: mode cutoffs differ");
  }
  const std::size_t keep[] = {std::min(mode_plus, mode_minus), std::max(mode_plus, mode_minus)};
  const QuantumState pair = partial_trace(state, keep);
  const ComplexMatrix n = number_operator(cutoff);
  return uncertainty_bound_from_moments(expectation(pair, n), expectation(pair, n * n));
}

BlochData bloch_data(const QuantumState& s) {
  if (s.dims() != std::vector<std::size_t>{2, 2}) {
    throw ArgumentError("bloch_data: state must be two qubits");
  }
  static const std::array<ComplexMatrix, 3> sigma = {pauli(SpinDirection::X()),
                                                     pauli(SpinDirection::Y()),
                                                     pauli(SpinDirection::Z())};
  static const ComplexMatrix id = ComplexMatrix::identity(2);
  BlochData d;
  for (int i = 0; i < 3; ++i) {
    d.steered[i] = trace_product(s.rho(), kron(sigma[i], id)).real();
    d.steerer[i] = trace_product(s.rho(), kron(id, sigma[i])).real();
    for (int j = 0; j < 3; ++j) {
      d.correlation[i][j] = trace_product(s.rho(), kron(sigma[i], sigma[j])).real();
    }
  }
  return d;
}

double inference_variance_bloch(const BlochData& bloch, const SpinDirection& steered_dir,
                                const SpinDirection& steerer_dir, double eta_steered,
                                double eta_steerer) {
  return scan_one(scan_input(bloch, steered_dir, eta_steered, eta_steerer), steerer_dir);
}

const std::vector<SpinDirection>& hemisphere_grid(std::size_t points) {
  if (points == 0) throw ArgumentError("hemisphere_grid: need at least one point");
  return grid_soa(points).dirs;
}

SteererChoice best_steerer(const BlochData& bloch, const SpinDirection& steered_dir,
                           double eta_steered, double eta_steerer,
                           const SteererStrategy& strategy) {
  const auto in = scan_input(bloch, steered_dir, eta_steered, eta_steerer);
  SteererChoice best{steered_dir, scan_one(in, steered_dir)};
  if (strategy.kind == SteererStrategy::Kind::SameDirection) return best;

  const GridSoA& g = grid_soa(strategy.grid_points == 0 ? 1 : strategy.grid_points);
  std::vector<double> values(g.dirs.size());
  kernels::active().direction_scan(in, g.x, g.y, g.z, values);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < best.inference_variance) best = {g.dirs[i], values[i]};
  }
  if (!strategy.refine) return best;

  auto v = best.direction.vec();
  double step = 2.0 / std::sqrt(static_cast<double>(g.dirs.size()));
  for (int iter = 0; iter < 400 && step > 1e-9; ++iter) {
    std::array<double, 3> e1, e2;
    tangent_basis(v, e1, e2);
    bool moved = false;
    for (const auto& e : {e1, e2}) {
      for (double sgn : {1.0, -1.0}) {
        const auto cand = SpinDirection::normalized(v[0] + sgn * step * e[0],
                                                    v[1] + sgn * step * e[1],
                                                    v[2] + sgn * step * e[2]);
        const double val = scan_one(in, cand);
        if (val < best.inference_variance) {
          best = {cand, val};
          v = cand.vec();
          moved = true;
        }
      }
    }
    if (!moved) step *= 0.5;
  }
  return best;
}

void require_orthogonal(std::span<const SpinDirection> dirs) {
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    for (std::size_t j = i + 1; j < dirs.size(); ++j) {
      if (std::abs(dirs[i].dot(dirs[j])) > 1e-10) {
        throw ArgumentError("directions " + dirs[i].label() + " and " + dirs[j].label() +
                            " are not orthogonal");
      }
    }
  }
}

namespace {

ConditionalStats build_stats(const QuantumState& state, std::span<const SpinDirection> dirs,
                             std::span<const SpinDirection> chosen, double eta_steered,
                             double eta_steerer) {
  ConditionalStats stats;
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    stats.blocks.push_back(conditional_block(state, lossy_spin_measurement(dirs[k], eta_steered),
                                             lossy_spin_measurement(chosen[k], eta_steerer),
                                             dirs[k].label()));
  }
  return stats;
}

}  // namespace

ConditionalStats stats_from_state(const QuantumState& state, std::span<const SpinDirection> dirs,
                                  double eta_steered, double eta_steerer,
                                  const SteererStrategy& strategy) {
  std::vector<SpinDirection> chosen;
  steerer_labels(state, dirs, eta_steered, eta_steerer, strategy, chosen);
  return build_stats(state, dirs, chosen, eta_steered, eta_steerer);
}

SteeringReport report_from_stats(const ConditionalStats& stats, double J) {
  stats.validate();
  const std::size_t m = stats.blocks.size();
  if (m != 2 && m != 3) {
    throw ArgumentError("report_from_stats: expected 2 or 3 setting blocks, got " +
                        std::to_string(m));
  }
  SteeringReport r;
  r.J = J;
  double sum_iv = 0.0, sum_t = 0.0, sum_second = 0.0;
  for (const auto& block : stats.blocks) {
    const double iv = block.inference_variance();
    r.inference_variances.push_back({block.label, iv});
    sum_iv += iv;
    sum_t += block.explained();
    sum_second += block.second_moment();
  }
  if (m == 3) {
    if (!(J > 0.0)) {
      throw UndefinedWitnessError("S3 undefined: J = " + std::to_string(J) +
                                  " (steered-side efficiency must be positive)");
    }
    r.S3 = sum_iv / J;
    r.verdicts.steering_3 = *r.S3 < 1.0 - kVerdictRoundoff;
    const double eta_a = sum_second / static_cast<double>(m);
    r.wittmann_S = sum_t;
    r.wittmann_bound = eta_a * eta_a;
    r.verdicts.wittmann = *r.wittmann_S > *r.wittmann_bound + kVerdictRoundoff;
  } else {
    r.S2 = sum_iv;
    r.verdicts.steering_2 = *r.S2 < 1.0 - kVerdictRoundoff;
  }
  return r;
}

SteeringReport steering_param_3(const QuantumState& state, std::span<const SpinDirection> dirs,
                                double eta_steered, double eta_steerer,
                                const SteererStrategy& strategy) {
  if (dirs.size() != 3) throw ArgumentError("steering_param_3: need three directions");
  require_orthogonal(dirs);
  std::vector<SpinDirection> chosen;
  auto labels = steerer_labels(state, dirs, eta_steered, eta_steerer, strategy, chosen);
  const double J = uncertainty_bound_J(state, lossy_spin_measurement(dirs[0], eta_steered));
  if (!(J > 0.0)) {
    throw UndefinedWitnessError("S3 undefined: J = 0 (steered-side efficiency must be positive)");
  }
  SteeringReport r =
      report_from_stats(build_stats(state, dirs, chosen, eta_steered, eta_steerer), J);
  r.steerer_directions = std::move(labels);
  return witness_subset(std::move(r), true, false, false);
}

SteeringReport steering_param_2(const QuantumState& state, std::span<const SpinDirection> dirs,
                                double eta_steerer, const SteererStrategy& strategy) {
  if (dirs.size() != 2) throw ArgumentError("steering_param_2: need two directions");
  require_orthogonal(dirs);
  std::vector<SpinDirection> chosen;
  auto labels = steerer_labels(state, dirs, 1.0, eta_steerer, strategy, chosen);
  SteeringReport r = report_from_stats(build_stats(state, dirs, chosen, 1.0, eta_steerer),
                                       uncertainty_bound_J(1.0));
  r.steerer_directions = std::move(labels);
  return r;
}

SteeringReport wittmann_witness(const QuantumState& state, std::span<const SpinDirection> dirs,
                                double eta_steered, double eta_steerer,
                                const SteererStrategy& strategy) {
  if (dirs.size() != 3) throw ArgumentError("wittmann_witness: need three directions");
  require_orthogonal(dirs);
  std::vector<SpinDirection> chosen;
  auto labels = steerer_labels(state, dirs, eta_steered, eta_steerer, strategy, chosen);
  const ConditionalStats stats = build_stats(state, dirs, chosen, eta_steered, eta_steerer);
  const double J = uncertainty_bound_J(state, lossy_spin_measurement(dirs[0], eta_steered));
  // The Wittmann form needs no normalisation, so it stays defined at J = 0.
  SteeringReport r = report_from_stats(stats, J > 0.0 ? J : 1.0);
  r.J = J;
  for (const auto& block : stats.blocks) {
    const double gap = std::abs(block.inference_variance() - (block.second_moment() - block.explained()));
    if (gap > 1e-10) throw NumericError("wittmann_witness: variance identity violated");
  }
  r.steerer_directions = std::move(labels);
  return witness_subset(std::move(r), false, false, true);
}

}  // namespace eprsteer
