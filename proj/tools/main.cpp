// eprsteer: steering witnesses, thresholds, monogamy checks, teleportation
// signatures and Monte Carlo detection records from the command line.
//
// Every subcommand reads an optional JSON scenario (--config) and lets flags
// override individual fields. Output is a human-readable table or, with
// --format record, one JSON document. Exit status is 0 whenever the
// computation completed, whatever the verdicts; 2 for usage or configuration
// errors; 1 for failures inside the computation.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <thread>

#include "eprsteer/errors.hpp"
#include "eprsteer/lhs_bounds.hpp"
#include "eprsteer/mc_sim.hpp"
#include "eprsteer/monogamy.hpp"
#include "eprsteer/report_json.hpp"
#include "eprsteer/states.hpp"
#include "eprsteer/teleport.hpp"
#include "scenario.hpp"

namespace fs = std::filesystem;
using namespace eprsteer;
using namespace eprsteer::cli;

namespace {

const std::vector<SpinDirection> kXYZ = {SpinDirection::X(), SpinDirection::Y(), SpinDirection::Z()};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::string yes_no(bool b) { return b ? "true" : "false"; }

// Flags that write into the scenario document once parsing is done.
class Overrides {
 public:
  template <typename T>
  void add(CLI::App* app, const std::string& flag, std::vector<std::string> path,
           const std::string& help) {
    auto value = std::make_shared<T>();
    CLI::Option* opt = app->add_option(flag, *value, help);
    apply_.push_back([opt, value, path = std::move(path)](Json& cfg) {
      if (opt->count() > 0) set_path(cfg, path, Json(*value));
    });
  }
  void apply(Json& cfg) const {
    for (const auto& f : apply_) f(cfg);
  }

 private:
  std::vector<std::function<void(Json&)>> apply_;
};

struct Common {
  std::string config;
  std::string format = "table";
  Overrides overrides;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "JSON scenario file; flags override its fields");
  sub->add_option("--format", c.format, "table or record")->check(CLI::IsMember({"table", "record"}));
  c.overrides.add<std::uint64_t>(sub, "--seed", {"seed"}, "random seed");
  c.overrides.add<std::uint64_t>(sub, "--workers", {"workers"}, "worker threads");
  c.overrides.add<std::string>(sub, "--out", {"out"}, "output path (relative paths resolve under $EPRSTEER_OUT_DIR)");
}

Json scenario(const Common& c) {
  Json cfg = c.config.empty() ? Json::object() : load_config(c.config);
  c.overrides.apply(cfg);
  return cfg;
}

std::optional<fs::path> out_path(const Json& cfg) {
  const std::string out = get_string(cfg, "out", "");
  if (out.empty()) return std::nullopt;
  fs::path p(out);
  const char* dir = std::getenv("EPRSTEER_OUT_DIR");
  if (p.is_relative() && dir && *dir) p = fs::path(dir) / p;
  return p;
}

std::ofstream open_out(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + p.string() + "'");
  return f;
}

// Table text or JSON record to --out (if given) or stdout.
void emit(const Json& cfg, const std::string& format, const std::string& table, const Json& record) {
  const std::string text = format == "record" ? record.dump(2) + "\n" : table;
  if (const auto p = out_path(cfg)) {
    auto f = open_out(*p);
    f << text;
  } else {
    std::cout << text;
  }
}

unsigned workers_of(const Json& cfg) {
  return static_cast<unsigned>(get_count(cfg, "workers", 1, 1));
}

Json state_spec(const Json& cfg, const std::string& key = "state") {
  Json spec = cfg.contains(key) ? cfg.at(key) : Json{{"p_s", 1.0}};
  if (spec.is_object() && !spec.contains("name")) spec["name"] = "werner";
  return spec;
}

// ---------------------------------------------------------------- steer

void add_state_flags(CLI::App* sub, Overrides& o) {
  o.add<std::string>(sub, "--state", {"state", "name"}, "werner, bell, mixed or product");
  o.add<double>(sub, "--p-s", {"state", "p_s"}, "singlet weight of the Werner state");
  o.add<std::string>(sub, "--bell", {"state", "kind"}, "Bell state: PsiMinus, PsiPlus, PhiMinus, PhiPlus");
}

int run_steer(const Common& c) {
  const Json cfg = scenario(c);
  const Json spec = state_spec(cfg);
  const QuantumState state = state_from_spec(spec, "state");
  const double ea = get_number(cfg, "eta_a", 1.0, 0.0, 1.0);
  const double eb = get_number(cfg, "eta_b", 1.0, 0.0, 1.0);
  const auto dirs = directions_from(cfg, "directions", kXYZ);
  if (dirs.size() != 2 && dirs.size() != 3) throw ConfigError("directions", "need two or three directions");
  const SteererStrategy st = steerer_from(cfg);

  SteeringReport r;
  if (dirs.size() == 3) {
    r = steering_param_3(state, dirs, ea, eb, st);
    const SteeringReport w = wittmann_witness(state, dirs, ea, eb, st);
    r.wittmann_S = w.wittmann_S;
    r.wittmann_bound = w.wittmann_bound;
    r.verdicts.wittmann = w.verdicts.wittmann;
  }
  const SteeringReport two = steering_param_2(state, std::span(dirs.data(), 2), eb, st);
  if (dirs.size() == 2) r = two;
  r.S2 = two.S2;
  r.verdicts.steering_2 = two.verdicts.steering_2;

  std::ostringstream t;
  t << "state: " << describe_state(spec) << "\n";
  t << "eta_A: " << fmt("%.6g", ea) << ", eta_B: " << fmt("%.6g", eb) << "\n";
  for (std::size_t i = 0; i < r.inference_variances.size(); ++i) {
    t << "inference variance " << r.inference_variances[i].label << ": "
      << fmt("%.6f", r.inference_variances[i].value) << " (steerer " << r.steerer_directions[i] << ")\n";
  }
  t << "J: " << fmt("%.6f", r.J) << "\n";
  if (r.S3) t << "S3: " << fmt("%.6f", *r.S3) << ", steering: " << yes_no(*r.verdicts.steering_3) << "\n";
  t << "S2 (trusted A): " << fmt("%.6f", *r.S2) << ", steering: " << yes_no(*r.verdicts.steering_2) << "\n";
  if (r.wittmann_S) {
    t << "Wittmann S: " << fmt("%.6f", *r.wittmann_S) << " vs eta_A^2 = " << fmt("%.6f", *r.wittmann_bound)
      << ", steering: " << yes_no(*r.verdicts.wittmann) << "\n";
  }
  Json rec{{"command", "steer"}, {"state", spec}, {"eta_a", ea}, {"eta_b", eb}, {"report", to_json(r)}};
  emit(cfg, c.format, t.str(), rec);
  return 0;
}

// ---------------------------------------------------------------- sweep

struct SweepPoint {
  double ea, eb, p;
  double value, bound;
  bool steering;
};

int run_sweep(const Common& c) {
  const Json cfg = scenario(c);
  const Json sweep = cfg.value("sweep", Json::object());
  const std::string param = get_string(sweep, "parameter", "eta_b");
  if (param != "eta_b" && param != "p_s") throw ConfigError("sweep.parameter", "expected eta_b or p_s");
  const std::vector<double> grid = grid_from(sweep);

  const Json spec = state_spec(cfg);
  if (spec.value("name", std::string("werner")) != "werner") {
    throw ConfigError("state.name", "sweeps run over Werner states");
  }
  const double p_fixed = get_number(spec, "p_s", 1.0, 0.0, 1.0);
  const double ea = get_number(cfg, "eta_a", 1.0, 0.0, 1.0);
  const double eb_fixed = get_number(cfg, "eta_b", 1.0, 0.0, 1.0);

  WitnessSelector sel;
  try {
    sel.kind = parse_witness_kind(get_string(cfg, "witness", "s3"));
    sel.policy = parse_declaration_policy(get_string(cfg, "policy", "drop"));
  } catch (const ArgumentError& e) {
    throw ConfigError("witness", e.what());
  }
  sel.eta_steered = ea;
  sel.steerer = steerer_from(cfg);
  if (sel.kind == WitnessKind::LinearFunctional) {
    try {
      sel.ensemble = named_ensemble(get_string(cfg, "set", "orthogonal3"));
    } catch (const ArgumentError& e) {
      throw ConfigError("set", e.what());
    }
  }
  if ((sel.kind == WitnessKind::ThreeSetting) && !(ea > 0.0)) {
    throw ConfigError("eta_a", "S3 needs a positive steered-side efficiency");
  }

  auto evaluate = [&](double eb, double p) -> SweepPoint {
    const QuantumState w = werner_state(p);
    switch (sel.kind) {
      case WitnessKind::ThreeSetting: {
        const auto r = steering_param_3(w, kXYZ, ea, eb, sel.steerer);
        return {ea, eb, p, *r.S3, 1.0, *r.verdicts.steering_3};
      }
      case WitnessKind::TwoSetting: {
        const auto r = steering_param_2(w, std::span(kXYZ.data(), 2), eb, sel.steerer);
        return {1.0, eb, p, *r.S2, 1.0, *r.verdicts.steering_2};
      }
      case WitnessKind::Wittmann: {
        const auto r = wittmann_witness(w, kXYZ, ea, eb, sel.steerer);
        return {ea, eb, p, *r.wittmann_S, *r.wittmann_bound, *r.verdicts.wittmann};
      }
      case WitnessKind::LinearFunctional: {
        const auto f = linear_functional(w, *sel.ensemble, eb, sel.policy);
        return {1.0, eb, p, f.value, f.bound, f.steering};
      }
    }
    throw std::logic_error("unreachable");
  };

  // Grid points are independent; each worker writes its own slots.
  std::vector<SweepPoint> rows(grid.size());
  const std::size_t nw = std::min<std::size_t>(workers_of(cfg), grid.size());
  auto work = [&](std::size_t w) {
    for (std::size_t i = w; i < grid.size(); i += nw) {
      rows[i] = param == "eta_b" ? evaluate(grid[i], p_fixed) : evaluate(eb_fixed, grid[i]);
    }
  };
  if (nw <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < nw; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }

  const ThresholdResult th =
      param == "eta_b"
          ? critical_efficiency_scan(sel, p_fixed)
          : bisect_violation_boundary([&](double p) { return witness_violated(sel, werner_state(p), eb_fixed); },
                                      0.0, 1.0);

  const std::string witness(to_string(sel.kind));
  std::ostringstream csv;
  csv << "row,eta_a,eta_b,p_s,witness,value,bound,steering\n";
  for (const auto& r : rows) {
    csv << "point," << fmt("%.10g", r.ea) << ',' << fmt("%.10g", r.eb) << ',' << fmt("%.10g", r.p) << ','
        << witness << ',' << fmt("%.12g", r.value) << ',' << fmt("%.12g", r.bound) << ','
        << yes_no(r.steering) << '\n';
  }
  const std::string located = th.threshold ? fmt("%.10f", *th.threshold) : std::string("unattainable");
  const double ea_col = sel.kind == WitnessKind::ThreeSetting || sel.kind == WitnessKind::Wittmann ? ea : 1.0;
  csv << "threshold," << fmt("%.10g", ea_col) << ','
      << (param == "eta_b" ? located : fmt("%.10g", eb_fixed)) << ','
      << (param == "p_s" ? located : fmt("%.10g", p_fixed)) << ',' << witness << ",,,\n";

  Json points = Json::array();
  for (const auto& r : rows) {
    points.push_back({{"eta_a", r.ea}, {"eta_b", r.eb}, {"p_s", r.p}, {"value", r.value},
                      {"bound", r.bound}, {"steering", r.steering}});
  }
  Json rec{{"command", "sweep"}, {"parameter", param}, {"witness", witness},
           {"points", points}, {"threshold", to_json(th)}};
  const std::string summary = "threshold " + param + " = " + located + " (" + witness + ")\n";
  if (c.format == "record") {
    emit(cfg, c.format, "", rec);
  } else if (out_path(cfg)) {
    emit(cfg, c.format, csv.str(), rec);
    std::cout << "wrote " << rows.size() << " rows to " << out_path(cfg)->string() << "\n" << summary;
  } else {
    std::cout << csv.str();
    std::cerr << summary;
  }
  return 0;
}

// ---------------------------------------------------------------- monogamy

QuantumState named_multipartite(const std::string& name, std::size_t qubits) {
  std::vector<cplx> v(std::size_t{1} << qubits, 0.0);
  const std::vector<std::size_t> dims(qubits, 2);
  if (name == "ghz") {
    v.front() = v.back() = 1 / std::sqrt(2.0);
    return QuantumState::pure(dims, v);
  }
  if (name == "w") {
    for (std::size_t k = 0; k < qubits; ++k) v[std::size_t{1} << k] = 1 / std::sqrt(static_cast<double>(qubits));
    return QuantumState::pure(dims, v);
  }
  if (name == "bell_product") {
    QuantumState s = bell_state(BellKind::PsiMinus);
    for (std::size_t k = 2; k < qubits; ++k) s = tensor(s, QuantumState::maximally_mixed({2}));
    return s;
  }
  if (name == "up_product") {
    QuantumState s = spin_up();
    for (std::size_t k = 1; k < qubits; ++k) s = tensor(s, QuantumState::maximally_mixed({2}));
    return s;
  }
  throw ConfigError("monogamy.state", "unknown state '" + name + "' (ghz, w, bell_product, up_product)");
}

std::string report_table(const MonogamyReport& r) {
  std::ostringstream t;
  for (const auto& term : r.terms) t << "S_" << term.label << ": " << fmt("%.9f", term.value) << "\n";
  t << "sum: " << fmt("%.9f", r.sum) << ", bound: " << fmt("%g", r.bound) << ", slack: " << fmt("%.3e", r.slack)
    << ", holds: " << yes_no(r.holds()) << "\n";
  return t.str();
}

int run_monogamy(const Common& c) {
  const Json cfg = scenario(c);
  const Json m = cfg.value("monogamy", Json::object());
  const auto relation = get_count(m, "relation", 3, 2);
  if (relation != 2 && relation != 3) throw ConfigError("monogamy.relation", "expected 2 or 3");
  MonogamyOptions opts;
  opts.eta_steered = relation == 3 ? get_number(cfg, "eta_a", 1.0, 0.0, 1.0) : 1.0;
  opts.eta_steerers = get_number(cfg, "eta_b", 1.0, 0.0, 1.0);
  opts.strategy = cfg.contains("steerer") ? steerer_from(cfg) : SteererStrategy::grid();
  const std::uint64_t seed = get_count(cfg, "seed", 1);

  const std::uint64_t count = get_count(m, "random", 0);
  if (count == 0) {
    const std::string name = get_string(m, "state", relation == 3 ? "bell_product" : "ghz");
    const QuantumState s = named_multipartite(name, relation == 3 ? 4 : 3);
    const MonogamyReport r = relation == 3
                                 ? monogamy_3(s, {0, 1, 2, 3}, kXYZ, opts)
                                 : monogamy_2(s, {0, 1, 2}, std::span(kXYZ.data(), 2), opts);
    emit(cfg, c.format, "state: " + name + "\n" + report_table(r),
         Json{{"command", "monogamy"}, {"relation", relation}, {"state", name}, {"report", to_json(r)}});
    return 0;
  }

  SweepConfig sc;
  sc.count = count;
  sc.seed = seed;
  const std::string family = get_string(m, "family", "pure");
  if (family != "pure" && family != "mixed") throw ConfigError("monogamy.family", "expected pure or mixed");
  sc.family = family == "pure" ? RandomFamily::Pure : RandomFamily::Mixed;
  sc.rank = get_count(m, "rank", 2, 1);
  sc.workers = workers_of(cfg);
  sc.options = opts;
  const auto rows = relation == 3 ? sweep_monogamy_3(sc) : sweep_monogamy_2(sc);

  double min_slack = rows.front().report.slack, max_slack = min_slack;
  std::size_t violations = 0;
  for (const auto& r : rows) {
    min_slack = std::min(min_slack, r.report.slack);
    max_slack = std::max(max_slack, r.report.slack);
    violations += !r.report.holds();
  }
  const std::string summary = "states: " + std::to_string(rows.size()) + ", relation: " +
                              std::to_string(relation) + ", min slack: " + fmt("%.3e", min_slack) +
                              ", violations: " + std::to_string(violations) + "\n";
  Json rec{{"command", "monogamy"}, {"relation", relation}, {"random", count},
           {"family", family},     {"seed", seed},         {"min_slack", min_slack},
           {"max_slack", max_slack}, {"violations", violations}};
  std::ostringstream csv;
  write_sweep_csv(csv, seed, rows);
  if (c.format == "record") {
    if (const auto p = out_path(cfg)) {
      auto f = open_out(*p);
      f << csv.str();
    }
    std::cout << rec.dump(2) << "\n";
  } else if (const auto p = out_path(cfg)) {
    auto f = open_out(*p);
    f << csv.str();
    std::cout << summary;
  } else {
    std::cout << csv.str();
    std::cerr << summary;
  }
  return 0;
}

// ---------------------------------------------------------------- teleport

int run_teleport(const Common& c) {
  const Json cfg = scenario(c);
  const Json tp = cfg.value("teleport", Json::object());
  const Json singlet{{"name", "bell"}, {"kind", "PsiMinus"}};
  const Json vc_spec = tp.contains("source_vc") ? state_spec(tp, "source_vc") : singlet;
  const Json ab_spec = tp.contains("source_ab") ? state_spec(tp, "source_ab") : singlet;
  const QuantumState vc = state_from_spec(vc_spec, "teleport.source_vc");
  const QuantumState ab = state_from_spec(ab_spec, "teleport.source_ab");
  const double ec = get_number(cfg, "eta_c", 1.0, 0.0, 1.0);
  const double eb = get_number(cfg, "eta_b", 1.0, 0.0, 1.0);
  if (!(ec > 0.0)) throw ConfigError("eta_c", "S3 needs a positive efficiency at Charlie");

  const auto outcomes = entanglement_swap(vc, ab);
  const TeleportResult r = teleport_signature(vc, ab, ec, eb, steerer_from(cfg));

  std::ostringstream t;
  t << "sources: V-C " << describe_state(vc_spec) << ", A-B " << describe_state(ab_spec) << "\n";
  t << "Bell outcomes:";
  for (const auto& o : outcomes) t << " " << to_string(o.bell_outcome) << "=" << fmt("%.6f", o.probability);
  t << "\n";
  t << "eta_C: " << fmt("%.6g", ec) << ", eta_B: " << fmt("%.6g", eb) << "\n";
  t << "certified: " << yes_no(r.certified) << ", S3=" << fmt("%.3f", *r.report.S3) << "\n";
  t << "figure of merit: " << fmt("%.3f", r.figure_of_merit) << "\n";
  t << "S2 (trusted Charlie): " << fmt("%.3f", *r.report.S2) << ", steering: " << yes_no(*r.report.verdicts.steering_2)
    << "\n";
  t << "singlet fidelity: " << fmt("%.6f", r.singlet_fidelity) << " (above 2/3: " << yes_no(r.beats_classical)
    << ", above 5/6: " << yes_no(r.beats_cloning) << ")\n";

  Json rec{{"command", "teleport"}, {"source_vc", vc_spec}, {"source_ab", ab_spec}, {"eta_c", ec},
           {"eta_b", eb}, {"result", to_json(r)}};
  Json probs = Json::object();
  for (const auto& o : outcomes) probs[std::string(to_string(o.bell_outcome))] = o.probability;
  rec["bell_probabilities"] = probs;

  if (tp.contains("c0")) {
    const double c0 = get_number(tp, "c0", 0.0, 0.0, 1.0);
    if (c0 >= 1.0) throw ConfigError("teleport.c0", "c0 = 1 leaves nothing to teleport");
    const bool relabel = tp.value("relabel", true);
    const ParametricSwap ps = swap_with_parametric(ParametricAmplitudes::from_vacuum_amplitude(c0), vc, relabel);
    const ParametricSwap ref = swap_with_parametric(ParametricAmplitudes::from_vacuum_amplitude(0.0), vc, relabel);
    const double dist = trace_distance(ps.modes, ref.modes);
    t << "parametric source c0=" << fmt("%.6g", c0) << ": coincidence probability " << fmt("%.6f", ps.swap.probability)
      << ", <n_B> = " << fmt("%.12f", ps.b_photon_number) << ", distance to c0=0: " << fmt("%.3e", dist) << "\n";
    rec["parametric"] = {{"c0", c0},
                         {"relabel", relabel},
                         {"probability", ps.swap.probability},
                         {"b_photon_number", ps.b_photon_number},
                         {"trace_distance_to_c0_zero", dist}};
  }
  emit(cfg, c.format, t.str(), rec);
  return 0;
}

// ---------------------------------------------------------------- bounds

int run_bounds(const Common& c) {
  const Json cfg = scenario(c);
  SettingEnsemble e;
  if (cfg.contains("directions")) {
    try {
      e = make_ensemble("custom", directions_from(cfg, "directions", {}));
    } catch (const ArgumentError& err) {
      throw ConfigError("directions", err.what());
    }
  } else {
    try {
      e = named_ensemble(get_string(cfg, "set", "orthogonal3"));
    } catch (const ArgumentError& err) {
      throw ConfigError("set", err.what());
    }
  }
  const LhsBound b = lhs_bound(e);
  std::ostringstream t;
  t << "set: " << e.name << " (m = " << e.m() << ")\n";
  t << "C_" << e.m() << " = " << fmt("%.5f", b.value) << "\n";
  t << "maximising signs:";
  for (int s : b.signs) t << (s > 0 ? " +" : " -");
  t << "\n";
  if (e.m() >= 4) t << "exploratory: no pass/fail gate for m >= 4\n";
  Json rec{{"command", "bounds"}, {"bound", to_json(b, e)}};
  if (cfg.contains("eta_b")) {
    const double eb = get_number(cfg, "eta_b", 1.0, 0.0, 1.0);
    DeclarationPolicy policy;
    try {
      policy = parse_declaration_policy(get_string(cfg, "policy", "drop"));
    } catch (const ArgumentError& err) {
      throw ConfigError("policy", err.what());
    }
    const Json spec = state_spec(cfg);
    const FunctionalValue f = linear_functional(state_from_spec(spec, "state"), e, eb, policy);
    t << "functional on " << describe_state(spec) << " at eta_B = " << fmt("%.6g", eb) << ": "
      << fmt("%.6f", f.value) << ", steering: " << yes_no(f.steering) << "\n";
    rec["functional"] = {{"state", spec}, {"eta_b", eb}, {"value", f.value}, {"steering", f.steering}};
  }
  emit(cfg, c.format, t.str(), rec);
  return 0;
}

// ---------------------------------------------------------------- mc

int run_mc_sample(const Common& c) {
  const Json cfg = scenario(c);
  const Json mc = cfg.value("mc", Json::object());
  const Json spec = state_spec(cfg);
  const QuantumState state = state_from_spec(spec, "state");
  const double ea = get_number(cfg, "eta_a", 1.0, 0.0, 1.0);
  const double eb = get_number(cfg, "eta_b", 1.0, 0.0, 1.0);
  const auto dirs = directions_from(cfg, "directions", kXYZ);
  const std::uint64_t n = get_count(mc, "trials", 100000, 1);
  const std::uint64_t seed = get_count(cfg, "seed", 1);
  const std::string sched = get_string(mc, "schedule", "uniform");
  if (sched != "uniform" && sched != "blocked") throw ConfigError("mc.schedule", "expected uniform or blocked");
  const Schedule schedule =
      spin_schedule(dirs, ea, eb, sched == "uniform" ? ScheduleKind::Uniform : ScheduleKind::Blocked);

  const RecordSet records = sample_trials(state, schedule, n, seed, workers_of(cfg));
  Json with_out = cfg;
  if (!with_out.contains("out")) with_out["out"] = "records.csv";
  const fs::path path = *out_path(with_out);
  {
    auto f = open_out(path);
    write_records_csv(f, records);
  }
  const fs::path meta_path = path.string() + ".meta.json";
  const Json meta = record_metadata(schedule, n, seed, spec);
  {
    auto f = open_out(meta_path);
    f << meta.dump(2) << "\n";
  }
  std::uint64_t lost_a = 0, lost_b = 0;
  for (const auto& t : records.trials) {
    lost_a += t.outcome_a == 0;
    lost_b += t.outcome_b == 0;
  }
  std::ostringstream t;
  t << "wrote " << n << " trials to " << path.string() << " (metadata " << meta_path.string() << ")\n";
  t << "no-detection events kept: A " << lost_a << ", B " << lost_b << "\n";
  Json rec{{"command", "mc-sample"}, {"records", path.string()}, {"metadata", meta}};
  if (c.format == "record") {
    std::cout << rec.dump(2) << "\n";
  } else {
    std::cout << t.str();
  }
  return 0;
}

std::string estimate_line(const std::string& name, const EstimateWithError& e) {
  return name + ": " + fmt("%.6f", e.value) + " +- " + fmt("%.6f", e.standard_error) + "\n";
}

int run_mc_estimate(const Common& c) {
  const Json cfg = scenario(c);
  const Json mc = cfg.value("mc", Json::object());
  const std::string records_path = get_string(mc, "records", "");
  if (records_path.empty()) throw ConfigError("mc.records", "no record file given (--records)");
  std::ifstream in(records_path);
  if (!in) throw ConfigError("mc.records", "cannot open '" + records_path + "'");
  RecordSet records;
  try {
    records = read_records_csv(in);
  } catch (const ArgumentError& e) {
    throw ConfigError("mc.records", e.what());
  }
  EstimateOptions opts;
  opts.bootstrap = get_count(mc, "bootstrap", 200, 2);
  opts.bootstrap_seed = get_count(cfg, "seed", 1);
  opts.min_trials = get_count(mc, "min_trials", 1000);
  const EstimatedReport e = estimate_report(records, opts);

  std::ostringstream t;
  t << "records: " << records.trials.size() << " read, " << e.records_consumed << " used\n";
  for (const auto& [label, iv] : e.inference_variances) t << estimate_line("inference variance " + label, iv);
  t << estimate_line("J", e.J);
  const auto& v = e.point.verdicts;
  if (e.S3) t << estimate_line("S3", *e.S3);
  if (e.S2) t << estimate_line("S2", *e.S2);
  if (e.wittmann_S) t << estimate_line("Wittmann S", *e.wittmann_S);
  if (v.steering_3) t << "steering (S3 < 1): " << yes_no(*v.steering_3) << "\n";
  if (v.steering_2) t << "steering (S2 < 1): " << yes_no(*v.steering_2) << "\n";
  if (v.wittmann) t << "steering (Wittmann): " << yes_no(*v.wittmann) << "\n";
  if (!v.steering_3 && !v.steering_2 && !v.wittmann) t << "no verdict\n";
  for (const auto& w : e.warnings) t << "warning: " << w << "\n";
  Json rec{{"command", "mc-estimate"}, {"records", records_path}, {"bootstrap", opts.bootstrap},
           {"bootstrap_seed", opts.bootstrap_seed}, {"report", to_json(e)}};
  emit(cfg, c.format, t.str(), rec);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EPR-steering witnesses under detector loss"};
  app.require_subcommand(1);

  struct Sub {
    CLI::App* app;
    Common common;
    std::function<int(const Common&)> run;
  };
  std::vector<std::unique_ptr<Sub>> subs;
  auto add = [&](const std::string& name, const std::string& help, std::function<int(const Common&)> run) {
    auto s = std::make_unique<Sub>();
    s->app = app.add_subcommand(name, help);
    s->run = std::move(run);
    add_common(s->app, s->common);
    subs.push_back(std::move(s));
    return subs.back().get();
  };

  Sub* steer = add("steer", "witness values and verdicts for one state", run_steer);
  add_state_flags(steer->app, steer->common.overrides);
  steer->common.overrides.add<double>(steer->app, "--eta-a", {"eta_a"}, "steered-side efficiency");
  steer->common.overrides.add<double>(steer->app, "--eta-b", {"eta_b"}, "steering-side efficiency");
  steer->common.overrides.add<std::string>(steer->app, "--directions", {"directions"}, "e.g. X,Y,Z or 1,0,0;0,1,0");
  steer->common.overrides.add<std::string>(steer->app, "--steerer", {"steerer"}, "same or grid");

  Sub* sweep = add("sweep", "witness over a parameter grid plus the located threshold", run_sweep);
  sweep->common.overrides.add<double>(sweep->app, "--p-s", {"state", "p_s"}, "Werner singlet weight");
  sweep->common.overrides.add<double>(sweep->app, "--eta-a", {"eta_a"}, "steered-side efficiency");
  sweep->common.overrides.add<double>(sweep->app, "--eta-b", {"eta_b"}, "steering-side efficiency (when not swept)");
  sweep->common.overrides.add<std::string>(sweep->app, "--witness", {"witness"}, "s3, s2, wittmann or linear");
  sweep->common.overrides.add<std::string>(sweep->app, "--param", {"sweep", "parameter"}, "eta_b or p_s");
  sweep->common.overrides.add<double>(sweep->app, "--from", {"sweep", "from"}, "grid start");
  sweep->common.overrides.add<double>(sweep->app, "--to", {"sweep", "to"}, "grid end");
  sweep->common.overrides.add<double>(sweep->app, "--step", {"sweep", "step"}, "grid step");
  sweep->common.overrides.add<std::string>(sweep->app, "--set", {"set"}, "direction set for the linear witness");
  sweep->common.overrides.add<std::string>(sweep->app, "--policy", {"policy"}, "drop or random");

  Sub* mono = add("monogamy", "monogamy relations on named or random states", run_monogamy);
  mono->common.overrides.add<std::uint64_t>(mono->app, "--relation", {"monogamy", "relation"}, "3 or 2 settings");
  mono->common.overrides.add<std::uint64_t>(mono->app, "--random", {"monogamy", "random"}, "number of random states");
  mono->common.overrides.add<std::string>(mono->app, "--family", {"monogamy", "family"}, "pure or mixed");
  mono->common.overrides.add<std::uint64_t>(mono->app, "--rank", {"monogamy", "rank"}, "rank of mixed states");
  mono->common.overrides.add<std::string>(mono->app, "--state", {"monogamy", "state"}, "ghz, w, bell_product, up_product");
  mono->common.overrides.add<double>(mono->app, "--eta-a", {"eta_a"}, "steered-side efficiency");
  mono->common.overrides.add<double>(mono->app, "--eta-b", {"eta_b"}, "steering parties' efficiency");
  mono->common.overrides.add<std::string>(mono->app, "--steerer", {"steerer"}, "same or grid (default grid)");

  Sub* tele = add("teleport", "entanglement swap and teleportation signature", run_teleport);
  tele->common.overrides.add<double>(tele->app, "--eta-c", {"eta_c"}, "Charlie's efficiency");
  tele->common.overrides.add<double>(tele->app, "--eta-b", {"eta_b"}, "Bob's efficiency");
  tele->common.overrides.add<double>(tele->app, "--p-vc", {"teleport", "source_vc", "p_s"}, "Werner weight of the V-C source");
  tele->common.overrides.add<double>(tele->app, "--p-ab", {"teleport", "source_ab", "p_s"}, "Werner weight of the A-B source");
  tele->common.overrides.add<double>(tele->app, "--c0", {"teleport", "c0"}, "vacuum amplitude of a parametric A-B source");

  Sub* bounds = add("bounds", "deterministic-LHS bound C_m for a direction set", run_bounds);
  bounds->common.overrides.add<std::string>(bounds->app, "--set", {"set"}, "orthogonal2, orthogonal3, tetrahedron, octahedron, icosahedron");
  bounds->common.overrides.add<std::string>(bounds->app, "--directions", {"directions"}, "explicit directions, e.g. 1,0,0;0,1,0");
  bounds->common.overrides.add<double>(bounds->app, "--eta-b", {"eta_b"}, "also evaluate the functional at this efficiency");
  bounds->common.overrides.add<std::string>(bounds->app, "--policy", {"policy"}, "drop or random");
  add_state_flags(bounds->app, bounds->common.overrides);

  Sub* sample = add("mc-sample", "write simulated detection records", run_mc_sample);
  add_state_flags(sample->app, sample->common.overrides);
  sample->common.overrides.add<double>(sample->app, "--eta-a", {"eta_a"}, "steered-side efficiency");
  sample->common.overrides.add<double>(sample->app, "--eta-b", {"eta_b"}, "steering-side efficiency");
  sample->common.overrides.add<std::string>(sample->app, "--directions", {"directions"}, "setting directions");
  sample->common.overrides.add<std::uint64_t>(sample->app, "--trials", {"mc", "trials"}, "number of trials");
  sample->common.overrides.add<std::string>(sample->app, "--schedule", {"mc", "schedule"}, "uniform or blocked");

  Sub* estimate = add("mc-estimate", "witnesses with bootstrap errors from a record file", run_mc_estimate);
  estimate->common.overrides.add<std::string>(estimate->app, "--records", {"mc", "records"}, "record file");
  estimate->common.overrides.add<std::uint64_t>(estimate->app, "--bootstrap", {"mc", "bootstrap"}, "bootstrap resamples");
  estimate->common.overrides.add<std::uint64_t>(estimate->app, "--min-trials", {"mc", "min_trials"}, "no verdict below this many trials");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  for (const auto& s : subs) {
    if (!s->app->parsed()) continue;
    try {
      return s->run(s->common);
    } catch (const ConfigError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  }
  return 2;
}
