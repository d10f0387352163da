#include "eprsteer/report_json.hpp"

namespace eprsteer {

namespace {

template <typename T>
Json opt(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Json opt_estimate(const std::optional<EstimateWithError>& e) {
  return e ? to_json(*e) : Json(nullptr);
}

}  // namespace

Json to_json(const SteeringReport& r) {
  Json ivs = Json::object();
  for (const auto& iv : r.inference_variances) ivs[iv.label] = iv.value;
  return {{"inference_variances", ivs},
          {"steerer_directions", r.steerer_directions},
          {"J", r.J},
          {"S3", opt(r.S3)},
          {"S2", opt(r.S2)},
          {"wittmann_S", opt(r.wittmann_S)},
          {"wittmann_bound", opt(r.wittmann_bound)},
          {"verdicts",
           {{"steering_3", opt(r.verdicts.steering_3)},
            {"steering_2", opt(r.verdicts.steering_2)},
            {"wittmann", opt(r.verdicts.wittmann)}}}};
}

Json to_json(const MonogamyReport& r) {
  Json terms = Json::object();
  for (const auto& t : r.terms) terms[t.label] = t.value;
  return {{"terms", terms},         {"sum", r.sum},
          {"bound", r.bound},       {"slack", r.slack},
          {"holds", r.holds()},     {"cross_slacks", r.cross_slacks}};
}

Json to_json(const TeleportResult& r) {
  return {{"bell_outcome", std::string(to_string(r.swap.bell_outcome))},
          {"probability", r.swap.probability},
          {"certified", r.certified},
          {"figure_of_merit", r.figure_of_merit},
          {"singlet_fidelity", r.singlet_fidelity},
          {"beats_classical_2_3", r.beats_classical},
          {"beats_cloning_5_6", r.beats_cloning},
          {"report", to_json(r.report)}};
}

Json to_json(const EstimateWithError& e) {
  return {{"value", e.value}, {"standard_error", e.standard_error}, {"n_trials", e.n_trials}};
}

Json to_json(const EstimatedReport& r) {
  Json ivs = Json::object();
  for (const auto& [label, e] : r.inference_variances) ivs[label] = to_json(e);
  return {{"inference_variances", ivs},
          {"J", to_json(r.J)},
          {"S3", opt_estimate(r.S3)},
          {"S2", opt_estimate(r.S2)},
          {"wittmann_S", opt_estimate(r.wittmann_S)},
          {"wittmann_bound", opt(r.point.wittmann_bound)},
          {"verdicts",
           {{"steering_3", opt(r.point.verdicts.steering_3)},
            {"steering_2", opt(r.point.verdicts.steering_2)},
            {"wittmann", opt(r.point.verdicts.wittmann)}}},
          {"records_consumed", r.records_consumed},
          {"warnings", r.warnings}};
}

Json to_json(const LhsBound& b, const SettingEnsemble& ensemble) {
  Json dirs = Json::array();
  for (const auto& d : ensemble.directions) dirs.push_back(d.vec());
  return {{"set", ensemble.name}, {"m", ensemble.m()}, {"C_m", b.value},
          {"signs", b.signs},     {"directions", dirs}};
}

Json to_json(const ThresholdResult& t) {
  return {{"attainable", t.attainable()}, {"threshold", opt(t.threshold)}};
}

}  // namespace eprsteer
