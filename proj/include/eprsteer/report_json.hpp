#pragma once

#include <json.hpp>

#include "eprsteer/lhs_bounds.hpp"
#include "eprsteer/mc_sim.hpp"
#include "eprsteer/monogamy.hpp"
#include "eprsteer/steering.hpp"
#include "eprsteer/teleport.hpp"

namespace eprsteer {

// Machine-readable records. Field names are stable; absent witnesses are
// null rather than omitted so every record of a kind has the same keys.
using Json = nlohmann::ordered_json;

Json to_json(const SteeringReport& r);
Json to_json(const MonogamyReport& r);
Json to_json(const TeleportResult& r);
Json to_json(const EstimateWithError& e);
Json to_json(const EstimatedReport& r);
Json to_json(const LhsBound& b, const SettingEnsemble& ensemble);
Json to_json(const ThresholdResult& t);

}  // namespace eprsteer
