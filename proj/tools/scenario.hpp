#pragma once

// Scenario configuration for the command-line tool: a JSON document whose
// fields can each be overridden by a flag. Validation happens here, before
// any computation, and reports the offending field by name.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "eprsteer/lhs_bounds.hpp"
#include "eprsteer/quantum_state.hpp"
#include "eprsteer/report_json.hpp"
#include "eprsteer/steering.hpp"

namespace eprsteer::cli {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : std::runtime_error("config field '" + field + "': " + what) {}
};

Json load_config(const std::string& path);

/// Sets cfg[a][b]... = value, creating objects along the way.
void set_path(Json& cfg, const std::vector<std::string>& path, Json value);

double get_number(const Json& cfg, const std::string& field, double fallback, double lo, double hi);
std::uint64_t get_count(const Json& cfg, const std::string& field, std::uint64_t fallback,
                        std::uint64_t lo = 0);
std::string get_string(const Json& cfg, const std::string& field, const std::string& fallback);

/// Two-qubit state from {"name": ..., parameters}: werner (p_s), bell (kind),
/// mixed, product (two Bloch vectors "a" and "b").
QuantumState state_from_spec(const Json& spec, const std::string& field);
/// Human-readable state label, e.g. "werner(p_s=0.9)".
std::string describe_state(const Json& spec);

/// Direction list from "X,Y,Z"-style names or [[x,y,z], ...].
std::vector<SpinDirection> directions_from(const Json& cfg, const std::string& field,
                                           const std::vector<SpinDirection>& fallback);

SteererStrategy steerer_from(const Json& cfg);

/// Grid [from, to] in steps; at least one point.
std::vector<double> grid_from(const Json& sweep);

}  // namespace eprsteer::cli
