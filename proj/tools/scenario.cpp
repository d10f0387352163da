#include "scenario.hpp"

#include <cmath>
#include <fstream>

#include "eprsteer/errors.hpp"
#include "eprsteer/states.hpp"

namespace eprsteer::cli {

Json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open '" + path + "'");
  try {
    Json cfg = Json::parse(in);
    if (!cfg.is_object()) throw ConfigError("--config", "top level must be an object");
    return cfg;
  } catch (const Json::parse_error& e) {
    throw ConfigError("--config", std::string("not valid JSON: ") + e.what());
  }
}

void set_path(Json& cfg, const std::vector<std::string>& path, Json value) {
  Json* node = &cfg;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    if (!node->contains(path[i]) || !(*node)[path[i]].is_object()) (*node)[path[i]] = Json::object();
    node = &(*node)[path[i]];
  }
  (*node)[path.back()] = std::move(value);
}

double get_number(const Json& cfg, const std::string& field, double fallback, double lo, double hi) {
  if (!cfg.contains(field)) return fallback;
  const Json& v = cfg.at(field);
  if (!v.is_number()) throw ConfigError(field, "expected a number");
  const double x = v.get<double>();
  if (!(x >= lo && x <= hi)) {
    throw ConfigError(field, "value " + v.dump() + " outside [" + Json(lo).dump() + ", " +
                                 Json(hi).dump() + "]");
  }
  return x;
}

std::uint64_t get_count(const Json& cfg, const std::string& field, std::uint64_t fallback,
                        std::uint64_t lo) {
  if (!cfg.contains(field)) return fallback;
  const Json& v = cfg.at(field);
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    throw ConfigError(field, "expected a non-negative integer");
  }
  const auto x = v.get<std::uint64_t>();
  if (x < lo) throw ConfigError(field, "must be at least " + std::to_string(lo));
  return x;
}

std::string get_string(const Json& cfg, const std::string& field, const std::string& fallback) {
  if (!cfg.contains(field)) return fallback;
  if (!cfg.at(field).is_string()) throw ConfigError(field, "expected a string");
  return cfg.at(field).get<std::string>();
}

namespace {

std::array<double, 3> bloch(const Json& spec, const std::string& key, const std::string& field) {
  if (!spec.contains(key)) return {0.0, 0.0, 0.0};
  const Json& v = spec.at(key);
  if (!v.is_array() || v.size() != 3) throw ConfigError(field + "." + key, "expected [x, y, z]");
  std::array<double, 3> r{};
  for (std::size_t i = 0; i < 3; ++i) {
    if (!v[i].is_number()) throw ConfigError(field + "." + key, "expected numbers");
    r[i] = v[i].get<double>();
  }
  if (r[0] * r[0] + r[1] * r[1] + r[2] * r[2] > 1.0 + 1e-12) {
    throw ConfigError(field + "." + key, "Bloch vector longer than 1");
  }
  return r;
}

}  // namespace

QuantumState state_from_spec(const Json& spec, const std::string& field) {
  if (!spec.is_object()) throw ConfigError(field, "expected an object with a 'name'");
  const std::string name = get_string(spec, "name", "werner");
  if (name == "werner") return werner_state(get_number(spec, "p_s", 1.0, 0.0, 1.0));
  if (name == "bell") {
    try {
      return bell_state(parse_bell_kind(get_string(spec, "kind", "PsiMinus")));
    } catch (const ArgumentError& e) {
      throw ConfigError(field + ".kind", e.what());
    }
  }
  if (name == "mixed") return QuantumState::maximally_mixed({2, 2});
  if (name == "product") {
    const auto a = bloch(spec, "a", field), b = bloch(spec, "b", field);
    return tensor(qubit_from_bloch(a[0], a[1], a[2]), qubit_from_bloch(b[0], b[1], b[2]));
  }
  throw ConfigError(field + ".name", "unknown state '" + name + "' (werner, bell, mixed, product)");
}

std::string describe_state(const Json& spec) {
  const std::string name = spec.value("name", std::string("werner"));
  if (name == "werner") return "werner(p_s=" + Json(spec.value("p_s", 1.0)).dump() + ")";
  if (name == "bell") return "bell(" + spec.value("kind", std::string("PsiMinus")) + ")";
  return name;
}

std::vector<SpinDirection> directions_from(const Json& cfg, const std::string& field,
                                           const std::vector<SpinDirection>& fallback) {
  if (!cfg.contains(field)) return fallback;
  const Json& v = cfg.at(field);
  std::vector<SpinDirection> out;
  try {
    if (v.is_string()) {
      // "X,Y,Z" or "1,0,0;0,1,0"
      const std::string s = v.get<std::string>();
      const char sep = s.find(';') != std::string::npos ? ';' : ',';
      std::size_t start = 0;
      while (start <= s.size()) {
        const std::size_t end = s.find(sep, start);
        const std::string item = s.substr(start, end == std::string::npos ? std::string::npos : end - start);
        if (!item.empty()) out.push_back(SpinDirection::parse(item));
        if (end == std::string::npos) break;
        start = end + 1;
      }
    } else if (v.is_array()) {
      for (const Json& d : v) {
        if (d.is_string()) {
          out.push_back(SpinDirection::parse(d.get<std::string>()));
        } else if (d.is_array() && d.size() == 3) {
          out.push_back(SpinDirection::normalized(d[0].get<double>(), d[1].get<double>(), d[2].get<double>()));
        } else {
          throw ConfigError(field, "each direction must be a name or [x, y, z]");
        }
      }
    } else {
      throw ConfigError(field, "expected a string or a list");
    }
  } catch (const ArgumentError& e) {
    throw ConfigError(field, e.what());
  } catch (const Json::exception& e) {
    throw ConfigError(field, e.what());
  }
  if (out.empty()) throw ConfigError(field, "no directions given");
  return out;
}

SteererStrategy steerer_from(const Json& cfg) {
  const std::string kind = get_string(cfg, "steerer", "same");
  if (kind == "same") return SteererStrategy::same_direction();
  if (kind == "grid") return SteererStrategy::grid(get_count(cfg, "grid_points", 256, 1));
  throw ConfigError("steerer", "expected 'same' or 'grid'");
}

std::vector<double> grid_from(const Json& sweep) {
  const double from = get_number(sweep, "from", 0.0, 0.0, 1.0);
  const double to = get_number(sweep, "to", 1.0, 0.0, 1.0);
  const double step = get_number(sweep, "step", 0.01, 0.0, 1.0);
  if (!(step > 0.0)) throw ConfigError("sweep.step", "must be positive");
  if (to < from) throw ConfigError("sweep", "empty grid: 'to' is below 'from'");
  // Integer indexing keeps the endpoints exact.
  const auto n = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9));
  std::vector<double> grid;
  for (std::size_t i = 0; i <= n; ++i) grid.push_back(std::min(to, from + static_cast<double>(i) * step));
  return grid;
}

}  // namespace eprsteer::cli
