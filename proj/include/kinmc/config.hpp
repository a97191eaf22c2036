// Strict JSON configuration. Sections: model, initial_condition, scheme,
// and optionally sweep, output, equilibrium. Unknown keys anywhere are
// errors, not warnings.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "kinmc/equilibrium.hpp"
#include "kinmc/sweep.hpp"

namespace kinmc {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct Experiment {
  ModelSpec model;
  InitialCondition initial;
  SchemeParams scheme;
  std::optional<SweepPlan> sweep;  // base/model/initial already filled in
  std::optional<EquilibriumSpec> equilibrium;
  std::vector<std::string> formats = {"csv"};
  std::string prefix = "kinmc";
};

Experiment parse_config(const nlohmann::json& doc);
Experiment load_config(const std::string& path);

}  // namespace kinmc
