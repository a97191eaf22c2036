#pragma once

#include <string>

#include <json.hpp>

#include "kinmc/solver.hpp"
#include "kinmc/sweep.hpp"
#include "kinmc/validate.hpp"

namespace kinmc {

// Sweep table as CSV. Column contract (fixed order):
//   axis_value,n_steps,mean_error,stderr,estimator_tag,replications,seed
// Non-terminal statistics append "|<statistic>" to the estimator tag.
// Numbers print in round-trip precision so a bitwise file comparison is a
// numeric comparison.
std::string to_csv(const SweepResult& result);

// Full result document: schema_version, plan echo, per-row results with
// replication values, and the rate fit (or the diagnostic replacing it).
nlohmann::json to_json(const SweepPlan& plan, const SweepResult& result);

// Log-log scatter with the fitted line and the theoretical guide slope.
std::string to_svg(const SweepPlan& plan, const SweepResult& result);

// Trajectory snapshots as CSV / JSON (simulate subcommand).
std::string trajectory_csv(const Trajectory& traj);
nlohmann::json trajectory_json(const Trajectory& traj);

std::string validation_text(const ValidationReport& report);
nlohmann::json validation_json(const ValidationReport& report);

// Writes content to path, surfacing the path in any I/O error.
void write_file(const std::string& path, const std::string& content);

}  // namespace kinmc
