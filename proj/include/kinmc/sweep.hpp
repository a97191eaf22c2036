// Convergence experiments: particle-count sweeps against a large-N reference
// run, and time-step sweeps against closed-form moment oracles.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kinmc/initial.hpp"
#include "kinmc/model.hpp"
#include "kinmc/oracles.hpp"
#include "kinmc/rate_fit.hpp"
#include "kinmc/solver.hpp"

namespace kinmc {

enum class SweepAxis { ParticleCount, TimeStep };

struct SweepPlan {
  SweepAxis axis = SweepAxis::ParticleCount;
  std::vector<double> values;  // strictly ascending; particle counts integral
  int replications = 2;

  // ParticleCount reference: an independent run with factor * max(values)
  // particles per replication.
  int reference_factor = 16;
  int sliced_directions = 200;

  // TimeStep reference: closed-form oracle, optionally cross-checked by a
  // Monte Carlo variant at fixed particle count (noise bars included).
  OracleQuantity oracle_quantity = OracleQuantity::Mean;
  bool mc_variant = false;
  std::int64_t mc_particles = 0;

  SchemeParams base;
  ModelSpec model;
  InitialCondition initial;
  std::uint64_t master_seed = 0;

  // 0 keeps the terminal statistic only; > 0 additionally tracks the
  // max-over-snapshots error at that stride.
  std::int64_t record_every = 0;
  int threads = 1;
};

// Statistic kinds a row can carry; terminal is the primary one used by rate
// fits. "max" rows appear when record_every > 0, "mc" rows for the Monte
// Carlo time-step variant.
struct SweepRow {
  double axis_value = 0;
  std::int64_t n_steps = 0;
  std::string statistic = "terminal";
  double mean_error = 0;
  double stderr_error = 0;
  std::string estimator_tag;
  int replications = 0;
  std::uint64_t seed = 0;
  std::vector<double> per_replication;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::optional<RateFit> fit;  // over terminal rows
  std::string diagnostic;      // set instead of fit for degenerate sweeps
};

// Seed derivation for one sweep cell. role 0: value-level base, then per
// replication: 1 run, 2 reference, 3 metric directions.
std::uint64_t cell_seed(std::uint64_t master, double axis_value, int replication,
                        int role);

// W1(final ensemble of an N-run, final ensemble of an independent large-N
// reference) per replication, averaged per value; log-log rate over N.
SweepResult converge_in_n(const SweepPlan& plan);

// |discrete oracle at n = round(T/dt) - continuous oracle at n dt| per dt;
// log-log rate over dt.
SweepResult converge_in_dt(const SweepPlan& plan);

// Exact initial moment of the configured law (used by oracle sweeps).
double exact_initial_moment(const InitialCondition& ic, int dim,
                            OracleQuantity q);

}  // namespace kinmc
