// Particle solvers: the one-sided (Nanbu) collision step and the first-order
// time-relaxed step, plus the run driver.
//
// Both steps are synchronous: every particle's update reads the full
// pre-step ensemble, and a new ensemble is returned. Per particle and step,
// draws occupy fixed counter slots of the stream keyed (seed, i, n):
//
//   Nanbu        slot 0: collision Bernoulli(dt)
//                slot 1: partner alpha
//                slot 2+: theta (theta_draws slots)
//
//   TimeRelaxed  slot 0: Bernoulli(tau)  [keep vs rest]
//                slot 1: Bernoulli(tau)  [collide vs equilibrate]
//                slot 2: partner alpha
//                slot 3+: theta (theta_draws slots)
//                slot 3+theta_draws+: equilibrium sample
//
// Branches that do not fire leave their slots unused; nothing shifts.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "kinmc/ensemble.hpp"
#include "kinmc/equilibrium.hpp"
#include "kinmc/initial.hpp"
#include "kinmc/metrics.hpp"
#include "kinmc/model.hpp"

namespace kinmc {

enum class Scheme { Nanbu, TimeRelaxed };

struct SchemeParams {
  Scheme scheme = Scheme::Nanbu;
  double dt = 0.1;          // in (0, 1]
  double horizon = 1.0;     // T >= 0
  std::int64_t n_particles = 1000;
  double epsilon = 1.0;     // TimeRelaxed scale parameter
  std::uint64_t seed = 0;
  std::int64_t record_every = 1;  // 0: initial and final snapshots only

  void validate(const ModelSpec& model) const;
};

struct StepStats {
  std::int64_t keeps = 0;
  std::int64_t collisions = 0;
  std::int64_t equilibrations = 0;
  long long clamp_events = 0;

  StepStats& operator+=(const StepStats& o);
};

// Update of a single particle (row i) with an explicit stream; the building
// block the steps map over all particles.
Eigen::VectorXd nanbu_update(const Ensemble& ens, const ModelSpec& model,
                             std::int64_t i, double dt, Stream& s,
                             StepStats* stats = nullptr);

Eigen::VectorXd trmc_update(const Ensemble& ens, const ModelSpec& model,
                            const EquilibriumSpec& eq, std::int64_t i, double tau,
                            Stream& s, StepStats* stats = nullptr);

// One synchronous collision step over all particles.
Ensemble nanbu_step(const Ensemble& ens, const ModelSpec& model, double dt,
                    std::uint64_t seed, StepStats* stats = nullptr);

// Relaxation weight tau = 1 - exp(-dt/epsilon), in (0, 1).
double relaxation_tau(double dt, double epsilon);

// One time-relaxed step: keep with probability (1-tau), collide with
// tau(1-tau), replace by an equilibrium sample with tau^2.
Ensemble trmc_step(const Ensemble& ens, const ModelSpec& model, double dt,
                   double epsilon, const EquilibriumSpec& eq, std::uint64_t seed,
                   StepStats* stats = nullptr);

struct Snapshot {
  std::int64_t step_index = 0;
  MetricReport report;
  std::optional<Eigen::MatrixXd> states;
};

struct Trajectory {
  std::vector<Snapshot> snapshots;
  Ensemble final_ensemble;
  SchemeParams params;
  ModelId model_id = ModelId::Kac;
  StepStats totals;
};

struct RunOptions {
  bool store_states = false;
  std::vector<double> moment_orders = {1.0, 2.0, 4.0};
  // Overrides the parameters estimated from the initial ensemble.
  std::optional<EquilibriumSpec> equilibrium;
};

// Iterate the configured step while n*dt < horizon, recording metric
// snapshots (always the initial and final states). Deterministic given the
// seed. Errors during a step are rethrown with the step index attached.
Trajectory run(const SchemeParams& params, const ModelSpec& model,
               const InitialCondition& ic, const RunOptions& options = {});

}  // namespace kinmc
