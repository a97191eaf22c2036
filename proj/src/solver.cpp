#include "kinmc/solver.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace kinmc {

namespace {

constexpr std::uint64_t kSlotNanbuBernoulli = 0;
constexpr std::uint64_t kSlotNanbuPartner = 1;
constexpr std::uint64_t kSlotNanbuTheta = 2;

constexpr std::uint64_t kSlotTrmcFirst = 0;
constexpr std::uint64_t kSlotTrmcSecond = 1;
constexpr std::uint64_t kSlotTrmcPartner = 2;
constexpr std::uint64_t kSlotTrmcTheta = 3;

void check_ensemble(const Ensemble& ens, const ModelSpec& model) {
  if (ens.model_id != model.id) {
    throw std::invalid_argument("solver: ensemble/model mismatch");
  }
  if (ens.dim() != model.dim) {
    throw std::invalid_argument("solver: ensemble dimension mismatch");
  }
  if (ens.size() < 1) {
    throw std::invalid_argument("solver: empty ensemble");
  }
}

void check_dt(double dt) {
  if (!(dt > 0.0 && dt <= 1.0)) {
    throw std::invalid_argument("solver: dt must lie in (0, 1]");
  }
}

}  // namespace

void SchemeParams::validate(const ModelSpec& model) const {
  check_dt(dt);
  if (!(horizon >= 0.0)) {
    throw std::invalid_argument("params: horizon must be >= 0");
  }
  if (n_particles < 1) {
    throw std::invalid_argument("params: need at least one particle");
  }
  if (record_every < 0) {
    throw std::invalid_argument("params: record_every must be >= 0");
  }
  if (scheme == Scheme::TimeRelaxed) {
    if (!(epsilon > 0.0)) {
      throw std::invalid_argument("params: time-relaxed scheme needs epsilon > 0");
    }
    if (!model.has(kOracleEquilibrium)) {
      throw std::invalid_argument(
          "params: time-relaxed scheme needs a model with an equilibrium "
          "sampler");
    }
  }
}

StepStats& StepStats::operator+=(const StepStats& o) {
  keeps += o.keeps;
  collisions += o.collisions;
  equilibrations += o.equilibrations;
  clamp_events += o.clamp_events;
  return *this;
}

Eigen::VectorXd nanbu_update(const Ensemble& ens, const ModelSpec& model,
                             std::int64_t i, double dt, Stream& s,
                             StepStats* stats) {
  if (sample_bernoulli(s, dt) == 0) {
    if (stats) ++stats->keeps;
    return ens.states.row(i).transpose();
  }
  s.skip_to(kSlotNanbuPartner);
  const PartnerDraw partner = sample_partner(s, ens.size());
  s.skip_to(kSlotNanbuTheta);
  const Eigen::VectorXd theta = sample_theta(model, s);
  CollisionDiagnostics diag;
  const Eigen::VectorXd out =
      collide(model, ens.states.row(i).transpose(),
              ens.states.row(partner.index - 1).transpose(), theta, &diag);
  if (stats) {
    ++stats->collisions;
    stats->clamp_events += diag.clamp_events;
  }
  return out;
}

Ensemble nanbu_step(const Ensemble& ens, const ModelSpec& model, double dt,
                    std::uint64_t seed, StepStats* stats) {
  check_ensemble(ens, model);
  check_dt(dt);
  Ensemble next;
  next.states.resizeLike(ens.states);
  next.step_index = ens.step_index + 1;
  next.time = static_cast<double>(next.step_index) * dt;
  next.model_id = ens.model_id;
  for (std::int64_t i = 0; i < ens.size(); ++i) {
    Stream s = derive_stream(seed, static_cast<std::uint64_t>(i) + 1,
                             static_cast<std::uint64_t>(ens.step_index));
    next.states.row(i) = nanbu_update(ens, model, i, dt, s, stats).transpose();
  }
  return next;
}

double relaxation_tau(double dt, double epsilon) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("relaxation_tau: dt must be > 0");
  }
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("relaxation_tau: epsilon must be > 0");
  }
  return -std::expm1(-dt / epsilon);
}

Eigen::VectorXd trmc_update(const Ensemble& ens, const ModelSpec& model,
                            const EquilibriumSpec& eq, std::int64_t i, double tau,
                            Stream& s, StepStats* stats) {
  if (sample_bernoulli(s, tau) == 0) {
    if (stats) ++stats->keeps;
    return ens.states.row(i).transpose();
  }
  s.skip_to(kSlotTrmcSecond);
  if (sample_bernoulli(s, tau) == 0) {
    s.skip_to(kSlotTrmcPartner);
    const PartnerDraw partner = sample_partner(s, ens.size());
    s.skip_to(kSlotTrmcTheta);
    const Eigen::VectorXd theta = sample_theta(model, s);
    CollisionDiagnostics diag;
    const Eigen::VectorXd out =
        collide(model, ens.states.row(i).transpose(),
                ens.states.row(partner.index - 1).transpose(), theta, &diag);
    if (stats) {
      ++stats->collisions;
      stats->clamp_events += diag.clamp_events;
    }
    return out;
  }
  s.skip_to(kSlotTrmcTheta + static_cast<std::uint64_t>(model.theta_draws()));
  if (stats) ++stats->equilibrations;
  return sample_equilibrium(eq, s);
}

Ensemble trmc_step(const Ensemble& ens, const ModelSpec& model, double dt,
                   double epsilon, const EquilibriumSpec& eq, std::uint64_t seed,
                   StepStats* stats) {
  check_ensemble(ens, model);
  check_dt(dt);
  if (eq.kind == EquilibriumKind::Unavailable) {
    throw std::invalid_argument("trmc_step: no equilibrium sampler available");
  }
  if (eq.dim != model.dim) {
    throw std::invalid_argument(
        "trmc_step: equilibrium dimension does not match the model");
  }
  const double tau = relaxation_tau(dt, epsilon);
  Ensemble next;
  next.states.resizeLike(ens.states);
  next.step_index = ens.step_index + 1;
  next.time = static_cast<double>(next.step_index) * dt;
  next.model_id = ens.model_id;
  for (std::int64_t i = 0; i < ens.size(); ++i) {
    Stream s = derive_stream(seed, static_cast<std::uint64_t>(i) + 1,
                             static_cast<std::uint64_t>(ens.step_index));
    next.states.row(i) =
        trmc_update(ens, model, eq, i, tau, s, stats).transpose();
  }
  return next;
}

namespace {

void add_drift(MetricReport& report, const ModelSpec& model,
               const MetricReport& baseline) {
  if (model.has(kOracleEnergyConserved)) {
    report.conserved_drift["energy"] = report.energy - baseline.energy;
  }
  if (model.has(kOracleMeanConserved)) {
    report.conserved_drift["mean"] =
        report.mean_vector[0] - baseline.mean_vector[0];
  }
  if (model.has(kOracleMomentumConserved)) {
    static const char* axes[] = {"momentum_x", "momentum_y", "momentum_z"};
    for (int k = 0; k < model.dim && k < 3; ++k) {
      report.conserved_drift[axes[k]] =
          report.mean_vector[k] - baseline.mean_vector[k];
    }
  }
}

}  // namespace

Trajectory run(const SchemeParams& params, const ModelSpec& model,
               const InitialCondition& ic, const RunOptions& options) {
  params.validate(model);

  Trajectory traj;
  traj.params = params;
  traj.model_id = model.id;

  Ensemble ens = sample_initial(model, ic, params.n_particles, params.seed);

  EquilibriumSpec eq = EquilibriumSpec::unavailable();
  if (params.scheme == Scheme::TimeRelaxed) {
    eq = options.equilibrium ? *options.equilibrium
                             : EquilibriumSpec::from_ensemble(model, ens);
    if (eq.kind == EquilibriumKind::Unavailable) {
      throw std::invalid_argument("run: no equilibrium sampler for this model");
    }
  }

  const MetricReport baseline = make_report(ens, options.moment_orders);

  auto record = [&](const Ensemble& e) {
    MetricReport report = make_report(e, options.moment_orders);
    add_drift(report, model, baseline);
    Snapshot snap;
    snap.step_index = e.step_index;
    snap.report = std::move(report);
    if (options.store_states) {
      snap.states = e.states;
    }
    traj.snapshots.push_back(std::move(snap));
  };

  record(ens);

  std::int64_t n = 0;
  while (static_cast<double>(n) * params.dt < params.horizon) {
    try {
      if (params.scheme == Scheme::Nanbu) {
        ens = nanbu_step(ens, model, params.dt, params.seed, &traj.totals);
      } else {
        ens = trmc_step(ens, model, params.dt, params.epsilon, eq, params.seed,
                        &traj.totals);
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("run: step " + std::to_string(n) +
                               " failed: " + e.what());
    }
    ++n;
    const bool final_step =
        !(static_cast<double>(n) * params.dt < params.horizon);
    if (final_step ||
        (params.record_every > 0 && n % params.record_every == 0)) {
      record(ens);
    }
  }

  traj.final_ensemble = std::move(ens);
  return traj;
}

}  // namespace kinmc
