#include "kinmc/sweep.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "kinmc/metrics.hpp"
#include "kinmc/parallel.hpp"

namespace kinmc {

namespace {

void check_common(const SweepPlan& plan) {
  if (plan.values.size() < 3) {
    throw std::invalid_argument("sweep: need at least 3 axis values");
  }
  for (std::size_t k = 0; k < plan.values.size(); ++k) {
    if (!(plan.values[k] > 0.0)) {
      throw std::invalid_argument("sweep: axis values must be positive");
    }
    if (k > 0 && !(plan.values[k] > plan.values[k - 1])) {
      throw std::invalid_argument("sweep: axis values must be strictly ascending");
    }
  }
  if (plan.threads < 1) {
    throw std::invalid_argument("sweep: need at least one thread");
  }
}

std::int64_t steps_for(double dt, double horizon) {
  std::int64_t n = 0;
  while (static_cast<double>(n) * dt < horizon) ++n;
  return n;
}

struct Stats {
  double mean = 0;
  double se = 0;
};

// Two-pass mean / standard error of the mean.
Stats mean_se(const std::vector<double>& xs) {
  const auto n = static_cast<double>(xs.size());
  double mean = 0;
  for (double x : xs) mean += x;
  mean /= n;
  double ss = 0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double sd = xs.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  return {mean, sd / std::sqrt(n)};
}

std::optional<RateFit> fit_terminal(const std::vector<SweepRow>& rows,
                                    std::string& diagnostic) {
  std::vector<RatePoint> pts;
  for (const auto& r : rows) {
    if (r.statistic == "terminal") {
      pts.push_back({r.axis_value, r.mean_error, r.stderr_error});
    }
  }
  try {
    return fit_rate(pts);
  } catch (const ZeroErrorSweep& e) {
    diagnostic = e.what();
    return std::nullopt;
  }
}

}  // namespace

std::uint64_t cell_seed(std::uint64_t master, double axis_value, int replication,
                        int role) {
  const std::uint64_t base =
      mix_seed(master, std::bit_cast<std::uint64_t>(axis_value));
  if (role == 0) return base;
  return mix_seed(base, 4ull * static_cast<std::uint64_t>(replication) +
                            static_cast<std::uint64_t>(role));
}

SweepResult converge_in_n(const SweepPlan& plan) {
  check_common(plan);
  if (plan.axis != SweepAxis::ParticleCount) {
    throw std::invalid_argument("converge_in_n: axis must be ParticleCount");
  }
  if (plan.replications < 2) {
    throw std::invalid_argument("converge_in_n: need at least 2 replications");
  }
  if (plan.reference_factor < 16) {
    throw std::invalid_argument("converge_in_n: reference factor must be >= 16");
  }
  for (double v : plan.values) {
    if (v != std::floor(v) || v < 1.0) {
      throw std::invalid_argument(
          "converge_in_n: particle counts must be positive integers");
    }
  }
  plan.base.validate(plan.model);

  const auto n_ref = static_cast<std::int64_t>(
      plan.reference_factor * plan.values.back());
  const std::size_t n_values = plan.values.size();
  const int reps = plan.replications;
  const bool track_max = plan.record_every > 0;
  const int dim = plan.model.dim;

  struct CellOut {
    double terminal = 0;
    double max_over_snapshots = 0;
  };
  std::vector<CellOut> cells(n_values * static_cast<std::size_t>(reps));

  auto run_cell = [&](std::int64_t flat) {
    const std::size_t vi = static_cast<std::size_t>(flat) /
                           static_cast<std::size_t>(reps);
    const int rep = static_cast<int>(flat % reps);
    const double value = plan.values[vi];

    SchemeParams run_params = plan.base;
    run_params.n_particles = static_cast<std::int64_t>(value);
    run_params.seed = cell_seed(plan.master_seed, value, rep, 1);
    run_params.record_every = plan.record_every;

    SchemeParams ref_params = run_params;
    ref_params.n_particles = n_ref;
    ref_params.seed = cell_seed(plan.master_seed, value, rep, 2);

    RunOptions options;
    options.store_states = track_max;

    const Trajectory traj = run(run_params, plan.model, plan.initial, options);
    const Trajectory ref = run(ref_params, plan.model, plan.initial, options);

    auto distance = [&](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                        std::uint64_t metric_seed, int pair_index) {
      if (dim == 1) {
        return w1_1d(a.col(0), b.col(0));
      }
      Stream s = derive_stream(mix_seed(metric_seed, pair_index), 0, 0);
      return w1_sliced(a, b, plan.sliced_directions, s);
    };

    const std::uint64_t metric_seed = cell_seed(plan.master_seed, value, rep, 3);
    CellOut out;
    out.terminal = distance(traj.final_ensemble.states,
                            ref.final_ensemble.states, metric_seed, 0);
    if (track_max) {
      if (traj.snapshots.size() != ref.snapshots.size()) {
        throw std::logic_error("converge_in_n: snapshot grids differ");
      }
      double worst = 0;
      for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
        worst = std::max(worst, distance(*traj.snapshots[k].states,
                                         *ref.snapshots[k].states, metric_seed,
                                         static_cast<int>(k) + 1));
      }
      out.max_over_snapshots = worst;
    }
    cells[static_cast<std::size_t>(flat)] = out;
  };

  parallel_for(static_cast<std::int64_t>(cells.size()), plan.threads, run_cell);

  const std::string tag =
      dim == 1 ? estimator_label(EstimatorTag::Exact1D)
               : estimator_label(EstimatorTag::Sliced, plan.sliced_directions);
  const std::int64_t n_steps = steps_for(plan.base.dt, plan.base.horizon);

  SweepResult result;
  for (std::size_t vi = 0; vi < n_values; ++vi) {
    std::vector<double> terminal(static_cast<std::size_t>(reps));
    std::vector<double> max_err(static_cast<std::size_t>(reps));
    for (int rep = 0; rep < reps; ++rep) {
      const auto& c = cells[vi * static_cast<std::size_t>(reps) +
                            static_cast<std::size_t>(rep)];
      terminal[static_cast<std::size_t>(rep)] = c.terminal;
      max_err[static_cast<std::size_t>(rep)] = c.max_over_snapshots;
    }
    const Stats st = mean_se(terminal);
    SweepRow row;
    row.axis_value = plan.values[vi];
    row.n_steps = n_steps;
    row.statistic = "terminal";
    row.mean_error = st.mean;
    row.stderr_error = st.se;
    row.estimator_tag = tag;
    row.replications = reps;
    row.seed = cell_seed(plan.master_seed, plan.values[vi], 0, 0);
    row.per_replication = terminal;
    result.rows.push_back(std::move(row));

    if (track_max) {
      const Stats sm = mean_se(max_err);
      SweepRow mrow;
      mrow.axis_value = plan.values[vi];
      mrow.n_steps = n_steps;
      mrow.statistic = "max";
      mrow.mean_error = sm.mean;
      mrow.stderr_error = sm.se;
      mrow.estimator_tag = tag;
      mrow.replications = reps;
      mrow.seed = cell_seed(plan.master_seed, plan.values[vi], 0, 0);
      mrow.per_replication = max_err;
      result.rows.push_back(std::move(mrow));
    }
  }

  result.fit = fit_terminal(result.rows, result.diagnostic);
  return result;
}

double exact_initial_moment(const InitialCondition& ic, int dim,
                            OracleQuantity q) {
  auto mean_component = [&](int k) -> double {
    switch (ic.kind) {
      case InitialKind::PointMass: return ic.center[k];
      case InitialKind::UniformBox: return 0.5 * (ic.lo[k] + ic.hi[k]);
      case InitialKind::Gaussian: return ic.mean[k];
      case InitialKind::TwoPointMixture:
        return ic.weight_a * ic.atom_a[k] + (1.0 - ic.weight_a) * ic.atom_b[k];
      case InitialKind::Custom: break;
    }
    throw std::invalid_argument(
        "oracle sweep: custom initial conditions have no closed-form moments");
  };
  auto second_component = [&](int k) -> double {
    switch (ic.kind) {
      case InitialKind::PointMass: return ic.center[k] * ic.center[k];
      case InitialKind::UniformBox: {
        const double a = ic.lo[k], b = ic.hi[k];
        return (a * a + a * b + b * b) / 3.0;
      }
      case InitialKind::Gaussian:
        return ic.variance[k] + ic.mean[k] * ic.mean[k];
      case InitialKind::TwoPointMixture:
        return ic.weight_a * ic.atom_a[k] * ic.atom_a[k] +
               (1.0 - ic.weight_a) * ic.atom_b[k] * ic.atom_b[k];
      case InitialKind::Custom: break;
    }
    throw std::invalid_argument(
        "oracle sweep: custom initial conditions have no closed-form moments");
  };

  switch (q) {
    case OracleQuantity::Mean:
      if (dim != 1) {
        throw std::invalid_argument("oracle sweep: mean oracle needs d = 1");
      }
      return mean_component(0);
    case OracleQuantity::Momentum:
      return mean_component(0);  // conserved per component; first reported
    case OracleQuantity::Energy: {
      double e = 0;
      for (int k = 0; k < dim; ++k) e += second_component(k);
      return e;
    }
  }
  throw std::invalid_argument("oracle sweep: unknown quantity");
}

SweepResult converge_in_dt(const SweepPlan& plan) {
  check_common(plan);
  if (plan.axis != SweepAxis::TimeStep) {
    throw std::invalid_argument("converge_in_dt: axis must be TimeStep");
  }
  for (double v : plan.values) {
    if (!(v > 0.0 && v <= 1.0)) {
      throw std::invalid_argument("converge_in_dt: dt values must lie in (0, 1]");
    }
  }
  const auto oracle = MomentOracle::lookup(plan.model.id, plan.oracle_quantity);
  if (!oracle) {
    throw std::invalid_argument(
        std::string("converge_in_dt: model '") + model_name(plan.model.id) +
        "' has no closed-form oracle for '" +
        quantity_name(plan.oracle_quantity) + "'");
  }
  if (plan.mc_variant && plan.mc_particles < 1) {
    throw std::invalid_argument(
        "converge_in_dt: Monte Carlo variant needs mc_particles >= 1");
  }

  const double T = plan.base.horizon;
  const double init =
      exact_initial_moment(plan.initial, plan.model.dim, plan.oracle_quantity);

  SweepResult result;
  for (double dt : plan.values) {
    const auto n = static_cast<std::int64_t>(std::llround(T / dt));
    const double discrete = oracle->discrete(n, dt, init);
    const double continuous =
        oracle->continuous(static_cast<double>(n) * dt, init);
    SweepRow row;
    row.axis_value = dt;
    row.n_steps = n;
    row.statistic = "terminal";
    row.mean_error = std::abs(discrete - continuous);
    row.stderr_error = 0.0;
    row.estimator_tag = "Oracle";
    row.replications = 1;
    row.seed = cell_seed(plan.master_seed, dt, 0, 0);
    row.per_replication = {row.mean_error};
    result.rows.push_back(std::move(row));
  }

  if (plan.mc_variant) {
    // Opt-in particle cross-check: empirical moment at the final step against
    // the continuous oracle, with replication noise bars.
    for (double dt : plan.values) {
      const auto n = static_cast<std::int64_t>(std::llround(T / dt));
      std::vector<double> errs(static_cast<std::size_t>(plan.replications));
      parallel_for(
          plan.replications, plan.threads, [&](std::int64_t rep) {
            SchemeParams params = plan.base;
            params.dt = dt;
            params.n_particles = plan.mc_particles;
            params.record_every = 0;
            params.seed =
                cell_seed(plan.master_seed, dt, static_cast<int>(rep), 1);
            const Trajectory traj = run(params, plan.model, plan.initial);
            const auto& states = traj.final_ensemble.states;
            double observed = 0;
            switch (plan.oracle_quantity) {
              case OracleQuantity::Mean:
              case OracleQuantity::Momentum:
                observed = states.col(0).mean();
                break;
              case OracleQuantity::Energy:
                observed =
                    states.squaredNorm() / static_cast<double>(states.rows());
                break;
            }
            const double target =
                oracle->continuous(static_cast<double>(n) * dt, init);
            errs[static_cast<std::size_t>(rep)] = std::abs(observed - target);
          });
      const Stats st = mean_se(errs);
      SweepRow row;
      row.axis_value = dt;
      row.n_steps = n;
      row.statistic = "mc";
      row.mean_error = st.mean;
      row.stderr_error = st.se;
      row.estimator_tag = "MC(" + std::to_string(plan.mc_particles) + ")";
      row.replications = plan.replications;
      row.seed = cell_seed(plan.master_seed, dt, 0, 0);
      row.per_replication = errs;
      result.rows.push_back(std::move(row));
    }
  }

  result.fit = fit_terminal(result.rows, result.diagnostic);
  return result;
}

}  // namespace kinmc
