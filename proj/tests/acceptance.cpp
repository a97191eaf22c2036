// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are pinned in code next to each check.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <vector>

#include "kinmc/emit.hpp"
#include "kinmc/metrics.hpp"
#include "kinmc/oracles.hpp"
#include "kinmc/parallel.hpp"
#include "kinmc/solver.hpp"
#include "kinmc/sweep.hpp"
#include "kinmc/validate.hpp"

using namespace kinmc;

namespace {

int g_failures = 0;

class Criterion {
 public:
  explicit Criterion(std::string label) : label_(std::move(label)) {
    start_ = std::chrono::steady_clock::now();
  }

  void expect(bool ok, const std::string& detail) {
    ok_ = ok_ && ok;
    if (!detail_.empty()) detail_ += "; ";
    detail_ += detail;
  }

  ~Criterion() {
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    std::printf("%s  %s: %s  (%.1fs)\n", ok_ ? "PASS" : "FAIL", label_.c_str(),
                detail_.c_str(), secs);
    std::fflush(stdout);
    if (!ok_) ++g_failures;
  }

 private:
  std::string label_;
  std::string detail_;
  bool ok_ = true;
  std::chrono::steady_clock::time_point start_;
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

Eigen::VectorXd vec1(double x) {
  Eigen::VectorXd v(1);
  v[0] = x;
  return v;
}

struct Stats {
  double mean = 0;
  double se = 0;
};

Stats mean_se(const std::vector<double>& xs) {
  const auto n = static_cast<double>(xs.size());
  double mean = 0;
  for (double x : xs) mean += x;
  mean /= n;
  double ss = 0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0)) / std::sqrt(n)};
}

SweepPlan rate_plan(Scheme scheme) {
  SweepPlan plan;
  plan.axis = SweepAxis::ParticleCount;
  plan.values = {250, 500, 1000, 2000, 4000, 8000};
  plan.replications = 40;
  plan.reference_factor = 32;
  plan.base.scheme = scheme;
  plan.base.dt = 0.05;
  plan.base.horizon = 0.5;
  plan.base.epsilon = 1.0;
  plan.base.record_every = 0;
  plan.model = ModelSpec::kac();
  plan.initial = InitialCondition::gaussian(vec1(1.0), vec1(1.0));
  plan.master_seed = 20240901;
  plan.threads = default_threads();
  return plan;
}

void check_rate(Criterion& c, const SweepResult& result) {
  if (!result.fit) {
    c.expect(false, "no rate fit: " + result.diagnostic);
    return;
  }
  const double slope = result.fit->slope;
  const double r2 = result.fit->r_squared;
  c.expect(slope >= -0.62 && slope <= -0.38,
           "slope " + num(slope) + " in [-0.62, -0.38]");
  c.expect(r2 >= 0.95, "R^2 " + num(r2) + " >= 0.95");
}

void criterion_1_nanbu_rate() {
  SweepResult result;
  {
    Criterion c("criterion 1 (Nanbu particle-count rate)");
    result = converge_in_n(rate_plan(Scheme::Nanbu));
    check_rate(c, result);
  }
  // harness invariant at R >= 20: mean error nonincreasing in N up to two
  // combined standard errors at each consecutive pair
  Criterion m("invariant (monotone sanity of the criterion-1 sweep)");
  for (std::size_t k = 0; k + 1 < result.rows.size(); ++k) {
    const auto& a = result.rows[k];
    const auto& b = result.rows[k + 1];
    const double slack = 2.0 * std::sqrt(a.stderr_error * a.stderr_error +
                                         b.stderr_error * b.stderr_error);
    m.expect(b.mean_error <= a.mean_error + slack,
             num(b.mean_error) + " <= " + num(a.mean_error) + " + " +
                 num(slack));
  }
}

void criterion_2_trmc_rate() {
  Criterion c("criterion 2 (TRMC particle-count rate)");
  check_rate(c, converge_in_n(rate_plan(Scheme::TimeRelaxed)));
}

void criterion_3_euler_rate() {
  Criterion c("criterion 3 (forward-Euler time-step rate)");
  SweepPlan plan;
  plan.axis = SweepAxis::TimeStep;
  plan.values = {0.0125, 0.025, 0.05, 0.1};
  plan.oracle_quantity = OracleQuantity::Mean;
  plan.base.horizon = 1.0;
  plan.base.n_particles = 1;
  plan.model = ModelSpec::kac();
  plan.initial = InitialCondition::gaussian(vec1(1.0), vec1(1.0));
  plan.threads = 1;
  const SweepResult result = converge_in_dt(plan);

  for (std::size_t k = 0; k + 1 < result.rows.size(); ++k) {
    const double ratio =
        result.rows[k + 1].mean_error / result.rows[k].mean_error;
    c.expect(ratio >= 1.8 && ratio <= 2.2,
             "ratio " + num(ratio) + " in [1.8, 2.2]");
  }
  if (result.fit) {
    c.expect(result.fit->slope >= 0.9 && result.fit->slope <= 1.1,
             "slope " + num(result.fit->slope) + " in [0.9, 1.1]");
  } else {
    c.expect(false, "no rate fit: " + result.diagnostic);
  }
}

Eigen::MatrixXd equilibrium_sample(const EquilibriumSpec& eq, std::int64_t n,
                                   std::uint64_t seed) {
  Eigen::MatrixXd states(n, eq.dim);
  for (std::int64_t i = 0; i < n; ++i) {
    Stream s = derive_stream(seed, static_cast<std::uint64_t>(i) + 1,
                             StreamKey::kInitPhase);
    states.row(i) = sample_equilibrium(eq, s).transpose();
  }
  return states;
}

void criterion_4_ap_limit() {
  Criterion c("criterion 4 (TRMC asymptotic-preserving limit)");
  const auto model = ModelSpec::kac();
  const std::int64_t n = 100000;
  const auto ens = sample_initial(
      model, InitialCondition::gaussian(vec1(1.0), vec1(1.0)), n, 555);
  const auto eq = EquilibriumSpec::from_ensemble(model, ens);

  // one stiff step relaxes straight onto the steady state
  const auto relaxed = trmc_step(ens, model, 0.1, 1e-6, eq, 556);
  const auto fresh = equilibrium_sample(eq, n, 557);
  const double dist = w1_1d(relaxed.states.col(0), fresh.col(0));

  std::vector<double> self;
  for (int pair = 0; pair < 20; ++pair) {
    const auto a = equilibrium_sample(eq, n, 600 + 2 * pair);
    const auto b = equilibrium_sample(eq, n, 601 + 2 * pair);
    self.push_back(w1_1d(a.col(0), b.col(0)));
  }
  const double self_mean =
      std::accumulate(self.begin(), self.end(), 0.0) / self.size();
  c.expect(dist <= 2.0 * self_mean,
           "W1 " + num(dist) + " <= 2 x self-distance " + num(self_mean));
}

void criterion_5_conservation() {
  Criterion c("criterion 5 (expectation-level conservation)");
  const int reps = 100;

  {
    const auto model = ModelSpec::kac();
    const auto ic = InitialCondition::gaussian(vec1(1.0), vec1(1.0));
    SchemeParams params;
    params.dt = 0.1;
    params.horizon = 1.0;
    params.n_particles = 10000;
    params.record_every = 0;
    std::vector<double> energy_drift, final_mean;
    for (int rep = 0; rep < reps; ++rep) {
      params.seed = 7000 + static_cast<std::uint64_t>(rep);
      const auto traj = run(params, model, ic);
      energy_drift.push_back(
          traj.snapshots.back().report.conserved_drift.at("energy"));
      final_mean.push_back(traj.snapshots.back().report.mean_vector[0]);
    }
    const Stats ed = mean_se(energy_drift);
    c.expect(std::abs(ed.mean) <= 4.0 * ed.se,
             "kac energy drift " + num(ed.mean) + " (SE " + num(ed.se) + ")");
    const Stats fm = mean_se(final_mean);
    const double target = kac_mean_discrete(10, 0.1, 1.0);
    c.expect(std::abs(fm.mean - target) <= 4.0 * fm.se,
             "kac mean " + num(fm.mean) + " vs target " + num(target) + " (SE " + num(fm.se) + ")");
  }

  {
    const auto model = ModelSpec::morgenstern();
    const auto ic = InitialCondition::gaussian(Eigen::VectorXd::Zero(3),
                                               Eigen::VectorXd::Ones(3));
    SchemeParams params;
    params.dt = 0.1;
    params.horizon = 1.0;
    params.n_particles = 10000;
    params.record_every = 0;
    std::vector<double> px, py, pz, energy;
    for (int rep = 0; rep < reps; ++rep) {
      params.seed = 8000 + static_cast<std::uint64_t>(rep);
      const auto traj = run(params, model, ic);
      const auto& drift = traj.snapshots.back().report.conserved_drift;
      px.push_back(drift.at("momentum_x"));
      py.push_back(drift.at("momentum_y"));
      pz.push_back(drift.at("momentum_z"));
      energy.push_back(drift.at("energy"));
    }
    const std::pair<const char*, const std::vector<double>*> tracked[] = {
        {"px", &px}, {"py", &py}, {"pz", &pz}, {"energy", &energy}};
    for (const auto& [name, xs] : tracked) {
      const Stats st = mean_se(*xs);
      c.expect(std::abs(st.mean) <= 4.0 * st.se,
               std::string("morgenstern ") + name + " drift " + num(st.mean) +
                   " (SE " + num(st.se) + ")");
    }
  }
}

// independent oracle: exhaustive minimum over assignments
double brute_force_w1(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  const auto n = static_cast<int>(x.rows());
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double cost = 0.0;
    for (int i = 0; i < n; ++i) {
      cost += (x.row(i) - y.row(perm[static_cast<std::size_t>(i)])).norm();
    }
    best = std::min(best, cost);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best / n;
}

Eigen::MatrixXd random_matrix(Stream& s, std::int64_t n, int dim, double scale) {
  Eigen::MatrixXd m(n, dim);
  for (std::int64_t i = 0; i < n; ++i) {
    for (int k = 0; k < dim; ++k) m(i, k) = scale * (2.0 * s.uniform() - 1.0);
  }
  return m;
}

void criterion_6_metric_oracles() {
  Criterion c("criterion 6 (metric oracle equivalence)");
  Stream s = derive_stream(909, 0, 0);

  double worst_1d = 0.0;
  for (int inst = 0; inst < 200; ++inst) {
    const auto n = static_cast<std::int64_t>(2 + s.uniform() * 7);
    const auto x = random_matrix(s, n, 1, 5.0);
    const auto y = random_matrix(s, n, 1, 5.0);
    worst_1d = std::max(worst_1d, std::abs(w1_exact_1d(x.col(0), y.col(0)) -
                                           brute_force_w1(x, y)));
  }
  c.expect(worst_1d <= 1e-12,
           "1-D vs permutation minimum, worst gap " + num(worst_1d));

  double worst_2d = 0.0;
  for (int inst = 0; inst < 100; ++inst) {
    const auto n = static_cast<std::int64_t>(2 + s.uniform() * 5);
    const auto x = random_matrix(s, n, 2, 5.0);
    const auto y = random_matrix(s, n, 2, 5.0);
    worst_2d = std::max(
        worst_2d, std::abs(w1_exact_matching(x, y) - brute_force_w1(x, y)));
  }
  c.expect(worst_2d <= 1e-10,
           "matching vs permutation minimum, worst gap " + num(worst_2d));

  double worst_sliced = -1e300;
  for (int inst = 0; inst < 100; ++inst) {
    const auto n = static_cast<std::int64_t>(4 + s.uniform() * 61);
    const auto x = random_matrix(s, n, 3, 2.0);
    const auto y = random_matrix(s, n, 3, 2.0);
    Stream ds = derive_stream(910, 0, static_cast<std::uint64_t>(inst));
    worst_sliced = std::max(worst_sliced,
                            w1_sliced(x, y, 25, ds) - w1_exact_matching(x, y));
  }
  c.expect(worst_sliced <= 1e-12,
           "sliced minus exact, worst excess " + num(worst_sliced));
}

void criterion_7_assumption_suites() {
  Criterion c("criterion 7 (collision map assumption suites)");
  const std::vector<ModelSpec> models = {
      ModelSpec::kac(), ModelSpec::wealth(0.25), ModelSpec::opinion(0.25, 0.2),
      ModelSpec::morgenstern(), ModelSpec::kinetic_opt(2, 0.5, 0.3, 10.0)};
  const ValidationReport report = validate(models, Depth::Full);
  for (const auto& check : report.checks) {
    if (check.name.find("lipschitz") == std::string::npos &&
        check.name.find("growth") == std::string::npos) {
      continue;
    }
    c.expect(check.passed, check.name + " margin " + num(check.margin));
  }
}

void criterion_8_moment_envelope() {
  Criterion c("criterion 8 (moment envelope, kac energy)");
  const auto model = ModelSpec::kac();
  const auto ic = InitialCondition::gaussian(vec1(1.0), vec1(1.0));
  SchemeParams params;
  params.dt = 0.1;
  params.horizon = 2.0;
  params.n_particles = 10000;
  params.record_every = 1;
  const int reps = 100;

  std::vector<std::vector<double>> m2(21);  // per snapshot, across reps
  for (int rep = 0; rep < reps; ++rep) {
    params.seed = 9000 + static_cast<std::uint64_t>(rep);
    const auto traj = run(params, model, ic);
    for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
      m2[k].push_back(traj.snapshots[k].report.moments.at(2.0));
    }
  }
  const Stats initial = mean_se(m2[0]);
  double worst_excess = -1e300;
  for (std::size_t k = 0; k < m2.size(); ++k) {
    const Stats st = mean_se(m2[k]);
    worst_excess =
        std::max(worst_excess, st.mean - (initial.mean + 4.0 * st.se));
  }
  c.expect(worst_excess <= 0.0,
           "replication-mean sqrt(M2) never exceeds its initial value + 4 SE "
           "(worst excess " +
               num(worst_excess) + ")");
}

void criterion_9_reproducibility() {
  Criterion c("criterion 9 (bitwise reproducibility across thread counts)");
  SweepPlan plan;
  plan.axis = SweepAxis::ParticleCount;
  plan.values = {100, 200, 400};
  plan.replications = 5;
  plan.reference_factor = 16;
  plan.base.scheme = Scheme::Nanbu;
  plan.base.dt = 0.1;
  plan.base.horizon = 0.3;
  plan.model = ModelSpec::kac();
  plan.initial = InitialCondition::gaussian(vec1(1.0), vec1(1.0));
  plan.master_seed = 31337;

  plan.threads = 1;
  const std::string csv_single = to_csv(converge_in_n(plan));
  const std::string csv_again = to_csv(converge_in_n(plan));
  plan.threads = 8;
  const std::string csv_threads = to_csv(converge_in_n(plan));

  c.expect(csv_single == csv_again, "rerun matches byte for byte");
  c.expect(csv_single == csv_threads, "1-thread and 8-thread output identical");
}

}  // namespace

int main() {
  criterion_1_nanbu_rate();
  criterion_2_trmc_rate();
  criterion_3_euler_rate();
  criterion_4_ap_limit();
  criterion_5_conservation();
  criterion_6_metric_oracles();
  criterion_7_assumption_suites();
  criterion_8_moment_envelope();
  criterion_9_reproducibility();
  if (g_failures > 0) {
    std::printf("%d criterion(s) FAILED\n", g_failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
