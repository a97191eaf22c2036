#include "kinmc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace kinmc {

namespace {

std::vector<double> sorted_finite(const Eigen::VectorXd& x, const char* name) {
  if (!x.allFinite()) {
    throw std::invalid_argument(std::string("w1: ") + name +
                                " contains non-finite entries");
  }
  std::vector<double> v(x.data(), x.data() + x.size());
  std::sort(v.begin(), v.end());
  return v;
}

// Exact assignment by shortest augmenting paths with potentials (cubic).
// Ties resolve to the lowest column index through the strict-< scan.
double assignment_cost(const Eigen::MatrixXd& cost) {
  const auto n = static_cast<std::int64_t>(cost.rows());
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::int64_t> match(n + 1, 0), way(n + 1, 0);
  for (std::int64_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::int64_t j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::int64_t i0 = match[j0];
      double delta = kInf;
      std::int64_t j1 = 0;
      for (std::int64_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::int64_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::int64_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  double total = 0.0;
  for (std::int64_t j = 1; j <= n; ++j) {
    total += cost(match[j] - 1, j - 1);
  }
  return total;
}

// Fixed-arity pairwise tree sum: schedule-independent reduction.
double pairwise_sum(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::size_t n = v.size();
  while (n > 1) {
    std::size_t half = 0;
    for (std::size_t k = 0; k + 1 < n; k += 2) {
      v[half++] = v[k] + v[k + 1];
    }
    if (n % 2 == 1) {
      v[half++] = v[n - 1];
    }
    n = half;
  }
  return v[0];
}

}  // namespace

std::string estimator_label(EstimatorTag tag, int directions) {
  switch (tag) {
    case EstimatorTag::Exact1D: return "Exact1D";
    case EstimatorTag::ExactMatching: return "ExactMatching";
    case EstimatorTag::Sliced: return "Sliced(" + std::to_string(directions) + ")";
  }
  return "unknown";
}

double w1_exact_1d(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("w1_exact_1d: sample sizes differ");
  }
  if (x.size() == 0) {
    throw std::invalid_argument("w1_exact_1d: empty samples");
  }
  const auto xs = sorted_finite(x, "x");
  const auto ys = sorted_finite(y, "y");
  double acc = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    acc += std::abs(xs[i] - ys[i]);
  }
  return acc / static_cast<double>(xs.size());
}

double w1_1d(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (x.size() == y.size()) {
    return w1_exact_1d(x, y);
  }
  if (x.size() == 0 || y.size() == 0) {
    throw std::invalid_argument("w1_1d: empty samples");
  }
  const auto xs = sorted_finite(x, "x");
  const auto ys = sorted_finite(y, "y");
  // integral of |F - G| over the merged support
  const double wx = 1.0 / static_cast<double>(xs.size());
  const double wy = 1.0 / static_cast<double>(ys.size());
  std::size_t i = 0, j = 0;
  double fx = 0.0, fy = 0.0;
  double prev = std::min(xs[0], ys[0]);
  double acc = 0.0;
  while (i < xs.size() || j < ys.size()) {
    double t;
    if (j >= ys.size() || (i < xs.size() && xs[i] <= ys[j])) {
      t = xs[i];
    } else {
      t = ys[j];
    }
    acc += std::abs(fx - fy) * (t - prev);
    while (i < xs.size() && xs[i] == t) {
      fx += wx;
      ++i;
    }
    while (j < ys.size() && ys[j] == t) {
      fy += wy;
      ++j;
    }
    prev = t;
  }
  return acc;
}

double w1_exact_matching(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                         std::int64_t n_max) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw std::invalid_argument("w1_exact_matching: sample shapes differ");
  }
  const auto n = static_cast<std::int64_t>(x.rows());
  if (n == 0) {
    throw std::invalid_argument("w1_exact_matching: empty samples");
  }
  if (n > n_max) {
    throw std::invalid_argument(
        "w1_exact_matching: sample size exceeds the exact-matching cap; use "
        "the sliced estimator");
  }
  if (!x.allFinite() || !y.allFinite()) {
    throw std::invalid_argument("w1_exact_matching: non-finite entries");
  }
  Eigen::MatrixXd cost(n, n);
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j = 0; j < n; ++j) {
      cost(i, j) = (x.row(i) - y.row(j)).norm();
    }
  }
  return assignment_cost(cost) / static_cast<double>(n);
}

double w1_sliced(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                 int directions, Stream& s) {
  if (x.cols() != y.cols()) {
    throw std::invalid_argument("w1_sliced: dimensions differ");
  }
  if (directions < 1) {
    throw std::invalid_argument("w1_sliced: need at least one direction");
  }
  const int dim = static_cast<int>(x.cols());
  std::vector<double> per_direction(static_cast<std::size_t>(directions));
  for (int l = 0; l < directions; ++l) {
    const Eigen::VectorXd e = sample_direction(s, dim);
    per_direction[static_cast<std::size_t>(l)] = w1_1d(x * e, y * e);
  }
  return pairwise_sum(std::move(per_direction)) / static_cast<double>(directions);
}

double empirical_moment(const Eigen::MatrixXd& x, double q) {
  if (!(q >= 1.0)) {
    throw std::invalid_argument("empirical_moment: q must be >= 1");
  }
  if (x.rows() == 0) {
    throw std::invalid_argument("empirical_moment: empty sample");
  }
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    acc += std::pow(x.row(i).norm(), q);
  }
  return std::pow(acc / static_cast<double>(x.rows()), 1.0 / q);
}

double epsilon_rate(std::int64_t n, int dim, double q) {
  if (n < 1) {
    throw std::invalid_argument("epsilon_rate: N must be >= 1");
  }
  const auto nd = static_cast<double>(n);
  if (dim == 1) {
    if (!(q > 2.0)) {
      throw std::invalid_argument("epsilon_rate: d = 1 requires q > 2");
    }
    return 1.0 / std::sqrt(nd);
  }
  if (dim == 2) {
    if (!(q > 2.0)) {
      throw std::invalid_argument("epsilon_rate: d = 2 requires q > 2");
    }
    return std::log1p(nd) / std::sqrt(nd);
  }
  if (dim > 2) {
    const double bound = static_cast<double>(dim) / (dim - 1.0);
    if (!(q > bound)) {
      throw std::invalid_argument("epsilon_rate: d > 2 requires q > d/(d-1)");
    }
    return std::pow(nd, -1.0 / dim);
  }
  throw std::invalid_argument("epsilon_rate: dimension must be >= 1");
}

MetricReport make_report(const Ensemble& ens, const std::vector<double>& orders) {
  MetricReport r;
  r.step_index = ens.step_index;
  r.time = ens.time;
  r.mean_vector = ens.states.colwise().mean().transpose();
  r.energy = ens.states.squaredNorm() / static_cast<double>(ens.size());
  for (double q : orders) {
    r.moments[q] = empirical_moment(ens.states, q);
  }
  return r;
}

}  // namespace kinmc
