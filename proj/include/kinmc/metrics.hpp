// Empirical Wasserstein-1 distances and moment functionals.
//
// Estimator selection: exact order statistics in one dimension, exact
// minimum-cost matching up to a size cap in general dimension, and the
// sliced (projection-averaged) lower-bound estimator beyond the cap. Every
// reported distance carries its estimator tag.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "kinmc/ensemble.hpp"
#include "kinmc/stream.hpp"

namespace kinmc {

enum class EstimatorTag { Exact1D, ExactMatching, Sliced };

std::string estimator_label(EstimatorTag tag, int directions = 0);

// Exact W1 between two equal-size empirical measures on the line:
// mean absolute difference of sorted samples.
double w1_exact_1d(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// Exact W1 between empirical measures of arbitrary sizes on the line
// (L1 distance between the distribution functions). Coincides with
// w1_exact_1d when the sizes match.
double w1_1d(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// Exact W1 via minimum-cost perfect matching under Euclidean ground cost.
// Cubic in N; refuses sizes above n_max.
double w1_exact_matching(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                         std::int64_t n_max = 512);

// Sliced estimator: average over `directions` uniform unit directions of the
// exact 1-D distance between the projected samples. A lower bound on W1.
// Directions come from the provided stream; the reduction is a fixed-order
// pairwise tree, so the value is independent of evaluation schedule.
double w1_sliced(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                 int directions, Stream& s);

// M_q^{1/q}: ((1/N) sum |x_i|^q)^(1/q) with Euclidean row norms.
double empirical_moment(const Eigen::MatrixXd& x, double q);

// The i.i.d. empirical-measure W1 rate:
//   N^{-1/2}            d = 1, q > 2
//   N^{-1/2} log(1+N)   d = 2, q > 2
//   N^{-1/d}            d > 2, q > d/(d-1)
// Rejects (d, q) outside these cases.
double epsilon_rate(std::int64_t n, int dim, double q);

// Per-snapshot observables.
struct MetricReport {
  std::int64_t step_index = 0;
  double time = 0.0;
  std::map<double, double> moments;  // q -> M_q^{1/q}
  Eigen::VectorXd mean_vector;
  double energy = 0.0;  // raw second moment
  std::map<std::string, double> conserved_drift;
  std::optional<double> w1_to_reference;
  EstimatorTag w1_tag = EstimatorTag::Exact1D;
  int sliced_directions = 0;
};

MetricReport make_report(const Ensemble& ens, const std::vector<double>& orders);

}  // namespace kinmc
