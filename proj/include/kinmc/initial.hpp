#pragma once

#include <functional>

#include <Eigen/Dense>

#include "kinmc/model.hpp"

namespace kinmc {

enum class InitialKind { PointMass, UniformBox, Gaussian, TwoPointMixture, Custom };

// Initial law f_0. Bounded-support kinds (point mass, box, mixture) must fit
// inside the model domain; the Gaussian kind is admissible only on unbounded
// domains. Custom samplers are checked sample-by-sample.
struct InitialCondition {
  InitialKind kind = InitialKind::PointMass;

  Eigen::VectorXd center;               // PointMass
  Eigen::VectorXd lo, hi;               // UniformBox
  Eigen::VectorXd mean, variance;       // Gaussian, diagonal covariance
  Eigen::VectorXd atom_a, atom_b;       // TwoPointMixture
  double weight_a = 0.5;
  std::function<Eigen::VectorXd(Stream&)> custom;

  static InitialCondition point_mass(const Eigen::VectorXd& c);
  static InitialCondition uniform_box(const Eigen::VectorXd& lo,
                                      const Eigen::VectorXd& hi);
  static InitialCondition gaussian(const Eigen::VectorXd& mean,
                                   const Eigen::VectorXd& variance);
  static InitialCondition two_point(const Eigen::VectorXd& a,
                                    const Eigen::VectorXd& b, double weight_a);
  static InitialCondition custom_sampler(std::function<Eigen::VectorXd(Stream&)> fn);
};

// N i.i.d. draws from the initial law, step_index 0. Per-particle streams are
// keyed (seed, i, StreamKey::kInitPhase), so the result is independent of
// sampling order. Rejects conditions whose support exits the model domain.
Ensemble sample_initial(const ModelSpec& model, const InitialCondition& ic,
                        std::int64_t n, std::uint64_t seed);

}  // namespace kinmc
