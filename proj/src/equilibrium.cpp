#include "kinmc/equilibrium.hpp"

#include <cmath>
#include <stdexcept>

namespace kinmc {

int EquilibriumSpec::draws() const {
  switch (kind) {
    case EquilibriumKind::GaussianMatchingEnergy:
      return 2;
    case EquilibriumKind::MaxwellianMatchingMomentumEnergy:
      return 2 * dim;
    case EquilibriumKind::Unavailable:
      return 0;
  }
  return 0;
}

EquilibriumSpec EquilibriumSpec::gaussian_energy(double variance) {
  if (!(variance >= 0.0)) {
    throw std::invalid_argument("equilibrium: variance must be >= 0");
  }
  EquilibriumSpec eq;
  eq.kind = EquilibriumKind::GaussianMatchingEnergy;
  eq.dim = 1;
  eq.mean = Eigen::VectorXd::Zero(1);
  eq.variance = variance;
  return eq;
}

EquilibriumSpec EquilibriumSpec::maxwellian(const Eigen::VectorXd& mean,
                                            double variance_per_component) {
  if (!(variance_per_component >= 0.0)) {
    throw std::invalid_argument("equilibrium: variance must be >= 0");
  }
  EquilibriumSpec eq;
  eq.kind = EquilibriumKind::MaxwellianMatchingMomentumEnergy;
  eq.dim = static_cast<int>(mean.size());
  eq.mean = mean;
  eq.variance = variance_per_component;
  return eq;
}

EquilibriumSpec EquilibriumSpec::unavailable() { return EquilibriumSpec{}; }

EquilibriumSpec EquilibriumSpec::from_ensemble(const ModelSpec& model,
                                               const Ensemble& ens) {
  if (!model.has(kOracleEquilibrium)) {
    return unavailable();
  }
  switch (model.id) {
    case ModelId::Kac: {
      // Energy is conserved in expectation, so the steady Gaussian carries
      // the initial raw second moment as its variance.
      const double m2 = ens.states.col(0).squaredNorm() /
                        static_cast<double>(ens.size());
      return gaussian_energy(m2);
    }
    case ModelId::Morgenstern: {
      const Eigen::VectorXd mean =
          ens.states.colwise().mean().transpose();
      const double centered_energy =
          (ens.states.rowwise() - mean.transpose()).squaredNorm() /
          static_cast<double>(ens.size());
      return maxwellian(mean, centered_energy / 3.0);
    }
    default:
      return unavailable();
  }
}

Eigen::VectorXd sample_equilibrium(const EquilibriumSpec& eq, Stream& s) {
  switch (eq.kind) {
    case EquilibriumKind::GaussianMatchingEnergy: {
      Eigen::VectorXd v(1);
      v[0] = std::sqrt(eq.variance) * s.normal();
      return v;
    }
    case EquilibriumKind::MaxwellianMatchingMomentumEnergy: {
      Eigen::VectorXd v(eq.dim);
      const double sd = std::sqrt(eq.variance);
      for (int k = 0; k < eq.dim; ++k) {
        v[k] = eq.mean[k] + sd * s.normal();
      }
      return v;
    }
    case EquilibriumKind::Unavailable:
      break;
  }
  throw std::runtime_error("no equilibrium sampler for this model");
}

}  // namespace kinmc
