#pragma once

#include <Eigen/Dense>

#include "kinmc/model.hpp"

namespace kinmc {

enum class EquilibriumKind {
  GaussianMatchingEnergy,            // centered, variance = initial raw M2
  MaxwellianMatchingMomentumEnergy,  // mean = momentum, var = centered E / 3
  Unavailable,
};

// Steady state the relaxed scheme resamples from. Parameters are estimated
// from the initial ensemble's empirical moments unless injected explicitly.
struct EquilibriumSpec {
  EquilibriumKind kind = EquilibriumKind::Unavailable;
  int dim = 1;
  Eigen::VectorXd mean;
  double variance = 0.0;  // per component

  // Draw slots one sample consumes (normals cost two slots each).
  int draws() const;

  static EquilibriumSpec gaussian_energy(double variance);
  static EquilibriumSpec maxwellian(const Eigen::VectorXd& mean,
                                    double variance_per_component);
  static EquilibriumSpec unavailable();
  // Estimate parameters from empirical moments of (typically initial) data.
  // Models without a steady-state sampler yield Unavailable.
  static EquilibriumSpec from_ensemble(const ModelSpec& model, const Ensemble& ens);
};

// One draw from the steady state. Throws if the kind is Unavailable.
Eigen::VectorXd sample_equilibrium(const EquilibriumSpec& eq, Stream& s);

}  // namespace kinmc
