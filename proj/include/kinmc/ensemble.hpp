#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace kinmc {

enum class ModelId { Kac, Wealth, Opinion, Morgenstern, KineticOpt };

const char* model_name(ModelId id);

// Particle state at one discrete step: one row per particle. Ensembles are
// immutable snapshots between steps; solvers build a new one per step.
// time is always recomputed as step_index * dt, never accumulated.
struct Ensemble {
  Eigen::MatrixXd states;  // N x d
  std::int64_t step_index = 0;
  double time = 0.0;
  ModelId model_id = ModelId::Kac;

  std::int64_t size() const { return states.rows(); }
  int dim() const { return static_cast<int>(states.cols()); }
};

}  // namespace kinmc
