// Collision model catalog: binary collision maps, parameter laws, domains.
//
// Five models share the update shape v' = C(v, v*, theta) with theta drawn
// from a boundedly supported law:
//   Kac          v' = v cos(theta) - v* sin(theta),      theta ~ U[0, 2pi]
//   Wealth       v' = v - gamma (v - v*) + eta v*,       eta ~ U[-gamma, gamma]
//   Opinion      v' = v - gamma (v - v*) + (1 - v^2) eta, eta ~ U[-s, s]
//   Morgenstern  v' = v + e <e, v* - v>,                  e ~ U(S^2)
//   KineticOpt   v' = clamp[ v + lambda (vb - v) + sigma (vb - v) .* theta ],
//                theta ~ U[-1, 1]^d, vb the objective-weighted average.
#pragma once

#include <optional>
#include <string>

#include <Eigen/Dense>

#include "kinmc/ensemble.hpp"
#include "kinmc/stream.hpp"

namespace kinmc {

enum class DomainKind { RealLine, HalfLine, Interval, RealSpace, Box };

struct Domain {
  DomainKind kind = DomainKind::RealLine;
  int dim = 1;
  Eigen::VectorXd lo;  // Interval / Box bounds
  Eigen::VectorXd hi;

  bool contains(const Eigen::VectorXd& v, double tol = 0.0) const;
  // Componentwise clamp; the l2 projection for boxes.
  Eigen::VectorXd project(const Eigen::VectorXd& v) const;
  bool bounded() const;
};

enum class ObjectiveId { ShiftedQuadratic, Rastrigin };

// Which closed-form references a model supports. Tracked quantities feed the
// per-step drift columns; the equilibrium flag gates the relaxed scheme.
enum OracleFlag : unsigned {
  kOracleMeanDecay = 1u << 0,
  kOracleMeanConserved = 1u << 1,
  kOracleMomentumConserved = 1u << 2,
  kOracleEnergyConserved = 1u << 3,
  kOracleEquilibrium = 1u << 4,
};

struct ModelSpec {
  ModelId id = ModelId::Kac;
  int dim = 1;
  Domain domain;

  double gamma = 0.0;        // Wealth / Opinion interaction strength
  double sigma_eta = 0.0;    // Opinion noise half-width
  double lambda = 0.0;       // KineticOpt drift weight
  double sigma = 0.0;        // KineticOpt noise weight
  double beta_weight = 0.0;  // KineticOpt objective weight
  ObjectiveId objective = ObjectiveId::ShiftedQuadratic;
  Eigen::VectorXd objective_shift;

  unsigned oracle_flags = 0;

  // Certified Assumption constants when known in closed form (see
  // docs/assumption_constants.md). Empty means "fitted only".
  std::optional<double> lipschitz_certified;
  std::optional<double> growth_certified;
  // Growth for Opinion holds in the affine form |C| <= a (|v|+|v*|) + b |theta|.
  std::optional<double> growth_affine_offset;

  // Degenerate parameter law: when set, sample_theta returns this value
  // (still a member of the law's support). Exists for fixed-point tests.
  std::optional<Eigen::VectorXd> theta_fixed;

  bool has(OracleFlag f) const { return (oracle_flags & f) != 0; }
  // Uniform draws consumed by one sample_theta call.
  int theta_draws() const;
  // M_inf of the parameter law: sup |theta| over its support.
  double theta_sup() const;

  static ModelSpec kac();
  static ModelSpec wealth(double gamma);
  static ModelSpec opinion(double gamma, double sigma_eta);
  // Skips admissibility checks; exists for fault-injection in the
  // validation suites.
  static ModelSpec opinion_unchecked(double gamma, double sigma_eta);
  static ModelSpec kinetic_opt(int dim, double lambda, double sigma,
                               double beta_weight,
                               ObjectiveId objective = ObjectiveId::ShiftedQuadratic,
                               const Eigen::VectorXd& shift = Eigen::VectorXd());
  static ModelSpec morgenstern();
};

struct CollisionDiagnostics {
  long long clamp_events = 0;
};

// Objective evaluated by the KineticOpt model.
double objective_value(const ModelSpec& model, const Eigen::VectorXd& v);

// Objective-weighted average of v and v_star, computed with the largest
// exponent subtracted before exponentiation. Lies on the segment [v, v_star].
Eigen::VectorXd weighted_average(const ModelSpec& model, const Eigen::VectorXd& v,
                                 const Eigen::VectorXd& v_star);

// One theta draw from the model's parameter law. Scalar laws return a
// 1-vector. Consumes exactly theta_draws() slots.
Eigen::VectorXd sample_theta(const ModelSpec& model, Stream& s);

// Post-collision state of the first argument. Validates that the inputs lie
// in the domain and theta in the law's support. Opinion clamps any numerical
// escape and counts it; without a diagnostics sink such an escape throws
// rather than passing silently.
Eigen::VectorXd collide(const ModelSpec& model, const Eigen::VectorXd& v,
                        const Eigen::VectorXd& v_star, const Eigen::VectorXd& theta,
                        CollisionDiagnostics* diag = nullptr);

}  // namespace kinmc
