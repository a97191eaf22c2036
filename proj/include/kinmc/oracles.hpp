// Closed-form moment references for models whose moment hierarchy closes.
//
// Each quantity carries both the continuous-time value and the value of the
// forward-Euler chain on the same functional, so time-step convergence can
// be measured without Monte Carlo noise. The Kac mean is the only
// nontrivially evolving pair; the rest are conserved.
#pragma once

#include <cstdint>
#include <optional>

#include <Eigen/Dense>

#include "kinmc/ensemble.hpp"

namespace kinmc {

// Kac mean: d/dt m = -m, Euler chain m_{n+1} = (1 - dt) m_n.
double kac_mean(double t, double m0);
double kac_mean_discrete(std::int64_t n, double dt, double m0);

// Kac energy: the collision pair conserves v^2 + v*^2 identically, so both
// chains are constant.
double kac_energy(double t, double e0);
double kac_energy_discrete(std::int64_t n, double dt, double e0);

// Wealth mean: zero-mean noise makes the collision average conserve v + v*.
double wealth_mean(double t, double m0);
double wealth_mean_discrete(std::int64_t n, double dt, double m0);

// Morgenstern: pairwise momentum and energy conservation.
struct MomentumEnergy {
  Eigen::Vector3d momentum;
  double energy;
};
MomentumEnergy morgenstern_invariants(double t, const Eigen::Vector3d& p0,
                                      double e0);

// Exponential moment envelope: e^{C n dt} M0 with caller-supplied C.
// Certified C values: Kac q = 2 has C = 0; other models ship fitted,
// non-certified exponents only.
double moment_envelope(double q, double c, std::int64_t n, double dt, double m0);

enum class OracleQuantity { Mean, Energy, Momentum };

const char* quantity_name(OracleQuantity q);

// Scalar closed-form oracle selected by (model, quantity). Momentum applies
// per component. lookup() is empty where no closed form exists.
struct MomentOracle {
  ModelId model = ModelId::Kac;
  OracleQuantity quantity = OracleQuantity::Mean;

  double continuous(double t, double initial) const;
  double discrete(std::int64_t n, double dt, double initial) const;

  static std::optional<MomentOracle> lookup(ModelId model, OracleQuantity q);
};

}  // namespace kinmc
