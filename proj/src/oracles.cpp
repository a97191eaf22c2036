#include "kinmc/oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace kinmc {

double kac_mean(double t, double m0) { return m0 * std::exp(-t); }

double kac_mean_discrete(std::int64_t n, double dt, double m0) {
  return m0 * std::pow(1.0 - dt, static_cast<double>(n));
}

double kac_energy(double /*t*/, double e0) { return e0; }

double kac_energy_discrete(std::int64_t /*n*/, double /*dt*/, double e0) {
  return e0;
}

double wealth_mean(double /*t*/, double m0) { return m0; }

double wealth_mean_discrete(std::int64_t /*n*/, double /*dt*/, double m0) {
  return m0;
}

MomentumEnergy morgenstern_invariants(double /*t*/, const Eigen::Vector3d& p0,
                                      double e0) {
  return {p0, e0};
}

double moment_envelope(double q, double c, std::int64_t n, double dt, double m0) {
  if (!(q >= 1.0)) {
    throw std::invalid_argument("moment_envelope: q must be >= 1");
  }
  if (!(c >= 0.0)) {
    throw std::invalid_argument("moment_envelope: C must be >= 0");
  }
  return std::exp(c * static_cast<double>(n) * dt) * m0;
}

const char* quantity_name(OracleQuantity q) {
  switch (q) {
    case OracleQuantity::Mean: return "mean";
    case OracleQuantity::Energy: return "energy";
    case OracleQuantity::Momentum: return "momentum";
  }
  return "unknown";
}

double MomentOracle::continuous(double t, double initial) const {
  if (model == ModelId::Kac && quantity == OracleQuantity::Mean) {
    return kac_mean(t, initial);
  }
  return initial;  // every other closed form is conserved
}

double MomentOracle::discrete(std::int64_t n, double dt, double initial) const {
  if (model == ModelId::Kac && quantity == OracleQuantity::Mean) {
    return kac_mean_discrete(n, dt, initial);
  }
  return initial;
}

std::optional<MomentOracle> MomentOracle::lookup(ModelId model, OracleQuantity q) {
  switch (model) {
    case ModelId::Kac:
      if (q == OracleQuantity::Mean || q == OracleQuantity::Energy) {
        return MomentOracle{model, q};
      }
      return std::nullopt;
    case ModelId::Wealth:
      if (q == OracleQuantity::Mean) {
        return MomentOracle{model, q};
      }
      return std::nullopt;
    case ModelId::Morgenstern:
      if (q == OracleQuantity::Momentum || q == OracleQuantity::Energy) {
        return MomentOracle{model, q};
      }
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

}  // namespace kinmc
