#include "kinmc/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kinmc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

[[noreturn]] void fail(const std::string& what) {
  throw std::invalid_argument(what);
}

void check_state(const ModelSpec& model, const Eigen::VectorXd& v,
                 const char* name) {
  if (v.size() != model.dim) {
    fail(std::string("collide: ") + name + " has wrong dimension");
  }
  if (!v.allFinite()) {
    fail(std::string("collide: ") + name + " is not finite");
  }
  if (!model.domain.contains(v)) {
    throw std::domain_error(std::string("collide: ") + name +
                            " lies outside the model domain");
  }
}

void check_theta(const ModelSpec& model, const Eigen::VectorXd& theta) {
  switch (model.id) {
    case ModelId::Kac:
      if (theta.size() != 1 || theta[0] < 0.0 || theta[0] > kTwoPi) {
        fail("collide: Kac angle must lie in [0, 2pi]");
      }
      return;
    case ModelId::Wealth:
      if (theta.size() != 1 || std::abs(theta[0]) > model.gamma) {
        fail("collide: Wealth noise must lie in [-gamma, gamma]");
      }
      return;
    case ModelId::Opinion:
      if (theta.size() != 1 || std::abs(theta[0]) > model.sigma_eta) {
        fail("collide: Opinion noise must lie in [-sigma_eta, sigma_eta]");
      }
      return;
    case ModelId::Morgenstern:
      if (theta.size() != 3 || std::abs(theta.norm() - 1.0) > 1e-9) {
        fail("collide: Morgenstern parameter must be a unit 3-vector");
      }
      return;
    case ModelId::KineticOpt:
      if (theta.size() != model.dim || theta.cwiseAbs().maxCoeff() > 1.0) {
        fail("collide: KineticOpt noise must lie in [-1, 1]^d");
      }
      return;
  }
  fail("collide: unknown model");
}

Domain real_line() { return Domain{DomainKind::RealLine, 1, {}, {}}; }

Domain half_line() { return Domain{DomainKind::HalfLine, 1, {}, {}}; }

Domain interval(double lo, double hi) {
  Domain d{DomainKind::Interval, 1, Eigen::VectorXd(1), Eigen::VectorXd(1)};
  d.lo[0] = lo;
  d.hi[0] = hi;
  return d;
}

Domain real_space(int dim) { return Domain{DomainKind::RealSpace, dim, {}, {}}; }

Domain unit_box(int dim) {
  Domain d{DomainKind::Box, dim, Eigen::VectorXd::Constant(dim, -1.0),
           Eigen::VectorXd::Constant(dim, 1.0)};
  return d;
}

}  // namespace

const char* model_name(ModelId id) {
  switch (id) {
    case ModelId::Kac: return "kac";
    case ModelId::Wealth: return "wealth";
    case ModelId::Opinion: return "opinion";
    case ModelId::Morgenstern: return "morgenstern";
    case ModelId::KineticOpt: return "kinetic_opt";
  }
  return "unknown";
}

bool Domain::contains(const Eigen::VectorXd& v, double tol) const {
  if (v.size() != dim) return false;
  switch (kind) {
    case DomainKind::RealLine:
    case DomainKind::RealSpace:
      return v.allFinite();
    case DomainKind::HalfLine:
      return v.allFinite() && v[0] >= -tol;
    case DomainKind::Interval:
    case DomainKind::Box:
      return v.allFinite() && (v.array() >= lo.array() - tol).all() &&
             (v.array() <= hi.array() + tol).all();
  }
  return false;
}

Eigen::VectorXd Domain::project(const Eigen::VectorXd& v) const {
  switch (kind) {
    case DomainKind::RealLine:
    case DomainKind::RealSpace:
      return v;
    case DomainKind::HalfLine:
      return v.cwiseMax(0.0);
    case DomainKind::Interval:
    case DomainKind::Box:
      return v.cwiseMax(lo).cwiseMin(hi);
  }
  return v;
}

bool Domain::bounded() const {
  return kind == DomainKind::Interval || kind == DomainKind::Box;
}

int ModelSpec::theta_draws() const {
  switch (id) {
    case ModelId::Kac:
    case ModelId::Wealth:
    case ModelId::Opinion:
      return 1;
    case ModelId::Morgenstern:
      return 2;
    case ModelId::KineticOpt:
      return dim;
  }
  return 0;
}

double ModelSpec::theta_sup() const {
  switch (id) {
    case ModelId::Kac: return kTwoPi;
    case ModelId::Wealth: return gamma;
    case ModelId::Opinion: return sigma_eta;
    case ModelId::Morgenstern: return 1.0;
    case ModelId::KineticOpt: return std::sqrt(static_cast<double>(dim));
  }
  return 0.0;
}

ModelSpec ModelSpec::kac() {
  ModelSpec m;
  m.id = ModelId::Kac;
  m.dim = 1;
  m.domain = real_line();
  m.oracle_flags = kOracleMeanDecay | kOracleEnergyConserved | kOracleEquilibrium;
  m.lipschitz_certified = 1.0;
  m.growth_certified = 1.0;
  return m;
}

ModelSpec ModelSpec::wealth(double gamma) {
  if (!(gamma > 0.0 && gamma < 0.5)) {
    fail("wealth: gamma must lie in (0, 1/2)");
  }
  ModelSpec m;
  m.id = ModelId::Wealth;
  m.dim = 1;
  m.domain = half_line();
  m.gamma = gamma;
  m.oracle_flags = kOracleMeanConserved;
  m.lipschitz_certified = 1.0;
  m.growth_certified = 1.0;
  return m;
}

ModelSpec ModelSpec::opinion(double gamma, double sigma_eta) {
  if (!(gamma > 0.0 && gamma < 0.5)) {
    fail("opinion: gamma must lie in (0, 1/2)");
  }
  if (!(sigma_eta >= 0.0 && sigma_eta <= gamma)) {
    fail("opinion: noise half-width must satisfy 0 <= sigma_eta <= gamma");
  }
  return opinion_unchecked(gamma, sigma_eta);
}

ModelSpec ModelSpec::opinion_unchecked(double gamma, double sigma_eta) {
  ModelSpec m;
  m.id = ModelId::Opinion;
  m.dim = 1;
  m.domain = interval(-1.0, 1.0);
  m.gamma = gamma;
  m.sigma_eta = sigma_eta;
  m.lipschitz_certified = 1.0 + gamma + 2.0 * sigma_eta;
  // Additive noise: growth holds in the affine form
  //   |C(v,v*,theta)| <= 1 * (|v| + |v*|) + 1 * |theta|.
  m.growth_certified = 1.0;
  m.growth_affine_offset = 1.0;
  return m;
}

ModelSpec ModelSpec::morgenstern() {
  ModelSpec m;
  m.id = ModelId::Morgenstern;
  m.dim = 3;
  m.domain = real_space(3);
  m.oracle_flags =
      kOracleMomentumConserved | kOracleEnergyConserved | kOracleEquilibrium;
  m.lipschitz_certified = 2.0;
  m.growth_certified = 1.0;
  return m;
}

ModelSpec ModelSpec::kinetic_opt(int dim, double lambda, double sigma,
                                 double beta_weight, ObjectiveId objective,
                                 const Eigen::VectorXd& shift) {
  if (dim < 1) fail("kinetic_opt: dimension must be >= 1");
  if (!(lambda > 0.0)) fail("kinetic_opt: lambda must be > 0");
  if (!(sigma > 0.0)) fail("kinetic_opt: sigma must be > 0");
  if (!(beta_weight > 0.0)) fail("kinetic_opt: beta_weight must be > 0");
  ModelSpec m;
  m.id = ModelId::KineticOpt;
  m.dim = dim;
  m.domain = unit_box(dim);
  m.lambda = lambda;
  m.sigma = sigma;
  m.beta_weight = beta_weight;
  m.objective = objective;
  if (shift.size() == 0) {
    m.objective_shift = Eigen::VectorXd::Constant(dim, 0.25);
  } else {
    if (shift.size() != dim) fail("kinetic_opt: shift has wrong dimension");
    if (!m.domain.contains(shift)) fail("kinetic_opt: shift must lie in the box");
    m.objective_shift = shift;
  }
  return m;
}

double objective_value(const ModelSpec& model, const Eigen::VectorXd& v) {
  if (model.id != ModelId::KineticOpt) {
    fail("objective_value: only defined for the kinetic optimization model");
  }
  switch (model.objective) {
    case ObjectiveId::ShiftedQuadratic:
      return (v - model.objective_shift).squaredNorm();
    case ObjectiveId::Rastrigin: {
      double acc = 10.0 * static_cast<double>(v.size());
      for (Eigen::Index k = 0; k < v.size(); ++k) {
        acc += v[k] * v[k] - 10.0 * std::cos(kTwoPi * v[k]);
      }
      return acc;
    }
  }
  fail("objective_value: unknown objective");
}

Eigen::VectorXd weighted_average(const ModelSpec& model, const Eigen::VectorXd& v,
                                 const Eigen::VectorXd& v_star) {
  const double ev = model.beta_weight * objective_value(model, v);
  const double es = model.beta_weight * objective_value(model, v_star);
  const double m = std::min(ev, es);  // subtract before exponentiating
  const double wv = std::exp(-(ev - m));
  const double ws = std::exp(-(es - m));
  return (wv * v + ws * v_star) / (wv + ws);
}

Eigen::VectorXd sample_theta(const ModelSpec& model, Stream& s) {
  if (model.theta_fixed) {
    check_theta(model, *model.theta_fixed);
    return *model.theta_fixed;
  }
  Eigen::VectorXd theta;
  switch (model.id) {
    case ModelId::Kac:
      theta.resize(1);
      theta[0] = kTwoPi * s.uniform();
      return theta;
    case ModelId::Wealth:
      theta.resize(1);
      theta[0] = model.gamma * (2.0 * s.uniform() - 1.0);
      return theta;
    case ModelId::Opinion:
      theta.resize(1);
      theta[0] = model.sigma_eta * (2.0 * s.uniform() - 1.0);
      return theta;
    case ModelId::Morgenstern:
      return sample_unit_sphere(s);
    case ModelId::KineticOpt:
      theta.resize(model.dim);
      for (int k = 0; k < model.dim; ++k) {
        theta[k] = 2.0 * s.uniform() - 1.0;
      }
      return theta;
  }
  fail("sample_theta: unknown model");
}

Eigen::VectorXd collide(const ModelSpec& model, const Eigen::VectorXd& v,
                        const Eigen::VectorXd& v_star, const Eigen::VectorXd& theta,
                        CollisionDiagnostics* diag) {
  check_state(model, v, "v");
  check_state(model, v_star, "v_star");
  check_theta(model, theta);

  switch (model.id) {
    case ModelId::Kac: {
      Eigen::VectorXd out(1);
      out[0] = v[0] * std::cos(theta[0]) - v_star[0] * std::sin(theta[0]);
      return out;
    }
    case ModelId::Wealth: {
      Eigen::VectorXd out(1);
      // (1-gamma) v + (gamma+eta) v*: both coefficients nonnegative, so the
      // half-line is preserved without clamping.
      out[0] = v[0] - model.gamma * (v[0] - v_star[0]) + theta[0] * v_star[0];
      return out;
    }
    case ModelId::Opinion: {
      Eigen::VectorXd out(1);
      out[0] = v[0] - model.gamma * (v[0] - v_star[0]) +
               (1.0 - v[0] * v[0]) * theta[0];
      if (out[0] < -1.0 || out[0] > 1.0) {
        if (diag == nullptr) {
          throw std::domain_error(
              "collide: Opinion update escaped [-1,1] and no diagnostics sink "
              "was provided");
        }
        ++diag->clamp_events;
        out[0] = std::clamp(out[0], -1.0, 1.0);
      }
      return out;
    }
    case ModelId::Morgenstern:
      return v + theta * theta.dot(v_star - v);
    case ModelId::KineticOpt: {
      const Eigen::VectorXd vb = weighted_average(model, v, v_star);
      const Eigen::VectorXd drift = vb - v;
      const Eigen::VectorXd raw =
          v + model.lambda * drift +
          model.sigma * drift.cwiseProduct(theta);
      return model.domain.project(raw);
    }
  }
  fail("collide: unknown model");
}

}  // namespace kinmc
