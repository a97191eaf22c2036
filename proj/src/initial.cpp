#include "kinmc/initial.hpp"

#include <cmath>
#include <stdexcept>

namespace kinmc {

namespace {

[[noreturn]] void fail(const std::string& what) {
  throw std::invalid_argument("sample_initial: " + what);
}

void check_support(const ModelSpec& model, const InitialCondition& ic) {
  const auto& dom = model.domain;
  switch (ic.kind) {
    case InitialKind::PointMass:
      if (!dom.contains(ic.center)) fail("point mass lies outside the domain");
      return;
    case InitialKind::UniformBox: {
      if (ic.lo.size() != model.dim || ic.hi.size() != model.dim) {
        fail("box bounds have wrong dimension");
      }
      if ((ic.lo.array() > ic.hi.array()).any()) fail("box has lo > hi");
      if (!dom.contains(ic.lo) || !dom.contains(ic.hi)) {
        fail("box support exits the domain");
      }
      return;
    }
    case InitialKind::Gaussian:
      if (ic.mean.size() != model.dim || ic.variance.size() != model.dim) {
        fail("gaussian parameters have wrong dimension");
      }
      if ((ic.variance.array() < 0.0).any()) fail("negative variance");
      if (dom.kind != DomainKind::RealLine && dom.kind != DomainKind::RealSpace) {
        fail("gaussian support exits the bounded domain");
      }
      return;
    case InitialKind::TwoPointMixture:
      if (!dom.contains(ic.atom_a) || !dom.contains(ic.atom_b)) {
        fail("mixture atom lies outside the domain");
      }
      if (!(ic.weight_a >= 0.0 && ic.weight_a <= 1.0)) {
        fail("mixture weight must lie in [0,1]");
      }
      return;
    case InitialKind::Custom:
      if (!ic.custom) fail("custom sampler is empty");
      return;
  }
  fail("unknown initial condition kind");
}

}  // namespace

InitialCondition InitialCondition::point_mass(const Eigen::VectorXd& c) {
  InitialCondition ic;
  ic.kind = InitialKind::PointMass;
  ic.center = c;
  return ic;
}

InitialCondition InitialCondition::uniform_box(const Eigen::VectorXd& lo,
                                               const Eigen::VectorXd& hi) {
  InitialCondition ic;
  ic.kind = InitialKind::UniformBox;
  ic.lo = lo;
  ic.hi = hi;
  return ic;
}

InitialCondition InitialCondition::gaussian(const Eigen::VectorXd& mean,
                                            const Eigen::VectorXd& variance) {
  InitialCondition ic;
  ic.kind = InitialKind::Gaussian;
  ic.mean = mean;
  ic.variance = variance;
  return ic;
}

InitialCondition InitialCondition::two_point(const Eigen::VectorXd& a,
                                             const Eigen::VectorXd& b,
                                             double weight_a) {
  InitialCondition ic;
  ic.kind = InitialKind::TwoPointMixture;
  ic.atom_a = a;
  ic.atom_b = b;
  ic.weight_a = weight_a;
  return ic;
}

InitialCondition InitialCondition::custom_sampler(
    std::function<Eigen::VectorXd(Stream&)> fn) {
  InitialCondition ic;
  ic.kind = InitialKind::Custom;
  ic.custom = std::move(fn);
  return ic;
}

Ensemble sample_initial(const ModelSpec& model, const InitialCondition& ic,
                        std::int64_t n, std::uint64_t seed) {
  if (n < 1) fail("need at least one particle");
  check_support(model, ic);

  Ensemble ens;
  ens.states.resize(n, model.dim);
  ens.step_index = 0;
  ens.time = 0.0;
  ens.model_id = model.id;

  for (std::int64_t i = 0; i < n; ++i) {
    Stream s = derive_stream(seed, static_cast<std::uint64_t>(i) + 1,
                             StreamKey::kInitPhase);
    Eigen::VectorXd v(model.dim);
    switch (ic.kind) {
      case InitialKind::PointMass:
        v = ic.center;
        break;
      case InitialKind::UniformBox:
        for (int k = 0; k < model.dim; ++k) {
          v[k] = ic.lo[k] + (ic.hi[k] - ic.lo[k]) * s.uniform();
        }
        break;
      case InitialKind::Gaussian:
        for (int k = 0; k < model.dim; ++k) {
          v[k] = ic.mean[k] + std::sqrt(ic.variance[k]) * s.normal();
        }
        break;
      case InitialKind::TwoPointMixture:
        v = (s.uniform() < ic.weight_a) ? ic.atom_a : ic.atom_b;
        break;
      case InitialKind::Custom:
        v = ic.custom(s);
        if (!model.domain.contains(v)) {
          throw std::domain_error(
              "sample_initial: custom sampler produced a state outside the "
              "domain");
        }
        break;
    }
    ens.states.row(i) = v.transpose();
  }
  return ens;
}

}  // namespace kinmc
