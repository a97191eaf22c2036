#include "kinmc/config.hpp"

#include <fstream>
#include <set>

namespace kinmc {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) { throw ConfigError(what); }

void check_keys(const json& obj, const std::string& section,
                const std::set<std::string>& allowed) {
  if (!obj.is_object()) {
    fail("config: section '" + section + "' must be an object");
  }
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) {
      fail("config: unknown key '" + key + "' in section '" + section + "'");
    }
  }
}

const json& require(const json& obj, const std::string& section,
                    const std::string& key) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    fail("config: section '" + section + "' is missing key '" + key + "'");
  }
  return *it;
}

double as_double(const json& v, const std::string& where) {
  if (!v.is_number()) fail("config: '" + where + "' must be a number");
  return v.get<double>();
}

std::int64_t as_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) fail("config: '" + where + "' must be an integer");
  return v.get<std::int64_t>();
}

std::uint64_t as_u64(const json& v, const std::string& where) {
  if (!v.is_number_unsigned() && !v.is_number_integer()) {
    fail("config: '" + where + "' must be a nonnegative integer");
  }
  if (v.is_number_integer() && v.get<std::int64_t>() < 0) {
    fail("config: '" + where + "' must be a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

// Vectors accept a bare number (dimension 1) or an array of numbers.
Eigen::VectorXd as_vector(const json& v, const std::string& where) {
  if (v.is_number()) {
    Eigen::VectorXd out(1);
    out[0] = v.get<double>();
    return out;
  }
  if (!v.is_array() || v.empty()) {
    fail("config: '" + where + "' must be a number or a nonempty array");
  }
  Eigen::VectorXd out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    out[static_cast<Eigen::Index>(k)] =
        as_double(v[k], where + "[" + std::to_string(k) + "]");
  }
  return out;
}

ModelSpec parse_model(const json& obj) {
  check_keys(obj, "model",
             {"id", "gamma", "sigma_eta", "dimension", "lambda", "sigma",
              "beta_weight", "objective", "shift"});
  const std::string id = require(obj, "model", "id").get<std::string>();

  auto forbid = [&](std::initializer_list<const char*> keys) {
    for (const char* k : keys) {
      if (obj.contains(k)) {
        fail(std::string("config: key '") + k + "' does not apply to model '" +
             id + "'");
      }
    }
  };

  if (id == "kac") {
    forbid({"gamma", "sigma_eta", "dimension", "lambda", "sigma", "beta_weight",
            "objective", "shift"});
    return ModelSpec::kac();
  }
  if (id == "wealth") {
    forbid({"sigma_eta", "dimension", "lambda", "sigma", "beta_weight",
            "objective", "shift"});
    return ModelSpec::wealth(as_double(require(obj, "model", "gamma"), "gamma"));
  }
  if (id == "opinion") {
    forbid({"dimension", "lambda", "sigma", "beta_weight", "objective", "shift"});
    return ModelSpec::opinion(
        as_double(require(obj, "model", "gamma"), "gamma"),
        as_double(require(obj, "model", "sigma_eta"), "sigma_eta"));
  }
  if (id == "morgenstern") {
    forbid({"gamma", "sigma_eta", "dimension", "lambda", "sigma", "beta_weight",
            "objective", "shift"});
    return ModelSpec::morgenstern();
  }
  if (id == "kinetic_opt") {
    forbid({"gamma", "sigma_eta"});
    const int dim =
        static_cast<int>(as_int(require(obj, "model", "dimension"), "dimension"));
    ObjectiveId objective = ObjectiveId::ShiftedQuadratic;
    if (obj.contains("objective")) {
      const std::string name = obj["objective"].get<std::string>();
      if (name == "shifted_quadratic") {
        objective = ObjectiveId::ShiftedQuadratic;
      } else if (name == "rastrigin") {
        objective = ObjectiveId::Rastrigin;
      } else {
        fail("config: unknown objective '" + name + "'");
      }
    }
    Eigen::VectorXd shift;
    if (obj.contains("shift")) shift = as_vector(obj["shift"], "shift");
    return ModelSpec::kinetic_opt(
        dim, as_double(require(obj, "model", "lambda"), "lambda"),
        as_double(require(obj, "model", "sigma"), "sigma"),
        as_double(require(obj, "model", "beta_weight"), "beta_weight"),
        objective, shift);
  }
  fail("config: unknown model id '" + id + "'");
}

InitialCondition parse_initial(const json& obj) {
  check_keys(obj, "initial_condition",
             {"kind", "center", "lo", "hi", "mean", "variance", "atom_a",
              "atom_b", "weight_a"});
  const std::string kind =
      require(obj, "initial_condition", "kind").get<std::string>();
  if (kind == "point_mass") {
    return InitialCondition::point_mass(
        as_vector(require(obj, "initial_condition", "center"), "center"));
  }
  if (kind == "uniform_box") {
    return InitialCondition::uniform_box(
        as_vector(require(obj, "initial_condition", "lo"), "lo"),
        as_vector(require(obj, "initial_condition", "hi"), "hi"));
  }
  if (kind == "gaussian") {
    return InitialCondition::gaussian(
        as_vector(require(obj, "initial_condition", "mean"), "mean"),
        as_vector(require(obj, "initial_condition", "variance"), "variance"));
  }
  if (kind == "two_point_mixture") {
    return InitialCondition::two_point(
        as_vector(require(obj, "initial_condition", "atom_a"), "atom_a"),
        as_vector(require(obj, "initial_condition", "atom_b"), "atom_b"),
        as_double(require(obj, "initial_condition", "weight_a"), "weight_a"));
  }
  fail("config: unknown initial condition kind '" + kind + "'");
}

SchemeParams parse_scheme(const json& obj) {
  check_keys(obj, "scheme",
             {"scheme", "dt", "horizon", "n_particles", "epsilon", "seed",
              "record_every"});
  SchemeParams p;
  const std::string s = require(obj, "scheme", "scheme").get<std::string>();
  if (s == "nanbu") {
    p.scheme = Scheme::Nanbu;
  } else if (s == "trmc") {
    p.scheme = Scheme::TimeRelaxed;
  } else {
    fail("config: unknown scheme '" + s + "'");
  }
  p.dt = as_double(require(obj, "scheme", "dt"), "dt");
  p.horizon = as_double(require(obj, "scheme", "horizon"), "horizon");
  p.n_particles = as_int(require(obj, "scheme", "n_particles"), "n_particles");
  if (obj.contains("epsilon")) {
    p.epsilon = as_double(obj["epsilon"], "epsilon");
  }
  if (obj.contains("seed")) {
    p.seed = as_u64(obj["seed"], "seed");
  }
  if (obj.contains("record_every")) {
    p.record_every = as_int(obj["record_every"], "record_every");
  }
  return p;
}

SweepPlan parse_sweep(const json& obj, const Experiment& exp) {
  check_keys(obj, "sweep",
             {"axis", "values", "replications", "reference_factor",
              "sliced_directions", "oracle", "mc_variant", "mc_particles",
              "record_every"});
  SweepPlan plan;
  const std::string axis = require(obj, "sweep", "axis").get<std::string>();
  if (axis == "particle_count") {
    plan.axis = SweepAxis::ParticleCount;
  } else if (axis == "time_step") {
    plan.axis = SweepAxis::TimeStep;
  } else {
    fail("config: unknown sweep axis '" + axis + "'");
  }
  const json& values = require(obj, "sweep", "values");
  if (!values.is_array()) fail("config: 'values' must be an array");
  for (std::size_t k = 0; k < values.size(); ++k) {
    plan.values.push_back(
        as_double(values[k], "values[" + std::to_string(k) + "]"));
  }
  if (obj.contains("replications")) {
    plan.replications =
        static_cast<int>(as_int(obj["replications"], "replications"));
  }
  if (obj.contains("reference_factor")) {
    plan.reference_factor =
        static_cast<int>(as_int(obj["reference_factor"], "reference_factor"));
  }
  if (obj.contains("sliced_directions")) {
    plan.sliced_directions =
        static_cast<int>(as_int(obj["sliced_directions"], "sliced_directions"));
  }
  if (obj.contains("oracle")) {
    const std::string q = obj["oracle"].get<std::string>();
    if (q == "mean") {
      plan.oracle_quantity = OracleQuantity::Mean;
    } else if (q == "energy") {
      plan.oracle_quantity = OracleQuantity::Energy;
    } else if (q == "momentum") {
      plan.oracle_quantity = OracleQuantity::Momentum;
    } else {
      fail("config: unknown oracle quantity '" + q + "'");
    }
  }
  if (obj.contains("mc_variant")) {
    if (!obj["mc_variant"].is_boolean()) {
      fail("config: 'mc_variant' must be a boolean");
    }
    plan.mc_variant = obj["mc_variant"].get<bool>();
  }
  if (obj.contains("mc_particles")) {
    plan.mc_particles = as_int(obj["mc_particles"], "mc_particles");
  }
  if (obj.contains("record_every")) {
    plan.record_every = as_int(obj["record_every"], "record_every");
  }
  plan.base = exp.scheme;
  plan.model = exp.model;
  plan.initial = exp.initial;
  plan.master_seed = exp.scheme.seed;
  return plan;
}

EquilibriumSpec parse_equilibrium(const json& obj) {
  check_keys(obj, "equilibrium", {"kind", "variance", "mean"});
  const std::string kind = require(obj, "equilibrium", "kind").get<std::string>();
  if (kind == "gaussian_energy") {
    return EquilibriumSpec::gaussian_energy(
        as_double(require(obj, "equilibrium", "variance"), "variance"));
  }
  if (kind == "maxwellian") {
    return EquilibriumSpec::maxwellian(
        as_vector(require(obj, "equilibrium", "mean"), "mean"),
        as_double(require(obj, "equilibrium", "variance"), "variance"));
  }
  fail("config: unknown equilibrium kind '" + kind + "'");
}

void parse_output(const json& obj, Experiment& exp) {
  check_keys(obj, "output", {"formats", "prefix"});
  if (obj.contains("formats")) {
    const json& fmts = obj["formats"];
    if (!fmts.is_array() || fmts.empty()) {
      fail("config: 'formats' must be a nonempty array");
    }
    exp.formats.clear();
    for (const auto& f : fmts) {
      const std::string name = f.get<std::string>();
      if (name != "csv" && name != "json" && name != "svg") {
        fail("config: unknown output format '" + name + "'");
      }
      exp.formats.push_back(name);
    }
  }
  if (obj.contains("prefix")) {
    exp.prefix = obj["prefix"].get<std::string>();
  }
}

}  // namespace

Experiment parse_config(const json& doc) {
  check_keys(doc, "(top level)",
             {"model", "initial_condition", "scheme", "sweep", "output",
              "equilibrium"});
  Experiment exp;
  try {
    exp.model = parse_model(require(doc, "(top level)", "model"));
    exp.initial = parse_initial(require(doc, "(top level)", "initial_condition"));
    exp.scheme = parse_scheme(require(doc, "(top level)", "scheme"));
    if (doc.contains("equilibrium")) {
      exp.equilibrium = parse_equilibrium(doc["equilibrium"]);
    }
    if (doc.contains("sweep")) {
      exp.sweep = parse_sweep(doc["sweep"], exp);
    }
    if (doc.contains("output")) {
      parse_output(doc["output"], exp);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    // factory admissibility violations etc. are configuration errors here
    throw ConfigError(std::string("config: ") + e.what());
  }
  return exp;
}

Experiment load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("config: cannot open " + path);
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const std::exception& e) {
    throw ConfigError("config: " + path + ": " + e.what());
  }
  return parse_config(doc);
}

}  // namespace kinmc
