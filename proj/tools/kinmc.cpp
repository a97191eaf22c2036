// kinmc: particle Monte Carlo solvers for binary-collision kinetic models.
//
// Subcommands: simulate, converge-n, converge-dt, validate.
// Exit codes: 0 success, 1 validation failure, 2 configuration error,
// 3 runtime error.
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kinmc/config.hpp"
#include "kinmc/emit.hpp"
#include "kinmc/parallel.hpp"
#include "kinmc/validate.hpp"

namespace {

using namespace kinmc;

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  int threads = 0;  // 0: hardware default
  std::vector<std::string> formats;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required) {
  auto* opt = cmd->add_option("--config", args.config_path, "JSON config path");
  if (config_required) opt->required();
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--seed", args.seed, "master seed override");
  cmd->add_option("--threads", args.threads,
                  "worker threads (default: hardware)");
  cmd->add_option("--format", args.formats,
                  "output format csv|json|svg (repeatable)")
      ->check(CLI::IsMember({"csv", "json", "svg"}));
}

int resolve_threads(const CommonArgs& args) {
  if (args.threads < 0) {
    throw ConfigError("config: --threads must be positive");
  }
  if (args.threads > 0) return args.threads;
  const char* env = std::getenv("KINMC_THREADS");
  if (env != nullptr) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return default_threads();
}

std::vector<std::string> resolve_formats(const CommonArgs& args,
                                         const Experiment& exp) {
  return args.formats.empty() ? exp.formats : args.formats;
}

std::string out_path(const CommonArgs& args, const std::string& name) {
  std::filesystem::create_directories(args.out_dir);
  return (std::filesystem::path(args.out_dir) / name).string();
}

int run_simulate(const CommonArgs& args) {
  Experiment exp = load_config(args.config_path);
  if (args.seed) exp.scheme.seed = *args.seed;

  RunOptions options;
  options.equilibrium = exp.equilibrium;
  const Trajectory traj = run(exp.scheme, exp.model, exp.initial, options);

  for (const auto& format : resolve_formats(args, exp)) {
    if (format == "csv") {
      write_file(out_path(args, exp.prefix + "_trajectory.csv"),
                 trajectory_csv(traj));
    } else if (format == "json") {
      write_file(out_path(args, exp.prefix + "_trajectory.json"),
                 trajectory_json(traj).dump(2) + "\n");
    } else {
      throw ConfigError(
          "config: svg output applies to the sweep subcommands only");
    }
  }
  std::cout << "simulate: " << traj.snapshots.size() << " snapshots, "
            << traj.totals.collisions << " collisions, "
            << traj.totals.equilibrations << " equilibrations\n";
  return 0;
}

int run_sweep_command(const CommonArgs& args, SweepAxis axis) {
  Experiment exp = load_config(args.config_path);
  if (!exp.sweep) {
    throw ConfigError("config: this subcommand needs a 'sweep' section");
  }
  SweepPlan plan = *exp.sweep;
  if (plan.axis != axis) {
    throw ConfigError("config: sweep axis does not match the subcommand");
  }
  if (args.seed) plan.master_seed = *args.seed;
  plan.threads = resolve_threads(args);

  const char* stem =
      axis == SweepAxis::ParticleCount ? "_converge_n" : "_converge_dt";
  const SweepResult result = axis == SweepAxis::ParticleCount
                                 ? converge_in_n(plan)
                                 : converge_in_dt(plan);

  for (const auto& format : resolve_formats(args, exp)) {
    if (format == "csv") {
      write_file(out_path(args, exp.prefix + stem + ".csv"), to_csv(result));
    } else if (format == "json") {
      write_file(out_path(args, exp.prefix + stem + ".json"),
                 to_json(plan, result).dump(2) + "\n");
    } else {
      write_file(out_path(args, exp.prefix + stem + ".svg"),
                 to_svg(plan, result));
    }
  }

  if (result.fit) {
    std::cout << "fit: slope " << result.fit->slope << ", intercept "
              << result.fit->intercept << ", R^2 " << result.fit->r_squared
              << "\n";
  } else {
    std::cout << "diagnostic: " << result.diagnostic << "\n";
  }
  return 0;
}

std::vector<ModelSpec> models_for(const std::string& selector,
                                  const std::optional<Experiment>& exp) {
  if (selector == "config") {
    if (!exp) {
      throw ConfigError("validate: --model config needs --config");
    }
    return {exp->model};
  }
  if (selector == "kac") return {ModelSpec::kac()};
  if (selector == "wealth") return {ModelSpec::wealth(0.25)};
  if (selector == "opinion") return {ModelSpec::opinion(0.25, 0.2)};
  if (selector == "morgenstern") return {ModelSpec::morgenstern()};
  if (selector == "kinetic_opt") {
    return {ModelSpec::kinetic_opt(2, 0.5, 0.3, 10.0)};
  }
  if (selector == "all") {
    return {ModelSpec::kac(), ModelSpec::wealth(0.25),
            ModelSpec::opinion(0.25, 0.2), ModelSpec::morgenstern(),
            ModelSpec::kinetic_opt(2, 0.5, 0.3, 10.0)};
  }
  throw ConfigError("validate: unknown model selector '" + selector + "'");
}

int run_validate(const CommonArgs& args, bool selector_given,
                 const std::string& selector, const std::string& depth_name,
                 bool emit_json) {
  std::optional<Experiment> exp;
  if (!args.config_path.empty()) {
    exp = load_config(args.config_path);
  }
  const Depth depth = depth_name == "full" ? Depth::Full : Depth::Quick;
  // explicit --model wins; otherwise a config selects its own model
  const std::string effective =
      selector_given ? selector : (exp ? "config" : "all");
  const auto models = models_for(effective, exp);

  const ValidationReport report =
      validate(models, depth, args.seed.value_or(0x5EEDULL));
  std::cout << validation_text(report);
  if (emit_json) {
    write_file(out_path(args, "validation.json"),
               validation_json(report).dump(2) + "\n");
  }
  return report.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"particle Monte Carlo solvers for collisional kinetic models"};
  app.require_subcommand(1);

  CommonArgs sim_args, n_args, dt_args, val_args;
  std::string val_model = "all";
  std::string val_depth = "quick";
  bool val_json = false;

  add_common(app.add_subcommand("simulate", "run one simulation"), sim_args,
             true);
  add_common(app.add_subcommand("converge-n",
                                "particle-count convergence sweep"),
             n_args, true);
  add_common(app.add_subcommand("converge-dt", "time-step convergence sweep"),
             dt_args, true);
  auto* val = app.add_subcommand("validate", "run the validation suites");
  add_common(val, val_args, false);
  auto* val_model_opt =
      val->add_option("--model", val_model,
                      "all|kac|wealth|opinion|morgenstern|kinetic_opt|config");
  val->add_option("--depth", val_depth, "quick|full")
      ->check(CLI::IsMember({"quick", "full"}));
  val->add_flag("--json", val_json, "also write validation.json to --out");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand("simulate")) return run_simulate(sim_args);
    if (app.got_subcommand("converge-n")) {
      return run_sweep_command(n_args, SweepAxis::ParticleCount);
    }
    if (app.got_subcommand("converge-dt")) {
      return run_sweep_command(dt_args, SweepAxis::TimeStep);
    }
    return run_validate(val_args, val_model_opt->count() > 0, val_model,
                        val_depth, val_json);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
