#include "kinmc/emit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace kinmc {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const char* axis_name(SweepAxis axis) {
  return axis == SweepAxis::ParticleCount ? "particle_count" : "time_step";
}

double guide_slope(const SweepPlan& plan) {
  if (plan.axis == SweepAxis::TimeStep) {
    return 1.0;  // first order in the time step
  }
  const int d = plan.model.dim;
  return d <= 2 ? -0.5 : -1.0 / static_cast<double>(d);
}

}  // namespace

std::string to_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "axis_value,n_steps,mean_error,stderr,estimator_tag,replications,seed\n";
  for (const auto& row : result.rows) {
    std::string tag = row.estimator_tag;
    if (row.statistic != "terminal") {
      tag += "|" + row.statistic;
    }
    out << fmt(row.axis_value) << ',' << row.n_steps << ','
        << fmt(row.mean_error) << ',' << fmt(row.stderr_error) << ',' << tag
        << ',' << row.replications << ',' << row.seed << '\n';
  }
  return out.str();
}

nlohmann::json to_json(const SweepPlan& plan, const SweepResult& result) {
  nlohmann::json model_echo = {{"id", model_name(plan.model.id)},
                               {"dimension", plan.model.dim}};
  switch (plan.model.id) {
    case ModelId::Wealth:
      model_echo["gamma"] = plan.model.gamma;
      break;
    case ModelId::Opinion:
      model_echo["gamma"] = plan.model.gamma;
      model_echo["sigma_eta"] = plan.model.sigma_eta;
      break;
    case ModelId::KineticOpt:
      model_echo["lambda"] = plan.model.lambda;
      model_echo["sigma"] = plan.model.sigma;
      model_echo["beta_weight"] = plan.model.beta_weight;
      break;
    default:
      break;
  }
  static const char* kInitialNames[] = {"point_mass", "uniform_box", "gaussian",
                                        "two_point_mixture", "custom"};
  nlohmann::json plan_echo = {
      {"axis", axis_name(plan.axis)},
      {"values", plan.values},
      {"replications", plan.replications},
      {"master_seed", plan.master_seed},
      {"model", model_echo},
      {"initial_condition",
       kInitialNames[static_cast<int>(plan.initial.kind)]},
      {"scheme", plan.base.scheme == Scheme::Nanbu ? "nanbu" : "trmc"},
      {"dt", plan.base.dt},
      {"horizon", plan.base.horizon},
      {"record_every", plan.record_every},
      {"threads", plan.threads},
  };
  if (plan.axis == SweepAxis::ParticleCount) {
    plan_echo["reference_factor"] = plan.reference_factor;
    plan_echo["sliced_directions"] = plan.sliced_directions;
  } else {
    plan_echo["oracle"] = quantity_name(plan.oracle_quantity);
    plan_echo["mc_variant"] = plan.mc_variant;
    if (plan.mc_variant) plan_echo["mc_particles"] = plan.mc_particles;
  }
  if (plan.base.scheme == Scheme::TimeRelaxed) {
    plan_echo["epsilon"] = plan.base.epsilon;
  }

  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : result.rows) {
    rows.push_back({
        {"axis_value", row.axis_value},
        {"n_steps", row.n_steps},
        {"statistic", row.statistic},
        {"mean_error", row.mean_error},
        {"stderr", row.stderr_error},
        {"estimator_tag", row.estimator_tag},
        {"replications", row.replications},
        {"seed", row.seed},
        {"per_replication", row.per_replication},
    });
  }

  nlohmann::json doc = {
      {"schema_version", 1},
      {"plan", plan_echo},
      {"results", rows},
  };
  if (result.fit) {
    doc["rate_fit"] = {
        {"slope", result.fit->slope},
        {"intercept", result.fit->intercept},
        {"r_squared", result.fit->r_squared},
        {"points", result.fit->points},
    };
  } else {
    doc["diagnostic"] = result.diagnostic;
  }
  return doc;
}

std::string to_svg(const SweepPlan& plan, const SweepResult& result) {
  constexpr double width = 640, height = 480, margin = 64;

  std::vector<std::pair<double, double>> pts;  // (log10 x, log10 y)
  for (const auto& row : result.rows) {
    if (row.statistic == "terminal" && row.mean_error > 0) {
      pts.push_back({std::log10(row.axis_value), std::log10(row.mean_error)});
    }
  }

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
      << height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  if (pts.size() < 2) {
    out << "<text x=\"" << margin << "\" y=\"" << height / 2
        << "\" font-family=\"monospace\">"
        << (result.diagnostic.empty() ? "not enough positive points"
                                      : result.diagnostic)
        << "</text>\n</svg>\n";
    return out.str();
  }

  double x_lo = pts[0].first, x_hi = pts[0].first;
  double y_lo = pts[0].second, y_hi = pts[0].second;
  for (const auto& p : pts) {
    x_lo = std::min(x_lo, p.first);
    x_hi = std::max(x_hi, p.first);
    y_lo = std::min(y_lo, p.second);
    y_hi = std::max(y_hi, p.second);
  }
  if (x_hi == x_lo) x_hi = x_lo + 1;
  if (y_hi == y_lo) y_hi = y_lo + 1;
  const double pad_y = 0.1 * (y_hi - y_lo);
  y_lo -= pad_y;
  y_hi += pad_y;

  auto sx = [&](double lx) {
    return margin + (lx - x_lo) / (x_hi - x_lo) * (width - 2 * margin);
  };
  auto sy = [&](double ly) {
    return height - margin - (ly - y_lo) / (y_hi - y_lo) * (height - 2 * margin);
  };

  out << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\""
      << width - 2 * margin << "\" height=\"" << height - 2 * margin
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  auto line = [&](double lx0, double ly0, double lx1, double ly1,
                  const char* color, const char* dash) {
    out << "<line x1=\"" << sx(lx0) << "\" y1=\"" << sy(ly0) << "\" x2=\""
        << sx(lx1) << "\" y2=\"" << sy(ly1) << "\" stroke=\"" << color
        << "\" stroke-dasharray=\"" << dash << "\"/>\n";
  };

  // fitted line (natural log fit; convert to log10 space)
  if (result.fit) {
    const double s = result.fit->slope;
    const double b = result.fit->intercept;
    auto ly_at = [&](double lx) {
      // log10 y = (slope * ln x + intercept) / ln 10
      return (s * lx * std::numbers::ln10 + b) / std::numbers::ln10;
    };
    line(x_lo, ly_at(x_lo), x_hi, ly_at(x_hi), "#1f77b4", "");
  }

  // theoretical guide through the first point
  const double gs = guide_slope(plan);
  line(pts.front().first, pts.front().second, x_hi,
       pts.front().second + gs * (x_hi - pts.front().first), "#999999", "6,4");

  for (const auto& p : pts) {
    out << "<circle cx=\"" << sx(p.first) << "\" cy=\"" << sy(p.second)
        << "\" r=\"4\" fill=\"#d62728\"/>\n";
  }

  out << "<text x=\"" << width / 2 << "\" y=\"" << height - margin / 3
      << "\" text-anchor=\"middle\" font-family=\"monospace\">log10 "
      << axis_name(plan.axis) << "</text>\n";
  out << "<text x=\"" << margin / 3 << "\" y=\"" << height / 2
      << "\" text-anchor=\"middle\" font-family=\"monospace\" transform=\"rotate(-90 "
      << margin / 3 << ' ' << height / 2 << ")\">log10 error</text>\n";
  if (result.fit) {
    out << "<text x=\"" << width - margin << "\" y=\"" << margin / 2
        << "\" text-anchor=\"end\" font-family=\"monospace\">slope "
        << fmt(result.fit->slope) << ", guide " << fmt(gs) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream out;
  out << "step_index,time";
  const auto& first = traj.snapshots.front().report;
  for (Eigen::Index k = 0; k < first.mean_vector.size(); ++k) {
    out << ",mean_" << k;
  }
  out << ",energy";
  for (const auto& [q, _] : first.moments) {
    out << ",m" << fmt(q);
  }
  for (const auto& [name, _] : first.conserved_drift) {
    out << ",drift_" << name;
  }
  out << '\n';
  for (const auto& snap : traj.snapshots) {
    const auto& r = snap.report;
    out << r.step_index << ',' << fmt(r.time);
    for (Eigen::Index k = 0; k < r.mean_vector.size(); ++k) {
      out << ',' << fmt(r.mean_vector[k]);
    }
    out << ',' << fmt(r.energy);
    for (const auto& [_, v] : r.moments) {
      out << ',' << fmt(v);
    }
    for (const auto& [_, v] : r.conserved_drift) {
      out << ',' << fmt(v);
    }
    out << '\n';
  }
  return out.str();
}

nlohmann::json trajectory_json(const Trajectory& traj) {
  nlohmann::json snaps = nlohmann::json::array();
  for (const auto& snap : traj.snapshots) {
    const auto& r = snap.report;
    nlohmann::json moments;
    for (const auto& [q, v] : r.moments) {
      moments[fmt(q)] = v;
    }
    snaps.push_back({
        {"step_index", r.step_index},
        {"time", r.time},
        {"mean", std::vector<double>(r.mean_vector.data(),
                                     r.mean_vector.data() + r.mean_vector.size())},
        {"energy", r.energy},
        {"moments", moments},
        {"conserved_drift", r.conserved_drift},
    });
  }
  return nlohmann::json{
      {"schema_version", 1},
      {"model", model_name(traj.model_id)},
      {"scheme", traj.params.scheme == Scheme::Nanbu ? "nanbu" : "trmc"},
      {"dt", traj.params.dt},
      {"horizon", traj.params.horizon},
      {"n_particles", traj.params.n_particles},
      {"seed", traj.params.seed},
      {"snapshots", snaps},
      {"collisions", traj.totals.collisions},
      {"equilibrations", traj.totals.equilibrations},
      {"clamp_events", traj.totals.clamp_events},
  };
}

std::string validation_text(const ValidationReport& report) {
  std::ostringstream out;
  for (const auto& c : report.checks) {
    out << (c.passed ? "PASS" : "FAIL") << "  " << c.name << "  margin="
        << fmt(c.margin);
    if (!c.detail.empty()) out << "  (" << c.detail << ")";
    out << '\n';
  }
  out << (report.all_passed() ? "all checks passed" : "some checks FAILED")
      << '\n';
  return out.str();
}

nlohmann::json validation_json(const ValidationReport& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"margin", c.margin},
                      {"detail", c.detail}});
  }
  return nlohmann::json{{"schema_version", 1},
                        {"checks", checks},
                        {"all_passed", report.all_passed()}};
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  out << content;
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

}  // namespace kinmc
