// saddledyn: saddle-search dynamics workbench (ISD / GAD flows, singularity
// classification, basin portraits, limit-cycle measurements).

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include "saddledyn/analysis.hpp"
#include "saddledyn/reduced.hpp"
#include "saddledyn/serialize.hpp"

using nlohmann::json;
using namespace sdyn;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& context) {
  if (!obj.is_object())
    throw ValidationError(context + ": expected a JSON object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed)
      if (it.key() == a) ok = true;
    if (!ok)
      throw ValidationError(context + ": unknown key '" + it.key() + "'");
  }
}

std::vector<double> parse_csv_doubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t pos = 0;
    const double v = std::stod(item, &pos);
    if (pos != item.size()) throw ValidationError("malformed number list: " + text);
    out.push_back(v);
  }
  if (out.empty()) throw ValidationError("empty number list");
  return out;
}

Vec to_vec(const std::vector<double>& v) {
  Vec x(v.size());
  for (size_t i = 0; i < v.size(); ++i) x[i] = v[i];
  return x;
}

Vec json_vec(const json& a) { return to_vec(a.get<std::vector<double>>()); }

// Flags collected once and merged over the config file.
struct Flags {
  std::string config_path, model, dyn, x0, v0, out, format, lo, hi, res, guess, mode;
  double eps = -1, delta = -1, alpha = 1e30, tmax = -1, level = -1, s = 1e30,
         lambda = 1e30, radius = -1, h = -1;
  int threads = -1, points = -1;
  long seed = -1;
  bool dry_run = false;
};

json model_from_name(const std::string& name, const Flags& f) {
  const double alpha = (f.alpha != 1e30) ? f.alpha : 2.0;
  const double lambda = (f.lambda != 1e30) ? f.lambda : 1.0;
  const double s = (f.s != 1e30) ? f.s : 1.0;
  ModelSpec spec;
  if (name == "doublewell1d") {
    spec = ModelSpec::double_well_1d();
  } else if (name == "doublewell2d") {
    spec = ModelSpec::double_well_2d(alpha);
  } else if (name == "coercive") {
    spec = ModelSpec::coercive_quartic();
  } else if (name == "cubic") {
    spec = ModelSpec::cubic_singularity(
        (f.alpha != 1e30) ? f.alpha : std::numbers::pi / 4.0, lambda, s);
  } else if (name == "isotropic") {
    spec = ModelSpec::isotropic_canonical(
        (f.alpha != 1e30) ? f.alpha : std::numbers::pi / 4.0, lambda);
  } else if (name == "cycling3d") {
    spec = ModelSpec::cycling_example_3d();
  } else if (name == "quadsaddle") {
    Mat H(2, 2);
    H << -1, 0, 0, 2;
    spec = ModelSpec::quadratic(H, Vec::Zero(2));
  } else {
    throw ValidationError("unknown model name '" + name + "'");
  }
  return json::parse(to_json_string(spec));
}

// Resolve config = file <- flags (flags override), strict keys.
json resolve_config(const Flags& f, const std::string& command) {
  json cfg = json::object();
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw ValidationError("cannot open config file " + f.config_path);
    try {
      in >> cfg;
    } catch (const json::parse_error& e) {
      throw ValidationError(std::string("config parse error: ") + e.what());
    }
  }
  reject_unknown_keys(cfg,
                      {"model", "integrator", "simulate", "portrait",
                       "singularities", "reduce", "cycle", "certify", "benchmark",
                       "check_derivs", "out", "format", "seed", "threads"},
                      "config");

  if (!f.model.empty()) cfg["model"] = model_from_name(f.model, f);
  if (f.delta >= 0.0) {
    if (!cfg.contains("model")) throw ValidationError("--delta needs a model");
    json inner = cfg["model"];
    cfg["model"] = json{{"variant", "perturbed"},
                        {"params", {{"base", inner}, {"delta", f.delta}}}};
  }

  json& integ = cfg["integrator"];
  if (!integ.is_object()) integ = json::object();
  if (f.eps > 0.0) integ["eps"] = f.eps;
  if (f.tmax > 0.0) integ["t_max"] = f.tmax;

  auto set_block = [&](const char* block, const char* key, const json& v) {
    if (!cfg[block].is_object()) cfg[block] = json::object();
    cfg[block][key] = v;
  };
  if (command == "simulate") {
    if (!f.dyn.empty()) set_block("simulate", "dyn", f.dyn);
    if (!f.x0.empty()) set_block("simulate", "x0", parse_csv_doubles(f.x0));
    if (!f.v0.empty()) set_block("simulate", "v0", parse_csv_doubles(f.v0));
  } else if (command == "portrait") {
    if (!f.dyn.empty()) set_block("portrait", "dyn", f.dyn);
    if (!f.lo.empty()) set_block("portrait", "lo", parse_csv_doubles(f.lo));
    if (!f.hi.empty()) set_block("portrait", "hi", parse_csv_doubles(f.hi));
    if (!f.res.empty()) {
      std::vector<int> r;
      for (double d : parse_csv_doubles(f.res)) r.push_back(static_cast<int>(d));
      set_block("portrait", "resolution", r);
    }
  } else if (command == "singularities") {
    if (!f.guess.empty()) set_block("singularities", "guess", parse_csv_doubles(f.guess));
    if (!f.mode.empty()) set_block("singularities", "mode", f.mode);
  } else if (command == "reduce") {
    if (f.alpha != 1e30) set_block("reduce", "alpha", f.alpha);
  } else if (command == "cycle") {
    if (!f.guess.empty()) set_block("cycle", "guess", parse_csv_doubles(f.guess));
  } else if (command == "certify") {
    if (f.level > 0.0) set_block("certify", "level", f.level);
    if (!f.lo.empty()) set_block("certify", "lo", parse_csv_doubles(f.lo));
    if (!f.hi.empty()) set_block("certify", "hi", parse_csv_doubles(f.hi));
    if (!f.res.empty()) {
      std::vector<int> r;
      for (double d : parse_csv_doubles(f.res)) r.push_back(static_cast<int>(d));
      set_block("certify", "resolution", r);
    }
    if (!f.x0.empty()) set_block("certify", "seed", parse_csv_doubles(f.x0));
  } else if (command == "benchmark") {
    if (f.radius > 0.0) set_block("benchmark", "radius", f.radius);
    if (f.points > 0) set_block("benchmark", "points", f.points);
  } else if (command == "check-derivs") {
    if (f.points > 0) set_block("check_derivs", "points", f.points);
    if (f.radius > 0.0) set_block("check_derivs", "radius", f.radius);
    if (f.h > 0.0) set_block("check_derivs", "h", f.h);
  }

  if (!f.out.empty()) cfg["out"] = f.out;
  if (!f.format.empty()) cfg["format"] = f.format;
  if (f.threads > 0) cfg["threads"] = f.threads;
  if (f.seed >= 0) cfg["seed"] = f.seed;
  if (!cfg.contains("seed")) cfg["seed"] = 0;
  if (!cfg.contains("format")) cfg["format"] = "csv";
  return cfg;
}

IntegratorConfig integrator_from(const json& cfg) {
  IntegratorConfig ic;
  if (!cfg.contains("integrator")) return ic;
  const json& j = cfg.at("integrator");
  reject_unknown_keys(j,
                      {"method", "dt", "abs_tol", "rel_tol", "dt_init", "dt_min",
                       "dt_max", "t_max", "tol_g", "tol_gap", "r_max", "eps",
                       "blowup_speed_floor"},
                      "integrator");
  if (j.contains("method")) {
    const std::string m = j.at("method").get<std::string>();
    if (m == "rk4")
      ic.method = StepMethod::Rk4;
    else if (m == "rk45")
      ic.method = StepMethod::Rk45;
    else
      throw ValidationError("integrator.method must be rk4 or rk45");
  }
  auto get = [&](const char* k, double& slot) {
    if (j.contains(k)) slot = j.at(k).get<double>();
  };
  get("dt", ic.dt);
  get("abs_tol", ic.abs_tol);
  get("rel_tol", ic.rel_tol);
  get("dt_init", ic.dt_init);
  get("dt_min", ic.dt_min);
  get("dt_max", ic.dt_max);
  get("t_max", ic.t_max);
  get("tol_g", ic.tol_g);
  get("tol_gap", ic.tol_gap);
  get("r_max", ic.r_max);
  get("eps", ic.eps);
  get("blowup_speed_floor", ic.blowup_speed_floor);
  try {
    ic.validate();
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
  return ic;
}

EnergyModel model_from(const json& cfg) {
  if (!cfg.contains("model")) throw ValidationError("no model given (use --model or config)");
  try {
    return make_model(model_spec_from_json(cfg.at("model").dump()));
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
}

Dynamics dyn_from(const std::string& s) {
  if (s == "grad" || s == "gradient") return Dynamics::Gradient;
  if (s == "isd") return Dynamics::Isd;
  if (s == "gad") return Dynamics::Gad;
  throw ValidationError("unknown dynamics '" + s + "' (grad|isd|gad)");
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path);
  out << content;
}

std::string sibling_json_path(const std::string& out) {
  const size_t dot = out.rfind('.');
  if (dot != std::string::npos && out.substr(dot) == ".csv")
    return out.substr(0, dot) + ".json";
  return out + ".legend.json";
}

std::string fmt6(double v) {
  if (std::abs(v) < 5e-7) v = 0.0;  // avoid "-0.000000"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

// ---------------------------------------------------------------------------

int cmd_simulate(const json& cfg) {
  const EnergyModel model = model_from(cfg);
  const IntegratorConfig ic = integrator_from(cfg);
  const json& blk = cfg.contains("simulate") ? cfg.at("simulate") : json::object();
  reject_unknown_keys(blk, {"dyn", "x0", "v0"}, "simulate");
  if (!blk.contains("x0")) throw ValidationError("simulate: x0 required");
  const Dynamics dyn = dyn_from(blk.contains("dyn") ? blk.at("dyn").get<std::string>() : "isd");
  const Vec x0 = json_vec(blk.at("x0"));
  std::optional<Vec> v0;
  if (blk.contains("v0")) v0 = json_vec(blk.at("v0"));

  Trajectory traj;
  try {
    traj = integrate(model, dyn, x0, ic, v0);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }

  if (cfg.contains("out")) {
    const std::string path = cfg.at("out").get<std::string>();
    write_file(path, cfg.at("format") == "json" ? to_json_string(traj, 2)
                                                : to_csv(traj));
  }

  std::string summary = to_string(traj.stop.tag);
  if (traj.stop.tag == StopTag::ConvergedToSaddle ||
      traj.stop.tag == StopTag::ConvergedToCritical) {
    summary += " x*=";
    for (int i = 0; i < traj.stop.x_last.size(); ++i)
      summary += (i ? "," : "") + fmt6(traj.stop.x_last[i]);
  } else if (traj.stop.tag == StopTag::BlowUp) {
    summary += " t*=" + fmt6(traj.stop.t_star);
  } else if (traj.stop.tag == StopTag::SingularityApproach) {
    summary += " gap=" + format_g17(traj.stop.gap);
  }
  std::cout << summary << "\n";
  return traj.stop.tag == StopTag::NumericalFailure ? kExitNumerical : kExitOk;
}

int cmd_portrait(const json& cfg) {
  const EnergyModel model = model_from(cfg);
  if (!cfg.contains("portrait")) throw ValidationError("portrait: grid required");
  const json& j = cfg.at("portrait");
  reject_unknown_keys(j, {"dyn", "lo", "hi", "resolution"}, "portrait");
  BasinSpec spec;
  spec.config = integrator_from(cfg);
  if (!cfg.at("integrator").contains("method"))
    spec.config.method = StepMethod::Rk4;  // fixed-step default for scans
  spec.dynamics = dyn_from(j.contains("dyn") ? j.at("dyn").get<std::string>() : "isd");
  if (!j.contains("lo") || !j.contains("hi") || !j.contains("resolution"))
    throw ValidationError("portrait: lo, hi, resolution required");
  spec.lo = json_vec(j.at("lo"));
  spec.hi = json_vec(j.at("hi"));
  spec.resolution = j.at("resolution").get<std::vector<int>>();

  const int threads = cfg.contains("threads") ? cfg.at("threads").get<int>() : 1;
  BasinMap map;
  try {
    map = basin_scan(model, spec, threads);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }

  if (cfg.contains("out")) {
    const std::string path = cfg.at("out").get<std::string>();
    write_file(path, to_csv(map));
    write_file(sibling_json_path(path), basin_legend_json(2));
  }

  std::vector<int> counts(static_cast<int>(StopTag::NumericalFailure) + 1, 0);
  for (StopTag t : map.labels) ++counts[static_cast<int>(t)];
  std::string summary = "portrait cells=" + std::to_string(map.labels.size());
  for (size_t i = 0; i < counts.size(); ++i)
    if (counts[i])
      summary += " " + to_string(static_cast<StopTag>(i)) + ":" + std::to_string(counts[i]);
  std::cout << summary << "\n";
  return kExitOk;
}

int cmd_singularities(const json& cfg) {
  const EnergyModel model = model_from(cfg);
  if (!cfg.contains("singularities"))
    throw ValidationError("singularities: guess required");
  const json& j = cfg.at("singularities");
  reject_unknown_keys(j, {"guess", "mode"}, "singularities");
  if (!j.contains("guess")) throw ValidationError("singularities: guess required");
  const Vec guess = json_vec(j.at("guess"));
  std::string mode = j.contains("mode") ? j.at("mode").get<std::string>()
                                        : (model.dimension() == 2 ? "2d" : "nd");

  LocateResult res;
  if (mode == "2d") {
    if (model.dimension() != 2) throw ValidationError("mode 2d needs a 2D model");
    res = locate_2d(model, Vec2(guess[0], guess[1]));
  } else if (mode == "nd") {
    res = locate_nd(model, guess);
  } else {
    throw ValidationError("singularities: mode must be 2d or nd");
  }
  if (!res.ok()) {
    std::cout << "locate failed: " << to_string(res.status) << "\n";
    return kExitNumerical;
  }
  if (cfg.contains("out"))
    write_file(cfg.at("out").get<std::string>(), to_json_string(res.report, 2));
  std::string summary = to_string(res.report.cls) + " z=(";
  for (int i = 0; i < res.report.z.size(); ++i)
    summary += (i ? "," : "") + fmt6(res.report.z[i]);
  summary += ") delta=" + fmt6(res.report.delta_disc) +
             " alpha=" + fmt6(res.report.alpha);
  std::cout << summary << "\n";
  return kExitOk;
}

int cmd_reduce(const json& cfg) {
  if (!cfg.contains("reduce")) throw ValidationError("reduce: alpha required");
  const json& j = cfg.at("reduce");
  reject_unknown_keys(j, {"alpha", "trajectory"}, "reduce");
  if (!j.contains("alpha")) throw ValidationError("reduce: alpha required");
  const double alpha = j.at("alpha").get<double>();

  FixedPointReport rep;
  try {
    rep = fixed_points(alpha);
  } catch (const std::domain_error& e) {
    throw ValidationError(e.what());
  }
  if (cfg.contains("out")) {
    const std::string path = cfg.at("out").get<std::string>();
    write_file(path, to_json_string(rep, 2));
    // optional reduced-system trajectory CSV alongside the report
    if (j.contains("trajectory")) {
      const json& tj = j.at("trajectory");
      reject_unknown_keys(tj, {"r0", "omega0", "t_max", "dt"}, "reduce.trajectory");
      double r = tj.value("r0", 2.0 * rep.r0);
      double w = tj.value("omega0", alpha);
      const double tmax = tj.value("t_max", 20.0);
      const double dt = tj.value("dt", 1e-3);
      std::string csv = "t,r,omega\n";
      for (double t = 0.0; t <= tmax; t += dt) {
        csv += format_g17(t) + "," + format_g17(r) + "," + format_g17(w) + "\n";
        // classical RK4 on the planar reduction
        const auto k1 = reduced_field({r, w}, alpha);
        const auto k2 = reduced_field({r + 0.5 * dt * k1.r_dot, w + 0.5 * dt * k1.omega_dot}, alpha);
        const auto k3 = reduced_field({r + 0.5 * dt * k2.r_dot, w + 0.5 * dt * k2.omega_dot}, alpha);
        const auto k4 = reduced_field({r + dt * k3.r_dot, w + dt * k3.omega_dot}, alpha);
        r += dt / 6.0 * (k1.r_dot + 2 * k2.r_dot + 2 * k3.r_dot + k4.r_dot);
        w += dt / 6.0 * (k1.omega_dot + 2 * k2.omega_dot + 2 * k3.omega_dot + k4.omega_dot);
      }
      const size_t dot = path.rfind('.');
      const std::string stem = dot == std::string::npos ? path : path.substr(0, dot);
      write_file(stem + ".trajectory.csv", csv);
    }
  }
  std::cout << "r0=" << fmt6(rep.r0)
            << " stable_branch=" << to_string(rep.stable_branch) << "\n";
  return kExitOk;
}

int cmd_cycle(const json& cfg) {
  const EnergyModel model = model_from(cfg);
  const json& j = cfg.contains("cycle") ? cfg.at("cycle") : json::object();
  reject_unknown_keys(j, {"guess", "burn_in_over_eps", "window_over_eps", "theta0"},
                      "cycle");
  Vec guess = Vec::Zero(model.dimension());
  if (j.contains("guess")) guess = json_vec(j.at("guess"));

  LocateResult res = model.dimension() == 2
                         ? locate_2d(model, Vec2(guess[0], guess[1]))
                         : locate_nd(model, guess);
  if (!res.ok()) {
    std::cout << "locate failed: " << to_string(res.status) << "\n";
    return kExitNumerical;
  }

  CycleOptions opts;
  opts.config = integrator_from(cfg);
  opts.burn_in_over_eps = j.value("burn_in_over_eps", 50.0);
  opts.window_over_eps = j.value("window_over_eps", 100.0);
  opts.theta0 = j.value("theta0", 0.0);

  CycleMeasurement m;
  try {
    m = measure_cycle(model, res.report, opts);
  } catch (const std::domain_error& e) {
    throw ValidationError(e.what());
  }
  if (cfg.contains("out"))
    write_file(cfg.at("out").get<std::string>(), to_json_string(m, 2));
  if (radius_domain_warning(res.report.alpha))
    std::cerr << "warning: alpha close to pi/2, predicted radius degenerates\n";
  std::cout << "r_mean=" << format_g17(m.r_mean)
            << " predicted=" << format_g17(m.predicted)
            << " width=" << format_g17(m.width)
            << (m.no_cycle ? " NoCycle" : "") << "\n";
  return m.no_cycle ? kExitNumerical : kExitOk;
}

int cmd_certify(const json& cfg) {
  const EnergyModel model = model_from(cfg);
  if (!cfg.contains("certify")) throw ValidationError("certify: spec required");
  const json& j = cfg.at("certify");
  reject_unknown_keys(j, {"level", "lo", "hi", "resolution", "seed"}, "certify");
  RegionSpec spec;
  if (!j.contains("level") || !j.contains("lo") || !j.contains("hi") ||
      !j.contains("resolution") || !j.contains("seed"))
    throw ValidationError("certify: level, lo, hi, resolution, seed required");
  spec.level = j.at("level").get<double>();
  spec.lo = json_vec(j.at("lo"));
  spec.hi = json_vec(j.at("hi"));
  spec.resolution = j.at("resolution").get<std::vector<int>>();
  spec.seed = json_vec(j.at("seed"));

  RegionCertificate cert;
  try {
    cert = certify_region(model, spec);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
  if (cfg.contains("out"))
    write_file(cfg.at("out").get<std::string>(), to_json_string(cert, 2));
  std::cout << "index1_everywhere=" << (cert.index1_everywhere ? "true" : "false")
            << " cells=" << cert.cells.size()
            << " touches_boundary=" << (cert.touches_boundary ? "true" : "false")
            << " min_margin=" << fmt6(cert.min_margin) << "\n";
  return kExitOk;
}

int cmd_benchmark(const json& cfg) {
  const EnergyModel model = model_from(cfg);
  const json& j = cfg.contains("benchmark") ? cfg.at("benchmark") : json::object();
  reject_unknown_keys(j, {"radius", "points"}, "benchmark");
  const double radius = j.value("radius", 2.0);
  const int points = j.value("points", 25);
  const IntegratorConfig ic = integrator_from(cfg);

  const BenchmarkReport rep = benchmark_global(model, radius, ic.eps, ic, points);
  if (cfg.contains("out"))
    write_file(cfg.at("out").get<std::string>(), to_json_string(rep, 2));
  if (!rep.hypothesis_index1 || !rep.hypothesis_coercive) {
    std::cout << "hypothesis check failed (index1="
              << (rep.hypothesis_index1 ? "ok" : "violated") << ", coercive="
              << (rep.hypothesis_coercive ? "ok" : "violated")
              << "); refusing to certify\n";
    return kExitOk;
  }
  std::cout << "converged=" << rep.converged << "/" << rep.total
            << " certified=" << (rep.certified() ? "true" : "false") << "\n";
  return kExitOk;
}

int cmd_check_derivs(const json& cfg) {
  const EnergyModel model = model_from(cfg);
  const json& j = cfg.contains("check_derivs") ? cfg.at("check_derivs") : json::object();
  reject_unknown_keys(j, {"points", "radius", "h"}, "check_derivs");
  const int points = j.value("points", 100);
  const double radius = j.value("radius", 2.0);
  const double h = j.value("h", 1e-5);
  const long seed = cfg.at("seed").get<long>();

  std::mt19937_64 rng(static_cast<uint64_t>(seed));
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int p = 0; p < points; ++p) {
    Vec x(model.dimension());
    do {
      for (int i = 0; i < x.size(); ++i) x[i] = radius * u(rng);
    } while (x.norm() > radius);
    worst = std::max(worst, check_derivatives(model, x, h).max_err());
  }
  std::cout << "max_rel_err=" << format_g17(worst) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"saddle-search dynamics workbench (gradient flow, ISD, GAD)"};
  app.require_subcommand(1);

  Flags f;
  std::string command;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", f.config_path, "JSON config file");
    sub->add_option("--model", f.model,
                    "builtin model (doublewell1d|doublewell2d|coercive|cubic|"
                    "isotropic|cycling3d|quadsaddle)");
    sub->add_option("--eps", f.eps, "GAD relaxation parameter");
    sub->add_option("--delta", f.delta, "wrap the model in a delta-perturbation");
    sub->add_option("--alpha", f.alpha, "angle parameter");
    sub->add_option("--lambda", f.lambda, "lambda parameter (cubic models)");
    sub->add_option("--s", f.s, "cubic x1^3 coefficient (cubic model)");
    sub->add_option("--tmax", f.tmax, "integration time limit");
    sub->add_option("--out", f.out, "output artifact path");
    sub->add_option("--format", f.format, "csv|json");
    sub->add_option("--threads", f.threads, "worker cap for grid scans");
    sub->add_option("--seed", f.seed, "random seed (default fixed 0)");
    sub->add_flag("--dry-run", f.dry_run, "validate config and print it, no compute");
  };

  CLI::App* simulate = app.add_subcommand("simulate", "integrate one trajectory");
  simulate->add_option("--dyn", f.dyn, "grad|isd|gad");
  simulate->add_option("--x0", f.x0, "initial position (comma-separated)");
  simulate->add_option("--v0", f.v0, "initial orientation (comma-separated)");
  add_common(simulate);

  CLI::App* portrait = app.add_subcommand("portrait", "basin-of-attraction scan");
  portrait->add_option("--dyn", f.dyn, "grad|isd|gad");
  portrait->add_option("--lo", f.lo, "grid lower corner");
  portrait->add_option("--hi", f.hi, "grid upper corner");
  portrait->add_option("--res", f.res, "grid resolution per axis");
  add_common(portrait);

  CLI::App* sing = app.add_subcommand("singularities", "locate + classify a singularity");
  sing->add_option("--guess", f.guess, "Newton starting point");
  sing->add_option("--mode", f.mode, "2d|nd");
  add_common(sing);

  CLI::App* reduce = app.add_subcommand("reduce", "reduced-system fixed points");
  add_common(reduce);

  CLI::App* cycle = app.add_subcommand("cycle", "measure the GAD orbit annulus");
  cycle->add_option("--guess", f.guess, "singularity guess");
  add_common(cycle);

  CLI::App* certify = app.add_subcommand("certify", "sampled index-1 region certificate");
  certify->add_option("--level", f.level, "gradient-norm level L");
  certify->add_option("--lo", f.lo, "box lower corner");
  certify->add_option("--hi", f.hi, "box upper corner");
  certify->add_option("--res", f.res, "cells per axis");
  certify->add_option("--x0", f.x0, "seed point");
  add_common(certify);

  CLI::App* bench = app.add_subcommand("benchmark", "global-convergence benchmark");
  bench->add_option("--radius", f.radius, "initial-condition ball radius");
  bench->add_option("--points", f.points, "number of initial conditions");
  add_common(bench);

  CLI::App* checkd = app.add_subcommand("check-derivs", "finite-difference oracle");
  checkd->add_option("--points", f.points, "sample count");
  checkd->add_option("--radius", f.radius, "sample ball radius");
  checkd->add_option("--h-step", f.h, "finite-difference step");
  add_common(checkd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitValidation;
  }

  for (CLI::App* sub : app.get_subcommands()) command = sub->get_name();

  try {
    const json cfg = resolve_config(f, command);
    // Model construction validates parameters even on a dry run.
    if (cfg.contains("model")) model_from(cfg);
    integrator_from(cfg);
    if (f.dry_run) {
      std::cout << cfg.dump(2) << "\n";
      return kExitOk;
    }
    if (command == "simulate") return cmd_simulate(cfg);
    if (command == "portrait") return cmd_portrait(cfg);
    if (command == "singularities") return cmd_singularities(cfg);
    if (command == "reduce") return cmd_reduce(cfg);
    if (command == "cycle") return cmd_cycle(cfg);
    if (command == "certify") return cmd_certify(cfg);
    if (command == "benchmark") return cmd_benchmark(cfg);
    if (command == "check-derivs") return cmd_check_derivs(cfg);
    throw ValidationError("unknown command");
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}
