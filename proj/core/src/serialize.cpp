#include "saddledyn/serialize.hpp"

#include <json.hpp>

#include <cstdio>

namespace sdyn {

using nlohmann::json;

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

json vec_to_json(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vec vec_from_json(const json& a) {
  Vec v(a.size());
  for (size_t i = 0; i < a.size(); ++i) v[i] = a[i].get<double>();
  return v;
}

json mat_to_json(const Mat& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (int j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    rows.push_back(r);
  }
  return rows;
}

Mat mat_from_json(const json& rows) {
  const int nr = static_cast<int>(rows.size());
  const int nc = nr ? static_cast<int>(rows[0].size()) : 0;
  Mat m(nr, nc);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nc; ++j) m(i, j) = rows[i][j].get<double>();
  return m;
}

json spec_to_json(const ModelSpec& spec) {
  json params = json::object();
  using K = ModelSpec::Kind;
  switch (spec.kind) {
    case K::DoubleWell1D:
    case K::CoerciveQuartic:
      break;
    case K::DoubleWell2D:
      params["alpha"] = spec.alpha;
      break;
    case K::CubicSingularity:
      params["alpha"] = spec.alpha;
      params["lambda"] = spec.lambda;
      params["s"] = spec.s;
      break;
    case K::IsotropicCanonical:
      params["alpha"] = spec.alpha;
      params["lambda"] = spec.lambda;
      break;
    case K::MultiDE0:
      params["alpha0"] = spec.alpha;
      params["lambda0"] = spec.lambda;
      params["H0"] = mat_to_json(spec.H0);
      if (!spec.G0.empty()) params["G0"] = spec.G0;
      params["plane_cubic"] = {spec.plane_cubic_a, spec.plane_cubic_b};
      break;
    case K::Quadratic:
      params["H"] = mat_to_json(spec.H);
      params["b"] = vec_to_json(spec.b);
      break;
    case K::Bump:
      params["dim"] = spec.dim;
      break;
    case K::Perturbed:
      params["base"] = spec_to_json(*spec.base);
      params["delta"] = spec.delta;
      if (spec.perturbation)
        params["perturbation"] = spec_to_json(*spec.perturbation);
      break;
  }
  return json{{"variant", spec.kind_name()}, {"params", params}};
}

ModelSpec spec_from_json(const json& j);

ModelSpec params_for(const std::string& variant, const json& p) {
  auto need = [&](const char* key) -> const json& {
    if (!p.contains(key))
      throw std::invalid_argument("model spec: missing parameter '" +
                                  std::string(key) + "' for " + variant);
    return p.at(key);
  };
  auto reject_unknown = [&](std::initializer_list<const char*> allowed) {
    for (auto it = p.begin(); it != p.end(); ++it) {
      bool ok = false;
      for (const char* a : allowed)
        if (it.key() == a) ok = true;
      if (!ok)
        throw std::invalid_argument("model spec: unknown parameter '" + it.key() +
                                    "' for " + variant);
    }
  };

  if (variant == "doublewell1d") {
    reject_unknown({});
    return ModelSpec::double_well_1d();
  }
  if (variant == "doublewell2d") {
    reject_unknown({"alpha"});
    return ModelSpec::double_well_2d(need("alpha").get<double>());
  }
  if (variant == "coercive_quartic") {
    reject_unknown({});
    return ModelSpec::coercive_quartic();
  }
  if (variant == "cubic_singularity") {
    reject_unknown({"alpha", "lambda", "s"});
    return ModelSpec::cubic_singularity(need("alpha").get<double>(),
                                        need("lambda").get<double>(),
                                        need("s").get<double>());
  }
  if (variant == "isotropic_canonical") {
    reject_unknown({"alpha", "lambda"});
    return ModelSpec::isotropic_canonical(need("alpha").get<double>(),
                                          need("lambda").get<double>());
  }
  if (variant == "multid_e0") {
    reject_unknown({"alpha0", "lambda0", "H0", "G0", "plane_cubic"});
    std::vector<double> g0;
    if (p.contains("G0")) g0 = p.at("G0").get<std::vector<double>>();
    double pa = 0.5, pb = 0.0;
    if (p.contains("plane_cubic")) {
      pa = p.at("plane_cubic").at(0).get<double>();
      pb = p.at("plane_cubic").at(1).get<double>();
    }
    return ModelSpec::multid_e0(need("alpha0").get<double>(),
                                need("lambda0").get<double>(),
                                mat_from_json(need("H0")), g0, pa, pb);
  }
  if (variant == "quadratic") {
    reject_unknown({"H", "b"});
    return ModelSpec::quadratic(mat_from_json(need("H")),
                                vec_from_json(need("b")));
  }
  if (variant == "bump") {
    reject_unknown({"dim"});
    return ModelSpec::bump(need("dim").get<int>());
  }
  if (variant == "perturbed") {
    reject_unknown({"base", "delta", "perturbation"});
    std::shared_ptr<const ModelSpec> pert;
    if (p.contains("perturbation"))
      pert = std::make_shared<const ModelSpec>(spec_from_json(p.at("perturbation")));
    return ModelSpec::perturbed(spec_from_json(need("base")),
                                need("delta").get<double>(), pert);
  }
  throw std::invalid_argument("model spec: unknown variant '" + variant + "'");
}

ModelSpec spec_from_json(const json& j) {
  if (!j.is_object() || !j.contains("variant") || !j.contains("params"))
    throw std::invalid_argument("model spec: expected {\"variant\", \"params\"}");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.key() != "variant" && it.key() != "params")
      throw std::invalid_argument("model spec: unknown key '" + it.key() + "'");
  return params_for(j.at("variant").get<std::string>(), j.at("params"));
}

json stop_to_json(const StopEvent& stop) {
  json payload = json::object();
  payload["x_last"] = vec_to_json(stop.x_last);
  switch (stop.tag) {
    case StopTag::ConvergedToSaddle:
    case StopTag::ConvergedToCritical:
      payload["index"] = stop.morse_index;
      break;
    case StopTag::SingularityApproach:
      payload["gap"] = stop.gap;
      break;
    case StopTag::BlowUp:
      payload["gap"] = stop.gap;
      payload["t_star"] = stop.t_star;
      break;
    default:
      break;
  }
  if (!stop.detail.empty()) payload["detail"] = stop.detail;
  return json{{"tag", to_string(stop.tag)}, {"payload", payload}};
}

std::string dump(const json& j, int indent) {
  return indent >= 0 ? j.dump(indent) : j.dump();
}

}  // namespace

std::string to_json_string(const ModelSpec& spec, int indent) {
  return dump(spec_to_json(spec), indent);
}

ModelSpec model_spec_from_json(const std::string& text) {
  return spec_from_json(json::parse(text));
}

std::string to_csv(const Trajectory& traj) {
  std::string out;
  const int n = traj.samples.empty() ? 0 : static_cast<int>(traj.samples[0].x.size());
  out += "t";
  for (int i = 1; i <= n; ++i) out += ",x_" + std::to_string(i);
  for (int i = 1; i <= n; ++i) out += ",v_" + std::to_string(i);
  out += ",grad_norm,lambda1,lambda2,gap,v_err\n";
  for (const auto& s : traj.samples) {
    out += format_g17(s.t);
    for (int i = 0; i < n; ++i) out += "," + format_g17(s.x[i]);
    for (int i = 0; i < n; ++i) out += "," + format_g17(s.v[i]);
    out += "," + format_g17(s.grad_norm);
    out += "," + format_g17(s.lambda1);
    out += "," + format_g17(s.lambda2);
    out += "," + format_g17(s.gap);
    out += "," + format_g17(s.v_err);
    out += "\n";
  }
  return out;
}

std::string to_json_string(const Trajectory& traj, int indent) {
  json samples = json::array();
  for (const auto& s : traj.samples) {
    samples.push_back(json{{"t", s.t},
                           {"x", vec_to_json(s.x)},
                           {"v", vec_to_json(s.v)},
                           {"grad_norm", s.grad_norm},
                           {"lambda1", s.lambda1},
                           {"lambda2", s.lambda2},
                           {"gap", s.gap},
                           {"v_err", s.v_err}});
  }
  return dump(json{{"samples", samples}, {"stop", stop_to_json(traj.stop)}}, indent);
}

std::string to_json_string(const SingularityReport& rep, int indent) {
  json j{{"z", vec_to_json(rep.z)},
         {"lambda", rep.lambda},
         {"grad_norm", rep.grad_norm},
         {"alpha", rep.alpha},
         {"coeffs",
          {{"E111", rep.coeffs.e111},
           {"E112", rep.coeffs.e112},
           {"E122", rep.coeffs.e122},
           {"E222", rep.coeffs.e222}}},
         {"delta_disc", rep.delta_disc},
         {"A", mat_to_json(rep.A)},
         {"frame", mat_to_json(rep.frame)},
         {"class", to_string(rep.cls)}};
  return dump(j, indent);
}

std::string to_json_string(const FixedPointReport& rep, int indent) {
  json j{{"alpha", rep.alpha},
         {"r0", rep.r0},
         {"omega0_plus", rep.omega0_plus},
         {"omega0_minus", rep.omega0_minus},
         {"J_plus", mat_to_json(rep.J_plus)},
         {"J_minus", mat_to_json(rep.J_minus)},
         {"stable_branch", to_string(rep.stable_branch)}};
  return dump(j, indent);
}

std::string to_json_string(const RegionCertificate& cert, int indent) {
  json j{{"level", cert.spec.level},
         {"lo", vec_to_json(cert.spec.lo)},
         {"hi", vec_to_json(cert.spec.hi)},
         {"resolution", cert.spec.resolution},
         {"cells", cert.cells.size()},
         {"index1_everywhere", cert.index1_everywhere},
         {"min_margin", cert.min_margin},
         {"touches_boundary", cert.touches_boundary}};
  return dump(j, indent);
}

std::string to_json_string(const CycleMeasurement& m, int indent) {
  json j{{"center", vec_to_json(m.center)},
         {"burn_in", m.burn_in},
         {"window", m.window},
         {"r_mean", m.r_mean},
         {"r_min", m.r_min},
         {"r_max", m.r_max},
         {"width", m.width},
         {"predicted", m.predicted},
         {"no_cycle", m.no_cycle}};
  return dump(j, indent);
}

std::string to_json_string(const BenchmarkReport& rep, int indent) {
  json fails = json::array();
  for (const auto& f : rep.failures) fails.push_back(stop_to_json(f));
  json j{{"hypothesis_index1", rep.hypothesis_index1},
         {"hypothesis_coercive", rep.hypothesis_coercive},
         {"total", rep.total},
         {"converged", rep.converged},
         {"failures", fails},
         {"certified", rep.certified()}};
  return dump(j, indent);
}

std::string to_csv(const BasinMap& map) {
  std::string out;
  const int dim = static_cast<int>(map.spec.lo.size());
  for (int i = 1; i <= dim; ++i) out += (i > 1 ? "," : "") + ("x_" + std::to_string(i));
  out += ",label\n";
  for (size_t f = 0; f < map.labels.size(); ++f) {
    const Vec x = map.cell_center(static_cast<int>(f));
    for (int i = 0; i < dim; ++i) out += (i > 0 ? "," : "") + format_g17(x[i]);
    out += "," + std::to_string(static_cast<int>(map.labels[f]));
    out += "\n";
  }
  return out;
}

std::string basin_legend_json(int indent) {
  json j = json::object();
  for (int t = 0; t <= static_cast<int>(StopTag::NumericalFailure); ++t)
    j[std::to_string(t)] = to_string(static_cast<StopTag>(t));
  return dump(j, indent);
}

}  // namespace sdyn
