#include "fsiga/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace fsiga {
namespace {

namespace pt = boost::property_tree;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  double v = 0;
  const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || end != t.data() + t.size() || t.empty() || !std::isfinite(v)) {
    throw ConfigError(field, "expected a number, got '" + text + "'");
  }
  return v;
}

int to_int(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  int v = 0;
  const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || end != t.data() + t.size() || t.empty()) {
    throw ConfigError(field, "expected an integer, got '" + text + "'");
  }
  return v;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T, typename F>
std::string join(const std::vector<T>& v, F f) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + f(v[i]);
  return s;
}

template <typename F>
auto parse_field(const std::string& field, F parse) {
  try {
    return parse();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(field, e.what());
  }
}

BasisKind parse_basis_kind(const std::string& s) {
  if (s == "lagrange") return BasisKind::LagrangeFE;
  if (s == "bspline") return BasisKind::BSpline;
  throw ParameterError("unknown basis '" + s + "' (lagrange, bspline)");
}

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"experiment", {"name", "kind", "formulation"}},
      {"basis", {"kind", "degree"}},
      {"mesh", {"sizes", "length", "depth"}},
      {"wave", {"gravity", "wavelength", "amplitude"}},
      {"time", {"policy", "dt", "steps", "periods", "end_time"}},
      {"dispersion", {"kh"}},
      {"output", {"probe_x"}},
      {"solver", {"method", "tolerance", "coupling_iterations", "coupling_tolerance"}},
  };
  return s;
}

}  // namespace

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::SingleRun: return "single_run";
    case ExperimentKind::EnergyTraceSweep: return "energy_trace_sweep";
    case ExperimentKind::PeriodConvergence: return "period_convergence";
    case ExperimentKind::ErrorConvergence: return "error_convergence";
    case ExperimentKind::DispersionSweep: return "dispersion_sweep";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(const std::string& s) {
  for (auto k : {ExperimentKind::SingleRun, ExperimentKind::EnergyTraceSweep,
                 ExperimentKind::PeriodConvergence, ExperimentKind::ErrorConvergence,
                 ExperimentKind::DispersionSweep}) {
    if (s == to_string(k)) return k;
  }
  throw ParameterError("unknown experiment kind '" + s + "'");
}

std::string to_string(TimestepPolicy p) {
  switch (p) {
    case TimestepPolicy::CoupledToMesh: return "coupled";
    case TimestepPolicy::Fixed: return "fixed";
    case TimestepPolicy::StepsPerPeriod: return "steps_per_period";
    case TimestepPolicy::StepsPerRun: return "steps_per_run";
  }
  return "unknown";
}

TimestepPolicy parse_timestep_policy(const std::string& s) {
  for (auto p : {TimestepPolicy::CoupledToMesh, TimestepPolicy::Fixed,
                 TimestepPolicy::StepsPerPeriod, TimestepPolicy::StepsPerRun}) {
    if (s == to_string(p)) return p;
  }
  throw ParameterError("unknown timestep policy '" + s + "'");
}

SolveMethod parse_solve_method(const std::string& s) {
  for (auto m : {SolveMethod::JacobiCG, SolveMethod::JacobiBiCGSTAB, SolveMethod::SparseLU,
                 SolveMethod::Dense}) {
    if (s == to_string(m)) return m;
  }
  throw ParameterError("unknown solver '" + s + "'");
}

double ExperimentConfig::wavenumber() const { return 2 * std::numbers::pi / wavelength; }

void ExperimentConfig::validate() const {
  auto positive = [](const char* field, double v) {
    if (!(v > 0) || !std::isfinite(v)) throw ConfigError(field, "must be positive");
  };
  if (formulations.empty()) throw ConfigError("experiment.formulation", "must not be empty");
  if (degree < 1 || degree > kMaxDegree) {
    throw ConfigError("basis.degree", "must be in [1, " + std::to_string(kMaxDegree) + "]");
  }
  if (mesh_sizes.empty()) throw ConfigError("mesh.sizes", "must not be empty");
  for (int n : mesh_sizes) {
    if (n < 1) throw ConfigError("mesh.sizes", "element counts must be positive");
    if (basis == BasisKind::BSpline && n < degree + 1) {
      throw ConfigError("mesh.sizes", "periodic splines need at least degree+1 elements");
    }
  }
  if (kind == ExperimentKind::ErrorConvergence) {
    for (std::size_t i = 1; i < mesh_sizes.size(); ++i) {
      if (mesh_sizes[i] <= mesh_sizes[i - 1]) {
        throw ConfigError("mesh.sizes", "must increase for error convergence");
      }
    }
  }
  positive("mesh.length", length);
  positive("mesh.depth", depth);
  positive("wave.gravity", gravity);
  positive("wave.wavelength", wavelength);
  positive("wave.amplitude", amplitude);
  switch (timestep) {
    case TimestepPolicy::Fixed: positive("time.dt", dt); break;
    case TimestepPolicy::StepsPerPeriod:
    case TimestepPolicy::StepsPerRun:
      if (steps < 1) throw ConfigError("time.steps", "must be positive");
      break;
    case TimestepPolicy::CoupledToMesh: break;
  }
  if (end_time) {
    positive("time.end_time", *end_time);
  } else {
    positive("time.periods", periods);
  }
  if (kind == ExperimentKind::DispersionSweep) {
    if (kh.empty()) throw ConfigError("dispersion.kh", "must not be empty");
    for (double v : kh) positive("dispersion.kh", v);
  }
  if (probe_x < 0 || probe_x > length) throw ConfigError("output.probe_x", "must lie in [0, L]");
  positive("solver.tolerance", tolerance);
  if (coupling_iterations < 1) throw ConfigError("solver.coupling_iterations", "must be >= 1");
  positive("solver.coupling_tolerance", coupling_tolerance);
}

ExperimentConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("line " + std::to_string(e.line()), e.message());
  }
  for (const auto& [section, body] : tree) {
    const auto it = schema().find(section);
    if (it == schema().end()) {
      if (body.empty() && !body.data().empty()) {
        throw ConfigError(section, "keys must be inside a [section]");
      }
      throw ConfigError(section, "unknown section");
    }
    for (const auto& [key, value] : body) {
      if (!it->second.count(key)) throw ConfigError(section + "." + key, "unknown key");
    }
  }

  ExperimentConfig c;
  auto get = [&](const std::string& field) -> std::optional<std::string> {
    auto v = tree.get_optional<std::string>(pt::ptree::path_type(field, '.'));
    if (v) return trim(*v);
    return std::nullopt;
  };
  auto number = [&](const std::string& field, double& target) {
    if (auto v = get(field)) target = to_double(field, *v);
  };
  auto integer = [&](const std::string& field, int& target) {
    if (auto v = get(field)) target = to_int(field, *v);
  };

  if (auto v = get("experiment.name")) c.name = *v;
  if (auto v = get("experiment.kind")) {
    c.kind = parse_field("experiment.kind", [&] { return parse_experiment_kind(*v); });
  }
  if (auto v = get("experiment.formulation")) {
    c.formulations.clear();
    for (const auto& s : split_list(*v)) {
      c.formulations.push_back(
          parse_field("experiment.formulation", [&] { return parse_formulation(s); }));
    }
  }
  if (auto v = get("basis.kind")) {
    c.basis = parse_field("basis.kind", [&] { return parse_basis_kind(*v); });
  }
  integer("basis.degree", c.degree);
  if (auto v = get("mesh.sizes")) {
    c.mesh_sizes.clear();
    for (const auto& s : split_list(*v)) c.mesh_sizes.push_back(to_int("mesh.sizes", s));
  }
  number("mesh.length", c.length);
  number("mesh.depth", c.depth);
  number("wave.gravity", c.gravity);
  number("wave.wavelength", c.wavelength);
  c.amplitude = 0.01 * c.wavelength;
  number("wave.amplitude", c.amplitude);
  if (auto v = get("time.policy")) {
    c.timestep = parse_field("time.policy", [&] { return parse_timestep_policy(*v); });
  }
  number("time.dt", c.dt);
  integer("time.steps", c.steps);
  number("time.periods", c.periods);
  if (auto v = get("time.end_time")) c.end_time = to_double("time.end_time", *v);
  if (auto v = get("dispersion.kh")) {
    c.kh.clear();
    for (const auto& s : split_list(*v)) c.kh.push_back(to_double("dispersion.kh", s));
  }
  number("output.probe_x", c.probe_x);
  if (auto v = get("solver.method")) {
    c.solver = parse_field("solver.method", [&] { return parse_solve_method(*v); });
  }
  number("solver.tolerance", c.tolerance);
  integer("solver.coupling_iterations", c.coupling_iterations);
  number("solver.coupling_tolerance", c.coupling_tolerance);
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open config file");
  return parse_config(in);
}

void write_config(std::ostream& out, const ExperimentConfig& c) {
  out << "[experiment]\n"
      << "name = " << c.name << "\n"
      << "kind = " << to_string(c.kind) << "\n"
      << "formulation = "
      << join(c.formulations, [](FormulationKind f) { return to_string(f); }) << "\n\n"
      << "[basis]\n"
      << "kind = " << to_string(c.basis) << "\n"
      << "degree = " << c.degree << "\n\n"
      << "[mesh]\n"
      << "sizes = " << join(c.mesh_sizes, [](int n) { return std::to_string(n); }) << "\n"
      << "length = " << fmt(c.length) << "\n"
      << "depth = " << fmt(c.depth) << "\n\n"
      << "[wave]\n"
      << "gravity = " << fmt(c.gravity) << "\n"
      << "wavelength = " << fmt(c.wavelength) << "\n"
      << "amplitude = " << fmt(c.amplitude) << "\n\n"
      << "[time]\n"
      << "policy = " << to_string(c.timestep) << "\n"
      << "dt = " << fmt(c.dt) << "\n"
      << "steps = " << c.steps << "\n"
      << "periods = " << fmt(c.periods) << "\n";
  if (c.end_time) out << "end_time = " << fmt(*c.end_time) << "\n";
  out << "\n[dispersion]\n"
      << "kh = " << join(c.kh, fmt) << "\n\n"
      << "[output]\n"
      << "probe_x = " << fmt(c.probe_x) << "\n\n"
      << "[solver]\n"
      << "method = " << to_string(c.solver) << "\n"
      << "tolerance = " << fmt(c.tolerance) << "\n"
      << "coupling_iterations = " << c.coupling_iterations << "\n"
      << "coupling_tolerance = " << fmt(c.coupling_tolerance) << "\n";
}

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["name"] = c.name;
  j["kind"] = to_string(c.kind);
  auto& f = j["formulations"] = nlohmann::json::array();
  for (auto k : c.formulations) f.push_back(to_string(k));
  j["basis"] = {{"kind", to_string(c.basis)}, {"degree", c.degree}};
  j["mesh"] = {{"sizes", c.mesh_sizes}, {"length", c.length}, {"depth", c.depth}};
  j["wave"] = {{"gravity", c.gravity}, {"wavelength", c.wavelength}, {"amplitude", c.amplitude}};
  j["time"] = {{"policy", to_string(c.timestep)},
               {"dt", c.dt},
               {"steps", c.steps},
               {"periods", c.periods},
               {"end_time", c.end_time ? nlohmann::json(*c.end_time) : nlohmann::json()}};
  j["dispersion"] = {{"kh", c.kh}};
  j["output"] = {{"probe_x", c.probe_x}};
  j["solver"] = {{"method", to_string(c.solver)},
                 {"tolerance", c.tolerance},
                 {"coupling_iterations", c.coupling_iterations},
                 {"coupling_tolerance", c.coupling_tolerance}};
  return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  try {
    c.name = j.at("name").get<std::string>();
    c.kind = parse_experiment_kind(j.at("kind").get<std::string>());
    c.formulations.clear();
    for (const auto& f : j.at("formulations")) c.formulations.push_back(parse_formulation(f));
    c.basis = parse_basis_kind(j.at("basis").at("kind"));
    c.degree = j.at("basis").at("degree");
    c.mesh_sizes = j.at("mesh").at("sizes").get<std::vector<int>>();
    c.length = j.at("mesh").at("length");
    c.depth = j.at("mesh").at("depth");
    c.gravity = j.at("wave").at("gravity");
    c.wavelength = j.at("wave").at("wavelength");
    c.amplitude = j.at("wave").at("amplitude");
    const auto& t = j.at("time");
    c.timestep = parse_timestep_policy(t.at("policy"));
    c.dt = t.at("dt");
    c.steps = t.at("steps");
    c.periods = t.at("periods");
    if (!t.at("end_time").is_null()) c.end_time = t.at("end_time").get<double>();
    c.kh = j.at("dispersion").at("kh").get<std::vector<double>>();
    c.probe_x = j.at("output").at("probe_x");
    const auto& s = j.at("solver");
    c.solver = parse_solve_method(s.at("method"));
    c.tolerance = s.at("tolerance");
    c.coupling_iterations = s.at("coupling_iterations");
    c.coupling_tolerance = s.at("coupling_tolerance");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("manifest", e.what());
  }
  c.validate();
  return c;
}

}  // namespace fsiga
