#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fsiga/experiment.hpp"

using namespace fsiga;
namespace fs = std::filesystem;

namespace {

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("fsiga_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string field_of(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST_CASE("defaults") {
  const auto c = parse("");
  CHECK(c.kind == ExperimentKind::SingleRun);
  CHECK(c.gravity == 9.81);
  CHECK(c.length == 1.0);
  CHECK(c.depth == 1.0);
  CHECK(c.amplitude == doctest::Approx(0.01));
  CHECK(c.formulations == std::vector{FormulationKind::Monolithic});
  CHECK(parse("[wave]\nwavelength = 2\n").amplitude == doctest::Approx(0.02));
}

TEST_CASE("parsing a full config") {
  const auto c = parse(R"(
; comment
[experiment]
name = demo
kind = period_convergence
formulation = monolithic, segregated_lm
[basis]
kind = bspline
degree = 3
[mesh]
sizes = 4, 6
[time]
policy = steps_per_period
steps = 100
periods = 12
[solver]
method = jacobi-cg
tolerance = 1e-11
)");
  CHECK(c.name == "demo");
  CHECK(c.kind == ExperimentKind::PeriodConvergence);
  CHECK(c.formulations.size() == 2);
  CHECK(c.basis == BasisKind::BSpline);
  CHECK(c.mesh_sizes == std::vector{4, 6});
  CHECK(c.timestep == TimestepPolicy::StepsPerPeriod);
  CHECK(c.steps == 100);
  CHECK(c.solver == SolveMethod::JacobiCG);
  CHECK(c.tolerance == 1e-11);
}

TEST_CASE("field-level validation errors") {
  CHECK(field_of("[basis]\ndegree = 7\n") == "basis.degree");
  CHECK(field_of("[basis]\ndegree = two\n") == "basis.degree");
  CHECK(field_of("[mesh]\nsizes =\n") == "mesh.sizes");
  CHECK(field_of("[mesh]\ndepth = -1\n") == "mesh.depth");
  CHECK(field_of("[wave]\ngravity = 0\n") == "wave.gravity");
  CHECK(field_of("[experiment]\nformulation = staggered\n") == "experiment.formulation");
  CHECK(field_of("[experiment]\nkind = nope\n") == "experiment.kind");
  CHECK(field_of("[time]\npolicy = fixed\n") == "time.dt");
  CHECK(field_of("[time]\npolicy = steps_per_run\n") == "time.steps");
  CHECK(field_of("[mesh]\ncolour = blue\n") == "mesh.colour");
  CHECK(field_of("[colour]\nx = 1\n") == "colour");
  CHECK(field_of("[basis]\nkind = bspline\ndegree = 3\n[mesh]\nsizes = 2\n") == "mesh.sizes");
  CHECK(field_of("[experiment]\nkind = error_convergence\n[mesh]\nsizes = 8, 4, 16\n") == "mesh.sizes");
  CHECK(field_of("[solver]\ncoupling_iterations = 0\n") == "solver.coupling_iterations");
}

TEST_CASE("property: text and JSON round trips reproduce the config") {
  ExperimentConfig c;
  c.name = "round";
  c.kind = ExperimentKind::DispersionSweep;
  c.formulations = {FormulationKind::Reduced, FormulationKind::Segregated};
  c.basis = BasisKind::BSpline;
  c.degree = 3;
  c.mesh_sizes = {8};
  c.amplitude = 0.0123456789012345;
  c.timestep = TimestepPolicy::Fixed;
  c.dt = 1.0 / 3.0;
  c.end_time = 7.25;
  c.kh = {0.1, 1.0 / 7.0};
  c.tolerance = 3e-13;
  std::ostringstream os;
  write_config(os, c);
  const auto back = parse(os.str());
  CHECK(to_json(back) == to_json(c));
  const auto from_json = config_from_json(nlohmann::json::parse(to_json(c).dump()));
  CHECK(to_json(from_json) == to_json(c));
}

TEST_CASE("CSV emission") {
  const fs::path dir = scratch("csv");
  emit_csv(Table{{"a", "b"}, {}}, dir / "empty.csv");
  CHECK(slurp(dir / "empty.csv") == "a,b\n");
  ConvergenceTable t;
  t.add_row(0.5, 10, 0.25);
  t.add_row(0.25, 20, 0.0625);
  emit_csv(convergence_table(t), dir / "conv.csv");
  CHECK(slurp(dir / "conv.csv") == "h,dofs,error,rate\n0.5,10,0.25,\n0.25,20,0.0625,2\n");
  EnergyTrace e;
  e.append(0.1, 1.0 / 3.0, 0);
  emit_csv(energy_table(e), dir / "e.csv");
  CHECK(slurp(dir / "e.csv") == "t,E_kin,E_pot,E_tot\n0.10000000000000001,0.33333333333333331,0,0.33333333333333331\n");
  CHECK_THROWS(emit_csv(Table{{"a"}, {}}, "/proc/forbidden/x.csv"));
  fs::remove_all(dir);
}

TEST_CASE("time grid policies") {
  ExperimentConfig c;
  c.degree = 2;
  c.periods = 3;
  auto g = resolve_time_grid(c, 10, 0.8);
  CHECK(g.dt == doctest::Approx(0.1 * 0.8 / 20));
  CHECK(g.steps == 600);
  c.timestep = TimestepPolicy::StepsPerRun;
  c.steps = 1000;
  c.periods = 0.25;
  g = resolve_time_grid(c, 10, 0.8);
  CHECK(g.steps == 1000);
  CHECK(g.dt == doctest::Approx(0.2 / 1000));
  c.timestep = TimestepPolicy::Fixed;
  c.dt = 0.01;
  c.end_time = 1.0;
  CHECK(resolve_time_grid(c, 10, 0.8).steps == 100);
}

TEST_CASE("experiments write deterministic outputs and a re-parsable manifest") {
  ExperimentConfig c;
  c.name = "det";
  c.kind = ExperimentKind::EnergyTraceSweep;
  c.formulations = {FormulationKind::Monolithic, FormulationKind::Segregated};
  c.mesh_sizes = {4, 6};
  c.periods = 1;
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  const auto ra = run_experiment(c, {a, 1});
  const auto rb = run_experiment(c, {b, 3});
  REQUIRE(ra.files == rb.files);
  for (const auto& f : ra.files) {
    if (f == "manifest.json") continue;
    CHECK(slurp(a / f) == slurp(b / f));
  }
  CHECK(slurp(a / "manifest.json") == slurp(b / "manifest.json"));
  const auto manifest = nlohmann::json::parse(slurp(a / "manifest.json"));
  CHECK(to_json(config_from_json(manifest.at("config"))) == to_json(c));
  CHECK(fs::exists(a / "energy_trace/monolithic/trace_4.csv"));
  CHECK(fs::exists(a / "summary.csv"));
  CHECK(ra.runs.size() == 4);
  CHECK(ra.runs[0].sim.energy.max_relative_drift() < 1e-10);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("each experiment kind produces its table") {
  const fs::path dir = scratch("kinds");
  ExperimentConfig c;
  c.periods = 11;
  c.kind = ExperimentKind::PeriodConvergence;
  c.mesh_sizes = {6};
  auto r = run_experiment(c, {dir / "p"});
  CHECK(fs::exists(dir / "p/period.csv"));
  CHECK(std::abs(r.runs[0].period - r.runs[0].exact_period) < 0.1 * r.runs[0].exact_period);

  c.kind = ExperimentKind::ErrorConvergence;
  c.mesh_sizes = {2, 4, 8};
  c.timestep = TimestepPolicy::StepsPerRun;
  c.steps = 20;
  c.periods = 0.25;
  r = run_experiment(c, {dir / "e"});
  CHECK(fs::exists(dir / "e/convergence_monolithic.csv"));
  REQUIRE(r.convergence.size() == 1);
  CHECK(r.convergence[0].second.size() == 3);

  c.kind = ExperimentKind::DispersionSweep;
  c.basis = BasisKind::BSpline;
  c.degree = 2;
  c.mesh_sizes = {4};
  c.kh = {1.0, 3.0};
  c.timestep = TimestepPolicy::StepsPerPeriod;
  c.steps = 40;
  c.periods = 11;
  r = run_experiment(c, {dir / "d"});
  const std::string table = slurp(dir / "d/dispersion.csv");
  CHECK(table.rfind("formulation,kh,depth,dt,steps,period,c_p_numeric,c_p_analytic,relative_error\n", 0) == 0);
  CHECK(r.runs.size() == 2);
  CHECK(r.runs[1].depth == doctest::Approx(3.0 / (2 * std::numbers::pi)));

  c.kind = ExperimentKind::PeriodConvergence;
  c.periods = 2;  // too short for 20 crossings
  CHECK_THROWS_AS(run_experiment(c, {}), Error);
  fs::remove_all(dir);
}
