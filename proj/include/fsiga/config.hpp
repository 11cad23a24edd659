#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fsiga/basis.hpp"
#include "fsiga/formulations.hpp"

namespace fsiga {

enum class ExperimentKind {
  SingleRun,
  EnergyTraceSweep,
  PeriodConvergence,
  ErrorConvergence,
  DispersionSweep
};

std::string to_string(ExperimentKind k);
ExperimentKind parse_experiment_kind(const std::string& s);

enum class TimestepPolicy {
  CoupledToMesh,   // Δt = (h/λ) T / (10 p), h the element size
  Fixed,           // Δt given
  StepsPerPeriod,  // Δt = T / N
  StepsPerRun      // Δt = duration / N
};

std::string to_string(TimestepPolicy p);
TimestepPolicy parse_timestep_policy(const std::string& s);

/// Fully resolved experiment description. Defaults: unit square, periodic in x,
/// g = 9.81, one wavelength per domain and ξ = 0.01 λ.
struct ExperimentConfig {
  std::string name = "experiment";
  ExperimentKind kind = ExperimentKind::SingleRun;
  std::vector<FormulationKind> formulations{FormulationKind::Monolithic};

  BasisKind basis = BasisKind::LagrangeFE;
  int degree = 1;
  std::vector<int> mesh_sizes{6};  // elements per direction
  double length = 1.0;
  double depth = 1.0;

  double gravity = 9.81;
  double wavelength = 1.0;
  double amplitude = 0.01;

  TimestepPolicy timestep = TimestepPolicy::CoupledToMesh;
  double dt = 0;           // Fixed
  int steps = 0;           // StepsPerPeriod, StepsPerRun
  double periods = 10.0;   // run length in exact wave periods
  std::optional<double> end_time;  // overrides periods when set

  std::vector<double> kh{0.5, 1, 2, 4, 6};  // DispersionSweep only
  double probe_x = 0.0;

  SolveMethod solver = SolveMethod::SparseLU;
  double tolerance = kDefaultSolverTolerance;
  int coupling_iterations = 50;
  double coupling_tolerance = 1e-14;

  double wavenumber() const;
  /// Throws ConfigError naming the first invalid field.
  void validate() const;
};

/// Parses the key/value text format (INI sections). Unknown keys are errors.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

/// Writes the text format; parse_config(write_config(c)) reproduces c.
void write_config(std::ostream& out, const ExperimentConfig& c);

nlohmann::json to_json(const ExperimentConfig& c);
ExperimentConfig config_from_json(const nlohmann::json& j);

SolveMethod parse_solve_method(const std::string& s);

}  // namespace fsiga
