#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "fsiga/config.hpp"
#include "fsiga/time_integration.hpp"

namespace fsiga {

/// One CSV cell; monostate prints as an empty field.
using Cell = std::variant<std::monostate, double, long long, std::string>;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
};

/// Header plus rows, comma separated, doubles with 17 significant digits.
/// Written to a temporary sibling and renamed into place.
void emit_csv(const Table& table, const std::filesystem::path& path);

Table energy_table(const EnergyTrace& trace);
Table probe_table(const TimeSeries& probe);
Table convergence_table(const ConvergenceTable& table);

/// Δt and step count for one run of `config` on an n-element mesh of a wave with period T.
struct TimeGrid {
  double dt = 0;
  long steps = 0;
};
TimeGrid resolve_time_grid(const ExperimentConfig& config, int n_elements, double period);

/// Everything one simulation produced, plus what it was run with.
struct RunRecord {
  FormulationKind formulation{};
  int elements = 0;
  int dofs = 0;
  int dofs_x = 0;
  double depth = 0;
  double kh = 0;
  double exact_period = 0;
  TimeGrid grid;
  SimulationResult sim;
  double period = 0;     // NaN when the probe has too few zero crossings
  double error = 0;      // triple-norm error at the end time (ErrorConvergence only)
};

/// Runs one simulation of the Airy wave on an n-element mesh of the given depth.
RunRecord run_single(const ExperimentConfig& config, FormulationKind formulation, int n_elements,
                     double depth);

struct RunOptions {
  std::filesystem::path out_dir;  // empty: compute only, write nothing
  int threads = 1;
};

struct ExperimentResult {
  std::vector<RunRecord> runs;  // in config order: formulations outer, sizes (or kH) inner
  std::vector<std::pair<FormulationKind, ConvergenceTable>> convergence;
  std::vector<std::string> files;  // relative to out_dir
  nlohmann::json summary;
};

ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

}  // namespace fsiga
