#include "fsiga/experiment.hpp"

#include <atomic>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <thread>

namespace fsiga {
namespace {

namespace fs = std::filesystem;

std::string format_cell(const Cell& c) {
  struct Visitor {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(double v) const {
      if (std::isnan(v)) return "";
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      return buf;
    }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(const std::string& s) const { return s; }
  };
  return std::visit(Visitor{}, c);
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + ": " + std::strerror(errno));
    out << text;
    out.flush();
    if (!out) throw Error("cannot write " + tmp.string() + ": " + std::strerror(errno));
  }
  fs::rename(tmp, path);
}

bool has_probe(const ExperimentConfig& c) {
  return c.kind == ExperimentKind::SingleRun || c.kind == ExperimentKind::PeriodConvergence ||
         c.kind == ExperimentKind::DispersionSweep;
}

// Runs fn(0..count-1) on up to `threads` workers; results are indexed, so order is fixed.
template <typename F>
void parallel_for(int count, int threads, F fn) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

void emit_csv(const Table& table, const fs::path& path) {
  std::string text;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    text += (i ? "," : "") + table.header[i];
  }
  text += "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) text += (i ? "," : "") + format_cell(row[i]);
    text += "\n";
  }
  write_text(path, text);
}

Table energy_table(const EnergyTrace& trace) {
  Table t{{"t", "E_kin", "E_pot", "E_tot"}, {}};
  for (const auto& r : trace.records()) t.rows.push_back({r.t, r.kinetic, r.potential, r.total});
  return t;
}

Table probe_table(const TimeSeries& probe) {
  Table t{{"t", "eta"}, {}};
  for (const auto& [time, eta] : probe) t.rows.push_back({time, eta});
  return t;
}

Table convergence_table(const ConvergenceTable& table) {
  Table t{{"h", "dofs", "error", "rate"}, {}};
  for (const auto& r : table.rows()) {
    t.rows.push_back({r.h, static_cast<long long>(r.dofs), r.error, r.rate});
  }
  return t;
}

TimeGrid resolve_time_grid(const ExperimentConfig& c, int n_elements, double period) {
  const double duration = c.end_time ? *c.end_time : c.periods * period;
  TimeGrid g;
  switch (c.timestep) {
    case TimestepPolicy::CoupledToMesh: {
      const double h = c.length / n_elements;
      g.dt = h / c.wavelength * period / (10.0 * c.degree);
      break;
    }
    case TimestepPolicy::Fixed: g.dt = c.dt; break;
    case TimestepPolicy::StepsPerPeriod: g.dt = period / c.steps; break;
    case TimestepPolicy::StepsPerRun:
      g.steps = c.steps;
      g.dt = duration / c.steps;
      return g;
  }
  g.steps = std::lround(duration / g.dt);
  return g;
}

RunRecord run_single(const ExperimentConfig& c, FormulationKind formulation, int n, double depth) {
  const AiryWave wave = AiryWave::make(c.amplitude, c.wavenumber(), depth, c.gravity);
  Discretization disc(build_mesh(c.basis, c.degree, n, n, c.length, depth, true));

  RunRecord r;
  r.formulation = formulation;
  r.elements = n;
  r.dofs = disc.volume_dofs();
  r.dofs_x = disc.mesh.dofs_x();
  r.depth = depth;
  r.kh = wave.k * depth;
  r.exact_period = wave.period();
  r.grid = resolve_time_grid(c, n, r.exact_period);

  StepperConfig sc;
  sc.dt = r.grid.dt;
  sc.g = c.gravity;
  sc.formulation = formulation;
  sc.solver = {c.solver, c.tolerance};
  sc.coupling_iterations = c.coupling_iterations;
  sc.coupling_tolerance = c.coupling_tolerance;

  const WaveState initial = Stepper(disc, sc).prepare(project_initial_condition(disc, wave));
  const auto probe = has_probe(c) ? std::optional<double>(c.probe_x) : std::nullopt;
  r.sim = run_simulation(disc, sc, initial, r.grid.steps, probe);

  r.period = std::numeric_limits<double>::quiet_NaN();
  if (c.kind == ExperimentKind::PeriodConvergence || c.kind == ExperimentKind::DispersionSweep) {
    r.period = estimate_period(r.sim.probe);
  } else if (probe) {
    try {
      r.period = estimate_period(r.sim.probe);
    } catch (const DiagnosticError&) {
      // Short single runs simply report no period.
    }
  }
  if (c.kind == ExperimentKind::ErrorConvergence) {
    r.error = triple_norm_error(r.sim.final_state, wave, disc.mesh, c.gravity, r.grid.dt,
                                formulation);
  }
  return r;
}

ExperimentResult run_experiment(const ExperimentConfig& c, const RunOptions& options) {
  c.validate();
  const bool dispersion = c.kind == ExperimentKind::DispersionSweep;
  const int per_formulation =
      static_cast<int>(dispersion ? c.kh.size() : c.mesh_sizes.size());
  const int count = per_formulation * static_cast<int>(c.formulations.size());

  ExperimentResult result;
  result.runs.resize(count);
  parallel_for(count, options.threads, [&](int i) {
    const FormulationKind f = c.formulations[i / per_formulation];
    const int j = i % per_formulation;
    try {
      if (dispersion) {
        const double depth = c.kh[j] / c.wavenumber();
        result.runs[i] = run_single(c, f, c.mesh_sizes.front(), depth);
      } else {
        result.runs[i] = run_single(c, f, c.mesh_sizes[j], c.depth);
      }
    } catch (const std::exception& e) {
      const std::string where = dispersion ? "kH = " + format_cell(c.kh[j])
                                           : "n = " + std::to_string(c.mesh_sizes[j]);
      throw Error(to_string(f) + ", " + where + ": " + e.what());
    }
  });

  auto& summary = result.summary;
  summary = nlohmann::json::object();
  auto& runs_json = summary["runs"] = nlohmann::json::array();
  for (const auto& r : result.runs) {
    nlohmann::json j{{"formulation", to_string(r.formulation)},
                     {"elements", r.elements},
                     {"dofs", r.dofs},
                     {"dt", r.grid.dt},
                     {"steps", r.grid.steps},
                     {"energy_drift", r.sim.energy.max_relative_drift()},
                     {"max_solver_residual", r.sim.stats.max_residual}};
    if (dispersion) j["kh"] = r.kh;
    if (!std::isnan(r.period)) {
      j["period"] = r.period;
      j["period_relative_error"] = std::abs(r.period - r.exact_period) / r.exact_period;
    }
    if (c.kind == ExperimentKind::ErrorConvergence) j["error"] = r.error;
    runs_json.push_back(j);
  }

  if (c.kind == ExperimentKind::ErrorConvergence) {
    auto& rates = summary["fitted_rates"] = nlohmann::json::object();
    for (std::size_t f = 0; f < c.formulations.size(); ++f) {
      ConvergenceTable table;
      for (int j = 0; j < per_formulation; ++j) {
        const auto& r = result.runs[f * per_formulation + j];
        table.add_row(c.length / r.elements, r.dofs, r.error);
      }
      if (table.size() >= 3) rates[to_string(c.formulations[f])] = fit_convergence_rate(table);
      result.convergence.emplace_back(c.formulations[f], std::move(table));
    }
  }

  if (options.out_dir.empty()) return result;
  const fs::path& out = options.out_dir;
  auto emit = [&](const Table& t, const std::string& rel) {
    emit_csv(t, out / rel);
    result.files.push_back(rel);
  };

  switch (c.kind) {
    case ExperimentKind::SingleRun:
    case ExperimentKind::EnergyTraceSweep: {
      Table s{{"formulation", "n", "dofs", "dt", "steps", "E_tot_0", "max_relative_drift", "period"},
              {}};
      for (const auto& r : result.runs) {
        const std::string dir = "energy_trace/" + to_string(r.formulation) + "/";
        emit(energy_table(r.sim.energy), dir + "trace_" + std::to_string(r.elements) + ".csv");
        if (!r.sim.probe.empty()) {
          emit(probe_table(r.sim.probe),
               "probe/" + to_string(r.formulation) + "/probe_" + std::to_string(r.elements) +
                   ".csv");
        }
        s.rows.push_back({to_string(r.formulation), static_cast<long long>(r.elements),
                          static_cast<long long>(r.dofs), r.grid.dt,
                          static_cast<long long>(r.grid.steps),
                          r.sim.energy.records().front().total,
                          r.sim.energy.max_relative_drift(), r.period});
      }
      emit(s, "summary.csv");
      break;
    }
    case ExperimentKind::PeriodConvergence: {
      Table t{{"formulation", "n", "dofs_x", "dt", "steps", "period", "exact_period",
               "relative_error"},
              {}};
      for (const auto& r : result.runs) {
        t.rows.push_back({to_string(r.formulation), static_cast<long long>(r.elements),
                          static_cast<long long>(r.dofs_x), r.grid.dt,
                          static_cast<long long>(r.grid.steps), r.period, r.exact_period,
                          std::abs(r.period - r.exact_period) / r.exact_period});
      }
      emit(t, "period.csv");
      break;
    }
    case ExperimentKind::ErrorConvergence:
      for (const auto& [f, table] : result.convergence) {
        emit(convergence_table(table), "convergence_" + to_string(f) + ".csv");
      }
      break;
    case ExperimentKind::DispersionSweep: {
      Table t{{"formulation", "kh", "depth", "dt", "steps", "period", "c_p_numeric",
               "c_p_analytic", "relative_error"},
              {}};
      for (const auto& r : result.runs) {
        const double cp_num = c.wavelength / r.period;
        const double cp = phase_speed(c.wavenumber(), r.depth, c.gravity);
        t.rows.push_back({to_string(r.formulation), r.kh, r.depth, r.grid.dt,
                          static_cast<long long>(r.grid.steps), r.period, cp_num, cp,
                          std::abs(cp_num - cp) / cp});
      }
      emit(t, "dispersion.csv");
      break;
    }
  }

  nlohmann::json manifest;
  manifest["config"] = to_json(c);
  manifest["results"] = summary;
  manifest["files"] = result.files;
  write_text(out / "manifest.json", manifest.dump(2) + "\n");
  result.files.push_back("manifest.json");
  return result;
}

}  // namespace fsiga
