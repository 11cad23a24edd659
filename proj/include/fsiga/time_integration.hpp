#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <variant>

#include "fsiga/analytic_waves.hpp"
#include "fsiga/diagnostics.hpp"
#include "fsiga/formulations.hpp"
#include "fsiga/state.hpp"

namespace fsiga {

/// End-of-step value from the midpoint value: uⁿ⁺¹ = 2u^{n+1/2} − uⁿ.
inline Vector midpoint_extrapolate(const Vector& current, const Vector& midpoint) {
  return 2.0 * midpoint - current;
}

/// Midpoint rate u_t^{n+1/2} = (uⁿ⁺¹ − uⁿ)/Δt.
inline Vector midpoint_rate(const Vector& current, const Vector& next, double dt) {
  return (next - current) / dt;
}

/// α is never stored; it is always 2/Δt.
struct StepperConfig {
  double dt = 0;
  double g = 9.81;
  FormulationKind formulation = FormulationKind::Monolithic;
  SolverOptions solver{};
  /// Segregated paths: maximum interior/surface sweeps per step. 1 lags φ_z by one step.
  int coupling_iterations = 50;
  /// Segregated paths: sweeps stop when ‖Δη^{n+1/2}‖ ≤ coupling_tolerance ‖η^{n+1/2}‖.
  double coupling_tolerance = 1e-14;
};

/// Worst-case solver and coupling statistics accumulated over steps.
struct StepStats {
  double max_residual = 0;
  int max_coupling_sweeps = 0;

  void record(const SolveReport& r) { max_residual = std::max(max_residual, r.relative_residual); }
};

/// Monolithic midpoint step: solve for (φ^{n+1/2}, η^{n+1/2}), then extrapolate.
WaveState step_first_order(const WaveState& state, const MonolithicSystem& system,
                           StepStats* stats = nullptr);

/// Segregated step: free-surface midpoint solve with the interior φ_z, then the
/// interior Dirichlet solve with the new surface values. Sweeps repeat until the
/// midpoint φ_z is consistent or the sweep limit is hit.
WaveState step_first_order(const WaveState& state, const SegregatedSystems& system,
                           int coupling_iterations, double coupling_tolerance,
                           StepStats* stats = nullptr);

/// Reduced midpoint step: solve for φ^{n+1/2}, then
///   φⁿ⁺¹ = 2φ^{n+1/2} − φⁿ,  φ_t^{n+1/2} = (φⁿ⁺¹ − φⁿ)/Δt,  φ_tⁿ⁺¹ = 2φ_t^{n+1/2} − φ_tⁿ.
WaveState step_second_order(const WaveState& state, const ReducedSystem& system,
                            const SparseMatrix& restriction, StepStats* stats = nullptr);

/// Owns the system of one formulation and advances states with it.
class Stepper {
 public:
  Stepper(const Discretization& disc, StepperConfig config);

  WaveState step(const WaveState& state);
  Energies energies(const WaveState& state) const;

  /// Converts a projected (φ, η) initial condition into this formulation's layout:
  /// reduced → φ_t = −gη; segregated → φ replaced by the harmonic extension of its trace.
  WaveState prepare(WaveState projected) const;

  const StepperConfig& config() const { return config_; }
  const StepStats& stats() const { return stats_; }

 private:
  const Discretization* disc_;
  StepperConfig config_;
  std::variant<MonolithicSystem, ReducedSystem, SegregatedSystems> system_;
  StepStats stats_;
};

struct SimulationResult {
  EnergyTrace energy;
  TimeSeries probe;  // (t, η(x₀, t)) when a probe point was requested
  WaveState final_state;
  StepStats stats;
};

using StateObserver = std::function<void(const WaveState&)>;

/// Runs n_steps steps from `initial` (already in the formulation's layout), recording
/// energies at every integer time level and optionally η at the probe abscissa.
SimulationResult run_simulation(const Discretization& disc, const StepperConfig& config,
                                const WaveState& initial, long n_steps,
                                std::optional<double> probe_x = std::nullopt,
                                const StateObserver& observer = {});

}  // namespace fsiga
