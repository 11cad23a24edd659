#include "fsiga/time_integration.hpp"

#include <cmath>

namespace fsiga {
namespace {

void record(StepStats* stats, const SolveReport& r) {
  if (stats) stats->record(r);
}

SolverOptions options_of(const StepperConfig& c) { return c.solver; }

}  // namespace

WaveState step_first_order(const WaveState& state, const MonolithicSystem& system,
                           StepStats* stats) {
  const int n = system.volume_dofs();
  const int s = system.surface_dofs();
  const auto sol = system.solve(system.rhs(state.phi, state.eta));
  record(stats, sol.report);
  WaveState next;
  next.phi = midpoint_extrapolate(state.phi, sol.x.head(n));
  next.eta = midpoint_extrapolate(state.eta, sol.x.tail(s));
  next.t = state.t + system.dt();
  next.step = state.step + 1;
  return next;
}

WaveState step_first_order(const WaveState& state, const SegregatedSystems& system,
                           int coupling_iterations, double coupling_tolerance,
                           StepStats* stats) {
  if (coupling_iterations < 1) throw ParameterError("coupling_iterations must be >= 1");
  const Vector phi_hat_n = system.trace(state.phi);
  const int s = static_cast<int>(phi_hat_n.size());

  // Fixed point on the midpoint interior field; the first sweep uses φⁿ.
  Vector phi_mid = state.phi;
  Vector eta_mid = state.eta;
  int sweeps = 0;
  for (int it = 0; it < coupling_iterations; ++it) {
    ++sweeps;
    const auto surf = system.surface_solve(system.surface_rhs(phi_hat_n, state.eta,
                                                              system.forcing(phi_mid)));
    record(stats, surf.report);
    SolveReport rep;
    phi_mid = system.interior_solve(surf.x.head(s), &rep);
    record(stats, rep);
    const double change = (surf.x.tail(s) - eta_mid).norm();
    eta_mid = surf.x.tail(s);
    if (it > 0 && change <= coupling_tolerance * std::max(eta_mid.norm(), 1e-300)) break;
  }
  if (stats) stats->max_coupling_sweeps = std::max(stats->max_coupling_sweeps, sweeps);

  WaveState next;
  next.phi = midpoint_extrapolate(state.phi, phi_mid);
  next.eta = midpoint_extrapolate(state.eta, eta_mid);
  next.t = state.t + system.dt();
  next.step = state.step + 1;
  return next;
}

WaveState step_second_order(const WaveState& state, const ReducedSystem& system,
                            const SparseMatrix& restriction, StepStats* stats) {
  const double dt = system.dt();
  const auto sol = system.solve(system.rhs(state.phi, state.phi_t));
  record(stats, sol.report);
  WaveState next;
  next.phi = midpoint_extrapolate(state.phi, sol.x);
  const Vector phi_t_mid = restriction * midpoint_rate(state.phi, next.phi, dt);
  next.phi_t = midpoint_extrapolate(state.phi_t, phi_t_mid);
  next.t = state.t + dt;
  next.step = state.step + 1;
  return next;
}

namespace {

std::variant<MonolithicSystem, ReducedSystem, SegregatedSystems> make_system(
    const Discretization& disc, const StepperConfig& c) {
  switch (c.formulation) {
    case FormulationKind::Monolithic:
      return build_monolithic(disc, c.g, c.dt, options_of(c));
    case FormulationKind::Reduced:
      return build_reduced(disc, c.g, c.dt, options_of(c));
    case FormulationKind::Segregated:
      return build_segregated(disc, c.g, c.dt, ForcingMode::VerticalDerivative, options_of(c));
    case FormulationKind::SegregatedLM:
      return build_segregated(disc, c.g, c.dt, ForcingMode::LagrangeMultiplier, options_of(c));
  }
  throw ParameterError("unknown formulation");
}

}  // namespace

Stepper::Stepper(const Discretization& disc, StepperConfig config)
    : disc_(&disc), config_(config), system_(make_system(disc, config)) {}

WaveState Stepper::step(const WaveState& state) {
  if (auto* m = std::get_if<MonolithicSystem>(&system_)) {
    return step_first_order(state, *m, &stats_);
  }
  if (auto* r = std::get_if<ReducedSystem>(&system_)) {
    return step_second_order(state, *r, disc_->restriction, &stats_);
  }
  return step_first_order(state, std::get<SegregatedSystems>(system_),
                          config_.coupling_iterations, config_.coupling_tolerance, &stats_);
}

Energies Stepper::energies(const WaveState& state) const {
  return compute_energies(state, disc_->stiffness, disc_->surface_mass, config_.g);
}

WaveState Stepper::prepare(WaveState projected) const {
  if (projected.phi.size() != disc_->volume_dofs() ||
      projected.eta.size() != disc_->surface_dofs()) {
    throw ParameterError("initial state does not match the discretization");
  }
  if (auto* seg = std::get_if<SegregatedSystems>(&system_)) {
    projected.phi = seg->interior_solve(seg->trace(projected.phi));
  } else if (std::holds_alternative<ReducedSystem>(system_)) {
    projected.phi_t = -config_.g * projected.eta;
    projected.eta.resize(0);
  }
  return projected;
}

SimulationResult run_simulation(const Discretization& disc, const StepperConfig& config,
                                const WaveState& initial, long n_steps,
                                std::optional<double> probe_x, const StateObserver& observer) {
  if (n_steps < 0) throw ParameterError("step count must be nonnegative");
  Stepper stepper(disc, config);
  SimulationResult out;
  WaveState state = initial;
  const auto sample = [&](const WaveState& s) {
    const auto e = stepper.energies(s);
    out.energy.append(s.t, e.kinetic, e.potential);
    if (probe_x) {
      const Vector eta = surface_elevation(s, config.g);
      out.probe.emplace_back(s.t, evaluate_surface(disc.mesh.basis_x(), eta, *probe_x));
    }
    if (observer) observer(s);
  };
  sample(state);
  for (long n = 0; n < n_steps; ++n) {
    state = stepper.step(state);
    // Time levels are recomputed from the step count to avoid drift in long runs.
    state.t = initial.t + static_cast<double>(state.step - initial.step) * config.dt;
    sample(state);
  }
  out.final_state = std::move(state);
  out.stats = stepper.stats();
  return out;
}

}  // namespace fsiga
