#include "fsiga/formulations.hpp"

#include <vector>

namespace fsiga {
namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

void append_block(Triplets& trip, const SparseMatrix& block, int row0, int col0, double scale) {
  for (int k = 0; k < block.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(block, k); it; ++it) {
      trip.emplace_back(row0 + it.row(), col0 + it.col(), scale * it.value());
    }
  }
}

void check_physics(double g, double dt) {
  if (!(g > 0)) throw ParameterError("gravity g must be positive");
  if (!(dt > 0)) throw ParameterError("time step must be positive");
}

// Nonsymmetric operators cannot go through CG.
SolveMethod nonsymmetric(SolveMethod m) {
  return m == SolveMethod::JacobiCG ? SolveMethod::JacobiBiCGSTAB : m;
}

}  // namespace

std::string to_string(FormulationKind k) {
  switch (k) {
    case FormulationKind::Monolithic: return "monolithic";
    case FormulationKind::Reduced: return "reduced";
    case FormulationKind::Segregated: return "segregated";
    case FormulationKind::SegregatedLM: return "segregated_lm";
  }
  return "unknown";
}

FormulationKind parse_formulation(const std::string& s) {
  for (auto k : {FormulationKind::Monolithic, FormulationKind::Reduced,
                 FormulationKind::Segregated, FormulationKind::SegregatedLM}) {
    if (s == to_string(k)) return k;
  }
  throw ParameterError("unknown formulation '" + s + "'");
}

Discretization::Discretization(TensorMesh m)
    : mesh(std::move(m)),
      trace(surface_trace(mesh)),
      stiffness(assemble_stiffness(mesh)),
      surface_mass(assemble_surface_mass(mesh, trace)),
      restriction(surface_restriction(mesh, trace)) {}

MonolithicSystem::MonolithicSystem(const Discretization& disc, double g, double dt,
                                   SolverOptions opts)
    : g_(g), dt_(dt), n_(disc.volume_dofs()), s_(disc.surface_dofs()) {
  check_physics(g, dt);
  const SparseMatrix& M = disc.surface_mass;
  const SparseMatrix& R = disc.restriction;
  const SparseMatrix Rt = R.transpose();
  rtm_ = Rt * M;
  rtm_r_ = rtm_ * R;
  m_r_ = M * R;

  const double alpha = 2.0 / dt;
  Triplets trip;
  append_block(trip, disc.stiffness, 0, 0, 1.0);
  append_block(trip, rtm_r_, 0, 0, alpha / (g * dt));
  append_block(trip, rtm_, 0, n_, alpha / 2.0 - 2.0 / dt);
  append_block(trip, m_r_, n_, 0, 1.0 / dt);
  append_block(trip, M, n_, n_, g / 2.0);
  SparseMatrix a(n_ + s_, n_ + s_);
  a.setFromTriplets(trip.begin(), trip.end());
  solver_ = LinearSolver(std::move(a), nonsymmetric(opts.method), opts.tolerance);
}

Vector MonolithicSystem::rhs(const Vector& phi_n, const Vector& eta_n) const {
  const double alpha = 2.0 / dt_;
  Vector b(n_ + s_);
  b.head(n_) = (alpha / g_) * (1.0 / dt_) * (rtm_r_ * phi_n) - (2.0 / dt_) * (rtm_ * eta_n);
  b.tail(s_) = (1.0 / dt_) * (m_r_ * phi_n);
  return b;
}

ReducedSystem::ReducedSystem(const Discretization& disc, double g, double dt, SolverOptions opts)
    : g_(g), dt_(dt) {
  check_physics(g, dt);
  const SparseMatrix Rt = disc.restriction.transpose();
  rtm_ = Rt * disc.surface_mass;
  rtm_r_ = rtm_ * disc.restriction;
  SparseMatrix a = disc.stiffness + (4.0 / (dt * dt * g)) * rtm_r_;
  solver_ = LinearSolver(std::move(a), opts.method, opts.tolerance);
}

Vector ReducedSystem::rhs(const Vector& phi_n, const Vector& phi_t_n) const {
  return (4.0 / (dt_ * dt_ * g_)) * (rtm_r_ * phi_n) + (2.0 / (dt_ * g_)) * (rtm_ * phi_t_n);
}

SegregatedSystems::SegregatedSystems(const Discretization& disc, double g, double dt,
                                     ForcingMode mode, SolverOptions opts)
    : g_(g), dt_(dt), mode_(mode), mass_(disc.surface_mass), trace_(disc.restriction) {
  check_physics(g, dt);
  if (mode == ForcingMode::VerticalDerivative) {
    flux_ = disc.surface_mass * surface_vertical_derivative(disc.mesh, disc.trace);
  } else {
    flux_ = disc.restriction * disc.stiffness;
  }

  // Interior Dirichlet problem: K with surface rows replaced by identity rows.
  const int n = disc.volume_dofs();
  std::vector<char> is_surface(n, 0);
  for (int d : disc.trace.surface_dof_indices) is_surface[d] = 1;
  Triplets trip;
  const SparseMatrix& K = disc.stiffness;
  for (int k = 0; k < K.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(K, k); it; ++it) {
      if (!is_surface[it.row()]) trip.emplace_back(it.row(), it.col(), it.value());
    }
  }
  for (int d : disc.trace.surface_dof_indices) trip.emplace_back(d, d, 1.0);
  SparseMatrix interior(n, n);
  interior.setFromTriplets(trip.begin(), trip.end());
  interior_ = LinearSolver(std::move(interior), nonsymmetric(opts.method), opts.tolerance);

  const int s = disc.surface_dofs();
  const double alpha = 2.0 / dt;
  const double c = g * g / (alpha * alpha);
  Triplets st;
  append_block(st, mass_, 0, 0, 2.0 / dt);
  append_block(st, mass_, 0, s, g);
  append_block(st, mass_, s, s, c * 2.0 / dt);
  SparseMatrix surf(2 * s, 2 * s);
  surf.setFromTriplets(st.begin(), st.end());
  surface_solver_ = LinearSolver(std::move(surf), SolveMethod::SparseLU, opts.tolerance);
}

Vector SegregatedSystems::interior_solve(const Vector& surface_values, SolveReport* report) const {
  Vector b = trace_.transpose() * surface_values;
  auto result = interior_.solve(b);
  if (report) *report = result.report;
  return result.x;
}

Vector SegregatedSystems::forcing(const Vector& phi) const { return flux_ * phi; }

Vector SegregatedSystems::surface_rhs(const Vector& phi_hat_n, const Vector& eta_n,
                                      const Vector& forcing) const {
  const int s = static_cast<int>(phi_hat_n.size());
  const double alpha = 2.0 / dt_;
  const double c = g_ * g_ / (alpha * alpha);
  Vector b(2 * s);
  b.head(s) = (2.0 / dt_) * (mass_ * phi_hat_n);
  b.tail(s) = c * (2.0 / dt_) * (mass_ * eta_n) + c * forcing;
  return b;
}

MonolithicSystem build_monolithic(const Discretization& disc, double g, double dt,
                                  SolverOptions opts) {
  return MonolithicSystem(disc, g, dt, opts);
}

ReducedSystem build_reduced(const Discretization& disc, double g, double dt, SolverOptions opts) {
  return ReducedSystem(disc, g, dt, opts);
}

SegregatedSystems build_segregated(const Discretization& disc, double g, double dt,
                                   ForcingMode mode, SolverOptions opts) {
  return SegregatedSystems(disc, g, dt, mode, opts);
}

Vector reconstruct_vertical_velocity(const Discretization& disc, const Vector& phi,
                                     VelocityMethod method) {
  if (phi.size() != disc.volume_dofs()) throw ParameterError("φ has the wrong length");
  if (method == VelocityMethod::DirectGradient) {
    return surface_vertical_derivative(disc.mesh, disc.trace) * phi;
  }
  const Vector load = disc.restriction * (disc.stiffness * phi);
  const LinearSolver mass(disc.surface_mass, SolveMethod::SparseLU);
  return mass.solve(load).x;
}

}  // namespace fsiga
