#pragma once

#include <string>

#include "fsiga/assembly.hpp"
#include "fsiga/linear_solver.hpp"
#include "fsiga/mesh.hpp"

namespace fsiga {

enum class FormulationKind { Monolithic, Reduced, Segregated, SegregatedLM };

std::string to_string(FormulationKind k);
FormulationKind parse_formulation(const std::string& s);

/// Mesh plus the operators every formulation is assembled from.
struct Discretization {
  TensorMesh mesh;
  TraceSpace trace;
  SparseMatrix stiffness;     // K, volume x volume
  SparseMatrix surface_mass;  // M_Γ, surface x surface
  SparseMatrix restriction;   // R, surface x volume

  explicit Discretization(TensorMesh m);

  int volume_dofs() const { return mesh.dof_count(); }
  int surface_dofs() const { return trace.size(); }
};

/// Options for the linear solves inside a formulation's step.
struct SolverOptions {
  SolveMethod method = SolveMethod::SparseLU;
  double tolerance = kDefaultSolverTolerance;
};

/// Midpoint system of the monolithic form for the unknown (φ^{n+1/2}, η^{n+1/2}):
///
///   [ K + 2/(gΔt²) RᵀMR    -1/Δt RᵀM ] [φ]   [ 2/(gΔt²) RᵀMR φⁿ - 2/Δt RᵀM ηⁿ ]
///   [ 1/Δt M R              g/2 M    ] [η] = [ 1/Δt M R φⁿ                    ]
///
/// with M = M_Γ and α = 2/Δt already substituted.
class MonolithicSystem {
 public:
  MonolithicSystem(const Discretization& disc, double g, double dt, SolverOptions opts = {});

  const SparseMatrix& matrix() const { return solver_.matrix(); }
  Vector rhs(const Vector& phi_n, const Vector& eta_n) const;
  SolveResult solve(const Vector& rhs) const { return solver_.solve(rhs); }

  double g() const { return g_; }
  double dt() const { return dt_; }
  double alpha() const { return 2.0 / dt_; }
  int volume_dofs() const { return n_; }
  int surface_dofs() const { return s_; }

 private:
  double g_, dt_;
  int n_, s_;
  SparseMatrix rtm_r_;  // RᵀMR
  SparseMatrix rtm_;    // RᵀM
  SparseMatrix m_r_;    // MR
  LinearSolver solver_;
};

/// Midpoint system of the reduced form: (K + 4/(Δt²g) RᵀMR) φ^{n+1/2} = F_r.
class ReducedSystem {
 public:
  ReducedSystem(const Discretization& disc, double g, double dt, SolverOptions opts = {});

  const SparseMatrix& matrix() const { return solver_.matrix(); }
  /// F_r from φⁿ (volume) and φ_tⁿ (surface coefficients).
  Vector rhs(const Vector& phi_n, const Vector& phi_t_n) const;
  SolveResult solve(const Vector& rhs) const { return solver_.solve(rhs); }

  double g() const { return g_; }
  double dt() const { return dt_; }

 private:
  double g_, dt_;
  SparseMatrix rtm_r_;
  SparseMatrix rtm_;
  LinearSolver solver_;
};

/// How the free-surface problem receives the vertical velocity of the interior solution.
enum class ForcingMode { VerticalDerivative, LagrangeMultiplier };

/// Interior Dirichlet problem plus the 2x2-block free-surface problem.
///
/// Free-surface unknowns (φ̂^{n+1/2}, η^{n+1/2}) solve
///
///   [ 2/Δt M    g M              ] [φ̂]   [ 2/Δt M φ̂ⁿ                    ]
///   [ 0         g²/α² 2/Δt M     ] [η] = [ g²/α² 2/Δt M ηⁿ + g²/α² f(φ) ]
///
/// where f(φ) is the surface-tested vertical velocity: M φ_z (VerticalDerivative)
/// or R K φ (LagrangeMultiplier, the extension-by-zero of the surface test function).
class SegregatedSystems {
 public:
  SegregatedSystems(const Discretization& disc, double g, double dt, ForcingMode mode,
                    SolverOptions opts = {});

  /// Discrete harmonic extension of surface values (Dirichlet rows replaced by identity).
  Vector interior_solve(const Vector& surface_values, SolveReport* report = nullptr) const;

  /// Surface values R φ of a volume field.
  Vector trace(const Vector& phi) const { return trace_ * phi; }

  /// Load vector f(φ) of the free-surface problem for a volume field φ.
  Vector forcing(const Vector& phi) const;

  Vector surface_rhs(const Vector& phi_hat_n, const Vector& eta_n, const Vector& forcing) const;
  SolveResult surface_solve(const Vector& rhs) const { return surface_solver_.solve(rhs); }

  const SparseMatrix& interior_matrix() const { return interior_.matrix(); }
  const SparseMatrix& surface_matrix() const { return surface_solver_.matrix(); }
  ForcingMode mode() const { return mode_; }
  double g() const { return g_; }
  double dt() const { return dt_; }
  double alpha() const { return 2.0 / dt_; }

 private:
  double g_, dt_;
  ForcingMode mode_;
  SparseMatrix mass_;     // M_Γ
  SparseMatrix trace_;    // R
  SparseMatrix flux_;     // M G (VerticalDerivative) or R K (LagrangeMultiplier)
  LinearSolver interior_;
  LinearSolver surface_solver_;
};

MonolithicSystem build_monolithic(const Discretization& disc, double g, double dt,
                                  SolverOptions opts = {});
ReducedSystem build_reduced(const Discretization& disc, double g, double dt,
                            SolverOptions opts = {});
SegregatedSystems build_segregated(const Discretization& disc, double g, double dt,
                                   ForcingMode mode, SolverOptions opts = {});

enum class VelocityMethod { DirectGradient, LMProjection };

/// Surface coefficients of φ_z for the volume field φ.
///
/// DirectGradient: the z-derivative of φ at z = 0. Its trace lies in the span of
/// the horizontal basis, so the surface L² projection returns its coefficients exactly.
/// LMProjection: -λ with (w, λ)_Γ = -(∇w, ∇φ)_Ω, i.e. M_Γ⁻¹ R K φ.
Vector reconstruct_vertical_velocity(const Discretization& disc, const Vector& phi,
                                     VelocityMethod method);

}  // namespace fsiga
