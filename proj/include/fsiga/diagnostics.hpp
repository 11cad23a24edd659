#pragma once

#include <utility>
#include <vector>

#include "fsiga/analytic_waves.hpp"
#include "fsiga/formulations.hpp"
#include "fsiga/state.hpp"

namespace fsiga {

struct EnergyRecord {
  double t = 0;
  double kinetic = 0;
  double potential = 0;
  double total = 0;
};

/// Energy time series; records must arrive with strictly increasing t.
class EnergyTrace {
 public:
  void append(double t, double kinetic, double potential);

  const std::vector<EnergyRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  /// max_n |E_tot(t_n) − E_tot(t_0)| / E_tot(t_0).
  double max_relative_drift() const;

 private:
  std::vector<EnergyRecord> records_;
};

struct Energies {
  double kinetic = 0;
  double potential = 0;
  double total() const { return kinetic + potential; }
};

/// E_kin = ½ φᵀKφ; E_pot = (g/2) ηᵀMη, or (1/(2g)) φ_tᵀMφ_t on the reduced path.
Energies compute_energies(const WaveState& state, const SparseMatrix& stiffness,
                          const SparseMatrix& surface_mass, double g);

using TimeSeries = std::vector<std::pair<double, double>>;

/// Period from zero crossings: the first 2 crossings are dropped, the next 18 are
/// located by linear interpolation, and the period is twice their mean spacing.
double estimate_period(const TimeSeries& probe);

inline constexpr int kDiscardedCrossings = 2;
inline constexpr int kRetainedCrossings = 18;

/// Error of `state` against the Airy wave at state.t, in the norm the formulation is
/// coercive in (Δt is a fixed norm parameter):
///   monolithic    ‖∇e_φ‖² + 2/(gΔt²)‖e_φ‖²_Γ + g/2 ‖e_η‖²_Γ
///   reduced       ‖∇e_φ‖² + 4/(Δt²g)‖e_φ‖²_Γ
///   segregated    1/Δt ‖e_φ‖²_Γ + g²Δt/4 ‖e_η‖²_Γ
/// Integrated with (p+2)-point Gauss rules per direction.
double triple_norm_error(const WaveState& state, const AiryWave& exact, const TensorMesh& mesh,
                         double g, double dt, FormulationKind kind);

struct ConvergenceRow {
  double h = 0;
  int dofs = 0;
  double error = 0;
  double rate = 0;  // against the previous row; NaN for the first
};

/// Rows ordered by strictly decreasing h.
class ConvergenceTable {
 public:
  void add_row(double h, int dofs, double error);
  const std::vector<ConvergenceRow>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }

 private:
  std::vector<ConvergenceRow> rows_;
};

/// Least-squares slope of log(error) against log(h); needs at least 3 rows.
double fit_convergence_rate(const ConvergenceTable& table);

}  // namespace fsiga
