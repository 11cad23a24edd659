#include "fsiga/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fsiga {

void EnergyTrace::append(double t, double kinetic, double potential) {
  if (!records_.empty() && !(t > records_.back().t)) {
    throw DiagnosticError("energy trace times must be strictly increasing");
  }
  records_.push_back({t, kinetic, potential, kinetic + potential});
}

double EnergyTrace::max_relative_drift() const {
  if (records_.empty()) return 0;
  const double e0 = records_.front().total;
  double worst = 0;
  for (const auto& r : records_) worst = std::max(worst, std::abs(r.total - e0));
  return e0 != 0 ? worst / std::abs(e0) : worst;
}

Energies compute_energies(const WaveState& state, const SparseMatrix& stiffness,
                          const SparseMatrix& surface_mass, double g) {
  Energies e;
  e.kinetic = 0.5 * state.phi.dot(stiffness * state.phi);
  if (state.second_order()) {
    e.potential = 0.5 / g * state.phi_t.dot(surface_mass * state.phi_t);
  } else {
    e.potential = 0.5 * g * state.eta.dot(surface_mass * state.eta);
  }
  return e;
}

double estimate_period(const TimeSeries& probe) {
  std::vector<double> crossings;
  const std::pair<double, double>* last = nullptr;
  for (const auto& sample : probe) {
    if (sample.second == 0.0) continue;
    if (last && (last->second > 0) != (sample.second > 0)) {
      const auto [ta, va] = *last;
      const auto [tb, vb] = sample;
      crossings.push_back(ta - va * (tb - ta) / (vb - va));
    }
    last = &sample;
  }
  constexpr int needed = kDiscardedCrossings + kRetainedCrossings;
  if (static_cast<int>(crossings.size()) < needed) {
    throw DiagnosticError("period estimate needs " + std::to_string(needed) +
                          " zero crossings, found " + std::to_string(crossings.size()));
  }
  const double first = crossings[kDiscardedCrossings];
  const double last_used = crossings[needed - 1];
  const double half_period = (last_used - first) / (kRetainedCrossings - 1);
  return 2.0 * half_period;
}

double triple_norm_error(const WaveState& state, const AiryWave& exact, const TensorMesh& mesh,
                         double g, double dt, FormulationKind kind) {
  const double t = state.t;
  const auto rule = gauss_legendre(std::min(mesh.quadrature_order() + 1, kMaxGaussPoints));

  double grad2 = 0;
  if (kind == FormulationKind::Monolithic || kind == FormulationKind::Reduced) {
    for (int e = 0; e < mesh.element_count(); ++e) {
      const auto geo = element_geometry(mesh, e);
      for (int qz = 0; qz < rule.size(); ++qz) {
        for (int qx = 0; qx < rule.size(); ++qx) {
          const double x = geo.x(rule.points[qx]);
          const double z = geo.z(rule.points[qz]);
          const auto s = evaluate_field(mesh, state.phi, x, z);
          const double ex = s.dx - exact.phi_x(x, z, t);
          const double ez = s.dz - exact.phi_z(x, z, t);
          grad2 += rule.weights[qx] * rule.weights[qz] * geo.jacobian * (ex * ex + ez * ez);
        }
      }
    }
  }

  const Vector eta = surface_elevation(state, g);
  const Basis& bx = mesh.basis_x();
  double phi2 = 0, eta2 = 0;
  for (int e = 0; e < bx.element_count(); ++e) {
    const auto [a, b] = bx.element(e);
    const double half = 0.5 * (b - a);
    for (int q = 0; q < rule.size(); ++q) {
      const double x = a + half * (rule.points[q] + 1.0);
      const double w = rule.weights[q] * half;
      const double ep = evaluate_field(mesh, state.phi, x, 0.0).value - exact.phi(x, 0.0, t);
      const double ee = evaluate_surface(bx, eta, x) - exact.eta(x, t);
      phi2 += w * ep * ep;
      eta2 += w * ee * ee;
    }
  }

  switch (kind) {
    case FormulationKind::Monolithic:
      return std::sqrt(grad2 + 2.0 / (g * dt * dt) * phi2 + 0.5 * g * eta2);
    case FormulationKind::Reduced:
      return std::sqrt(grad2 + 4.0 / (dt * dt * g) * phi2);
    case FormulationKind::Segregated:
    case FormulationKind::SegregatedLM:
      return std::sqrt(phi2 / dt + g * g * dt / 4.0 * eta2);
  }
  return 0;
}

void ConvergenceTable::add_row(double h, int dofs, double error) {
  if (!(h > 0) || !(error > 0)) throw DiagnosticError("convergence rows need positive h and error");
  ConvergenceRow row{h, dofs, error, std::numeric_limits<double>::quiet_NaN()};
  if (!rows_.empty()) {
    const auto& prev = rows_.back();
    if (!(h < prev.h)) throw DiagnosticError("convergence rows must have decreasing h");
    row.rate = std::log(prev.error / error) / std::log(prev.h / h);
  }
  rows_.push_back(row);
}

double fit_convergence_rate(const ConvergenceTable& table) {
  const auto& rows = table.rows();
  if (rows.size() < 3) throw DiagnosticError("rate fit needs at least 3 rows");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(rows.size());
  for (const auto& r : rows) {
    const double x = std::log(r.h), y = std::log(r.error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace fsiga
