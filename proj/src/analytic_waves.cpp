#include "fsiga/analytic_waves.hpp"

#include <algorithm>

namespace fsiga {
namespace {

void check_positive(double k, double H, double g) {
  if (!(k > 0) || !(H > 0) || !(g > 0)) {
    throw ParameterError("wavenumber, depth and gravity must be positive");
  }
}

// Load vectors are integrated with a few extra points since the integrand is not polynomial.
int load_points(int degree) { return std::min(degree + 3, kMaxGaussPoints); }

}  // namespace

double dispersion_omega(double k, double H, double g) {
  check_positive(k, H, g);
  return std::sqrt(g * k * std::tanh(k * H));
}

double phase_speed(double k, double H, double g) {
  check_positive(k, H, g);
  return std::sqrt(g / k * std::tanh(k * H));
}

AiryWave AiryWave::make(double amplitude, double k, double depth, double g) {
  if (!(amplitude > 0)) throw ParameterError("wave amplitude must be positive");
  AiryWave w;
  w.amplitude = amplitude;
  w.k = k;
  w.depth = depth;
  w.g = g;
  w.omega = dispersion_omega(k, depth, g);
  return w;
}

double AiryWave::phi(double x, double z, double t) const {
  return omega / k * amplitude * std::cosh(k * (z + depth)) / std::sinh(k * depth) *
         std::sin(k * x - omega * t);
}

double AiryWave::phi_x(double x, double z, double t) const {
  return omega * amplitude * std::cosh(k * (z + depth)) / std::sinh(k * depth) *
         std::cos(k * x - omega * t);
}

double AiryWave::phi_z(double x, double z, double t) const {
  return omega * amplitude * std::sinh(k * (z + depth)) / std::sinh(k * depth) *
         std::sin(k * x - omega * t);
}

double AiryWave::phi_t(double x, double z, double t) const {
  return -omega * omega / k * amplitude * std::cosh(k * (z + depth)) / std::sinh(k * depth) *
         std::cos(k * x - omega * t);
}

AiryFields airy_fields(const AiryWave& wave, double t) {
  return {[wave, t](double x) { return wave.eta(x, t); },
          [wave, t](double x, double z) { return wave.phi(x, z, t); }};
}

Vector project_volume(const TensorMesh& mesh, const ScalarField& f) {
  const auto rule = gauss_legendre(load_points(mesh.quadrature_order() - 1));
  Vector load = Vector::Zero(mesh.dof_count());
  for (int e = 0; e < mesh.element_count(); ++e) {
    const auto geo = element_geometry(mesh, e);
    const int ex = e % mesh.elements_x();
    const int ez = e / mesh.elements_x();
    for (int qz = 0; qz < rule.size(); ++qz) {
      const double z = geo.z(rule.points[qz]);
      const auto Ez = mesh.basis_z().eval_in_element(ez, z);
      for (int qx = 0; qx < rule.size(); ++qx) {
        const double x = geo.x(rule.points[qx]);
        const auto Ex = mesh.basis_x().eval_in_element(ex, x);
        const double w = rule.weights[qx] * rule.weights[qz] * geo.jacobian * f(x, z);
        for (int b = 0; b < Ez.count; ++b) {
          for (int a = 0; a < Ex.count; ++a) {
            load[mesh.dof(Ex.indices[a], Ez.indices[b])] += w * Ex.values[a] * Ez.values[b];
          }
        }
      }
    }
  }
  const LinearSolver mass(assemble_volume_mass(mesh), SolveMethod::SparseLU);
  return mass.solve(load).x;
}

Vector project_surface(const TensorMesh& mesh, const std::function<double(double)>& f) {
  const Basis& bx = mesh.basis_x();
  const auto rule = gauss_legendre(load_points(bx.degree()));
  Vector load = Vector::Zero(bx.dof_count());
  for (int e = 0; e < bx.element_count(); ++e) {
    const auto [a, b] = bx.element(e);
    const double half = 0.5 * (b - a);
    for (int q = 0; q < rule.size(); ++q) {
      const double x = a + half * (rule.points[q] + 1.0);
      const auto ev = bx.eval_in_element(e, x);
      const double w = rule.weights[q] * half * f(x);
      for (int i = 0; i < ev.count; ++i) load[ev.indices[i]] += w * ev.values[i];
    }
  }
  const LinearSolver mass(assemble_mass_1d(bx, mesh.quadrature_order()), SolveMethod::SparseLU);
  return mass.solve(load).x;
}

WaveState project_initial_condition(const Discretization& disc, const AiryWave& wave) {
  WaveState s;
  s.phi = project_volume(disc.mesh, [&](double x, double z) { return wave.phi(x, z, 0.0); });
  s.eta = project_surface(disc.mesh, [&](double x) { return wave.eta(x, 0.0); });
  return s;
}

}  // namespace fsiga
