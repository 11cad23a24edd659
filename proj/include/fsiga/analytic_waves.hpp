#pragma once

#include <cmath>
#include <functional>
#include <numbers>

#include "fsiga/formulations.hpp"
#include "fsiga/state.hpp"

namespace fsiga {

/// ω = sqrt(g k tanh(kH)).
double dispersion_omega(double k, double H, double g);

/// c_p = sqrt((g/k) tanh(kH)).
double phase_speed(double k, double H, double g);

/// Linear traveling wave η = ξ cos(kx − ωt),
/// φ = (ω/k) ξ cosh(k(z+H)) / sinh(kH) sin(kx − ωt).
struct AiryWave {
  double amplitude = 0;  // ξ, m
  double k = 0;          // 1/m
  double depth = 0;      // H, m
  double g = 0;          // m/s²
  double omega = 0;      // 1/s

  static AiryWave make(double amplitude, double k, double depth, double g);

  double wavelength() const { return 2 * std::numbers::pi / k; }
  double period() const { return 2 * std::numbers::pi / omega; }
  double phase_speed() const { return omega / k; }

  double eta(double x, double t) const { return amplitude * std::cos(k * x - omega * t); }
  double phi(double x, double z, double t) const;
  double phi_x(double x, double z, double t) const;
  double phi_z(double x, double z, double t) const;
  double phi_t(double x, double z, double t) const;
};

struct AiryFields {
  std::function<double(double)> eta;
  std::function<double(double, double)> phi;
};

/// Exact fields frozen at time t.
AiryFields airy_fields(const AiryWave& wave, double t);

/// φ: volume L² projection of φ(·,·,0); η: surface L² projection of η(·,0).
WaveState project_initial_condition(const Discretization& disc, const AiryWave& wave);

/// Volume L² projection of an arbitrary field.
Vector project_volume(const TensorMesh& mesh, const ScalarField& f);

/// Surface L² projection onto the trace space.
Vector project_surface(const TensorMesh& mesh, const std::function<double(double)>& f);

}  // namespace fsiga
