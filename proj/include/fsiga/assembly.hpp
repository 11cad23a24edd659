#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <functional>
#include <iosfwd>
#include <string>

#include "fsiga/mesh.hpp"

namespace fsiga {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

/// K_ab = ∫_Ω ∇N_a · ∇N_b dΩ, element by element with (p+1)^2 Gauss points.
SparseMatrix assemble_stiffness(const TensorMesh& mesh);

/// Volume mass ∫_Ω N_a N_b dΩ (used for L² projection).
SparseMatrix assemble_volume_mass(const TensorMesh& mesh);

/// Consistent surface mass (w, v)_Γfs over the trace DOFs only.
SparseMatrix assemble_surface_mass(const TensorMesh& mesh, const TraceSpace& trace);

/// Selection operator R (surface x volume): (R φ)_i = φ at surface DOF i.
SparseMatrix surface_restriction(const TensorMesh& mesh, const TraceSpace& trace);

/// G (surface x volume): (G φ)_i are the coefficients of ∂φ/∂z restricted to z = 0.
SparseMatrix surface_vertical_derivative(const TensorMesh& mesh, const TraceSpace& trace);

/// 1D operators of a single basis, assembled with `points` Gauss points per element
/// (0 selects degree + 1).
SparseMatrix assemble_mass_1d(const Basis& basis, int points = 0);
SparseMatrix assemble_stiffness_1d(const Basis& basis, int points = 0);

/// Coordinate text format: one "row col value" line per stored entry, 0-based.
void write_coordinate_text(const SparseMatrix& a, std::ostream& os);
void write_coordinate_text(const SparseMatrix& a, const std::string& path);

using ScalarField = std::function<double(double x, double z)>;

/// Coefficients from sampling f at Greville points (B-splines) or nodes (Lagrange).
/// Exact for fields linear in x and z.
Vector control_point_interpolant(const TensorMesh& mesh, const ScalarField& f);

struct FieldSample {
  double value = 0;
  double dx = 0;
  double dz = 0;
};

/// Value and gradient of the discrete volume field at (x, z).
FieldSample evaluate_field(const TensorMesh& mesh, const Vector& coeffs, double x, double z);

/// Value of a surface field (coefficients over trace DOFs) at x.
double evaluate_surface(const Basis& basis_x, const Vector& coeffs, double x);

}  // namespace fsiga
