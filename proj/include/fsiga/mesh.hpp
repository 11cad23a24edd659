#pragma once

#include <Eigen/Core>
#include <vector>

#include "fsiga/basis.hpp"
#include "fsiga/quadrature.hpp"

namespace fsiga {

/// Affine reference-to-physical map of one rectangular element.
/// Reference coordinates (r, s) live in [-1, 1]^2.
struct ElementGeometry {
  double x0 = 0, x1 = 0;  // horizontal extent
  double z0 = 0, z1 = 0;  // vertical extent
  double jacobian = 0;    // (hx * hz) / 4

  double x(double r) const { return x0 + 0.5 * (r + 1.0) * (x1 - x0); }
  double z(double s) const { return z0 + 0.5 * (s + 1.0) * (z1 - z0); }
};

/// Tensor-product mesh on [0, L] x [-H, 0].
///
/// Global DOF (i, j) with i the horizontal and j the vertical function index
/// maps to j * dofs_x + i. The free surface z = 0 carries the top row j = dofs_z - 1.
class TensorMesh {
 public:
  TensorMesh(Basis basis_x, Basis basis_z);

  const Basis& basis_x() const { return basis_x_; }
  const Basis& basis_z() const { return basis_z_; }
  double length() const { return basis_x_.domain().length(); }
  double depth() const { return basis_z_.domain().length(); }
  bool periodic_x() const { return basis_x_.periodic(); }

  int dofs_x() const { return basis_x_.dof_count(); }
  int dofs_z() const { return basis_z_.dof_count(); }
  int dof_count() const { return dofs_x() * dofs_z(); }
  int elements_x() const { return basis_x_.element_count(); }
  int elements_z() const { return basis_z_.element_count(); }
  int element_count() const { return elements_x() * elements_z(); }

  int dof(int i, int j) const { return j * dofs_x() + i; }
  int top_row() const { return dofs_z() - 1; }

  /// Quadrature points per direction used for assembly (degree + 1).
  int quadrature_order() const;

 private:
  Basis basis_x_;
  Basis basis_z_;
};

/// Ordered free-surface DOFs; entry i is the volume DOF of horizontal function i.
struct TraceSpace {
  std::vector<int> surface_dof_indices;
  Basis basis;

  int size() const { return static_cast<int>(surface_dof_indices.size()); }
};

/// Builds the mesh; basis_x must live on [0, L] and basis_z on [-H, 0].
TensorMesh build_mesh(const Basis& basis_x, const Basis& basis_z, double L, double H,
                      bool periodic_x);

/// Same basis kind and degree in both directions; open in z, periodic or open in x.
TensorMesh build_mesh(BasisKind kind, int degree, int nx, int nz, double L, double H,
                      bool periodic_x);

TraceSpace surface_trace(const TensorMesh& mesh);

ElementGeometry element_geometry(const TensorMesh& mesh, int e);

}  // namespace fsiga
