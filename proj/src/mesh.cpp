#include "fsiga/mesh.hpp"

#include <algorithm>
#include <cmath>

namespace fsiga {

TensorMesh::TensorMesh(Basis basis_x, Basis basis_z)
    : basis_x_(std::move(basis_x)), basis_z_(std::move(basis_z)) {
  if (basis_z_.periodic()) throw ParameterError("vertical basis must be open");
  if (basis_x_.dof_count() < 1 || basis_z_.dof_count() < 2) {
    throw ParameterError("mesh bases must carry functions in both directions");
  }
}

int TensorMesh::quadrature_order() const {
  return std::max(basis_x_.degree(), basis_z_.degree()) + 1;
}

TensorMesh build_mesh(const Basis& basis_x, const Basis& basis_z, double L, double H,
                      bool periodic_x) {
  if (!(L > 0) || !(H > 0)) throw ParameterError("domain length and depth must be positive");
  const double tol = 1e-12 * std::max(L, H);
  const auto dx = basis_x.domain();
  const auto dz = basis_z.domain();
  if (std::abs(dx.lo) > tol || std::abs(dx.hi - L) > tol) {
    throw ParameterError("horizontal basis must span [0, L]");
  }
  if (std::abs(dz.lo + H) > tol || std::abs(dz.hi) > tol) {
    throw ParameterError("vertical basis must span [-H, 0]");
  }
  if (basis_x.periodic() != periodic_x) {
    throw ParameterError("horizontal basis periodicity does not match periodic_x");
  }
  return TensorMesh(basis_x, basis_z);
}

TensorMesh build_mesh(BasisKind kind, int degree, int nx, int nz, double L, double H,
                      bool periodic_x) {
  if (!(L > 0) || !(H > 0)) throw ParameterError("domain length and depth must be positive");
  return build_mesh(make_basis(kind, degree, nx, {0.0, L}, periodic_x),
                    make_basis(kind, degree, nz, {-H, 0.0}, false), L, H, periodic_x);
}

TraceSpace surface_trace(const TensorMesh& mesh) {
  TraceSpace t;
  t.basis = mesh.basis_x();
  t.surface_dof_indices.reserve(mesh.dofs_x());
  for (int i = 0; i < mesh.dofs_x(); ++i) t.surface_dof_indices.push_back(mesh.dof(i, mesh.top_row()));
  return t;
}

ElementGeometry element_geometry(const TensorMesh& mesh, int e) {
  if (e < 0 || e >= mesh.element_count()) throw IndexError("element index out of range");
  const auto ex = mesh.basis_x().element(e % mesh.elements_x());
  const auto ez = mesh.basis_z().element(e / mesh.elements_x());
  ElementGeometry g;
  g.x0 = ex.lo;
  g.x1 = ex.hi;
  g.z0 = ez.lo;
  g.z1 = ez.hi;
  g.jacobian = 0.25 * (ex.hi - ex.lo) * (ez.hi - ez.lo);
  return g;
}

}  // namespace fsiga
