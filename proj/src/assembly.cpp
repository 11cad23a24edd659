#include "fsiga/assembly.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <vector>

namespace fsiga {
namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

// Basis values and physical derivatives at every Gauss point of every element.
struct Tabulation {
  std::vector<std::vector<BasisEval<double>>> evals;  // [element][point]
};

Tabulation tabulate(const Basis& basis, const QuadratureRule<double>& rule) {
  Tabulation tab;
  const int ne = basis.element_count();
  tab.evals.resize(ne);
  for (int e = 0; e < ne; ++e) {
    const auto [a, b] = basis.element(e);
    for (int q = 0; q < rule.size(); ++q) {
      const double u = a + 0.5 * (rule.points[q] + 1.0) * (b - a);
      tab.evals[e].push_back(basis.eval_in_element(e, u));
    }
  }
  return tab;
}

enum class VolumeKernel { Stiffness, Mass };

SparseMatrix assemble_volume(const TensorMesh& mesh, VolumeKernel kernel) {
  const auto rule = gauss_legendre(mesh.quadrature_order());
  const auto tx = tabulate(mesh.basis_x(), rule);
  const auto tz = tabulate(mesh.basis_z(), rule);
  const int nq = rule.size();
  Triplets trip;
  constexpr int kLocal = (kMaxDegree + 1) * (kMaxDegree + 1);
  std::array<double, kLocal * kLocal> local{};
  std::array<int, kLocal> dofs{};

  for (int e = 0; e < mesh.element_count(); ++e) {
    const int ex = e % mesh.elements_x();
    const int ez = e / mesh.elements_x();
    const double jac = element_geometry(mesh, e).jacobian;
    const int nax = tx.evals[ex][0].count;
    const int naz = tz.evals[ez][0].count;
    const int nloc = nax * naz;
    for (int bz = 0; bz < naz; ++bz) {
      for (int bx = 0; bx < nax; ++bx) {
        dofs[bz * nax + bx] =
            mesh.dof(tx.evals[ex][0].indices[bx], tz.evals[ez][0].indices[bz]);
      }
    }
    std::fill(local.begin(), local.begin() + nloc * nloc, 0.0);
    for (int qz = 0; qz < nq; ++qz) {
      const auto& Ez = tz.evals[ez][qz];
      for (int qx = 0; qx < nq; ++qx) {
        const auto& Ex = tx.evals[ex][qx];
        const double w = rule.weights[qx] * rule.weights[qz] * jac;
        for (int a = 0; a < nloc; ++a) {
          const int ax = a % nax, az = a / nax;
          const double va = Ex.values[ax] * Ez.values[az];
          const double gax = Ex.derivatives[ax] * Ez.values[az];
          const double gaz = Ex.values[ax] * Ez.derivatives[az];
          for (int b = 0; b < nloc; ++b) {
            const int bx = b % nax, bz = b / nax;
            double integrand;
            if (kernel == VolumeKernel::Stiffness) {
              integrand = gax * Ex.derivatives[bx] * Ez.values[bz] +
                          gaz * Ex.values[bx] * Ez.derivatives[bz];
            } else {
              integrand = va * Ex.values[bx] * Ez.values[bz];
            }
            local[a * nloc + b] += w * integrand;
          }
        }
      }
    }
    for (int a = 0; a < nloc; ++a) {
      for (int b = 0; b < nloc; ++b) trip.emplace_back(dofs[a], dofs[b], local[a * nloc + b]);
    }
  }
  SparseMatrix k(mesh.dof_count(), mesh.dof_count());
  k.setFromTriplets(trip.begin(), trip.end());
  return k;
}

SparseMatrix assemble_1d(const Basis& basis, int points, bool stiffness) {
  const auto rule = gauss_legendre(points > 0 ? points : basis.degree() + 1);
  Triplets trip;
  for (int e = 0; e < basis.element_count(); ++e) {
    const auto [a, b] = basis.element(e);
    const double half = 0.5 * (b - a);
    for (int q = 0; q < rule.size(); ++q) {
      const auto ev = basis.eval_in_element(e, a + half * (rule.points[q] + 1.0));
      const double w = rule.weights[q] * half;
      for (int i = 0; i < ev.count; ++i) {
        for (int j = 0; j < ev.count; ++j) {
          const double v = stiffness ? ev.derivatives[i] * ev.derivatives[j]
                                     : ev.values[i] * ev.values[j];
          trip.emplace_back(ev.indices[i], ev.indices[j], w * v);
        }
      }
    }
  }
  SparseMatrix m(basis.dof_count(), basis.dof_count());
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

}  // namespace

SparseMatrix assemble_stiffness(const TensorMesh& mesh) {
  return assemble_volume(mesh, VolumeKernel::Stiffness);
}

SparseMatrix assemble_volume_mass(const TensorMesh& mesh) {
  return assemble_volume(mesh, VolumeKernel::Mass);
}

// Surface basis functions are N_i(x) N_top(0) with N_top(0) = 1 for open z-bases,
// so the trace mass is the 1D mass of the horizontal basis.
SparseMatrix assemble_surface_mass(const TensorMesh& mesh, const TraceSpace& trace) {
  return assemble_1d(trace.basis, mesh.quadrature_order(), false);
}

SparseMatrix surface_restriction(const TensorMesh& mesh, const TraceSpace& trace) {
  SparseMatrix r(trace.size(), mesh.dof_count());
  Triplets trip;
  for (int i = 0; i < trace.size(); ++i) trip.emplace_back(i, trace.surface_dof_indices[i], 1.0);
  r.setFromTriplets(trip.begin(), trip.end());
  return r;
}

SparseMatrix surface_vertical_derivative(const TensorMesh& mesh, const TraceSpace& trace) {
  const auto ez = mesh.basis_z().eval(0.0);
  Triplets trip;
  for (int i = 0; i < trace.size(); ++i) {
    for (int b = 0; b < ez.count; ++b) {
      if (ez.derivatives[b] != 0.0) trip.emplace_back(i, mesh.dof(i, ez.indices[b]), ez.derivatives[b]);
    }
  }
  SparseMatrix g(trace.size(), mesh.dof_count());
  g.setFromTriplets(trip.begin(), trip.end());
  return g;
}

SparseMatrix assemble_mass_1d(const Basis& basis, int points) {
  return assemble_1d(basis, points, false);
}

SparseMatrix assemble_stiffness_1d(const Basis& basis, int points) {
  return assemble_1d(basis, points, true);
}

void write_coordinate_text(const SparseMatrix& a, std::ostream& os) {
  os << std::setprecision(17);
  for (int k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
      os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
    }
  }
}

void write_coordinate_text(const SparseMatrix& a, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path + " for writing");
  write_coordinate_text(a, os);
}

Vector control_point_interpolant(const TensorMesh& mesh, const ScalarField& f) {
  const auto gx = mesh.basis_x().greville();
  const auto gz = mesh.basis_z().greville();
  Vector c(mesh.dof_count());
  for (int j = 0; j < mesh.dofs_z(); ++j) {
    for (int i = 0; i < mesh.dofs_x(); ++i) c[mesh.dof(i, j)] = f(gx[i], gz[j]);
  }
  return c;
}

FieldSample evaluate_field(const TensorMesh& mesh, const Vector& coeffs, double x, double z) {
  const auto ex = mesh.basis_x().eval(x);
  const auto ez = mesh.basis_z().eval(z);
  FieldSample s;
  for (int b = 0; b < ez.count; ++b) {
    for (int a = 0; a < ex.count; ++a) {
      const double c = coeffs[mesh.dof(ex.indices[a], ez.indices[b])];
      s.value += c * ex.values[a] * ez.values[b];
      s.dx += c * ex.derivatives[a] * ez.values[b];
      s.dz += c * ex.values[a] * ez.derivatives[b];
    }
  }
  return s;
}

double evaluate_surface(const Basis& basis_x, const Vector& coeffs, double x) {
  const auto ev = basis_x.eval(x);
  double v = 0;
  for (int a = 0; a < ev.count; ++a) v += coeffs[ev.indices[a]] * ev.values[a];
  return v;
}

}  // namespace fsiga
