#include <doctest.h>

#include <Eigen/Dense>
#include <random>
#include <sstream>
#include <unsupported/Eigen/KroneckerProduct>

#include "fsiga/formulations.hpp"
#include "oracles.hpp"

using namespace fsiga;

namespace {

struct MeshCase {
  BasisKind kind;
  int degree, nx, nz;
  bool periodic;
};

const MeshCase kSmallMeshes[] = {
    {BasisKind::LagrangeFE, 1, 2, 2, false}, {BasisKind::LagrangeFE, 1, 3, 4, true},
    {BasisKind::LagrangeFE, 2, 3, 2, true},  {BasisKind::LagrangeFE, 3, 2, 2, false},
    {BasisKind::BSpline, 1, 4, 3, true},     {BasisKind::BSpline, 2, 3, 3, true},
    {BasisKind::BSpline, 2, 4, 4, false},    {BasisKind::BSpline, 3, 4, 2, true},
    {BasisKind::BSpline, 4, 4, 3, false},
};

Eigen::MatrixXd dense(const SparseMatrix& a) { return Eigen::MatrixXd(a); }

}  // namespace

TEST_CASE("property: stiffness and mass match the brute-force dense oracle") {
  for (const auto& m : kSmallMeshes) {
    CAPTURE(to_string(m.kind));
    CAPTURE(m.degree);
    const auto mesh = build_mesh(m.kind, m.degree, m.nx, m.nz, 1.0, 0.7, m.periodic);
    const auto ref = oracle::brute_force_operators(mesh);
    const Eigen::MatrixXd K = dense(assemble_stiffness(mesh));
    const Eigen::MatrixXd Mv = dense(assemble_volume_mass(mesh));
    CHECK(oracle::max_abs(K - ref.stiffness) < 1e-12 * std::max(1.0, oracle::max_abs(ref.stiffness)));
    CHECK(oracle::max_abs(Mv - ref.mass) < 1e-12);
  }
}

TEST_CASE("property: tensor structure K = Kx⊗Mz + Mx⊗Kz") {
  for (const auto& m : kSmallMeshes) {
    const auto mesh = build_mesh(m.kind, m.degree, m.nx, m.nz, 1.3, 0.6, m.periodic);
    const Eigen::MatrixXd Kx = dense(assemble_stiffness_1d(mesh.basis_x()));
    const Eigen::MatrixXd Mx = dense(assemble_mass_1d(mesh.basis_x()));
    const Eigen::MatrixXd Kz = dense(assemble_stiffness_1d(mesh.basis_z()));
    const Eigen::MatrixXd Mz = dense(assemble_mass_1d(mesh.basis_z()));
    // DOF j*nx + i: the z index is the outer (slow) index.
    const Eigen::MatrixXd ref =
        Eigen::kroneckerProduct(Mz, Kx).eval() + Eigen::kroneckerProduct(Kz, Mx).eval();
    CHECK(oracle::max_abs(dense(assemble_stiffness(mesh)) - ref) < 1e-12);
    const Eigen::MatrixXd mref = Eigen::kroneckerProduct(Mz, Mx);
    CHECK(oracle::max_abs(dense(assemble_volume_mass(mesh)) - mref) < 1e-13);
  }
}

TEST_CASE("hand values") {
  SUBCASE("1D linear stiffness on two elements") {
    const auto b = make_basis(BasisKind::LagrangeFE, 1, 2, {0.0, 1.0}, false);
    Eigen::Matrix3d ref;
    ref << 2, -2, 0, -2, 4, -2, 0, -2, 2;
    CHECK(oracle::max_abs(dense(assemble_stiffness_1d(b)) - ref) < 1e-14);
  }
  SUBCASE("bilinear interior node diagonal is 8/3") {
    const auto mesh = build_mesh(BasisKind::LagrangeFE, 1, 2, 2, 1.0, 1.0, false);
    const Eigen::MatrixXd K = dense(assemble_stiffness(mesh));
    CHECK(K(mesh.dof(1, 1), mesh.dof(1, 1)) == doctest::Approx(8.0 / 3.0).epsilon(1e-14));
    CHECK(K(mesh.dof(0, 0), mesh.dof(0, 0)) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  }
  SUBCASE("periodic linear surface mass on two elements") {
    const auto mesh = build_mesh(BasisKind::LagrangeFE, 1, 2, 1, 1.0, 1.0, true);
    const Eigen::MatrixXd M = dense(assemble_surface_mass(mesh, surface_trace(mesh)));
    Eigen::Matrix2d ref;
    ref << 1.0 / 3, 1.0 / 6, 1.0 / 6, 1.0 / 3;
    CHECK(oracle::max_abs(M - ref) < 1e-14);
  }
  SUBCASE("single quadratic Bezier element mass") {
    const auto b = make_basis(BasisKind::BSpline, 2, 1, {0.0, 1.0}, false);
    Eigen::Matrix3d ref;
    ref << 6, 3, 1, 3, 4, 3, 1, 3, 6;
    ref /= 30.0;
    CHECK(oracle::max_abs(dense(assemble_mass_1d(b)) - ref) < 1e-14);
  }
}

TEST_CASE("operator invariants") {
  for (const auto& m : kSmallMeshes) {
    const double L = 1.2, H = 0.8;
    const auto mesh = build_mesh(m.kind, m.degree, m.nx, m.nz, L, H, m.periodic);
    const auto trace = surface_trace(mesh);
    const SparseMatrix K = assemble_stiffness(mesh);
    const SparseMatrix M = assemble_volume_mass(mesh);
    const SparseMatrix Ms = assemble_surface_mass(mesh, trace);
    const Vector one = Vector::Ones(mesh.dof_count());
    const Vector one_s = Vector::Ones(trace.size());
    CHECK((K * one).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(one.dot(M * one) == doctest::Approx(L * H).epsilon(1e-13));
    CHECK(one_s.dot(Ms * one_s) == doctest::Approx(L).epsilon(1e-13));
    CHECK(oracle::max_abs(dense(K) - dense(K).transpose()) < 1e-14);
    CHECK(oracle::max_abs(dense(Ms) - dense(Ms).transpose()) < 1e-15);
    // K is positive semidefinite with a one-dimensional kernel.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(dense(K));
    CHECK(eig.eigenvalues()[0] > -1e-12);
    CHECK(eig.eigenvalues()[1] > 1e-8);
  }
}

TEST_CASE("restriction and vertical derivative") {
  const auto mesh = build_mesh(BasisKind::BSpline, 2, 4, 3, 1.0, 1.0, true);
  const auto trace = surface_trace(mesh);
  REQUIRE(trace.size() == mesh.dofs_x());
  for (int i = 0; i < trace.size(); ++i) CHECK(trace.surface_dof_indices[i] == mesh.dof(i, mesh.top_row()));
  const SparseMatrix R = surface_restriction(mesh, trace);
  CHECK(R.nonZeros() == trace.size());
  // φ(x, z) = 2 + 3z interpolated exactly; φ_z = 3 on the surface.
  const Vector phi = control_point_interpolant(mesh, [](double, double z) { return 2 + 3 * z; });
  const Vector dz = surface_vertical_derivative(mesh, trace) * phi;
  CHECK((dz.array() - 3.0).abs().maxCoeff() < 1e-12);
  CHECK(((R * phi).array() - 2.0).abs().maxCoeff() < 1e-12);
}

TEST_CASE("field evaluation reproduces linear fields") {
  const auto mesh = build_mesh(BasisKind::BSpline, 3, 4, 4, 2.0, 1.0, false);
  const Vector c = control_point_interpolant(mesh, [](double x, double z) { return x - 2 * z + 1; });
  for (double x : {0.0, 0.3, 1.7, 2.0}) {
    for (double z : {-1.0, -0.45, 0.0}) {
      const auto s = evaluate_field(mesh, c, x, z);
      CHECK(s.value == doctest::Approx(x - 2 * z + 1).epsilon(1e-12));
      CHECK(s.dx == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(s.dz == doctest::Approx(-2.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("coordinate text output") {
  SparseMatrix a(2, 2);
  a.insert(0, 1) = 0.5;
  a.insert(1, 0) = -2;
  std::ostringstream os;
  write_coordinate_text(a, os);
  CHECK(os.str().find("0 1 0.5") != std::string::npos);
  CHECK(os.str().find("1 0 -2") != std::string::npos);
}

TEST_CASE("mesh validation") {
  CHECK_THROWS_AS(build_mesh(BasisKind::BSpline, 3, 2, 2, 1.0, 1.0, true), ParameterError);
  CHECK_THROWS_AS(build_mesh(BasisKind::BSpline, 2, 4, 4, -1.0, 1.0, true), ParameterError);
  const auto mesh = build_mesh(BasisKind::LagrangeFE, 1, 2, 2, 1.0, 1.0, true);
  CHECK_THROWS_AS(element_geometry(mesh, 4), IndexError);
  const auto g = element_geometry(mesh, 3);
  CHECK(g.x0 == doctest::Approx(0.5));
  CHECK(g.z1 == doctest::Approx(0.0));
  CHECK(g.jacobian == doctest::Approx(0.0625));
}
