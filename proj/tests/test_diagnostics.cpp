#include <doctest.h>

#include <random>

#include "fsiga/diagnostics.hpp"
#include "oracles.hpp"

using namespace fsiga;

namespace {

TimeSeries sample(const std::function<double(double)>& f, double dt, double t_end) {
  TimeSeries s;
  for (long n = 0; n * dt <= t_end + 1e-12; ++n) s.emplace_back(n * dt, f(n * dt));
  return s;
}

}  // namespace

TEST_CASE("energy trace") {
  EnergyTrace t;
  CHECK(t.empty());
  CHECK(t.max_relative_drift() == 0);
  t.append(0, 1, 1);
  t.append(0.1, 1.5, 0.6);
  t.append(0.2, 0.5, 1.4);
  CHECK(t.records()[1].total == doctest::Approx(2.1));
  CHECK(t.max_relative_drift() == doctest::Approx(0.05));
  CHECK_THROWS_AS(t.append(0.2, 1, 1), DiagnosticError);
}

TEST_CASE("energies of simple states") {
  Discretization d(build_mesh(BasisKind::LagrangeFE, 1, 2, 2, 1.0, 1.0, true));
  WaveState zero;
  zero.phi = Vector::Zero(d.volume_dofs());
  zero.eta = Vector::Zero(d.surface_dofs());
  const auto e = compute_energies(zero, d.stiffness, d.surface_mass, 9.81);
  CHECK(e.kinetic == 0);
  CHECK(e.potential == 0);
  WaveState flat = zero;
  flat.eta.setConstant(0.1);
  CHECK(compute_energies(flat, d.stiffness, d.surface_mass, 9.81).potential ==
        doctest::Approx(0.5 * 9.81 * 0.01));
  WaveState second;
  second.phi = zero.phi;
  second.phi_t = Vector::Constant(d.surface_dofs(), -9.81 * 0.1);
  CHECK(compute_energies(second, d.stiffness, d.surface_mass, 9.81).potential ==
        doctest::Approx(0.5 * 9.81 * 0.01));
}

TEST_CASE("period estimator") {
  const double pi = std::numbers::pi;
  SUBCASE("pure sine") {
    const auto s = sample([&](double t) { return std::sin(2 * pi * t); }, 1e-3, 11);
    CHECK(estimate_period(s) == doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("damped sine") {
    const auto s = sample([&](double t) { return std::exp(-t) * std::sin(2 * pi * t + 0.3); }, 1e-3, 11);
    CHECK(estimate_period(s) == doctest::Approx(1.0).epsilon(1e-4));
  }
  SUBCASE("property: invariant to amplitude scaling") {
    const auto f = [&](double t) { return std::cos(2 * pi * t / 0.8); };
    const double p1 = estimate_period(sample(f, 0.01, 9));
    for (double a : {1e-6, 3.0, 1e4}) {
      const double pa = estimate_period(sample([&](double t) { return a * f(t); }, 0.01, 9));
      CHECK(pa == doctest::Approx(p1).epsilon(1e-12));
    }
  }
  SUBCASE("not enough crossings") {
    CHECK_THROWS_AS(estimate_period(sample([](double) { return 1.0; }, 0.1, 10)), DiagnosticError);
    CHECK_THROWS_AS(estimate_period(sample([&](double t) { return std::sin(2 * pi * t); }, 0.01, 5)),
                    DiagnosticError);
  }
}

TEST_CASE("triple norm error") {
  const auto w = AiryWave::make(0.01, 2 * std::numbers::pi, 1.0, 9.81);
  double prev = 1e300;
  for (int n : {4, 8, 16}) {
    Discretization d(build_mesh(BasisKind::BSpline, 2, n, n, 1.0, 1.0, true));
    const auto s = project_initial_condition(d, w);
    const double e = triple_norm_error(s, w, d.mesh, 9.81, 0.01, FormulationKind::Monolithic);
    CHECK(e > 0);
    CHECK(e < prev);
    prev = e;
    // The segregated norm has no gradient term, so it is bounded by the surface terms.
    CHECK(triple_norm_error(s, w, d.mesh, 9.81, 0.01, FormulationKind::Segregated) > 0);
  }
  // Exact reproduction: a field with zero amplitude against an all-zero state.
  const auto tiny = AiryWave::make(1e-300, 2 * std::numbers::pi, 1.0, 9.81);
  Discretization d(build_mesh(BasisKind::LagrangeFE, 1, 3, 3, 1.0, 1.0, true));
  WaveState z;
  z.phi = Vector::Zero(d.volume_dofs());
  z.eta = Vector::Zero(d.surface_dofs());
  CHECK(triple_norm_error(z, tiny, d.mesh, 9.81, 0.01, FormulationKind::Reduced) < 1e-290);
}

TEST_CASE("convergence table and rate fit") {
  ConvergenceTable t;
  for (double h : {0.5, 0.25, 0.125, 0.0625}) t.add_row(h, 10, 3 * h * h);
  CHECK(std::isnan(t.rows()[0].rate));
  CHECK(t.rows()[2].rate == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit_convergence_rate(t) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK_THROWS_AS(t.add_row(0.1, 10, 1.0), DiagnosticError);
  CHECK_THROWS_AS(t.add_row(0.01, 10, -1.0), DiagnosticError);

  std::mt19937 rng(61);
  std::uniform_real_distribution<double> noise(-0.01, 0.01);
  ConvergenceTable n;
  for (double h = 0.5; h > 0.01; h /= 2) n.add_row(h, 1, std::pow(h, 4.5) * (1 + noise(rng)));
  CHECK(std::abs(fit_convergence_rate(n) - 4.5) < 0.1);

  ConvergenceTable one;
  one.add_row(1, 1, 1);
  CHECK_THROWS_AS(fit_convergence_rate(one), DiagnosticError);
}
