#include <doctest.h>

#include <random>

#include "fsiga/quadrature.hpp"
#include "oracles.hpp"

using fsiga::gauss_legendre;

TEST_CASE("gauss points match bisected Legendre roots") {
  for (int n = 1; n <= fsiga::kMaxGaussPoints; ++n) {
    const auto rule = gauss_legendre(n);
    const auto roots = oracle::legendre_roots(n);
    REQUIRE(roots.size() == static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) CHECK(rule.points[i] == doctest::Approx(roots[i]).epsilon(1e-13));
  }
}

TEST_CASE("weights are positive, symmetric and sum to 2") {
  for (int n = 1; n <= fsiga::kMaxGaussPoints; ++n) {
    const auto rule = gauss_legendre(n);
    double sum = 0;
    for (int i = 0; i < n; ++i) {
      CHECK(rule.weights[i] > 0);
      CHECK(rule.weights[i] == doctest::Approx(rule.weights[n - 1 - i]).epsilon(1e-14));
      CHECK(rule.points[i] == doctest::Approx(-rule.points[n - 1 - i]).epsilon(1e-14));
      sum += rule.weights[i];
    }
    CHECK(sum == doctest::Approx(2.0).epsilon(1e-14));
  }
}

TEST_CASE("hand values") {
  CHECK(gauss_legendre(1).points[0] == 0.0);
  CHECK(gauss_legendre(1).weights[0] == doctest::Approx(2.0));
  const auto two = gauss_legendre(2);
  CHECK(two.points[1] == doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-15));
  const auto three = gauss_legendre(3);
  CHECK(three.points[2] == doctest::Approx(std::sqrt(0.6)).epsilon(1e-15));
  CHECK(three.weights[1] == doctest::Approx(8.0 / 9.0).epsilon(1e-15));
  CHECK(three.weights[0] == doctest::Approx(5.0 / 9.0).epsilon(1e-15));
}

TEST_CASE("property: exact for random polynomials up to degree 2n-1") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> coef(-1, 1);
  for (int n = 1; n <= fsiga::kMaxGaussPoints; ++n) {
    const auto rule = gauss_legendre(n);
    for (int trial = 0; trial < 20; ++trial) {
      const int deg = 2 * n - 1;
      std::vector<double> c(deg + 1);
      for (auto& v : c) v = coef(rng);
      double exact = 0;
      for (int k = 0; k <= deg; k += 2) exact += 2 * c[k] / (k + 1);
      double quad = 0;
      for (int q = 0; q < n; ++q) {
        double p = 0;
        for (int k = deg; k >= 0; --k) p = p * rule.points[q] + c[k];
        quad += rule.weights[q] * p;
      }
      CHECK(quad == doctest::Approx(exact).epsilon(1e-13).scale(1));
    }
  }
}

TEST_CASE("not exact one degree higher") {
  for (int n = 1; n <= 6; ++n) {
    const auto rule = gauss_legendre(n);
    const int k = 2 * n;  // ∫ x^{2n} = 2/(2n+1)
    double quad = 0;
    for (int q = 0; q < n; ++q) quad += rule.weights[q] * std::pow(rule.points[q], k);
    CHECK(std::abs(quad - 2.0 / (k + 1)) > 1e-6);
  }
}

TEST_CASE("invalid point counts") {
  CHECK_THROWS_AS(gauss_legendre(0), fsiga::ParameterError);
  CHECK_THROWS_AS(gauss_legendre(11), fsiga::ParameterError);
}
