#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "fsiga/errors.hpp"

namespace fsiga {

/// Points and weights on the reference interval [-1, 1].
template <typename Scalar>
struct QuadratureRule {
  std::vector<Scalar> points;
  std::vector<Scalar> weights;

  int size() const { return static_cast<int>(points.size()); }
};

inline constexpr int kMaxGaussPoints = 10;

/// Gauss–Legendre rule with n points, exact for polynomials of degree 2n-1.
/// Roots of P_n are found by Newton iteration from the Chebyshev-like guess.
template <typename Scalar = double>
QuadratureRule<Scalar> gauss_legendre(int n) {
  if (n < 1 || n > kMaxGaussPoints) {
    throw ParameterError("gauss_legendre: point count must be in [1, 10], got " +
                         std::to_string(n));
  }
  QuadratureRule<Scalar> rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    Scalar x = std::cos(std::numbers::pi_v<Scalar> * (Scalar(i) + Scalar(0.75)) /
                        (Scalar(n) + Scalar(0.5)));
    Scalar dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      // P_n(x) and P_n'(x) by the three-term recurrence.
      Scalar p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const Scalar pk = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      const Scalar dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < Scalar(1e-16)) break;
    }
    // Re-evaluate the derivative at the converged root.
    Scalar p0 = 1, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const Scalar pk = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = n * (x * p1 - p0) / (x * x - 1);
    const Scalar w = 2 / ((1 - x * x) * dp * dp);
    rule.points[i] = -x;
    rule.points[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.points[n / 2] = 0;
  return rule;
}

}  // namespace fsiga
