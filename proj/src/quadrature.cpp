#include "c1fem/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace c1fem {

namespace {

void check_degree(int exact_degree, const char* where) {
  if (exact_degree < 0 || exact_degree > kMaxQuadratureDegree) {
    throw Error(std::string(where) + ": exactness degree " + std::to_string(exact_degree) +
                " outside [0, " + std::to_string(kMaxQuadratureDegree) + "]");
  }
}

// n-point Gauss-Legendre on [-1,1] by Newton iteration from Chebyshev guesses.
void gauss_legendre(int n, Vector& nodes, Vector& weights) {
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node for the weight.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    nodes(n - 1 - i) = x;
    weights(n - 1 - i) = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

}  // namespace

QuadRule interval_rule(int exact_degree) {
  check_degree(exact_degree, "interval_rule");
  const int n = exact_degree / 2 + 1;
  Vector x, w;
  gauss_legendre(n, x, w);
  QuadRule rule;
  rule.points = (0.5 * (x.array() + 1.0)).matrix();
  rule.weights = 0.5 * w;
  rule.exact_degree = exact_degree;
  return rule;
}

QuadRule triangle_rule(int exact_degree) {
  check_degree(exact_degree, "triangle_rule");
  // The collapse adds a factor (1-u), so the u-direction needs one extra degree.
  const int n = (exact_degree + 3) / 2;
  Vector x, w;
  gauss_legendre(n, x, w);
  const Vector u = 0.5 * (x.array() + 1.0);
  const Vector wu = 0.5 * w;

  QuadRule rule;
  rule.points.resize(n * n, 2);
  rule.weights.resize(n * n);
  rule.exact_degree = exact_degree;
  int q = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j, ++q) {
      rule.points(q, 0) = u(i);
      rule.points(q, 1) = (1.0 - u(i)) * u(j);
      rule.weights(q) = wu(i) * wu(j) * (1.0 - u(i));
    }
  }
  return rule;
}

}  // namespace c1fem
