#pragma once

#include "c1fem/types.hpp"

namespace c1fem {

/// Quadrature rule on the reference interval [0,1] (one point column) or the
/// reference triangle (two point columns).  All weights are positive.
struct QuadRule {
  Matrix points;
  Vector weights;
  int exact_degree = 0;

  Eigen::Index size() const { return weights.size(); }
};

inline constexpr int kMaxQuadratureDegree = 12;

/// Gauss-Legendre rule on [0,1] exact for polynomials up to exact_degree.
QuadRule interval_rule(int exact_degree);

/// Collapsed (Duffy) tensor Gauss rule on the reference triangle.
QuadRule triangle_rule(int exact_degree);

}  // namespace c1fem
